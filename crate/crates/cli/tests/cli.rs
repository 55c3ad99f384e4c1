use serde_json::Value;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn subspar(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subspar"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn sparsify_implicit_complete_uses_fewer_queries_than_edges() {
    let dir = tempfile::tempdir().unwrap();
    let out = subspar(
        &[
            "sparsify",
            "--implicit",
            "complete:2000",
            "--eps",
            "0.5",
            "--delta",
            "0.1",
            "--seed",
            "7",
        ],
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report = json(&dir.path().join("subspar-out/report.json"));
    let total = report["query_total"].as_u64().unwrap();
    assert!(total < 1_999_000, "{total}");
    assert_eq!(report["input_edges"].as_u64(), Some(1_999_000));
    let manifest = json(&dir.path().join("subspar-out/manifest.json"));
    assert_eq!(manifest["command"], "sparsify");
    assert_eq!(manifest["seed"], 7);
    assert_eq!(manifest["queries"]["edge"], report["queries"]["edge"]);
    assert!(
        manifest["outputs"]["sparsifier.txt"]
            .as_str()
            .unwrap()
            .len()
            == 64
    );
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = subspar(
        &[
            "sparsify",
            "--input",
            "missing.txt",
            "--eps",
            "0.5",
            "--delta",
            "0.1",
        ],
        dir.path(),
    );
    assert_eq!(missing.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("missing.txt"));

    let big_delta = subspar(
        &[
            "sparsify",
            "--implicit",
            "complete:1000",
            "--eps",
            "0.5",
            "--delta",
            "0.5",
        ],
        dir.path(),
    );
    assert_eq!(big_delta.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&big_delta.stderr).contains("1/ln n"));

    let bad_flag = subspar(&["sparsify", "--eps", "0.5"], dir.path());
    assert_eq!(bad_flag.status.code(), Some(2));

    fs::write(dir.path().join("bad.txt"), "3 1\n0 7\n").unwrap();
    let bad_file = subspar(
        &[
            "sparsify", "--input", "bad.txt", "--eps", "0.5", "--delta", "0.5",
        ],
        dir.path(),
    );
    assert_eq!(bad_file.status.code(), Some(2));

    let failing = subspar(
        &[
            "distinguish",
            "--k",
            "20",
            "--eps",
            "0",
            "--trials",
            "10",
            "--probe-cap",
            "50",
        ],
        dir.path(),
    );
    assert_eq!(failing.status.code(), Some(3));
    assert!(dir.path().join("subspar-out/manifest.json").exists());
}

#[test]
fn binom_prints_pass() {
    let dir = tempfile::tempdir().unwrap();
    let out = subspar(&["binom", "--p", "0.25", "--n", "144"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("PASS"), "{text}");
    let reports = json(&dir.path().join("subspar-out/binom.json"));
    assert!(reports[0]["minimum"].as_f64().unwrap() >= 0.01);
    let small = subspar(&["binom", "--p", "0.25", "--n", "100"], dir.path());
    assert_eq!(small.status.code(), Some(2));
}

#[test]
fn gadget_files_satisfy_invariants() {
    let dir = tempfile::tempdir().unwrap();
    let out = subspar(
        &["gadget", "--k", "10", "--p", "0.25", "--seed", "1"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let g = subspar::load_edge_list(dir.path().join("subspar-out/gadget.txt")).unwrap();
    assert_eq!((g.n(), g.num_edges()), (40, 200));
    assert!((0..40).all(|v| g.degree(v) == 10));
    let side = json(&dir.path().join("subspar-out/gadget.json"));
    let s: Vec<usize> = side["s"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap() as usize)
        .collect();
    let ones: usize = side["h"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r.as_str().unwrap().matches('1').count())
        .sum();
    assert_eq!(g.cut_value_of(&s).unwrap(), 2.0 * ones as f64);
    assert_eq!(side["cut_s"].as_f64().unwrap(), 2.0 * ones as f64);
}

#[test]
fn bench_queries_ratio_decreases() {
    let dir = tempfile::tempdir().unwrap();
    let out = subspar(
        &[
            "bench-queries",
            "--eps",
            "0.5",
            "--delta",
            "0.1",
            "--sizes",
            "500,1000,2000",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("subspar-out/bench.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("n,m,queries,ratio"));
    let ratios: Vec<f64> = lines
        .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    assert_eq!(ratios.len(), 3);
    assert!(ratios.windows(2).all(|w| w[1] < w[0]), "{ratios:?}");
}

#[test]
fn verify_modes() {
    let dir = tempfile::tempdir().unwrap();
    let g =
        subspar::graph::generators::gnp(20, 0.4, &mut subspar::SeedSplitter::new(1).stream("t"));
    subspar::store_edge_list(&g, dir.path().join("g.txt")).unwrap();
    let same = subspar(
        &[
            "verify",
            "--graph",
            "g.txt",
            "--sparsifier",
            "g.txt",
            "--delta",
            "0.1",
        ],
        dir.path(),
    );
    assert_eq!(same.status.code(), Some(0));
    let cuts = subspar(
        &[
            "verify",
            "--graph",
            "g.txt",
            "--sparsifier",
            "g.txt",
            "--delta",
            "0.1",
            "--mode",
            "cuts",
            "--out-dir",
            "c",
        ],
        dir.path(),
    );
    assert_eq!(cuts.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&cuts.stderr).contains("exhaustive mode refused"));
    let empty = subspar::StaticGraph::empty(20);
    subspar::store_edge_list(&empty, dir.path().join("empty.txt")).unwrap();
    let fails = subspar(
        &[
            "verify",
            "--graph",
            "g.txt",
            "--sparsifier",
            "empty.txt",
            "--delta",
            "0.1",
        ],
        dir.path(),
    );
    assert_eq!(fails.status.code(), Some(3));
    let no_h = subspar(
        &["verify", "--graph", "g.txt", "--delta", "0.1"],
        dir.path(),
    );
    assert_eq!(no_h.status.code(), Some(2));
}

#[test]
fn replay_detects_changed_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let run = subspar(
        &[
            "gadget",
            "--k",
            "8",
            "--p",
            "0.2",
            "--seed",
            "3",
            "--out-dir",
            "first",
        ],
        dir.path(),
    );
    assert_eq!(run.status.code(), Some(0));
    let ok = subspar(&["replay", "--manifest", "first/manifest.json"], dir.path());
    assert_eq!(ok.status.code(), Some(0));
    assert!(dir.path().join("first/replay/gadget.txt").exists());
    let manifest_path = dir.path().join("first/manifest.json");
    let mut manifest = json(&manifest_path);
    manifest["outputs"]["gadget.txt"] = Value::String("0".repeat(64));
    fs::write(&manifest_path, serde_json::to_string(&manifest).unwrap()).unwrap();
    let bad = subspar(
        &[
            "replay",
            "--manifest",
            "first/manifest.json",
            "--out-dir",
            "again",
        ],
        dir.path(),
    );
    assert_eq!(bad.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&bad.stdout).contains("DIFF gadget.txt"));
    let missing = subspar(&["replay", "--manifest", "nowhere.json"], dir.path());
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn cut_commands_write_reports() {
    let dir = tempfile::tempdir().unwrap();
    let g = subspar::graph::generators::two_cliques_with_bridge(8);
    subspar::store_edge_list(&g, dir.path().join("g.txt")).unwrap();
    let sc = subspar(
        &[
            "sparsest-cut",
            "--input",
            "g.txt",
            "--q-multiplier",
            "1",
            "--out-dir",
            "sc",
        ],
        dir.path(),
    );
    assert_eq!(
        sc.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&sc.stderr)
    );
    let r = json(&dir.path().join("sc/cut.json"));
    assert!(r["ratio"].as_f64().unwrap() <= 1.0 / 8.0 * 6.0);
    let mc = subspar(
        &[
            "min-st-cut",
            "--input",
            "g.txt",
            "--s",
            "0",
            "--t",
            "15",
            "--out-dir",
            "mc",
        ],
        dir.path(),
    );
    assert_eq!(mc.status.code(), Some(0));
    let r = json(&dir.path().join("mc/cut.json"));
    assert!(r["value"].as_f64().unwrap() >= 1.0);
    let same = subspar(
        &["min-st-cut", "--input", "g.txt", "--s", "2", "--t", "2"],
        dir.path(),
    );
    assert_eq!(same.status.code(), Some(2));
}

#[test]
fn lower_bound_instances() {
    let dir = tempfile::tempdir().unwrap();
    let out = subspar(
        &[
            "lower-bound-instance",
            "--n",
            "4000",
            "--eps",
            "0.5",
            "--delta",
            "0.1",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let meta = json(&dir.path().join("subspar-out/instance.json"));
    assert_eq!(meta["k"], 100);
    assert_eq!(
        meta["edges"].as_u64().unwrap(),
        2 * 100 * 100 * meta["copies"].as_u64().unwrap()
    );
    let infeasible = subspar(
        &[
            "lower-bound-instance",
            "--n",
            "100",
            "--eps",
            "0.5",
            "--delta",
            "0.1",
        ],
        dir.path(),
    );
    assert_eq!(infeasible.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&infeasible.stderr).contains("use n >="));
    let control = subspar(
        &[
            "lower-bound-instance",
            "--family",
            "clique-blocks",
            "--k",
            "10",
            "--eps",
            "0",
            "--out-dir",
            "c",
        ],
        dir.path(),
    );
    assert_eq!(control.status.code(), Some(0));
    assert_eq!(json(&dir.path().join("c/instance.json"))["cut_s"], 0.0);
}
