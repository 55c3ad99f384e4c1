//! Exact ground truth for small graphs: quadratic forms, effective
//! resistances, PSD-dominance eigenchecks and exhaustive cut checks.
//!
//! Dense checks are limited by the eigensolve budget (see
//! [`crate::linalg::eig_budget`]). Above it the spectral checks fall back to a
//! Lanczos estimate plus random test vectors and say so in `warnings`.

use crate::error::{domain, Result};
use crate::graph::StaticGraph;
use crate::linalg::{
    eig_budget, ensure_within_budget, lanczos_extremes, laplacian_apply, laplacian_dense,
    laplacian_norm, laplacian_pseudoinverse, laplacian_solve_cg, min_eigenvalue,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Largest `n` for which cut checks enumerate all `2^n` subsets.
pub const EXHAUSTIVE_CUT_LIMIT: usize = 14;
/// Cap on the fitted additive constant in the upper-bound check.
pub const DEFAULT_C_MAX: f64 = 16.0;
/// Cap on the fitted constant in the resistance sandwich.
pub const DEFAULT_RESISTANCE_C_MAX: f64 = 64.0;
/// Random unit vectors used by the upper-bound check.
pub const DEFAULT_RANDOM_VECTORS: usize = 100;
/// Subsets drawn when cuts cannot be enumerated.
pub const SAMPLED_CUTS: usize = 4096;
/// Relative tolerance of PSD checks.
pub const PSD_RELATIVE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedOutcome {
    pub seed: u64,
    pub pass: bool,
    pub measured: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub pass: bool,
    /// The check's slack statistic (λ_min, fitted constant, worst margin).
    pub measured: f64,
    /// Pass threshold for `measured`, with the comparison given by the check.
    pub threshold: f64,
    pub trials: usize,
    pub violations: usize,
    pub worst: Option<String>,
    pub details: BTreeMap<String, f64>,
    pub warnings: Vec<String>,
    pub per_seed: Vec<SeedOutcome>,
}

impl VerificationReport {
    fn new(check: &str, pass: bool, measured: f64, threshold: f64) -> Self {
        Self {
            check: check.to_string(),
            pass,
            measured,
            threshold,
            trials: 0,
            violations: 0,
            worst: None,
            details: BTreeMap::new(),
            warnings: Vec::new(),
            per_seed: Vec::new(),
        }
    }

    /// Combines per-seed reports of one check; passes iff at least
    /// `min_pass` of them passed.
    pub fn aggregate(check: &str, runs: &[(u64, VerificationReport)], min_pass: usize) -> Self {
        let passed = runs.iter().filter(|(_, r)| r.pass).count();
        let mut out = Self::new(check, passed >= min_pass, passed as f64, min_pass as f64);
        out.trials = runs.len();
        out.violations = runs.len() - passed;
        out.per_seed = runs
            .iter()
            .map(|(seed, r)| SeedOutcome {
                seed: *seed,
                pass: r.pass,
                measured: r.measured,
            })
            .collect();
        for (_, r) in runs {
            for w in &r.warnings {
                if !out.warnings.contains(w) {
                    out.warnings.push(w.clone());
                }
            }
        }
        out
    }
}

fn same_size(g: &StaticGraph, h: &StaticGraph) -> Result<()> {
    if g.n() != h.n() {
        return domain(format!("graphs differ in size: {} vs {}", g.n(), h.n()));
    }
    Ok(())
}

/// `Σ_{(x,y)} ω(x,y) (u(x) - u(y))²`.
pub fn laplacian_quadratic(g: &StaticGraph, u: &[f64]) -> Result<f64> {
    if u.len() != g.n() {
        return domain(format!(
            "vector has length {} but the graph has {} vertices",
            u.len(),
            g.n()
        ));
    }
    Ok(g.edges().map(|e| e.w * (u[e.u] - u[e.v]).powi(2)).sum())
}

/// `(e_s - e_t)ᵀ L⁺ (e_s - e_t)`, or `∞` when `s` and `t` are disconnected.
pub fn effective_resistance_exact(g: &StaticGraph, s: usize, t: usize) -> Result<f64> {
    let n = g.n();
    if s >= n || t >= n {
        return domain(format!("vertex out of range for n={n}"));
    }
    if s == t {
        return Ok(0.0);
    }
    let (_, label) = g.components();
    if label[s] != label[t] {
        return Ok(f64::INFINITY);
    }
    if n <= eig_budget() {
        let pinv = laplacian_pseudoinverse(g)?;
        return Ok(pinv[(s, s)] + pinv[(t, t)] - 2.0 * pinv[(s, t)]);
    }
    let comp: Vec<usize> = (0..n).filter(|&v| label[v] == label[s]).collect();
    let sub = induced(g, &comp);
    let pos = |v: usize| comp.binary_search(&v).unwrap();
    let mut b = vec![0.0; comp.len()];
    b[pos(s)] = 1.0;
    b[pos(t)] = -1.0;
    let x = laplacian_solve_cg(&sub, &b, 1e-12, 50 * comp.len() + 1000)?;
    Ok(x[pos(s)] - x[pos(t)])
}

fn induced(g: &StaticGraph, verts: &[usize]) -> StaticGraph {
    let pos: BTreeMap<usize, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let edges = g
        .edges()
        .filter_map(|e| Some((*pos.get(&e.u)?, *pos.get(&e.v)?, e.w)))
        .collect::<Vec<_>>();
    StaticGraph::from_weighted_edges(verts.len(), edges).expect("induced subgraph")
}

/// Effective resistance of every edge, in `g.edges()` order.
pub fn edge_resistances(g: &StaticGraph) -> Result<Vec<f64>> {
    ensure_within_budget(g.n(), "edge resistances")?;
    let pinv = laplacian_pseudoinverse(g)?;
    Ok(g.edges()
        .map(|e| pinv[(e.u, e.u)] + pinv[(e.v, e.v)] - 2.0 * pinv[(e.u, e.v)])
        .collect())
}

/// `L_h ⪰ (1-ε) L_g` via `λ_min(L_h - (1-ε) L_g) >= -10⁻⁹ ‖L_g‖`.
pub fn check_lower_bound(
    g: &StaticGraph,
    h: &StaticGraph,
    epsilon: f64,
) -> Result<VerificationReport> {
    same_size(g, h)?;
    let n = g.n();
    let tol = PSD_RELATIVE_TOLERANCE * laplacian_norm(g).max(1.0);
    let mut warnings = Vec::new();
    let lambda_min = if n <= eig_budget() {
        min_eigenvalue(laplacian_dense(h) - laplacian_dense(g) * (1.0 - epsilon))
    } else {
        warnings.push(format!(
            "n={n} exceeds the eigensolve budget; lambda_min is a Lanczos estimate"
        ));
        let apply = |x: &[f64], y: &mut [f64]| {
            laplacian_apply(h, x, y);
            let mut t = vec![0.0; n];
            laplacian_apply(g, x, &mut t);
            y.iter_mut()
                .zip(&t)
                .for_each(|(a, b)| *a -= (1.0 - epsilon) * b);
        };
        let (min, _) = lanczos_extremes(n, apply, &[vec![1.0; n]], 200, 0x6c6f77);
        min.min(0.0)
    };
    let mut r = VerificationReport::new("lower-bound", lambda_min >= -tol, lambda_min, -tol);
    r.trials = 1;
    r.violations = usize::from(!r.pass);
    r.details.insert("epsilon".into(), epsilon);
    r.details.insert("tolerance".into(), tol);
    r.warnings = warnings;
    Ok(r)
}

fn subset_indicator(n: usize, mask: u64) -> Vec<f64> {
    (0..n).map(|v| ((mask >> v) & 1) as f64).collect()
}

/// Test vectors for the upper bound: random unit vectors plus every cut
/// indicator when `n <= 14`, otherwise sampled indicators.
fn upper_test_vectors(n: usize, random: usize, seed: u64) -> (Vec<(String, Vec<f64>)>, bool) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for i in 0..random {
        let mut x: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            x.iter_mut().for_each(|v| *v /= norm);
        }
        out.push((format!("random#{i}"), x));
    }
    let exhaustive = n <= EXHAUSTIVE_CUT_LIMIT;
    if exhaustive {
        for mask in 1..(1u64 << n) {
            out.push((
                format!("cut{:?}", mask_members(n, mask)),
                subset_indicator(n, mask),
            ));
        }
    } else {
        for _ in 0..SAMPLED_CUTS {
            let x: Vec<f64> = (0..n)
                .map(|_| f64::from(u8::from(rng.random_bool(0.5))))
                .collect();
            out.push(("sampled cut".into(), x));
        }
    }
    (out, exhaustive)
}

fn mask_members(n: usize, mask: u64) -> Vec<usize> {
    (0..n).filter(|&v| (mask >> v) & 1 == 1).collect()
}

/// Fits `c` in `xᵀL_h x <= (1+ε) xᵀL_g x + c δ ‖x‖²` over test vectors.
pub fn check_upper_bound(
    g: &StaticGraph,
    h: &StaticGraph,
    epsilon: f64,
    delta: f64,
    c_max: f64,
    seed: u64,
) -> Result<VerificationReport> {
    same_size(g, h)?;
    if !(delta > 0.0) {
        return domain(format!("delta must be positive, got {delta}"));
    }
    let n = g.n();
    let (vectors, exhaustive) = upper_test_vectors(n, DEFAULT_RANDOM_VECTORS, seed);
    let mut worst_c = 0.0f64;
    let mut worst = None;
    let mut violations = 0;
    for (label, x) in &vectors {
        let norm2: f64 = x.iter().map(|v| v * v).sum();
        if norm2 == 0.0 {
            continue;
        }
        let excess = laplacian_quadratic(h, x)? - (1.0 + epsilon) * laplacian_quadratic(g, x)?;
        let c = (excess / (delta * norm2)).max(0.0);
        if excess > 0.0 {
            violations += 1;
        }
        if c > worst_c {
            worst_c = c;
            worst = Some(label.clone());
        }
    }
    let mut r = VerificationReport::new("upper-bound", worst_c <= c_max, worst_c, c_max);
    r.trials = vectors.len();
    r.violations = violations;
    r.worst = worst;
    r.details.insert("epsilon".into(), epsilon);
    r.details.insert("delta".into(), delta);
    r.details.insert(
        "violation_fraction".into(),
        violations as f64 / vectors.len().max(1) as f64,
    );
    if !exhaustive {
        r.warnings.push(format!(
            "n={n} > {EXHAUSTIVE_CUT_LIMIT}: cut indicators sampled ({SAMPLED_CUTS}), not enumerated"
        ));
    }
    Ok(r)
}

/// Both cut inequalities, `(1-ε) Cut_g(U) <= Cut_h(U) <= (1+ε) Cut_g(U) + δ|U|`,
/// for every subset when `n <= 14` and for sampled subsets otherwise.
/// `measured` is the smallest margin over all subsets and both sides.
pub fn check_cut_sandwich(
    g: &StaticGraph,
    h: &StaticGraph,
    epsilon: f64,
    delta: f64,
    seed: u64,
) -> Result<VerificationReport> {
    same_size(g, h)?;
    let n = g.n();
    let tol = PSD_RELATIVE_TOLERANCE * (g.total_weight() + h.total_weight()).max(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let exhaustive = n <= EXHAUSTIVE_CUT_LIMIT;
    let total = if exhaustive {
        1usize << n
    } else {
        SAMPLED_CUTS
    };
    let mut min_margin = f64::INFINITY;
    let mut worst = None;
    let (mut lower_viol, mut upper_viol) = (0usize, 0usize);
    let mut in_set = vec![false; n];
    for i in 0..total {
        if exhaustive {
            for (v, slot) in in_set.iter_mut().enumerate() {
                *slot = (i >> v) & 1 == 1;
            }
        } else {
            in_set.iter_mut().for_each(|s| *s = rng.random_bool(0.5));
        }
        let size = in_set.iter().filter(|&&b| b).count() as f64;
        let cg = g.cut_value(&in_set);
        let ch = h.cut_value(&in_set);
        let lower = ch - (1.0 - epsilon) * cg;
        let upper = (1.0 + epsilon) * cg + delta * size - ch;
        if lower < -tol {
            lower_viol += 1;
        }
        if upper < -tol {
            upper_viol += 1;
        }
        let margin = lower.min(upper);
        if margin < min_margin {
            min_margin = margin;
            worst = Some(format!(
                "U={:?}",
                (0..n).filter(|&v| in_set[v]).collect::<Vec<_>>()
            ));
        }
    }
    let mut r = VerificationReport::new(
        "cut-sandwich",
        lower_viol + upper_viol == 0,
        min_margin,
        -tol,
    );
    r.trials = total;
    r.violations = lower_viol + upper_viol;
    r.worst = worst;
    r.details
        .insert("lower_violations".into(), lower_viol as f64);
    r.details
        .insert("upper_violations".into(), upper_viol as f64);
    r.details.insert("epsilon".into(), epsilon);
    r.details.insert("delta".into(), delta);
    if !exhaustive {
        r.warnings.push(format!(
            "n={n} > {EXHAUSTIVE_CUT_LIMIT}: exhaustive mode refused, {SAMPLED_CUTS} sampled subsets checked"
        ));
    }
    Ok(r)
}

/// For every edge `(s,t)` of `tg`:
/// `½(1/d(s) + 1/d(t)) <= R(s,t) <= C (ln n/δ)(1/d(s) + 1/d(t))`.
/// Degrees are weighted, so a doubled edge counts twice. Reports the fitted
/// `C` and the Foster sum `Σ w_e R_e`, which must equal `n - #components`.
pub fn verify_resistance_sandwich(
    tg: &StaticGraph,
    delta: f64,
    c_max: f64,
) -> Result<VerificationReport> {
    let n = tg.n();
    if !(delta > 0.0) {
        return domain(format!("delta must be positive, got {delta}"));
    }
    let resistances = edge_resistances(tg)?;
    let scale = (n.max(2) as f64).ln() / delta;
    let mut fitted = 0.0f64;
    let mut lower_viol = 0;
    let mut upper_viol = 0;
    let mut worst = None;
    let mut foster = 0.0;
    let mut min_lower_ratio = f64::INFINITY;
    for (e, &r) in tg.edges().zip(&resistances) {
        foster += e.w * r;
        let inv = 1.0 / tg.weighted_degree(e.u) + 1.0 / tg.weighted_degree(e.v);
        let lower = 0.5 * inv;
        if r < lower * (1.0 - 1e-9) {
            lower_viol += 1;
        }
        min_lower_ratio = min_lower_ratio.min(r / lower);
        let c = r / (scale * inv);
        if c > c_max {
            upper_viol += 1;
        }
        if c > fitted {
            fitted = c;
            worst = Some(format!("edge ({},{})", e.u, e.v));
        }
    }
    let (components, _) = tg.components();
    let foster_expected = (n - components) as f64;
    let foster_rel = (foster - foster_expected).abs() / foster_expected.max(1.0);
    let pass = lower_viol == 0 && fitted <= c_max;
    let mut r = VerificationReport::new("resistance-sandwich", pass, fitted, c_max);
    r.trials = resistances.len();
    r.violations = lower_viol + upper_viol;
    r.worst = worst;
    r.details.insert("delta".into(), delta);
    r.details
        .insert("lower_violations".into(), lower_viol as f64);
    r.details.insert("min_lower_ratio".into(), min_lower_ratio);
    r.details.insert("foster_sum".into(), foster);
    r.details.insert("foster_expected".into(), foster_expected);
    r.details.insert("foster_relative_error".into(), foster_rel);
    if components > 1 {
        r.warnings
            .push(format!("graph has {components} components"));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::{complete, cycle, gnp, path};
    use approx::assert_relative_eq;
    use proptest::prelude::{any, prop_assert, proptest, ProptestConfig};

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn quadratic_form_examples() {
        let g = gnp(10, 0.5, &mut rng(0));
        assert_eq!(laplacian_quadratic(&g, &[3.0; 10]).unwrap(), 0.0);
        let e = complete(2);
        assert_eq!(laplacian_quadratic(&e, &[1.0, 0.0]).unwrap(), 1.0);
        assert!(laplacian_quadratic(&e, &[1.0]).is_err());
    }

    #[test]
    fn quadratic_form_on_indicators_is_cut_value() {
        let mut r = rng(1);
        for n in [5, 20, 50] {
            let g = gnp(n, 0.3, &mut r);
            for _ in 0..100 {
                let set: Vec<bool> = (0..n).map(|_| r.random_bool(0.5)).collect();
                let x: Vec<f64> = set.iter().map(|&b| f64::from(u8::from(b))).collect();
                assert_eq!(laplacian_quadratic(&g, &x).unwrap(), g.cut_value(&set));
            }
        }
    }

    #[test]
    fn resistance_examples() {
        assert_relative_eq!(
            effective_resistance_exact(&path(3), 0, 2).unwrap(),
            2.0,
            epsilon = 1e-12
        );
        assert_relative_eq!(
            effective_resistance_exact(&cycle(4), 0, 2).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        assert_relative_eq!(
            effective_resistance_exact(&complete(4), 0, 1).unwrap(),
            0.5,
            epsilon = 1e-12
        );
        for n in [3, 7, 12] {
            assert_relative_eq!(
                effective_resistance_exact(&complete(n), 1, 2).unwrap(),
                2.0 / n as f64,
                epsilon = 1e-12
            );
        }
        let split = StaticGraph::from_pairs(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(
            effective_resistance_exact(&split, 0, 3).unwrap(),
            f64::INFINITY
        );
        assert_eq!(effective_resistance_exact(&split, 2, 2).unwrap(), 0.0);
    }

    #[test]
    fn rayleigh_monotonicity() {
        let mut r = rng(2);
        for _ in 0..50 {
            let g = gnp(15, 0.3, &mut r);
            let (a, b) = (r.random_range(0..15), r.random_range(0..15));
            if a == b || g.weight(a, b).is_some() {
                continue;
            }
            let plus = g
                .union(&StaticGraph::from_pairs(15, [(a, b)]).unwrap())
                .unwrap();
            let (s, t) = (r.random_range(0..15), r.random_range(0..15));
            let before = effective_resistance_exact(&g, s, t).unwrap();
            let after = effective_resistance_exact(&plus, s, t).unwrap();
            assert!(after <= before + 1e-9, "R went from {before} to {after}");
        }
    }

    #[test]
    fn unit_edges_have_resistance_at_most_one_and_foster_holds() {
        let mut r = rng(3);
        for _ in 0..10 {
            let g = gnp(30, 0.2, &mut r);
            let res = edge_resistances(&g).unwrap();
            assert!(res.iter().all(|&x| x <= 1.0 + 1e-9));
            let (c, _) = g.components();
            assert_relative_eq!(res.iter().sum::<f64>(), (30 - c) as f64, epsilon = 1e-8);
        }
    }

    #[test]
    fn cg_path_matches_pseudoinverse() {
        let g = gnp(40, 0.2, &mut rng(4));
        let comp = (0..40).collect::<Vec<_>>();
        assert_eq!(induced(&g, &comp).num_edges(), g.num_edges());
        let exact = effective_resistance_exact(&g, 0, 1).unwrap();
        let mut b = vec![0.0; 40];
        b[0] = 1.0;
        b[1] = -1.0;
        let x = laplacian_solve_cg(&g, &b, 1e-12, 5000).unwrap();
        assert_relative_eq!(x[0] - x[1], exact, epsilon = 1e-8);
    }

    #[test]
    fn lower_bound_examples() {
        let g = gnp(20, 0.4, &mut rng(5));
        for eps in [0.01, 0.5, 0.99] {
            let r = check_lower_bound(&g, &g, eps).unwrap();
            assert!(r.pass);
            // λ_min(ε L_g) = ε λ_min(L_g) = 0 on the all-ones direction
            assert!(r.measured.abs() < 1e-9);
        }
        let e = g.edges().next().unwrap();
        let minus =
            StaticGraph::from_weighted_edges(20, g.edges().skip(1).map(|e| (e.u, e.v, e.w)))
                .unwrap();
        let r = check_lower_bound(&g, &minus, 0.0).unwrap();
        assert!(!r.pass, "deleting ({},{}) must break domination", e.u, e.v);
        assert!(r.measured < 0.0);
    }

    #[test]
    fn upper_bound_examples() {
        let g = gnp(10, 0.4, &mut rng(6));
        let r = check_upper_bound(&g, &g, 0.5, 0.1, DEFAULT_C_MAX, 1).unwrap();
        assert_eq!(r.measured, 0.0);
        assert_eq!(r.trials, DEFAULT_RANDOM_VECTORS + 1023);
        // vertex 0 isolated in g, one extra edge in h: x = e_0 needs c δ >= 1
        let g = StaticGraph::from_pairs(4, [(1, 2), (2, 3)]).unwrap();
        let h = g
            .union(&StaticGraph::from_pairs(4, [(0, 1)]).unwrap())
            .unwrap();
        let r = check_upper_bound(&g, &h, 0.5, 0.25, DEFAULT_C_MAX, 1).unwrap();
        assert!(r.measured * 0.25 >= 1.0 - 1e-12);
        assert!(r.pass);
        let strict = check_upper_bound(&g, &h, 0.5, 0.25, 1.0, 1).unwrap();
        assert!(!strict.pass);
    }

    #[test]
    fn cut_sandwich_examples() {
        let g = gnp(12, 0.5, &mut rng(7));
        let r = check_cut_sandwich(&g, &g, 0.3, 0.1, 0).unwrap();
        assert!(r.pass);
        assert_eq!(r.trials, 4096);
        // U = ∅ gives 0 <= 0 on both sides
        assert!(r.measured.abs() < 1e-9);
        let big = gnp(20, 0.5, &mut rng(8));
        let r = check_cut_sandwich(&big, &big, 0.3, 0.1, 0).unwrap();
        assert!(r.pass);
        assert_eq!(r.trials, SAMPLED_CUTS);
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn cut_sandwich_flags_missing_edge() {
        let g = complete(6);
        let h = StaticGraph::from_weighted_edges(6, g.edges().skip(1).map(|e| (e.u, e.v, e.w)))
            .unwrap();
        let r = check_cut_sandwich(&g, &h, 0.0, 0.1, 0).unwrap();
        assert!(!r.pass);
        assert!(r.details["lower_violations"] > 0.0);
    }

    #[test]
    fn resistance_sandwich_examples() {
        let e = complete(2);
        let r = verify_resistance_sandwich(&e, 0.5, DEFAULT_RESISTANCE_C_MAX).unwrap();
        assert!(r.pass);
        assert_relative_eq!(r.details["min_lower_ratio"], 1.0, epsilon = 1e-12);
        let r = verify_resistance_sandwich(&complete(4), 0.5, DEFAULT_RESISTANCE_C_MAX).unwrap();
        assert!(r.pass);
        // R = 1/2 against the lower bound 1/3
        assert_relative_eq!(r.details["min_lower_ratio"], 1.5, epsilon = 1e-12);
        assert_relative_eq!(r.details["foster_sum"], 3.0, epsilon = 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn self_domination_holds(seed in any::<u64>(), eps in 0.001f64..0.999) {
            let g = gnp(12, 0.4, &mut rng(seed));
            prop_assert!(check_lower_bound(&g, &g, eps).unwrap().pass);
        }

        #[test]
        fn foster_identity(seed in any::<u64>(), p in 0.1f64..0.9) {
            let g = gnp(16, p, &mut rng(seed));
            let (c, _) = g.components();
            let sum: f64 = edge_resistances(&g).unwrap().iter().sum();
            prop_assert!((sum - (16 - c) as f64).abs() < 1e-8);
        }
    }
}
