use super::binomial::BinomialPmf;
use super::gadget::{gadget_vertex, GadgetBackend, HMatrix};
use crate::error::{Error, Result};
use crate::graph::OracleHandle;
use crate::rng::{SeedSplitter, STREAM_EXPERIMENT};
use rand::seq::index::sample;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

pub const MIN_TRIALS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviationConfig {
    pub k: usize,
    pub p: f64,
    /// Edge-oracle calls allowed per trial.
    pub budget: usize,
    pub trials: usize,
    pub seed: u64,
    /// Lifts the `budget <= k²/2` cap, for control runs only.
    pub allow_over_budget: bool,
}

impl DeviationConfig {
    pub fn new(k: usize, p: f64, budget: usize, trials: usize, seed: u64) -> Self {
        Self {
            k,
            p,
            budget,
            trials,
            seed,
            allow_over_budget: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviationTrial {
    pub cut_s: f64,
    pub estimate: f64,
    pub revealed: usize,
    pub edge_queries: u64,
    pub deviated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationReport {
    pub config: DeviationConfig,
    /// `k·√(p/8)`
    pub threshold: f64,
    pub deviations: usize,
    pub frequency: f64,
    /// Deviation probability under the conditional binomial law of the
    /// unrevealed entries, computed exactly.
    pub exact_probability: f64,
    /// Monte-Carlo standard error of `frequency` around `exact_probability`.
    pub sigma: f64,
    pub within_three_sigma: bool,
    pub max_edge_queries: u64,
    pub mean_cut: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_trial: Option<Vec<DeviationTrial>>,
}

fn run_trial(k: usize, p: f64, budget: usize, seed: u64) -> Result<DeviationTrial> {
    let mut rng = SeedSplitter::new(seed).stream(STREAM_EXPERIMENT);
    let h = HMatrix::random(k, p, &mut rng);
    let cut_s = 2.0 * h.ones() as f64;
    let mut oracle = OracleHandle::new(Arc::new(GadgetBackend::new(h, false)));
    let cells = k * k;
    let revealed = budget.min(cells);
    let mut ones = 0usize;
    for cell in sample(&mut rng, cells, revealed) {
        let (i, j) = (cell / k, cell % k);
        // the j-th neighbor of i¹ is j² exactly when H_ij = 1
        if oracle.neighbor(gadget_vertex(k, 1, i), j + 1)? == gadget_vertex(k, 2, j) {
            ones += 1;
        }
    }
    let estimate = 2.0 * (ones as f64 + p * (cells - revealed) as f64);
    let threshold = k as f64 * (p / 8.0).sqrt();
    Ok(DeviationTrial {
        cut_s,
        estimate,
        revealed,
        edge_queries: oracle.counts().edge,
        deviated: (estimate - cut_s).abs() >= threshold,
    })
}

/// Probability that the conditional-mean estimator misses `Cut(S)` by at least
/// the threshold when `revealed` entries are known.
pub fn exact_deviation_probability(k: usize, p: f64, revealed: usize) -> f64 {
    let hidden = k * k - revealed.min(k * k);
    let dist = BinomialPmf::new(p, hidden);
    let centre = p * hidden as f64;
    let threshold = k as f64 * (p / 8.0).sqrt();
    (0..=hidden)
        .filter(|&x| (2.0 * (centre - x as f64)).abs() >= threshold)
        .map(|x| dist.pmf(x))
        .sum()
}

/// Monte-Carlo estimate of how often a budget-limited observer of `G_{k,p}`
/// misjudges `Cut(S)` by `k·√(p/8)` or more.
///
/// Each trial draws a fresh `H`, reveals `budget` uniformly chosen entries
/// through edge-oracle calls, and uses the conditional mean as its estimate.
pub fn estimator_deviation_experiment(
    cfg: &DeviationConfig,
    keep_trials: bool,
) -> Result<DeviationReport> {
    let DeviationConfig {
        k,
        p,
        budget,
        trials,
        seed,
        allow_over_budget,
    } = *cfg;
    super::gadget::check_gadget_params(k, p)?;
    if 2 * budget > k * k && !allow_over_budget {
        return Err(Error::Precondition(format!(
            "budget {budget} exceeds k²/2 = {}; the bound does not apply",
            k * k / 2
        )));
    }
    if trials < MIN_TRIALS {
        return Err(Error::Precondition(format!(
            "need at least {MIN_TRIALS} trials, got {trials}"
        )));
    }
    let splitter = SeedSplitter::new(seed);
    let records = (0..trials)
        .into_par_iter()
        .map(|t| {
            run_trial(
                k,
                p,
                budget,
                splitter.substream_seed(STREAM_EXPERIMENT, t as u64),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let deviations = records.iter().filter(|r| r.deviated).count();
    let frequency = deviations as f64 / trials as f64;
    let exact_probability = exact_deviation_probability(k, p, budget);
    let sigma = (exact_probability * (1.0 - exact_probability) / trials as f64).sqrt();
    let within_three_sigma = (frequency - exact_probability).abs() <= 3.0 * sigma;
    Ok(DeviationReport {
        config: *cfg,
        threshold: k as f64 * (p / 8.0).sqrt(),
        deviations,
        frequency,
        exact_probability,
        sigma,
        within_three_sigma,
        max_edge_queries: records.iter().map(|r| r.edge_queries).max().unwrap_or(0),
        mean_cut: records.iter().map(|r| r.cut_s).sum::<f64>() / trials as f64,
        pass: frequency >= 0.01,
        per_trial: keep_trials.then_some(records),
    })
}

/// Used by tests to draw an `H` the same way the experiment does.
pub fn trial_matrix(k: usize, p: f64, seed: u64, trial: usize) -> HMatrix {
    let mut rng =
        SeedSplitter::new(SeedSplitter::new(seed).substream_seed(STREAM_EXPERIMENT, trial as u64))
            .stream(STREAM_EXPERIMENT);
    HMatrix::random(k, p, &mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_reveal_never_deviates() {
        let mut cfg = DeviationConfig::new(12, 0.25, 144, 1000, 3);
        assert!(estimator_deviation_experiment(&cfg, false).is_err());
        cfg.allow_over_budget = true;
        let r = estimator_deviation_experiment(&cfg, true).unwrap();
        assert_eq!(r.deviations, 0);
        assert_eq!(r.exact_probability, 0.0);
        assert_eq!(r.max_edge_queries, 144);
        let trials = r.per_trial.unwrap();
        assert_eq!(
            trials[5].cut_s,
            2.0 * trial_matrix(12, 0.25, 3, 5).ones() as f64
        );
        assert!(trials.iter().all(|t| t.estimate == t.cut_s));
    }

    #[test]
    fn zero_budget_matches_binomial_tail() {
        let r = estimator_deviation_experiment(
            &DeviationConfig::new(40, 1.0 / 16.0, 0, 10_000, 11),
            false,
        )
        .unwrap();
        assert_eq!(r.max_edge_queries, 0);
        assert!(r.within_three_sigma, "{r:?}");
        assert!(r.pass);
    }

    #[test]
    fn half_budget_still_deviates() {
        let r = estimator_deviation_experiment(
            &DeviationConfig::new(40, 1.0 / 16.0, 800, 2000, 5),
            false,
        )
        .unwrap();
        assert_eq!(r.max_edge_queries, 800);
        assert!(r.frequency >= 0.01);
        assert!(r.within_three_sigma, "{r:?}");
    }

    #[test]
    fn deterministic_and_validated() {
        let cfg = DeviationConfig::new(10, 0.2, 20, 1000, 8);
        assert_eq!(
            estimator_deviation_experiment(&cfg, true).unwrap(),
            estimator_deviation_experiment(&cfg, true).unwrap()
        );
        assert!(
            estimator_deviation_experiment(&DeviationConfig::new(10, 0.2, 20, 999, 8), false)
                .is_err()
        );
        assert!(
            estimator_deviation_experiment(&DeviationConfig::new(10, 0.3, 20, 1000, 8), false)
                .is_err()
        );
    }
}
