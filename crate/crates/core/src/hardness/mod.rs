//! Lower-bound instances: the four-block gadget, its disjoint unions and
//! clique-augmented variant, and the experiments run on them.

mod binomial;
mod deviation;
mod gadget;
mod instances;

pub use binomial::{
    binomial_anticoncentration, default_grid, AnticoncentrationReport, BinomialPmf,
    ANTICONCENTRATION_FLOOR,
};
pub use deviation::{
    estimator_deviation_experiment, exact_deviation_probability, trial_matrix, DeviationConfig,
    DeviationReport, DeviationTrial, MIN_TRIALS,
};
pub use gadget::{
    build_gkp, gadget_edges, gadget_from_matrix, gadget_vertex, planted_cut, GadgetBackend,
    GadgetGkp, GadgetOverride, GadgetSidecar, HMatrix,
};
pub use instances::{
    build_theorem7_instance, build_theorem8_instance, distinguishing_query_experiment,
    DistinguishPoint, DistinguishReport, Theorem7Case, Theorem7Instance, Theorem8Instance,
    SLOPE_TOLERANCE,
};
