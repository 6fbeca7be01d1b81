//! Monte Carlo estimation and experiments.
//!
//! Every routine here is a pure function of its arguments, seed included.
//! Trials draw from seeds derived from the base seed and the trial coordinates,
//! then run in parallel, and the tallies are summed, so results do not depend on
//! thread count or scheduling.

pub mod experiments;
pub mod stats;
pub mod sweep;

pub use experiments::{
    model_transfer_experiment, path_bound, path_experiment, police_component_experiment,
    ExperimentParams, ExperimentRegistry, GraphProperty, PathReport, PoliceReport, PropertyParams,
    PropertyRegistry, TransferReport,
};
pub use sweep::{
    default_t_grid, estimate_solvability, estimate_solvability_with, exact_probability,
    exact_record, locate_t_half, scaling_report, smoothed_lower, sweep, to_csv, ScalingReport,
    SweepRecord, ThresholdEstimate,
};
