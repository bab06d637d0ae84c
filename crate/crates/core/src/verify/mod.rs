//! Manufactured-solution verification: error norms, quadrature
//! sensitivity, convergence series and the crossing-element experiment.

mod manufactured;
mod norms;
mod pipeline;
mod studies;

pub use manufactured::{exact_solution, source_term, ManufacturedCase};
pub use norms::{l2_error, l2_numerator_single_pass, ElementError, ErrorReport};
pub use pipeline::{all_pairings, run_model, run_point, Method, PointResult, PointSpec, Timings};
pub use studies::{
    convergence_study, error_distribution_experiment, fit_slope, quadrature_sensitivity, stabilization_order,
    ConvergenceSeries, ErrorDistribution, SensitivityRow, SensitivityTable, SeriesEntry, STABLE_CHANGE,
};
