//! The approximation engine: dilation through the conformal map, extension
//! to all of K, boundary least squares, zero nudging, and tree gluing,
//! orchestrated into audited nonvanishing approximation reports.

mod fit;
mod glue;
mod pipeline;
mod report;
mod target;

pub use fit::{fit_samples, polynomial_least_squares, sup_refined_fit};
pub use glue::{glue_components, GlueState};
pub use pipeline::{
    approx_jordan, approx_jordan_with, choose_xi, choose_xi_with, dilate, nonvanishing_approx,
    nonvanishing_approx_with, nudge_zeros, tietze_extend, PipelineConfig,
};
pub use report::{ApproximationReport, GlueSummary, StageEntry};
pub use target::{TargetFunction, TargetKind};
