//! The audited result of an approximation run. Field order is the stable
//! JSON key order; reports are byte-reproducible given identical inputs.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct StageEntry {
    pub stage: String,
    pub contribution: f64,
}

/// Gluing diagnostics for multi-component runs.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GlueSummary {
    pub xi_glue: f64,
    /// C = max |f| over K.
    pub c_max: f64,
    /// min |f| over the contact points.
    pub delta_contact: f64,
    /// Cumulative rescale factors per component, tree order, as [re, im].
    pub rescale_factors: Vec<[f64; 2]>,
    pub contact_points: Vec<[f64; 2]>,
    /// Worst parent/child value mismatch at a contact point.
    pub continuity_residual: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ApproximationReport {
    pub schema: String,
    pub status: String,
    pub epsilon: f64,
    /// Coefficients as [re, im], ascending degree.
    pub polynomial: Vec<[f64; 2]>,
    pub degree: usize,
    /// Dense-sample estimate of max over K of |p - f|.
    pub sup_error: f64,
    /// Dense-sample estimate of min over K of |p|, with the boundary points
    /// nearest each polynomial root pinned into the scan.
    pub min_modulus: f64,
    pub stage_ledger: Vec<StageEntry>,
    pub xi_used: Option<f64>,
    /// Minimum modulus of the dilated/glued intermediate on the closure of
    /// the interior; the fit budget was min(epsilon/3, delta/2).
    pub delta_used: Option<f64>,
    pub boundary_samples_per_component: usize,
    pub interior_grid_resolution: usize,
    pub complement_grid_resolution: usize,
    pub region_hash: String,
    pub seed: u64,
    pub glue: Option<GlueSummary>,
}

impl ApproximationReport {
    pub fn polynomial(&self) -> crate::poly::ComplexPolynomial {
        crate::poly::ComplexPolynomial::from_pairs(&self.polynomial)
    }
}
