use thiserror::Error;

/// Crate-wide error type. Variant names double as the stable error names
/// surfaced in JSON reports and CLI exit diagnostics.
#[derive(Debug, Error)]
pub enum Error {
    #[error("root finder did not converge within {iterations} iterations (residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("sup norm requires at least one sample point")]
    EmptySampleSet,

    #[error("the zero polynomial has no well-defined root set")]
    ZeroPolynomial,

    #[error("no exterior point found within {probes} probes of {z}")]
    NoExteriorPointFound { z: num_complex::Complex64, probes: usize },

    #[error("component adjacency graph has a cycle through components {cycle:?}; complement cannot be connected")]
    CycleDetected { cycle: Vec<u32> },

    #[error("components {a} and {b} touch along {loci} separated loci; complement cannot be connected")]
    MultipleContactPoints { a: u32, b: u32, loci: usize },

    #[error("complement connectivity check failed at grid resolution {resolution}")]
    ComplementDisconnected { resolution: usize },

    #[error("unsupported geometry for conformal mapping: {0}")]
    UnsupportedGeometry(String),

    #[error("Theodorsen boundary correspondence did not converge in {iterations} iterations (last update {update:.3e})")]
    TheodorsenDivergence { iterations: usize, update: f64 },

    #[error("conformal inverse iteration failed for {w} (residual {residual:.3e})")]
    InverseNonConvergence { w: num_complex::Complex64, residual: f64 },

    #[error("least-squares orthogonalization is ill-conditioned at column {column} (residual {residual:.3e})")]
    IllConditioned { column: usize, residual: f64 },

    #[error("dilation parameter underflowed below {limit:.1e} without meeting budget {budget:.3e} (best gap {gap:.3e})")]
    XiUnderflow { limit: f64, budget: f64, gap: f64 },

    #[error("degree cap {cap} exceeded without meeting budget {budget:.3e} (best gap {gap:.3e})")]
    DegreeCapExceeded { cap: usize, budget: f64, gap: f64 },

    #[error("zero at {z} lies in the interior of the region and cannot be nudged away")]
    InteriorZero { z: num_complex::Complex64 },

    #[error("nonvanishing certificate failed: {0}")]
    NonvanishingCheckFailed(String),

    #[error("target function vanishes at contact point {z} (|f| = {modulus:.3e})")]
    ContactZero { z: num_complex::Complex64, modulus: f64 },

    #[error("zeta evaluation too close to the pole at s = 1 (|s-1| = {distance:.3e})")]
    PoleProximity { distance: f64 },

    #[error("point outside the evaluator validity region: {0}")]
    OutOfValidity(String),

    #[error("contour passes through or too close to a zero (min |f| = {min_modulus:.3e} after {retries} retries)")]
    ContourThroughZero { min_modulus: f64, retries: usize },

    #[error("argument out of domain: {0}")]
    DomainError(String),

    #[error("zeta shift vanishes on the rescaled set K0 ({count} zero(s) counted)")]
    ZeroOnK0 { count: i64 },

    #[error("composition bound violated by dense recomputation: measured {measured:.6e} > certified {certified:.6e}")]
    InconsistentSampling { measured: f64, certified: f64 },

    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("invalid function: {0}")]
    InvalidFunction(String),

    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable name, used as the `error` field of reports.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NonConvergence { .. } => "NonConvergence",
            Error::EmptySampleSet => "EmptySampleSet",
            Error::ZeroPolynomial => "ZeroPolynomial",
            Error::NoExteriorPointFound { .. } => "NoExteriorPointFound",
            Error::CycleDetected { .. } => "CycleDetected",
            Error::MultipleContactPoints { .. } => "MultipleContactPoints",
            Error::ComplementDisconnected { .. } => "ComplementDisconnected",
            Error::UnsupportedGeometry(_) => "UnsupportedGeometry",
            Error::TheodorsenDivergence { .. } => "TheodorsenDivergence",
            Error::InverseNonConvergence { .. } => "InverseNonConvergence",
            Error::IllConditioned { .. } => "IllConditioned",
            Error::XiUnderflow { .. } => "XiUnderflow",
            Error::DegreeCapExceeded { .. } => "DegreeCapExceeded",
            Error::InteriorZero { .. } => "InteriorZero",
            Error::NonvanishingCheckFailed(_) => "NonvanishingCheckFailed",
            Error::ContactZero { .. } => "ContactZero",
            Error::PoleProximity { .. } => "PoleProximity",
            Error::OutOfValidity(_) => "OutOfValidity",
            Error::ContourThroughZero { .. } => "ContourThroughZero",
            Error::DomainError(_) => "DomainError",
            Error::ZeroOnK0 { .. } => "ZeroOnK0",
            Error::InconsistentSampling { .. } => "InconsistentSampling",
            Error::InvalidRegion(_) => "InvalidRegion",
            Error::InvalidFunction(_) => "InvalidFunction",
            Error::Schema { .. } => "Schema",
            Error::Io(_) => "Io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
