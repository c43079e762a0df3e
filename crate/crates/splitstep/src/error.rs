use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by the numerical routines.
///
/// Degeneracies are data, not bugs: a closed gap or an undefined planar
/// phase is reported with the offending momentum so sweeps can mark the
/// point and move on.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("band gap closes at k = {k}: E = {energy}, |sin E| <= {tolerance:e}")]
    GapClosure { k: f64, energy: f64, tolerance: f64 },

    #[error("planar phase undefined at k = {k}: both in-plane Bloch components vanish")]
    PhaseUndefined { k: f64 },

    #[error("consecutive eigenvector overlap magnitude {magnitude:e} below 1e-6; k-grid too coarse")]
    DegenerateOverlap { magnitude: f64 },

    #[error("winding number not quantized: rounding residual {residual} >= 0.05")]
    NonQuantized { residual: f64 },

    #[error("coupling grid degenerate: {invalid} of {total} cells invalid (over the 1% budget)")]
    GridDegenerate { invalid: usize, total: usize },

    #[error("coupling grid contains invalid cells; position map undefined")]
    InvalidGrid,

    #[error("walker support would leave the lattice (half extent {half_extent}, step {step})")]
    EdgeOverflow { half_extent: usize, step: usize },

    #[error("not enough usable data points in fit range [{n_min}, {n_max}]")]
    InsufficientData { n_min: usize, n_max: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
