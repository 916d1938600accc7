//! Error type shared by all solver and classifier operations.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum VortexError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("root finder did not converge within {iterations} iterations (degree {degree})")]
    RootFindingFailed { degree: usize, iterations: usize },

    #[error("Newton line search stalled at residual {residual:.3e} after {iterations} iterations")]
    NewtonStalled { residual: f64, iterations: usize },

    #[error("conjugate gradient exceeded {max_iterations} iterations (relative residual {residual:.3e})")]
    LinearSolveFailed { residual: f64, max_iterations: usize },

    #[error("weight Σ|ψ_j|² vanishes on the boundary circle (root at radius ≥ R)")]
    BoundaryInvalid,

    #[error("radial shooting failed to bracket the boundary value (d = {d})")]
    OracleDiverged { d: usize },

    #[error("covariant and holomorphic energy densities disagree: {mismatch:.3e} > {tolerance:.3e}")]
    DerivativeMismatch { mismatch: f64, tolerance: f64 },

    #[error("ev_∞ cross-check failed: Fubini-Study distance {distance:.3e} between leading coefficients and boundary average")]
    EvInfMismatch { distance: f64 },

    #[error("sampled ratio series has no monotone trend over the final samples")]
    InconclusiveTrend,

    #[error("every W_j is empty and no component supplies a T-side factor")]
    EmptyW,

    #[error("operands live in different rings: N = {left} vs N = {right}")]
    MixedN { left: usize, right: usize },
}
