use thiserror::Error;

/// Errors raised by the library.
///
/// Variants split into two families: *validation* errors, where the input
/// itself violates a documented precondition, and *numerical* failures, where
/// a well-formed input defeated the floating-point machinery (lost symmetry,
/// no convergence, negative probability mass beyond tolerance). The CLI maps
/// the former to exit code 2 and the latter to exit code 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch in {op}: left is {left}, right is {right}")]
    DimensionMismatch {
        op: &'static str,
        left: String,
        right: String,
    },

    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    EmptyMatrix { rows: usize, cols: usize },

    #[error("entry buffer has length {got}, expected rows*cols = {expected}")]
    BadEntryCount { got: usize, expected: usize },

    #[error("non-finite value encountered in {context}")]
    NonFinite { context: &'static str },

    #[error("matrix is not Hermitian: max |a - a^H| entry is {deviation:.3e} (tolerance {tol:.3e})")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("state is not normalized: |<psi|psi> - 1| = {deviation:.3e} (tolerance {tol:.3e})")]
    NotNormalized { deviation: f64, tol: f64 },

    #[error("operator trace is not 1: |tr - 1| = {deviation:.3e} (tolerance {tol:.3e})")]
    TraceNotOne { deviation: f64, tol: f64 },

    #[error("tolerance {got:.3e} outside permitted range ({lo:.1e}, {hi:.1e}]")]
    BadTolerance { got: f64, lo: f64, hi: f64 },

    #[error("{name} must be positive, got {got}")]
    NonPositive { name: &'static str, got: f64 },

    #[error("moment order {got} unsupported, must be at most {max}")]
    BadMomentOrder { got: usize, max: usize },

    #[error("correlation table needs at least {min} sites, got {got}")]
    TooFewSites { got: usize, min: usize },

    #[error("site count must be even for a symmetric momentum grid, got {got}")]
    OddSiteCount { got: usize },

    #[error("site count {got} exceeds supported maximum {max}")]
    TooManySites { got: usize, max: usize },

    #[error("correlation table violates C(-s) = conj(C(s)): max deviation {deviation:.3e} at lag {lag}")]
    CorrelationNotHermitian { deviation: f64, lag: usize },

    #[error("correlation table violates unit trace: |L*C(0) - 1| = {deviation:.3e}")]
    CorrelationTrace { deviation: f64 },

    #[error(
        "total momentum index {com_index} incompatible with mass ratio {mass_ratio}: \
         both mass fractions of the index must be integers for a periodic state"
    )]
    IncommensurateMomentum { com_index: i64, mass_ratio: f64 },

    #[error("bin count {got} too small, need at least {min}")]
    TooFewBins { got: usize, min: usize },

    #[error("invalid state JSON: {0}")]
    Json(String),

    #[error("invalid CSV: {0}")]
    Csv(String),

    // ---- numerical failures ----
    #[error("eigensolver failed to converge within {sweeps} sweeps (off-diagonal norm {off:.3e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("operator has negative eigenvalue {value:.3e} beyond tolerance {tol:.3e}")]
    NegativeEigenvalue { value: f64, tol: f64 },

    #[error("spectral weight should be real: residual imaginary part {residual:.3e} exceeds {tol:.3e}")]
    ImaginaryResidual { residual: f64, tol: f64 },

    #[error("spectral weights do not sum to 1: |sum - 1| = {deviation:.3e} (tolerance {tol:.3e})")]
    SpectrumSum { deviation: f64, tol: f64 },

    #[error("variance came out negative: {value:.3e}")]
    NegativeVariance { value: f64 },

    #[error("reduced operator is not translation invariant: max deviation {deviation:.3e} at lag {lag}")]
    NotTranslationInvariant { deviation: f64, lag: usize },

    #[error("quadrature failed to reach tolerance {tol:.3e} (best error estimate {err:.3e})")]
    QuadratureNoConvergence { err: f64, tol: f64 },

    #[error("basis completion failed: no candidate with residual above {threshold:.3e}")]
    BasisCompletion { threshold: f64 },
}

impl Error {
    /// True for failures of the floating-point machinery on well-formed
    /// input, false for input validation errors.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::NegativeEigenvalue { .. }
                | Error::ImaginaryResidual { .. }
                | Error::SpectrumSum { .. }
                | Error::NegativeVariance { .. }
                | Error::NotTranslationInvariant { .. }
                | Error::QuadratureNoConvergence { .. }
                | Error::BasisCompletion { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
