use crate::qcore::HalfInt;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("q must lie in (0, 1], got {0}")]
    InvalidQ(f64),
    #[error("{0}")]
    InvalidConfig(String),
    #[error("invalid label pairing l = {l}, m = {m}")]
    InvalidPairing { l: HalfInt, m: HalfInt },
    #[error("spin label must be a positive half-odd integer, got {0}")]
    InvalidSpin(HalfInt),
    #[error("basis index out of range for L_max = {l_max}")]
    OutOfRange { l_max: HalfInt },
    #[error("operator spaces differ: L_max {left} vs {right}")]
    SpecMismatch { left: HalfInt, right: HalfInt },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("operator norm did not converge after {iterations} iterations (estimate {estimate:e}, last gap {gap:e})")]
    NormNotConverged {
        iterations: usize,
        estimate: f64,
        gap: f64,
    },
    #[error("matrix is not Hermitian (‖A - A*‖ = {0:e})")]
    NotHermitian(f64),
    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal {off:e})")]
    EigenNotConverged { sweeps: usize, off: f64 },
    #[error("antilinear operator is not anti-involutive (‖J² + 1‖ = {0:e})")]
    NotAntiInvolutive(f64),
    #[error("decay fit needs at least 3 samples above the floor, found {found}")]
    TooFewSamples { found: usize },
    #[error("no convention candidate passes calibration; best residuals: {0}")]
    NoConvention(String),
    #[error("calibration is ambiguous, passing candidates: {0}")]
    AmbiguousConvention(String),
    #[error("empty convention candidate set")]
    EmptyCandidates,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}
