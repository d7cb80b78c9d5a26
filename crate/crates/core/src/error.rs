use crate::sequences::Family;

/// Library result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors shared by all modules.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parameter nu = {0} outside (0, 1]")]
    NuOutOfRange(f64),

    #[error("window radius must be positive, got {0}")]
    BadWindow(f64),

    #[error("perturbation {kind} is not applicable to family {family:?}")]
    IncompatiblePerturbation { kind: String, family: Family },

    #[error("perturbation is degenerate: {0}")]
    DegeneratePerturbation(String),

    #[error("window {window} too small for |z| = {z_mod} with guard {guard}; need window >= {required}")]
    WindowTooSmall {
        window: f64,
        z_mod: f64,
        guard: f64,
        required: f64,
    },

    #[error("sequence carries no radial perturbation data (delta map)")]
    MissingDeltaMap,

    #[error("invalid cutoffs: {0}")]
    BadCutoffs(String),

    #[error("requested tolerance {rel_tol:e} unreachable within the resource cap; would need truncation radius {required_r_t:.1} ({required_points} points, cap {cap})")]
    ToleranceUnreachable {
        rel_tol: f64,
        required_r_t: f64,
        required_points: usize,
        cap: usize,
    },

    #[error("z = {0} is a pole (positive integer) of the ratio product")]
    PoleAtInteger(f64),

    #[error("point {0} does not belong to the sequence")]
    NotASequencePoint(crate::C64),

    #[error("form/sequence mismatch: {0}")]
    FormMismatch(String),

    #[error("too few samples: got {got}, need at least {need}")]
    TooFewSamples { got: usize, need: usize },

    #[error("degenerate abscissae: fit requires distinct r values")]
    DegenerateAbscissae,

    #[error("sign violation in decay fit: log-modulus must be negative beyond r_min; offenders at r = {0:?}")]
    SignViolation(Vec<f64>),

    #[error("Gram matrix numerically non-Hermitian: max asymmetry {0:e}")]
    NonHermitian(f64),

    #[error("{0}")]
    Invalid(String),
}
