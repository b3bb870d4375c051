use thiserror::Error;

/// Errors produced by grid construction, the solver, and the analysis layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid size must be an even integer >= 8, got {0}")]
    InvalidGridSize(usize),

    #[error("fractional order s must lie in (0, 1], got {0}")]
    InvalidOrder(f64),

    #[error("frequency omega must be positive, got {0}")]
    InvalidFrequency(f64),

    #[error("field length {0} does not match grid size {1}")]
    LengthMismatch(usize, usize),

    #[error("fields live on grids of different size ({0} vs {1})")]
    GridMismatch(usize, usize),

    #[error("field contains non-finite values")]
    NonFinite,

    #[error("elliptic modulus must lie in [0, 1), got {0}")]
    ModulusOutOfRange(f64),

    #[error("the 2pi-periodic dnoidal branch requires omega > 1/2, got {0}")]
    BelowBifurcation(f64),

    #[error("no sign change of period(eta1) - 2pi inside the bracket [{lo}, {hi}]")]
    NoRootInBracket { lo: f64, hi: f64 },

    #[error("degenerate stabilizing-factor denominator (phi^3, phi) = {0:.3e}: iterate collapsed toward zero")]
    DegenerateDenominator(f64),

    #[error("non-finite value encountered at iteration {0}")]
    NumericalBlowup(usize),

    #[error("mode truncation {modes} exceeds grid Nyquist {nyquist}")]
    TruncationTooLarge { modes: usize, nyquist: usize },

    #[error("matrix is not symmetric (max asymmetry {0:.3e})")]
    NotSymmetric(f64),

    #[error("invalid sweep range: need 1/2 <= omega_min < omega_max and steps >= 2")]
    InvalidSweepRange,

    #[error("no sweep point converged")]
    AllPointsFailed,

    #[error("forward-difference index needs at least 2 converged points, got {0}")]
    TooFewConverged(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
