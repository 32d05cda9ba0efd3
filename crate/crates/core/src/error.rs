use thiserror::Error;

/// Errors raised anywhere in the factorization stack.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {0} is not on the unit circle")]
    Domain(String),

    #[error("grid of size {grid} cannot resolve {needed} coefficients (grid must be a power of two)")]
    Size { grid: usize, needed: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("function is negative on the unit circle (minimum {min:e})")]
    NotNonnegative { min: f64 },

    #[error("input is identically zero")]
    ZeroInput,

    #[error("sample {index} is not strictly positive ({value:e})")]
    NonPositiveSample { index: usize, value: f64 },

    #[error("log-integrability violated: sample ratio {ratio:e} below threshold")]
    PaleyWienerViolation { ratio: f64 },

    #[error("sign times function takes negative values (minimum {min:e})")]
    SignMismatch { min: f64 },

    #[error("matrix is not Hermitian (defect {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("leading minor {minor} changes sign at {} grid points", points.len())]
    InconstantSign { minor: usize, points: Vec<usize> },

    #[error("division by a vanishing diagonal entry in column {column}")]
    DivisionBlowup { column: usize },

    #[error("constant term of the causal factor vanishes")]
    SingularD,

    #[error("corrector system is singular (condition estimate {condition:e})")]
    DeltaSingular { condition: f64 },

    #[error("constant matrix has inertia ({found_p}, {found_q}), expected ({p}, {q})")]
    CSignatureMismatch {
        p: usize,
        q: usize,
        found_p: usize,
        found_q: usize,
    },

    #[error("hyperbolic elimination broke down at step {step}")]
    HyperbolicBreakdown { step: usize },

    #[error("stored window reaches z^{stored} but z^{required} is required")]
    WindowExceedsData { stored: i64, required: i64 },

    #[error("stage {stage} residual {residual:e} exceeds tolerance {tolerance:e}")]
    StageResidualExceeded {
        stage: usize,
        residual: f64,
        tolerance: f64,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
