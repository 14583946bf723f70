use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid spin quantum number j = {0}: 2j must be a non-negative integer")]
    InvalidSpin(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("state is not normalized: squared norm {norm_sq}")]
    NotNormalized { norm_sq: f64 },

    #[error("amplitude vector of length {len} does not match 2j+1 = {expected}")]
    DimensionMismatch { len: usize, expected: usize },

    #[error("all-zero amplitude vector")]
    ZeroState,

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    /// The z-y-z chart degenerates at sin(beta) = 0 (gimbal lock).
    #[error("singular rotation: |sin(beta)| = {sin_beta:e} is below the gimbal-lock guard")]
    SingularRotation { sin_beta: f64 },

    #[error("singular Fisher matrix: |det F| = {det:e}")]
    SingularFisher { det: f64 },

    #[error("degenerate state: mean trace QFI {value:e} is not positive")]
    DegenerateState { value: f64 },

    #[error("inconsistent moments: least-squares residual {residual:e} exceeds {tolerance:e}")]
    InconsistentMoments { residual: f64, tolerance: f64 },

    #[error("degenerate inversion: N(N-1) sin^2(beta) = {value:e} leaves alpha unidentifiable")]
    DegenerateInversion { value: f64 },

    #[error("finite-difference step {0:e} outside [1e-7, 1e-3]")]
    InvalidStep(f64),

    #[error("{n} qubits exceeds the full-space limit of {max}")]
    TooManyQubits { n: u32, max: u32 },

    #[error("state file: {0}")]
    StateFile(String),
}
