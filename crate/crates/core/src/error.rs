use alloc::string::String;

/// Errors produced by the core library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("unknown Pauli operator `{0}`")]
    UnknownPauli(String),
    #[error("expected a {expected}-dimensional operator, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("unsupported Hilbert-space dimension {0}")]
    UnsupportedDimension(usize),
    #[error("operator is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("trace {0} is not one")]
    NotNormalized(f64),
    #[error("operator is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    #[error("system frequency is zero; bath inverse temperature undefined")]
    ZeroFrequency,
    #[error("invalid time grid: {0}")]
    InvalidGrid(&'static str),
    #[error("integrator step size underflow at t = {t}")]
    StepUnderflow { t: f64 },
    #[error("integrator exceeded {steps} steps at t = {t}")]
    StepLimit { t: f64, steps: usize },
    #[error("Liouvillian has a numerically empty null space (smallest relative singular value {0:e})")]
    EmptyNullSpace(f64),
    #[error("J_x and J_y differ by {0:e}; product steady state requires J_x = J_y")]
    NotExcitationPreserving(f64),
    #[error("state is not diagonal (off-diagonal magnitude {0:e}); effective temperature undefined")]
    NotDiagonal(f64),
    #[error("mutual information {0:e} is negative beyond tolerance")]
    NegativeMutualInformation(f64),
    #[error("rate has imaginary part {0:e}")]
    ComplexRate(f64),
    #[error("degenerate Δ = η² − J² = {0:e}; closed forms are singular at η = J")]
    DegenerateDelta(f64),
    #[error("parameters outside the solvable regime: {0}")]
    OutsideRegime(&'static str),
    #[error("series lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
}

pub type Result<T> = core::result::Result<T, Error>;
