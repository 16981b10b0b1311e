use thiserror::Error;

/// Errors raised anywhere in the endomorphism-ring pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("unsupported characteristic {0}: need a prime p > 3 below 2^32")]
    UnsupportedCharacteristic(u64),
    #[error("singular curve: 4a^3 + 27b^2 = 0")]
    SingularCurve,
    #[error("not ordinary: trace {t} is divisible by p = {p}")]
    NotOrdinary { p: u64, t: i64 },
    #[error("invalid discriminant {0}")]
    InvalidDiscriminant(i64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("outside supported scale: {0}")]
    OutOfScale(String),
    #[error("empty factor base below norm bound {0}")]
    EmptyFactorBase(u64),
    #[error("max_trials exceeded after {0} trials")]
    MaxTrialsExceeded(usize),
    #[error("factor base does not generate the class group of discriminant {0}")]
    BaseDoesNotGenerate(i64),
    #[error("eigenvalue {lambda} is not a root of the Frobenius matrix characteristic polynomial mod {ell}")]
    EigenvalueMismatch { ell: u64, lambda: u64 },
    #[error("{ell}-torsion is not rational over the degree-{degree} extension")]
    TorsionNotRational { ell: u64, degree: usize },
    #[error("volcano walk budget exceeded at p = {p} after {steps} steps")]
    WalkBudgetExceeded { p: u64, steps: u32 },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotPrime(_)
            | Error::UnsupportedCharacteristic(_)
            | Error::SingularCurve
            | Error::NotOrdinary { .. }
            | Error::InvalidDiscriminant(_)
            | Error::InvalidArgument(_)
            | Error::OutOfScale(_) => 2,
            Error::EmptyFactorBase(_) | Error::MaxTrialsExceeded(_) | Error::BaseDoesNotGenerate(_) => 3,
            Error::DivisionByZero
            | Error::EigenvalueMismatch { .. }
            | Error::TorsionNotRational { .. }
            | Error::WalkBudgetExceeded { .. }
            | Error::Invariant(_) => 4,
        }
    }

    /// Stable machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "division_by_zero",
            Error::NotPrime(_) => "not_prime",
            Error::UnsupportedCharacteristic(_) => "unsupported_characteristic",
            Error::SingularCurve => "singular_curve",
            Error::NotOrdinary { .. } => "not_ordinary",
            Error::InvalidDiscriminant(_) => "invalid_discriminant",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::OutOfScale(_) => "out_of_scale",
            Error::EmptyFactorBase(_) => "empty_factor_base",
            Error::MaxTrialsExceeded(_) => "max_trials_exceeded",
            Error::BaseDoesNotGenerate(_) => "base_does_not_generate",
            Error::EigenvalueMismatch { .. } => "eigenvalue_mismatch",
            Error::TorsionNotRational { .. } => "torsion_not_rational",
            Error::WalkBudgetExceeded { .. } => "walk_budget_exceeded",
            Error::Invariant(_) => "internal_invariant",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
