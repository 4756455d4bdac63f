use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),

    #[error("inversion of zero modulo {0}")]
    InversionOfZero(u64),

    #[error("unsupported dimension p = {p}: {reason}")]
    UnsupportedDimension { p: u64, reason: &'static str },

    #[error("invalid magic parameters: {0}")]
    InvalidMagicParams(String),

    #[error("matrix is not Hermitian (max asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("Jacobi eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("exhaustive LHV search at p = {p} exceeds the enumeration budget (p <= {max}); use lhv_search")]
    BudgetExceeded { p: u64, max: u64 },

    #[error("{check} violated at {location}: {detail}")]
    TheoremViolation {
        check: &'static str,
        location: String,
        detail: String,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Module-qualified error code, stable across releases.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "field::not_prime",
            Error::ModulusMismatch(..) => "field::modulus_mismatch",
            Error::InversionOfZero(_) => "field::inversion_of_zero",
            Error::UnsupportedDimension { .. } => "weyl::unsupported_dimension",
            Error::InvalidMagicParams(_) => "magic::invalid_params",
            Error::NotHermitian(_) => "linalg::not_hermitian",
            Error::DimensionMismatch { .. } => "linalg::dimension_mismatch",
            Error::NoConvergence(_) => "linalg::no_convergence",
            Error::NotNormalized(_) => "entropy::not_normalized",
            Error::BudgetExceeded { .. } => "lhv::budget_exceeded",
            Error::TheoremViolation { .. } => "core::theorem_violation",
            Error::InvalidArgument(_) => "cli::invalid_argument",
        }
    }

    /// True for failures of a checked mathematical identity, as opposed to bad
    /// input or numerical breakdown.
    pub fn is_verification_failure(&self) -> bool {
        matches!(self, Error::TheoremViolation { .. })
    }

    pub(crate) fn violation(
        check: &'static str,
        location: impl Into<String>,
        detail: impl Into<String>,
    ) -> Self {
        Error::TheoremViolation {
            check,
            location: location.into(),
            detail: detail.into(),
        }
    }
}
