use thiserror::Error;

/// Every failure mode of the toolkit.
///
/// Each variant carries a stable code (see [`Error::code`]) that the CLI
/// prints and maps to an exit status.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is reducible")]
    ReducibleModulus(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different field contexts")]
    CtxMismatch,
    #[error("operation undefined on the zero element")]
    ZeroElement,
    #[error("field of size {size} exceeds the discrete-log ceiling 2^{ceiling_bits}")]
    DlogTooLarge { size: String, ceiling_bits: u32 },
    #[error("could not completely factor {0}: composite cofactor {1} survived the effort bound")]
    FactorizationIncomplete(String, String),
    #[error("invalid factorization hint for {0}: {1}")]
    InvalidHint(String, String),
    #[error("nu = {nu} needs primes up to 2^nu, above the sieve ceiling 2^{ceiling_bits}")]
    NuTooLarge { nu: f64, ceiling_bits: u32 },
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("{count} divisors exceed the ceiling {ceiling}")]
    TooManyDivisors { count: u128, ceiling: u128 },
    #[error("{0} is not a divisor of {1}")]
    NotADivisor(String, String),
    #[error("field of size {size} exceeds the ceiling 2^{ceiling_bits}")]
    FieldTooLarge { size: String, ceiling_bits: u32 },
    #[error("x^n - 1 has no monic divisor of degree {0}")]
    NoDegreeKDivisor(usize),
    #[error("gcd({0}, {1}) != 1")]
    NotCoprime(u64, u64),
    #[error("r = {0} does not divide q^n - 1")]
    RNotDivisor(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "NOT_PRIME",
            Error::ReducibleModulus(_) => "REDUCIBLE_MODULUS",
            Error::DivisionByZero => "DIVISION_BY_ZERO",
            Error::CtxMismatch => "CTX_MISMATCH",
            Error::ZeroElement => "ZERO_ELEMENT",
            Error::DlogTooLarge { .. } => "DLOG_TOO_LARGE",
            Error::FactorizationIncomplete(..) => "FACTORIZATION_INCOMPLETE",
            Error::InvalidHint(..) => "INVALID_HINT",
            Error::NuTooLarge { .. } => "NU_TOO_LARGE",
            Error::ZeroPolynomial => "ZERO_POLYNOMIAL",
            Error::TooManyDivisors { .. } => "TOO_MANY_DIVISORS",
            Error::NotADivisor(..) => "NOT_A_DIVISOR",
            Error::FieldTooLarge { .. } => "FIELD_TOO_LARGE",
            Error::NoDegreeKDivisor(_) => "NO_DEGREE_K_DIVISOR",
            Error::NotCoprime(..) => "NOT_COPRIME",
            Error::RNotDivisor(_) => "R_NOT_DIVISOR",
            Error::Parse(_) => "PARSE",
            Error::InvalidArgument(_) => "INVALID_ARGUMENT",
        }
    }

    /// Process exit status used by the CLI. 0 and 3 are reserved for verdicts,
    /// 2 for usage errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::InvalidArgument(_) => 2,
            Error::NotPrime(_) | Error::ReducibleModulus(_) => 10,
            Error::DivisionByZero | Error::ZeroElement | Error::ZeroPolynomial => 11,
            Error::CtxMismatch => 12,
            Error::DlogTooLarge { .. } | Error::FieldTooLarge { .. } => 13,
            Error::TooManyDivisors { .. } => 13,
            Error::FactorizationIncomplete(..) | Error::InvalidHint(..) => 14,
            Error::NuTooLarge { .. } => 15,
            Error::NotADivisor(..) | Error::RNotDivisor(_) | Error::NotCoprime(..) => 16,
            Error::NoDegreeKDivisor(_) => 17,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
