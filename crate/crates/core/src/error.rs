use thiserror::Error;

/// Errors raised by the numerical kernels and the verification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function has a pole at {0}")]
    GammaPole(f64),

    #[error("argument {0} is outside the domain of {1}")]
    Domain(f64, &'static str),

    #[error("pole at s = 1")]
    ZetaPole,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("modulus {0} is even; only odd primes are supported")]
    EvenModulus(u64),

    #[error("{a} is not invertible modulo {m}")]
    NotCoprime { a: i64, m: i64 },

    #[error("character {index} mod {modulus} is odd; an even character is required")]
    OddCharacter { modulus: u64, index: u64 },

    #[error("invalid reciprocity instance: {0}")]
    InvalidInstance(String),

    #[error("invalid quadrature plan: {0}")]
    InvalidPlan(String),

    #[error("invalid interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },

    #[error("{what}: error estimate {estimate:e} exceeds tolerance {tolerance:e} (value {value:e})")]
    ToleranceNotMet {
        what: String,
        value: f64,
        estimate: f64,
        tolerance: f64,
    },

    #[error("non-finite value produced by {0}")]
    NonFinite(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
