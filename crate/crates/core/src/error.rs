use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported field: {0}")]
    UnsupportedField(String),

    #[error("modulus is not irreducible over F_{p}")]
    ReducibleModulus { p: u64 },

    #[error("operation is undefined for the zero polynomial")]
    ZeroPolynomial,

    #[error("division by zero")]
    DivisionByZero,

    #[error("operands live over different coefficient domains")]
    DomainMismatch,

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid Drinfeld module: {0}")]
    InvalidModule(String),

    #[error("{0} is not a prime of A (monic irreducible required)")]
    NotPrime(String),

    #[error("bad reduction at {0}")]
    BadReduction(String),

    #[error("the prime (T) is excluded here: phi_T reduces to an inseparable polynomial")]
    PrimeIsT,

    #[error("torsion of level T^{level} does not split over an extension of degree <= {cap}")]
    SplittingCapExceeded { level: usize, cap: usize },

    #[error("linear system for the Frobenius characteristic polynomial is singular: {0}")]
    SingularSystem(String),

    #[error("{0} is not a Pi_r witness")]
    NotAWitness(String),

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}
