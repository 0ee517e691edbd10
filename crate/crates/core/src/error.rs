use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure classes, mapped onto process exit codes by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Parse,
    Precondition,
    Precision,
}

impl ErrorClass {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorClass::Parse => 2,
            ErrorClass::Precondition => 3,
            ErrorClass::Precision => 4,
        }
    }
}

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("operands live over different primes ({0} and {1})")]
    PrimeMismatch(u64, u64),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("logarithm series does not converge: valuation {valuation} < required {required}")]
    OutsideConvergence { valuation: i64, required: i64 },

    #[error("not a p-adic unit: {0}")]
    NotAUnit(String),

    #[error("p = {p} is ramified: p divides disc(f) = {disc}")]
    Ramified { p: u64, disc: String },

    #[error("polynomial is not irreducible over Q: {0}")]
    Reducible(String),

    #[error("could not certify irreducibility of {0}")]
    IrreducibilityUnproven(String),

    #[error("polynomial is not squarefree: {0}")]
    NotSquarefree(String),

    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),

    #[error("curve is singular: 4a^3 + 27b^2 = 0")]
    SingularCurve,

    #[error("curve has bad reduction at p = {0}")]
    BadReduction(u64),

    #[error("point ({x}, {y}) is not on the curve")]
    PointNotOnCurve { x: String, y: String },

    #[error("could not reach the kernel of reduction: {0}")]
    FormalGroup(String),

    #[error("incomplete factorization: composite cofactor {0} left unfactored")]
    IncompleteFactorization(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("candidate cap exceeded: {needed} candidates > cap {cap}")]
    CandidateCap { cap: usize, needed: usize },

    #[error("generator {generator}, component {component}: {reason}")]
    Membership {
        generator: usize,
        component: usize,
        reason: String,
    },

    #[error("expected {expected} units (the unit rank), got {got}")]
    WrongUnitCount { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Parse { .. } | Error::Io(_) => ErrorClass::Parse,
            Error::PrecisionExhausted(_) => ErrorClass::Precision,
            _ => ErrorClass::Precondition,
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.class().exit_code()
    }

    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}
