use thiserror::Error;

use crate::scalar::Field;

/// Errors raised across the library. Each variant names the failed precondition.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("{0} is not a prime below 65536")]
    NotPrime(u64),
    #[error("literal {0} is not a valid element of {1}")]
    InvalidLiteral(String, Field),
    #[error("division by zero")]
    DivisionByZero,
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("undeclared variable `{0}`")]
    UndeclaredVariable(String),
    #[error("variable context mismatch: {0}")]
    VariableMismatch(String),
    #[error("truncation order mismatch: {0} vs {1}")]
    ModulusMismatch(usize, usize),
    #[error("element is not a unit (constant coefficient is zero)")]
    NotAUnit,
    #[error("the zero polynomial has no finite multiplicity")]
    ZeroPolynomial,
    #[error("divisor must be a non-constant polynomial")]
    ConstantPrime,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("subspace is not t-invariant")]
    NotInvariant,
    #[error("neither e nor h is a unit; the quotient is not cyclic of full length")]
    NotSurjective,
    #[error("enumeration needs {candidates} candidates, above the budget of {budget}; split into at least {suggested_shards} shards or raise QUOTFIB_BUDGET")]
    BudgetExceeded {
        candidates: u128,
        budget: u128,
        suggested_shards: u128,
    },
    #[error("stratum index m={m} out of range for n={n}")]
    StratumOutOfRange { n: usize, m: usize },
    #[error("reference and complement vectors do not form a basis: {0}")]
    NotABasis(String),
    #[error("variable `{0}` has no equation in which it occurs as a lone linear term")]
    NotLinear(String),
    #[error("polynomial is not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("map is identically zero after substitution")]
    ZeroMap,
    #[error("pullback has a non-constant leftover factor {0}; candidate list is incomplete")]
    IncompleteCandidates(String),
    #[error("Jacobian vanishes identically on the chosen charts")]
    DegenerateChart,
    #[error("divisor does not meet the source chart")]
    ChartMissesDivisor,
    #[error("beta block has rank {rank}, expected {expected}")]
    BetaRankDeficient { rank: usize, expected: usize },
    #[error("determinant vanishes; not a stable pair")]
    ZeroDeterminant,
    #[error("beta row is zero")]
    ZeroBeta,
    #[error("determinant is not homogeneous")]
    InhomogeneousDeterminant,
    #[error("ledger check failed: {0}")]
    LedgerViolation(String),
    #[error("I/O error: {0}")]
    Io(String),
    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
