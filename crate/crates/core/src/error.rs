use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("cannot evaluate at q = 0: negative exponent {0} present")]
    EvalAtZero(i64),

    #[error("variable count mismatch: {left} vs {right}")]
    NvarsMismatch { left: usize, right: usize },

    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },

    #[error("too many variables: {0} (at most {max})", max = crate::laurent::MAX_VARS)]
    TooManyVariables(usize),

    #[error("exponent {0} does not fit the packed exponent range")]
    ExponentOverflow(i64),

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("denominator does not cancel: {0} factor(s) remain")]
    NotPolynomial(usize),

    #[error("duplicate denominator factor {0}")]
    DuplicateFactor(String),

    #[error("positive degree {degree} in x{var}; polynomial part is not supported")]
    PositiveDegree { var: usize, degree: i64 },

    #[error("denominator factor {0} is not of the form 1 - x_k/alpha")]
    NotInClass(String),

    #[error("malformed chain: {0}")]
    MalformedChain(String),

    #[error("improper branch at chain {0}: no lemma applies")]
    ImproperBranch(String),

    #[error("certificate check failed: {0}")]
    InvalidCertificate(String),

    #[error("lemma violated: {0}")]
    LemmaViolation(String),

    #[error("coefficient overflow in fixed-width arithmetic")]
    Overflow,
}
