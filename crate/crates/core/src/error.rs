use thiserror::Error;

/// Broad failure classes, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Bad input, bad parameters, or a computation that cannot run as asked.
    Usage,
    /// A containment or equality that must hold by theorem did not.
    TheoremViolation,
    /// Independent random samples disagreed, or sampling never produced
    /// what a general choice would.
    Genericity,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("zero divisor")]
    ZeroDivisor,

    #[error("invalid binomial: C({n}, {k})")]
    InvalidBinomial { n: u64, k: u64 },

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("empty generator list")]
    EmptyGenerators,

    #[error("ring mismatch")]
    RingMismatch,

    #[error("term order mismatch")]
    OrderMismatch,

    #[error("too many variables: {0} (at most {max})", max = crate::monomial::MAX_VARS)]
    TooManyVariables(usize),

    #[error("degree overflow: {0}")]
    DegreeOverflow(String),

    #[error("empty variety: the ideal is the unit ideal")]
    EmptyVariety,

    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("non-local input: ideal not m-primary; localization semantics not guaranteed")]
    NonLocal,

    #[error("analytic spread implemented only for m-primary ideals")]
    AnalyticSpreadUnsupported,

    #[error("J is not contained in I")]
    NotContained,

    #[error("not a reduction: I^(n+1) != J I^n for every n <= {last_n}")]
    NotAReduction { last_n: usize },

    #[error("sampled elements do not generate a reduction; enlarge field or raise n_max")]
    NoReductionFound,

    #[error("K_{n} did not stabilize within t_max = {t_max} general elements")]
    KnNotStabilized { n: usize, t_max: usize },

    #[error("core did not stabilize after {0} reductions")]
    CoreNotStabilized(usize),

    #[error("genericity check failed for {0}; enlarge field or change seed")]
    Genericity(String),

    #[error("theorem violation: {0}")]
    TheoremViolation(String),

    #[error("brute force infeasible: {0} candidate elements")]
    BruteForceInfeasible(u128),

    #[error("colon by the zero ideal")]
    ZeroColon,

    #[error("non-exact division in colon computation")]
    InexactDivision,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::TheoremViolation(_) | Error::InexactDivision => ErrorClass::TheoremViolation,
            Error::Genericity(_)
            | Error::NoReductionFound
            | Error::KnNotStabilized { .. }
            | Error::CoreNotStabilized(_) => ErrorClass::Genericity,
            _ => ErrorClass::Usage,
        }
    }

    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
