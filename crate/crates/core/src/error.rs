use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("positivity violation: {0}")]
    PositivityViolation(String),
    #[error("bad bigrading: {0}")]
    BadBigrading(String),
    #[error("objects live in different rings")]
    RingMismatch,
    #[error("polynomial is not homogeneous")]
    Inhomogeneous,
    #[error("generators are not homogeneous")]
    InhomogeneousInput,
    #[error("element does not live in the ambient module of the basis")]
    AmbientMismatch,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("monomial order does not eliminate the requested variables")]
    OrderNotEliminating,
    #[error("base ring is not a domain")]
    BaseNotDomain,
    #[error("base ring is not a field")]
    BaseNotField,
    #[error("complex too short: need length {0}")]
    TooShort(usize),
    #[error("strand at degree {0} is not finite")]
    UnboundedStrand(String),
    #[error("duality mismatch at H^{i} degree {degree}: route A {a}, route B {b}")]
    DualityMismatch { i: usize, degree: String, a: usize, b: usize },
    #[error("module is zero")]
    ZeroModule,
    #[error("ring is not standard graded")]
    NotStandardGraded,
    #[error("point is not on the base variety: {0}")]
    NotOnVariety(String),
    #[error("shift {b} is below beta(M) = {beta}")]
    ShiftTooSmall { b: i64, beta: i64 },
    #[error("module has no rank")]
    NoRank,
    #[error("locus contains a component of Spec(A)")]
    LocusIsEverything,
    #[error("map is not generically finite at this fiber")]
    NotGenericallyFinite,
    #[error("limit estimate unstable: {0}")]
    Unstable(String),
    #[error("map is not generically finite at the generic point")]
    GenericNotFinite,
    #[error("cross-check failed: {0}")]
    CrossCheck(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, offset: usize, msg: String },
    #[error("undeclared name '{0}'")]
    UndeclaredName(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
