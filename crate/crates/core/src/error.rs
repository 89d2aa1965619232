use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("scalars live in different quadratic extensions (d = {0} vs d = {1})")]
    MixedExtension(i64, i64),
    #[error("incompatible scalar kinds: {0} and {1}")]
    MixedScalarKind(String, String),
    #[error("non-finite floating point result")]
    NonFinite,
    #[error("cannot embed scalar of kind {from} into {into}")]
    ScalarEmbedding { from: String, into: String },
    #[error("invalid quadratic extension discriminant {0}")]
    BadDiscriminant(i64),

    #[error("words or group ring elements over different alphabets")]
    AlphabetMismatch,

    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not 2x2")]
    NotTwoByTwo,
    #[error("matrix is singular")]
    Singular,
    #[error("exact division failed: {0}")]
    InexactDivision(String),

    #[error("zero denominator")]
    ZeroDenominator,
    #[error("degenerate resultant input: {0}")]
    DegenerateInput(String),

    #[error("representation is not SL(2): {0}")]
    NotSL2(String),
    #[error("no root found on the search grid")]
    NoRootFound,
    #[error("only reducible (abelian) representations exist")]
    ReducibleOnly,
    #[error("representation does not satisfy relator {relator} (defect {defect:e})")]
    RelatorNotSatisfied { relator: String, defect: f64 },

    #[error("elimination degenerate: {0}")]
    EliminationDegenerate(String),

    #[error("first homology is not infinite cyclic: {0}")]
    NotInfiniteCyclic(String),
    #[error("presentation does not have deficiency one ({generators} generators, {relators} relators)")]
    NotDeficiencyOne { generators: usize, relators: usize },
    #[error("every column gives a vanishing denominator")]
    AllColumnsDegenerate,
    #[error("torsion depends on the deleted column ({0} vs {1})")]
    ColumnMismatch(usize, usize),
    #[error("presentation has no genus hint")]
    MissingGenusHint,
    #[error("meridian image is not parabolic (trace {0})")]
    NonParabolicMeridian(String),
    #[error("longitude trace is {0}, expected -2")]
    LongitudeTraceViolation(String),

    #[error("sutured data is not balanced: {0}")]
    Unbalanced(String),
    #[error("determinant verdict and homology oracle disagree (det zero: {det_zero}, h1 = {h1})")]
    OracleMismatch { det_zero: bool, h1: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
