use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("ill-conditioned classification: |tr^2 - 4| = {defect:e} is below tolerance; raise precision")]
    IllConditioned { defect: f64 },
    #[error("map is not loxodromic (class {class})")]
    NotLoxodromic { class: String },
    #[error("degenerate point triple: points {0} and {1} coincide within tolerance")]
    DegenerateTriple(usize, usize),
    #[error("degenerate marking: {0}")]
    DegenerateMarking(String),
    #[error("limit-point cap of {cap} exceeded")]
    ExplosionGuard { cap: usize },
    #[error("signature is not extended: a + b + d + e = 0")]
    NotExtended,
    #[error("rank formula gives negative rank {0}")]
    NegativeRank(i64),
    #[error("requested rank {requested} exceeds configured bound {bound}")]
    BoundExceeded { requested: u32, bound: u32 },
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("images do not define an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("abelianization is not invertible over the integers (det = {det})")]
    NotInvertibleMatrix { det: i128 },
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
    #[error("commutator difference is singular (|det| = {det:e}); generators share fixed points")]
    SingularDifference { det: f64 },
    #[error("classification inconclusive after exploring {explored} conjugators")]
    ClassificationInconclusive { explored: usize },
    #[error("witness pairing missing or invalid: {0}")]
    InvalidWitness(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Short machine-readable tag, used in structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::IllConditioned { .. } => "IllConditioned",
            Error::NotLoxodromic { .. } => "NotLoxodromic",
            Error::DegenerateTriple(..) => "DegenerateTriple",
            Error::DegenerateMarking(_) => "DegenerateMarking",
            Error::ExplosionGuard { .. } => "ExplosionGuard",
            Error::NotExtended => "NotExtended",
            Error::NegativeRank(_) => "NegativeRank",
            Error::BoundExceeded { .. } => "BoundExceeded",
            Error::RankMismatch { .. } => "RankMismatch",
            Error::NotAutomorphism(_) => "NotAutomorphism",
            Error::NotInvertibleMatrix { .. } => "NotInvertibleMatrix",
            Error::InvalidSignature(_) => "InvalidSignature",
            Error::SingularDifference { .. } => "SingularDifference",
            Error::ClassificationInconclusive { .. } => "ClassificationInconclusive",
            Error::InvalidWitness(_) => "InvalidWitness",
            Error::Parse(_) => "Parse",
        }
    }
}
