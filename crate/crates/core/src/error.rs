use thiserror::Error;

/// Errors raised by the lattice, root-system, surface and wall modules.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),

    #[error("rank {0} outside the supported range {1}")]
    RankOutOfRange(usize, &'static str),

    #[error("{0} is not a root")]
    NotARoot(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unsupported subsystem request: rank {n}, type {ty}")]
    UnsupportedType { n: usize, ty: String },

    #[error("unclassifiable Cartan graph component with {0} nodes")]
    Unclassifiable(usize),

    #[error("malformed stratum label: {0}")]
    MalformedLabel(String),

    #[error("unknown fiber type: {0}")]
    UnknownFiber(String),

    #[error("unknown component: {0}")]
    UnknownComponent(String),

    #[error("catalog inconsistency: {0}")]
    Catalog(String),

    #[error("contraction failed: {0}")]
    Contraction(String),

    #[error("weight {0} outside the weight domain {1}")]
    WeightOutOfDomain(String, String),

    #[error("{0} is not a wall")]
    UnknownWall(String),

    #[error("invalid operation: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
