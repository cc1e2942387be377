use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong in this crate. Variants carry the offending
/// id where there is one, so the CLI can report it verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("weight is not defined on exactly the vertex set: {0}")]
    WeightMismatch(String),
    #[error("quiver has an oriented cycle; the polyhedron is unbounded")]
    UnboundedPolyhedron,
    #[error("the polyhedron is empty")]
    EmptyPolyhedron,
    #[error("{what} exceeds the cap of {limit}")]
    CapExceeded { what: String, limit: u64 },
    #[error("arrow `{0}` is a loop")]
    LoopArrow(String),
    #[error("vertex `{0}` does not have exactly two incident arrows both pointing in or both pointing out")]
    WrongValencyPattern(String),
    #[error("vertex `{0}` has valency below 2")]
    ValencyTooLow(String),
    #[error("the flow is not a vertex of the polyhedron")]
    NotAVertex,
    #[error("the pair is not tight")]
    NotTight,
    #[error("the quiver is not prime")]
    NotPrime,
    #[error("the quiver is not in R_d: {0}")]
    NotInRd(String),
    #[error("arrows `{0}` and `{1}` are not parallel")]
    NotParallel(String, String),
    #[error("quiver is not bipartite: {0}")]
    NotBipartite(String),
    #[error("element is not in the semigroup at degree {0}")]
    NotInSemigroup(u32),
    #[error("unsupported case: {0}")]
    UnsupportedCase(String),
    #[error("expected dimension {expected}, found {found}")]
    WrongDimension { expected: usize, found: usize },
    #[error("internal cross-check failed: {0}")]
    CrossCheck(String),
}

impl Error {
    /// Stable machine-readable tag used in structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidQuiver(_) => "InvalidQuiver",
            Error::UnknownVertex(_) => "UnknownVertex",
            Error::UnknownArrow(_) => "UnknownArrow",
            Error::WeightMismatch(_) => "WeightMismatch",
            Error::UnboundedPolyhedron => "UnboundedPolyhedron",
            Error::EmptyPolyhedron => "EmptyPolyhedron",
            Error::CapExceeded { .. } => "CapExceeded",
            Error::LoopArrow(_) => "LoopArrow",
            Error::WrongValencyPattern(_) => "WrongValencyPattern",
            Error::ValencyTooLow(_) => "ValencyTooLow",
            Error::NotAVertex => "NotAVertex",
            Error::NotTight => "NotTight",
            Error::NotPrime => "NotPrime",
            Error::NotInRd(_) => "NotInRd",
            Error::NotParallel(..) => "NotParallel",
            Error::NotBipartite(_) => "NotBipartite",
            Error::NotInSemigroup(_) => "NotInSemigroup",
            Error::UnsupportedCase(_) => "UnsupportedCase",
            Error::WrongDimension { .. } => "WrongDimension",
            Error::CrossCheck(_) => "CrossCheck",
        }
    }

    /// Errors caused by the shape of the input document rather than by the
    /// mathematics; the CLI maps these to exit code 1.
    pub fn is_malformed_input(&self) -> bool {
        matches!(
            self,
            Error::InvalidQuiver(_)
                | Error::UnknownVertex(_)
                | Error::UnknownArrow(_)
                | Error::WeightMismatch(_)
        )
    }
}
