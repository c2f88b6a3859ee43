use thiserror::Error;

/// Errors produced by the curve, bundle, gluing and truncated-ring routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("curve has no components")]
    EmptyCurve,
    #[error("duplicate component id {0}")]
    DuplicateId(u32),
    #[error("component id must be positive")]
    ZeroId,
    #[error("edge references unknown component id {0}")]
    UnknownComponent(u32),
    #[error(
        "edge {{{0},{0}}} joins a component to itself; self-nodes are recorded as internal_nodes"
    )]
    SelfLoop(u32),
    #[error("components {0} and {1} meet in more than one node")]
    MultiEdge(u32, u32),
    #[error("dual graph contains a cycle through edge {{{0},{1}}}")]
    CycleDetected(u32, u32),
    #[error("dual graph is disconnected ({components} components, {parts} connected pieces)")]
    Disconnected { components: usize, parts: usize },
    #[error("index {index} out of range for {len} components")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("subcurve is empty")]
    EmptySubcurve,
    #[error("operation requires an irreducible curve, got {0} components")]
    WrongArity(usize),
    #[error("ordering does not belong to this curve")]
    OrderingMismatch,
    #[error("{what}: keys do not match the curve's component ids")]
    KeyMismatch { what: &'static str },
    #[error("rank must be positive")]
    ZeroRank,
    #[error("invalid polarization: {0}")]
    InvalidPolarization(String),
    #[error("ample degrees must be at least 1")]
    InvalidAmpleDegree,
    #[error("lambda-semistability fails at index {0}, above the step being balanced")]
    PreconditionViolated(usize),
    #[error("subobject multirank is zero on every component")]
    ZeroMultirank,
    #[error("subobject rank {sub} exceeds ambient rank {rank}")]
    RankBound { sub: u32, rank: u32 },
    #[error("flag dimension {dim} at node {node} exceeds subbundle rank {rank}")]
    DimensionBound { node: usize, dim: u32, rank: u32 },
    #[error("expected data for {expected} nodes, got {got}")]
    NodeCountMismatch { expected: usize, got: usize },
    #[error("flag dimensions ({m1},{m2}) do not sum to twice the rank {rank}")]
    FlagDimensions { m1: u32, m2: u32, rank: u32 },
    #[error("r*a = {ra} exceeds degree {d}")]
    DegreeBound { ra: i64, d: i64 },
    #[error("second projection J - I is singular over {field} for rank {rank}")]
    SingularProjection { field: String, rank: usize },
    #[error("flag rows are linearly dependent (rank {rank} < {expected})")]
    RankDeficient { rank: usize, expected: usize },
    #[error("{0} is not an r-th power in the field for r = {1}")]
    NoRoot(String, u32),
    #[error("zero is not a unit")]
    ZeroScalar,
    #[error("scalar is not a unit (constant term vanishes)")]
    NotUnit,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid field descriptor {0:?}")]
    InvalidField(String),
    #[error("value {0:?} is not an element of {1}")]
    InvalidElement(String, String),
    #[error("matrix is not invertible over the truncated ring")]
    NotInvertible,
    #[error("scalar is not congruent to 1 modulo pi^{0}")]
    NotInKernelLayer(usize),
    #[error("matrix determinant is not 1")]
    NotSpecialLinear,
    #[error("truncated ring needs a prime field, got {0}")]
    NotPrimeField(String),
    #[error("truncation order must be at least 1")]
    TruncationOrder,
    #[error("invalid rational {0:?}")]
    InvalidRational(String),
}

impl Error {
    /// Variant name, used as the machine-readable error kind in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptyCurve => "EmptyCurve",
            Error::DuplicateId { .. } => "DuplicateId",
            Error::ZeroId => "ZeroId",
            Error::UnknownComponent { .. } => "UnknownComponent",
            Error::SelfLoop { .. } => "SelfLoop",
            Error::MultiEdge { .. } => "MultiEdge",
            Error::CycleDetected { .. } => "CycleDetected",
            Error::Disconnected { .. } => "Disconnected",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::EmptySubcurve => "EmptySubcurve",
            Error::WrongArity { .. } => "WrongArity",
            Error::OrderingMismatch => "OrderingMismatch",
            Error::KeyMismatch { .. } => "KeyMismatch",
            Error::ZeroRank => "ZeroRank",
            Error::InvalidPolarization { .. } => "InvalidPolarization",
            Error::InvalidAmpleDegree => "InvalidAmpleDegree",
            Error::PreconditionViolated { .. } => "PreconditionViolated",
            Error::ZeroMultirank => "ZeroMultirank",
            Error::RankBound { .. } => "RankBound",
            Error::DimensionBound { .. } => "DimensionBound",
            Error::NodeCountMismatch { .. } => "NodeCountMismatch",
            Error::FlagDimensions { .. } => "FlagDimensions",
            Error::DegreeBound { .. } => "DegreeBound",
            Error::SingularProjection { .. } => "SingularProjection",
            Error::RankDeficient { .. } => "RankDeficient",
            Error::NoRoot { .. } => "NoRoot",
            Error::ZeroScalar => "ZeroScalar",
            Error::NotUnit => "NotUnit",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::InvalidField { .. } => "InvalidField",
            Error::InvalidElement { .. } => "InvalidElement",
            Error::NotInvertible => "NotInvertible",
            Error::NotInKernelLayer { .. } => "NotInKernelLayer",
            Error::NotSpecialLinear => "NotSpecialLinear",
            Error::NotPrimeField { .. } => "NotPrimeField",
            Error::TruncationOrder => "TruncationOrder",
            Error::InvalidRational { .. } => "InvalidRational",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
