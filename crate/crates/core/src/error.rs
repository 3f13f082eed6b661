use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    // cell complexes
    #[error("cell {cell} references missing face {face}")]
    DanglingFace { cell: String, face: String },
    #[error("boundary of cell {cell} is not closed (∂∂ ≠ 0 on {face})")]
    BoundaryNotClosed { cell: String, face: String },
    #[error("duplicate cell id {0}")]
    DuplicateCell(String),
    #[error("cell {cell} has a zero coefficient on face {face}")]
    ZeroCoefficient { cell: String, face: String },
    #[error("cell {cell}: {reason}")]
    InvalidBoundary { cell: String, reason: String },
    #[error("degree {k} is outside 0..={dimension}")]
    DimensionOutOfRange { k: usize, dimension: usize },
    #[error("cell {cell} cannot be subdivided: {reason}")]
    IrregularCell { cell: String, reason: String },
    #[error("unknown cell {0}")]
    UnknownCell(String),
    #[error("integer overflow in exact arithmetic")]
    ArithmeticOverflow,

    // homology
    #[error("selected top-cells are not face-connected ({0} components)")]
    DisconnectedSelection(usize),
    #[error("selected top-cells mix dimensions {0:?}")]
    MixedDimensionSelection(Vec<usize>),

    // templex
    #[error("operation requires a node ↔ top-cell binding")]
    MissingBinding,
    #[error("schema error at {location}: {message}")]
    Schema { location: String, message: String },
    #[error("unknown node {0}")]
    UnknownNode(String),

    // directed paths
    #[error("paths are not composable: {tail} ≠ {head}")]
    NotComposable { tail: String, head: String },
    #[error("edge {0} → {1} is not in the digraph")]
    MissingEdge(String, String),
    #[error("a directed path needs at least one edge")]
    EmptyPath,
    #[error("more than {cap} elementary cycles")]
    CycleCapExceeded { cap: usize },
    #[error("trivial generatex class has no stripex decomposition")]
    TrivialClass,

    // trajectories
    #[error("itinerary node {0} is not in the digraph")]
    UnreachableNode(String),
    #[error("no directed path from {from} to {to} (t = {time})")]
    UnreachableJump { from: String, to: String, time: f64 },
    #[error("jump {from} → {to} at t = {time} has several shortest repairs")]
    AmbiguousJump { from: String, to: String, time: f64 },
    #[error("segment [{start}, {end}] is consistent with no generatex class")]
    NoConsistentClass { start: f64, end: f64 },
    #[error("window {window} exceeds record length {span}")]
    WindowTooLarge { window: f64, span: f64 },
    #[error("times must be strictly increasing (index {0})")]
    NonMonotonicTime(usize),
    #[error("state became non-finite at t = {0}")]
    NonFiniteState(f64),
    #[error("series of length {len} too short for dim {dim}, tau {tau}")]
    SeriesTooShort { len: usize, dim: usize, tau: usize },
    #[error("no charts to assign to")]
    EmptyCharts,
    #[error("cluster {cluster} has local dimension {found}, expected {expected} (singular values {profile:?})")]
    LocalDimensionMismatch { cluster: usize, found: usize, expected: usize, profile: Vec<f64> },
    #[error("insufficient points: {have} < {need}")]
    InsufficientPoints { have: usize, need: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn schema(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema { location: location.into(), message: message.into() }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::schema(format!("line {}, column {}", e.line(), e.column()), e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        let location = e
            .position()
            .map_or_else(|| "csv".to_string(), |p| format!("csv line {}", p.line()));
        Error::schema(location, e.to_string())
    }
}
