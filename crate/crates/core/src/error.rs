use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for ground set of size {ground_size}")]
    VertexOutOfRange { vertex: usize, ground_size: usize },
    #[error("edge {edge} has {size} vertices; every edge needs at least two")]
    EdgeTooSmall { edge: usize, size: usize },
    #[error("edge index {index} out of range ({count} edges)")]
    InvalidEdgeIndex { index: usize, count: usize },
    #[error("color {color} outside palette of size {palette}")]
    ColorOutOfRange { color: usize, palette: usize },
    #[error("palette must be positive")]
    EmptyPalette,
    #[error("coloring is not total: vertex {vertex} lies on an edge but is uncolored")]
    NotTotal { vertex: usize },
    #[error("set system has no edges")]
    EmptySystem,
    #[error("bound-check too large: {tuples} tuples exceed the cap of {cap}")]
    BoundCheckTooLarge { tuples: u128, cap: u128 },
    #[error("malformed decomposition: {0}")]
    MalformedDecomposition(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(
        "edge {edge} meets the fixed domain in {found} vertices, above the spill bound {bound}"
    )]
    SpillBoundViolated {
        edge: usize,
        found: usize,
        bound: usize,
    },
    #[error("oracle refused: {assignments} assignments exceed the cap of {cap}")]
    OracleCapExceeded { assignments: u128, cap: u128 },
    #[error("lift needs {transversals} transversal edges, above the cap of {cap}; enable sampling to draw a subset")]
    LiftCapExceeded { transversals: u128, cap: u128 },
    #[error("palette exhausted at vertex {vertex}")]
    PaletteExhausted { vertex: usize },
    #[error("no admissible vertex left on edge {edge}")]
    VertexPoolExhausted { edge: usize },
    #[error("greedy order leaves edge {edge} with an empty remainder")]
    NotEssentiallyDisjoint { edge: usize },
    #[error("no {tau}-witness found (blocked at edge {edge})")]
    NoWitness { tau: usize, edge: usize },
    #[error("certificate check failed: {0}")]
    CertificateRejected(String),
    #[error("{context} failed in block {block}: {source}")]
    InBlock {
        context: &'static str,
        block: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("instance format: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
