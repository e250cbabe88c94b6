use thiserror::Error;

/// Errors raised while building meshes, genes and optimization runs.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("no triangles")]
    NoTriangles,

    #[error("degenerate triangle {index}: repeated node index in {nodes:?}")]
    DegenerateTriangle { index: usize, nodes: [usize; 3] },

    #[error("triangle {index} references node {node}, but the mesh has {node_count} nodes")]
    NodeOutOfRange {
        index: usize,
        node: usize,
        node_count: usize,
    },

    #[error("duplicate triangle {index}: same nodes as triangle {first}")]
    DuplicateTriangle { index: usize, first: usize },

    #[error("non-manifold edge ({0}, {1}) is shared by more than two triangles")]
    NonManifoldEdge(usize, usize),

    #[error("zero-area triangle {0} (collinear nodes)")]
    ZeroArea(usize),

    #[error("plate needs at least one cell in each direction, got {nx}x{ny}")]
    EmptyPlate { nx: usize, ny: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("density {0} outside [0, 1]")]
    Density(f64),

    #[error("invalid objective: {0}")]
    Objective(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    pub(crate) fn check_len(expected: usize, actual: usize) -> Result<()> {
        if expected == actual {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected, actual })
        }
    }
}
