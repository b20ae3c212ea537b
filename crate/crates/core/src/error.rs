use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("tile is not convex and counter-clockwise")]
    NonConvexTile,
    #[error("tile is degenerate: {0}")]
    DegenerateTile(String),
    #[error("invalid angle: {0}")]
    InvalidAngle(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("vertex {0} lies on the boundary")]
    BoundaryVertex(usize),
    #[error("vertex {vertex} has degree {degree}, expected 4")]
    WrongDegree { vertex: usize, degree: usize },
    #[error("interior vertices do not share a common geometry")]
    MixedVertexGeometry,
    #[error("vertex is not flat-foldable")]
    NotFlatFoldable,
    #[error("degenerate sector angles: {0}")]
    DegenerateAngles(String),
    #[error("vertex is not rigidly foldable: {0}")]
    NotRigidlyFoldable(String),
    #[error("folding angle {0} rad is outside (-pi, pi)")]
    AngleOutOfRange(f64),
    #[error("Newton iteration did not converge: {0}")]
    NoConvergence(String),
    #[error("folding branch exhausted at driver angle {reached} rad")]
    BranchExhausted { reached: f64 },
    #[error("numerical rank is ambiguous: singular value ratio {ratio:e} is near the cutoff")]
    RankDeficiencyAmbiguous { ratio: f64 },
    #[error("folding multiplier is zero at vertex {vertex}; use the general mode enumerator")]
    DegenerateMultiplier { vertex: usize },
    #[error("no folding modes found")]
    NoModes,
    #[error("{0} interior vertices exceed the exhaustive enumeration cap")]
    TooManyVertices(usize),
    #[error("direction does not match any valid tangent")]
    DirectionNotValid,
    #[error("direction lies in the span of the surrounding tangents (residual {residual:e})")]
    NotUniquelySelfFoldable { residual: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("crease {crease} re-derived with a different angle (difference {delta:e} rad)")]
    InconsistentPropagation { crease: usize, delta: f64 },
    #[error("face placements disagree by {deviation:e}")]
    InconsistentPlacement { deviation: f64 },
    #[error("malformed FOLD document: {0}")]
    MalformedDocument(String),
    #[error("face {face} has {corners} corners, expected 4")]
    NonQuadFace { face: usize, corners: usize },
    #[error("crease pattern is not a manifold quadrilateral grid: {0}")]
    NonManifold(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of the numerical machinery rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence(_)
                | Error::BranchExhausted { .. }
                | Error::RankDeficiencyAmbiguous { .. }
                | Error::InconsistentPropagation { .. }
                | Error::InconsistentPlacement { .. }
                | Error::InternalInconsistency(_)
        )
    }
}
