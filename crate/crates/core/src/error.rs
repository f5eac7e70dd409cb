use thiserror::Error;

/// Everything that can go wrong while building, unfolding or verifying.
#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("tolerances must be finite and strictly positive")]
    InvalidTolerance,
    #[error("zero-length direction vector")]
    DegenerateDirection,
    #[error("hinge has zero length")]
    DegenerateHinge,
    #[error("hinge endpoints are not in the target plane")]
    HingeNotInPlane,
    #[error("face is not planar")]
    NonPlanarFace,
    #[error("angle undefined for coincident points")]
    DegenerateAngle,
    #[error("input polygon {0} is not strictly convex and counter-clockwise")]
    NonConvexInput(&'static str),
    #[error("negative height {0}")]
    NegativeHeight(f64),
    #[error("lateral face over base edge {base_edge} is a quadrilateral (A edge parallel to B edge)")]
    QuadLateralFace { base_edge: usize },
    #[error("lateral face {face} has a horizontal normal")]
    ExactlyHorizontalNormal { face: usize },
    #[error("supporting-plane check failed for lateral face {face}")]
    UnsupportedFace { face: usize },
    #[error("point set is coplanar or too small for a 3D hull")]
    DegenerateHull,
    #[error("patch is not homeomorphic to a disk: {0}")]
    NotADisk(String),
    #[error("invalid face index {0}")]
    InvalidFace(usize),
    #[error("invalid vertex index {0}")]
    InvalidVertex(usize),
    #[error("altitude rays {0} and {1} cross")]
    RayCrossing(usize, usize),
    #[error("face {face} has an obtuse angle")]
    ObtuseFace { face: usize },
    #[error("neither tangent flip is safe at base vertex {vertex}")]
    NoSafeFlip { vertex: usize },
    #[error("no split of the fan at base vertex {vertex} stays in its altitude region")]
    ContainmentFailure { vertex: usize },
    #[error("layout overlaps ({pairs} face pairs)")]
    OverlapDetected { pairs: usize },
    #[error("enumeration size {size} exceeds cap {cap}")]
    CombinatorialExplosion { size: u128, cap: u128 },
    #[error("petal structure not applicable: {0}")]
    PetalNotApplicable(String),
    #[error("invalid petal choice: {0}")]
    InvalidChoice(String),
    #[error("faces around vertex {vertex} are split across the layout")]
    VertexNotSurrounded { vertex: usize, partial_sums: Vec<f64> },
    #[error("vertex {0} is not incident to any placed face")]
    VertexNotPlaced(usize),
    #[error("no valid instance after {0} attempts")]
    GenerationExhausted(usize),
    #[error("not a triangular prismatoid")]
    NotTriangular,
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
