use alloc::string::String;

/// Errors raised by curve construction, contour evaluation and the
/// bundle/quadrature machinery built on top of it.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("radius must be positive (got {0})")]
    NonPositiveRadius(f64),
    #[error("annulus radius must lie in (0, 1) (got {0})")]
    BadAnnulusRadius(f64),
    #[error("curve is not simple: {0}")]
    CurveNotSimple(String),
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("node count {0} is not a power of two >= 16")]
    BadNodeCount(usize),
    #[error("point lies inside the exclusion band of the contour")]
    NearBoundary,
    #[error("tangent vector vanishes")]
    DegenerateTangent,
    #[error("no convergence up to N = {0}")]
    NoConvergence(usize),
    #[error("point is outside the validated annulus")]
    OutsideAnnulus,
    #[error("Newton iteration for the inverse map diverged")]
    NewtonDiverged,
    #[error("polygon edge {0} is degenerate or does not exist")]
    DegenerateEdge(usize),
    #[error("the origin must be an interior point")]
    OriginNotInterior,
    #[error("interior points coincide")]
    CoincidentInteriorPoints,
    #[error("phase step between adjacent nodes is too large; refine the grid")]
    BranchUnresolved,
    #[error("winding integral {0} is not an integer")]
    NotAnInteger(f64),
    #[error("transition function vanishes on the contour")]
    TransitionVanishes,
    #[error("points are in the wrong quadrant for this piece")]
    WrongQuadrant,
    #[error("Chern class {0} is negative: no holomorphic sections")]
    NoHolomorphicSection(i64),
    #[error("an adjustment point is required for a nonzero Chern class")]
    AdjustmentPointMissing,
    #[error("adjustment point is not interior")]
    AdjustmentPointNotInterior,
    #[error("operation requires a conformal-map curve")]
    NotConformalMapCurve,
    #[error("operation requires a polygon")]
    NotPolygon,
    #[error("the unit tangent does not extend meromorphically")]
    TangentNotMeromorphic,
    #[error("least-squares system is rank deficient")]
    RankDeficient,
}

pub type Result<T> = core::result::Result<T, Error>;
