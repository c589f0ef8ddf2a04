//! Error type shared by all modules.

use crate::geo::Point2;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("curve (or its dilation by {delta}) leaves the background domain")]
    CurveOutsideDomain { delta: f64 },
    #[error("curve is degenerate or self-intersecting: {0}")]
    DegenerateCurve(String),
    #[error("need at least 4 markers, got {0}")]
    TooFewMarkers(usize),
    #[error("marker polygon self-intersects (segments {0} and {1})")]
    SelfIntersectingPolygon(usize, usize),
    #[error("point ({},{}) lies on the curve", .0.x, .0.y)]
    OnBoundary(Point2),
    #[error("level set has no zero contour at t = {0}")]
    NoContour(f64),
    #[error("cut region in cell {cell} has invalid topology: {reason}")]
    InvalidCellTopology { cell: usize, reason: String },
    #[error("point ({},{}) outside domain of the background mesh", .0.x, .0.y)]
    OutOfDomain(Point2),
    #[error(
        "point ({},{}) outside fictitious domain at step {step} (offset {offset}, from ({},{}))",
        .point.x, .point.y, .origin.x, .origin.y
    )]
    OutsideFictitiousDomain {
        point: Point2,
        origin: Point2,
        step: i64,
        offset: usize,
    },
    #[error("segment-transfer map F is not invertible on cell {cell}, segment {segment}")]
    NonInvertibleF { cell: usize, segment: usize },
    #[error("Newton inversion diverged on segment {segment} for point ({},{})", .point.x, .point.y)]
    NewtonDivergence { segment: usize, point: Point2 },
    #[error("linear solve failed: {0}")]
    LinearSolveFailure(String),
    #[error("matrix is singular")]
    Singular,
    #[error("iterative solver did not converge: residual {residual} after {iters} iterations")]
    NoConvergence { residual: f64, iters: usize },
    #[error("unsupported scheme order {0} (supported: 2, 3, 4)")]
    UnsupportedOrder(usize),
    #[error("history push at t = {got}, expected t = {expected}")]
    NonuniformStep { got: f64, expected: f64 },
    #[error("triplet index ({row},{col}) out of range for {n}x{n} matrix")]
    IndexOutOfRange { row: usize, col: usize, n: usize },
    #[error("reference domain required for this error norm but none was provided")]
    MissingReference,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
