//! Quadrature rules: tensor Gauss on full cells and edges, arc-length rules
//! on spline segments, and cut-cell area rules built from a signed cone
//! decomposition of the spline-bounded region.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::curve::{ClosedCurve, CurveSegment, CurveSet};
use crate::geo::Point2;
use crate::mesh::CellRect;

/// Where a rule integrates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DomainTag {
    CutArea,
    FullCell,
    CurveSegment,
    Edge,
}

#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub nodes: Vec<Point2>,
    pub weights: Vec<f64>,
    pub domain_tag: DomainTag,
}

impl QuadratureRule {
    pub fn empty(tag: DomainTag) -> Self {
        Self {
            nodes: Vec::new(),
            weights: Vec::new(),
            domain_tag: tag,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Integrate a scalar function with this rule.
    pub fn integrate(&self, mut f: impl FnMut(Point2) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Gauss-Legendre nodes and weights on [0, 1].
#[derive(Clone, Debug)]
pub struct Gauss1d {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

fn gauss_legendre_unit(n: usize) -> Gauss1d {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Newton on P_n starting from the Chebyshev-like initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    // map [-1,1] -> [0,1]
    Gauss1d {
        nodes: nodes.iter().map(|t| 0.5 * (t + 1.0)).collect(),
        weights: weights.iter().map(|w| 0.5 * w).collect(),
    }
}

/// Cached Gauss-Legendre rule with `n` points on [0, 1]; exact for degree 2n-1.
pub fn gauss_unit(n: usize) -> Arc<Gauss1d> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Gauss1d>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard
        .entry(n)
        .or_insert_with(|| Arc::new(gauss_legendre_unit(n)))
        .clone()
}

/// Number of Gauss points that integrate polynomials of degree `deg` exactly.
pub fn points_for_degree(deg: usize) -> usize {
    deg / 2 + 1
}

/// Tensor Gauss rule over a full cell, exact for total degree <= order.
pub fn full_cell_rule(cell: &CellRect, order: usize) -> QuadratureRule {
    let g = gauss_unit(points_for_degree(order));
    let n = g.nodes.len();
    let mut nodes = Vec::with_capacity(n * n);
    let mut weights = Vec::with_capacity(n * n);
    let area = cell.h * cell.h;
    for a in 0..n {
        for b in 0..n {
            nodes.push(Point2::new(
                cell.x0 + g.nodes[a] * cell.h,
                cell.y0 + g.nodes[b] * cell.h,
            ));
            weights.push(g.weights[a] * g.weights[b] * area);
        }
    }
    QuadratureRule {
        nodes,
        weights,
        domain_tag: DomainTag::FullCell,
    }
}

/// Gauss rule along a straight segment, exact for degree 2*order-1 along it.
pub fn edge_rule(p: Point2, q: Point2, order: usize) -> QuadratureRule {
    let g = gauss_unit(order.max(1));
    let len = p.dist(q);
    let nodes = g.nodes.iter().map(|&t| p + (q - p) * t).collect();
    let weights = g.weights.iter().map(|&w| w * len).collect();
    QuadratureRule {
        nodes,
        weights,
        domain_tag: DomainTag::Edge,
    }
}

/// Rule for line integrals over a spline segment: Gauss in the curve
/// parameter with arc-length weight |chi'|. Returned alongside parameters and
/// unit outward normals (for a counterclockwise curve).
#[derive(Clone, Debug)]
pub struct SegmentRule {
    pub params: Vec<f64>,
    pub nodes: Vec<Point2>,
    /// Arc-length weights w * |chi'| * dt.
    pub weights: Vec<f64>,
    /// Unit normal pointing out of the enclosed region at each node.
    pub normals: Vec<Point2>,
}

impl SegmentRule {
    pub fn rule(&self, tag: DomainTag) -> QuadratureRule {
        QuadratureRule {
            nodes: self.nodes.clone(),
            weights: self.weights.clone(),
            domain_tag: tag,
        }
    }
}

/// Build the arc-length rule on `segment` of `curve` with `order` Gauss
/// points per spline span.
pub fn curve_segment_rule(curve: &ClosedCurve, segment: &CurveSegment, order: usize) -> SegmentRule {
    let g = gauss_unit(order.max(1));
    let mut params = Vec::new();
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    let mut normals = Vec::new();
    for (t0, t1) in curve.split_at_knots(segment.t0, segment.t1) {
        let dt = t1 - t0;
        if dt <= 0.0 {
            continue;
        }
        for (&gt, &gw) in g.nodes.iter().zip(&g.weights) {
            let t = t0 + gt * dt;
            let d = curve.eval_d(t);
            let speed = d.norm();
            params.push(t);
            nodes.push(curve.eval(t));
            weights.push(gw * dt * speed);
            // counterclockwise parameterization: outward normal = (y', -x')/|chi'|
            normals.push(Point2::new(d.y, -d.x) / speed);
        }
    }
    SegmentRule {
        params,
        nodes,
        weights,
        normals,
    }
}

/// Which side of the curve set the area rule integrates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegionSide {
    /// The enclosed region (union of component interiors).
    Inside,
    /// The complement within the cell.
    Outside,
}

/// Oriented boundary piece of the cut region inside one cell.
enum BoundaryPiece {
    /// Straight piece from p to q (region on the left).
    Straight(Point2, Point2),
    /// Curve piece: component index and a parameter interval contained in a
    /// single spline span; `reversed` flips the traversal direction.
    Curved {
        component: usize,
        t0: f64,
        t1: f64,
        reversed: bool,
    },
}

/// Quadrature over `cell ∩ region` where the region is bounded by the spline
/// set. Exact (up to Gauss order) for polynomials since the spline is
/// piecewise cubic: each curved cone side is an exact cubic arc.
///
/// Returns an empty rule when the intersection is empty.
pub fn cut_area_rule(
    cell: &CellRect,
    curves: &CurveSet,
    order: usize,
    side: RegionSide,
) -> QuadratureRule {
    let segs = curves.intersect_cell(cell);
    if segs.is_empty() {
        // cell untouched by the boundary: all-in or all-out
        let center_inside = curves.inside_unchecked(cell.center());
        let wanted = match side {
            RegionSide::Inside => center_inside,
            RegionSide::Outside => !center_inside,
        };
        return if wanted {
            let mut r = full_cell_rule(cell, order);
            r.domain_tag = DomainTag::CutArea;
            r
        } else {
            QuadratureRule::empty(DomainTag::CutArea)
        };
    }

    let mut pieces: Vec<BoundaryPiece> = Vec::new();

    // Curve pieces, split at spline knots so each is one cubic arc. For the
    // outside region the curve is traversed in reverse.
    let reversed = side == RegionSide::Outside;
    for seg in &segs {
        let comp = &curves.components[seg.component];
        for (t0, t1) in comp.split_at_knots(seg.t0, seg.t1) {
            pieces.push(BoundaryPiece::Curved {
                component: seg.component,
                t0,
                t1,
                reversed,
            });
        }
    }

    // Cell boundary pieces: the parts of the (counterclockwise) cell boundary
    // lying on the requested side of the curve set.
    let corners = [
        Point2::new(cell.x0, cell.y0),
        Point2::new(cell.x0 + cell.h, cell.y0),
        Point2::new(cell.x0 + cell.h, cell.y0 + cell.h),
        Point2::new(cell.x0, cell.y0 + cell.h),
    ];
    // boundary parameter s in [0, 4h): distance along the boundary
    let perim = 4.0 * cell.h;
    let point_at = |s: f64| -> Point2 {
        let s = s.rem_euclid(perim);
        let edge = (s / cell.h).floor().min(3.0) as usize;
        let f = s - edge as f64 * cell.h;
        let (a, b) = (corners[edge], corners[(edge + 1) % 4]);
        a + (b - a) * (f / cell.h)
    };
    // s-positions of the curve endpoints on the cell boundary
    let mut cuts: Vec<f64> = Vec::new();
    for seg in &segs {
        let comp = &curves.components[seg.component];
        for t in [seg.t0, seg.t1] {
            let p = comp.eval(t);
            if let Some(s) = cell.boundary_param(p, 1e-9 * cell.h.max(1.0)) {
                cuts.push(s);
            }
        }
    }
    for e in 0..4 {
        cuts.push(e as f64 * cell.h); // corners split pieces into straight runs
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-9 * cell.h);
    if !cuts.is_empty() {
        let n = cuts.len();
        for i in 0..n {
            let s0 = cuts[i];
            let s1 = if i + 1 < n { cuts[i + 1] } else { cuts[0] + perim };
            if s1 - s0 < 1e-12 * cell.h {
                continue;
            }
            let mid = point_at(0.5 * (s0 + s1));
            let inside = curves.inside_unchecked(mid);
            let wanted = match side {
                RegionSide::Inside => inside,
                RegionSide::Outside => !inside,
            };
            if wanted {
                pieces.push(BoundaryPiece::Straight(point_at(s0), point_at(s1)));
            }
        }
    }

    cone_rule_from_pieces(cell, curves, &pieces, order)
}

/// Signed cone decomposition: integrate over the region bounded by the given
/// oriented pieces by conning each piece to a fixed apex. Exact by Stokes'
/// theorem for any apex; weights are positive when the region is star-shaped
/// about it.
fn cone_rule_from_pieces(
    cell: &CellRect,
    curves: &CurveSet,
    pieces: &[BoundaryPiece],
    order: usize,
) -> QuadratureRule {
    if pieces.is_empty() {
        return QuadratureRule::empty(DomainTag::CutArea);
    }
    // apex: mean of piece endpoints
    let mut apex = Point2::default();
    let mut cnt = 0.0;
    for p in pieces {
        let (a, b) = match p {
            BoundaryPiece::Straight(a, b) => (*a, *b),
            BoundaryPiece::Curved {
                component, t0, t1, ..
            } => {
                let c = &curves.components[*component];
                (c.eval(*t0), c.eval(*t1))
            }
        };
        apex += a + b;
        cnt += 2.0;
    }
    apex = apex / cnt;
    // clamp the apex into the cell for stability
    apex.x = apex.x.clamp(cell.x0, cell.x0 + cell.h);
    apex.y = apex.y.clamp(cell.y0, cell.y0 + cell.h);

    // xi: radial direction (degree 1 in the map), eta: along the piece.
    let g_xi = gauss_unit(points_for_degree(order + 1));
    let g_eta_straight = gauss_unit(points_for_degree(order + 2));
    // curved side is an exact cubic: integrand degree in eta is 3*order + 5
    let g_eta_curved = gauss_unit(points_for_degree(3 * order + 5));

    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for p in pieces {
        match p {
            BoundaryPiece::Straight(a, b) => {
                for (&te, &we) in g_eta_straight.nodes.iter().zip(&g_eta_straight.weights) {
                    let gamma = *a + (*b - *a) * te;
                    let dgamma = *b - *a;
                    for (&tx, &wx) in g_xi.nodes.iter().zip(&g_xi.weights) {
                        let x = apex + (gamma - apex) * tx;
                        let det = tx * (gamma - apex).cross(dgamma);
                        nodes.push(x);
                        weights.push(we * wx * det);
                    }
                }
            }
            BoundaryPiece::Curved {
                component,
                t0,
                t1,
                reversed,
            } => {
                let c = &curves.components[*component];
                let dt = t1 - t0;
                for (&te, &we) in g_eta_curved.nodes.iter().zip(&g_eta_curved.weights) {
                    let te = if *reversed { 1.0 - te } else { te };
                    let t = t0 + te * dt;
                    let gamma = c.eval(t);
                    let sign = if *reversed { -1.0 } else { 1.0 };
                    let dgamma = c.eval_d(t) * (dt * sign);
                    for (&tx, &wx) in g_xi.nodes.iter().zip(&g_xi.weights) {
                        let x = apex + (gamma - apex) * tx;
                        let det = tx * (gamma - apex).cross(dgamma);
                        nodes.push(x);
                        weights.push(we * wx * det);
                    }
                }
            }
        }
    }
    QuadratureRule {
        nodes,
        weights,
        domain_tag: DomainTag::CutArea,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_exactness() {
        // n points integrate x^(2n-1) exactly on [0,1]
        for n in 1..=20 {
            let g = gauss_unit(n);
            for deg in 0..=(2 * n - 1) {
                let val: f64 = g
                    .nodes
                    .iter()
                    .zip(&g.weights)
                    .map(|(&x, &w)| w * x.powi(deg as i32))
                    .sum();
                let exact = 1.0 / (deg as f64 + 1.0);
                assert!(
                    (val - exact).abs() < 1e-13,
                    "n={n} deg={deg}: {val} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn gauss_not_overclaimed() {
        // x^(2n) is NOT integrated exactly: sanity that the rule does not
        // overclaim its degree.
        let n = 4;
        let g = gauss_unit(n);
        let deg = 2 * n;
        let val: f64 = g
            .nodes
            .iter()
            .zip(&g.weights)
            .map(|(&x, &w)| w * x.powi(deg as i32))
            .sum();
        let exact = 1.0 / (deg as f64 + 1.0);
        assert!((val - exact).abs() > 1e-9);
    }

    #[test]
    fn full_cell_and_edge() {
        let cell = CellRect {
            x0: 0.25,
            y0: 0.5,
            h: 0.25,
        };
        let r = full_cell_rule(&cell, 6);
        assert!((r.total_weight() - 0.0625).abs() < 1e-15);
        // integrate x^2 y over the cell
        let val = r.integrate(|p| p.x * p.x * p.y);
        let exact = (0.5f64.powi(3) - 0.25f64.powi(3)) / 3.0 * (0.75f64.powi(2) - 0.5f64.powi(2))
            / 2.0;
        assert!((val - exact).abs() < 1e-15);

        let e = edge_rule(Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), 3);
        assert!((e.total_weight() - 1.0).abs() < 1e-15);
        let v = e.integrate(|p| p.x);
        assert!((v - 0.5).abs() < 1e-14);
    }

    #[test]
    fn edge_rule_length_h() {
        let h = 1.0 / 16.0;
        let e = edge_rule(Point2::new(0.5, 0.5), Point2::new(0.5, 0.5 + h), 4);
        assert!((e.total_weight() - h).abs() < 1e-16);
        // Legendre-type polynomial of degree 2*order-1 along the edge:
        // exact within 1e-13
        let f = |p: Point2| {
            let t = (p.y - 0.5) / h;
            (2.0 * t - 1.0).powi(7)
        };
        let v = e.integrate(f);
        // integral of (2t-1)^7 over [0,1] is 0, scaled by length h
        assert!((v - 0.0).abs() < 1e-13);
    }
}
