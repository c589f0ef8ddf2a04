//! Moving boundary representation: marker points joined by a periodic C^2
//! cubic spline, geometric queries against it, and analytic level-set
//! geometry for domains that change topology.

use crate::error::Error;
use crate::geo::Point2;
use crate::mesh::CellRect;
use crate::quad::gauss_unit;
use crate::Result;

/// Control points of the tracked boundary.
#[derive(Clone, Debug)]
pub struct MarkerSet {
    pub points: Vec<Point2>,
    /// Cumulative chord lengths, length = points.len() + 1; last entry is the
    /// closed polygon perimeter.
    pub cumulative_lengths: Vec<f64>,
    pub target_spacing: f64,
}

impl MarkerSet {
    pub fn new(points: Vec<Point2>, target_spacing: f64) -> Self {
        let cumulative_lengths = chord_lengths(&points);
        Self {
            points,
            cumulative_lengths,
            target_spacing,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// True when some consecutive gap leaves [eta/2, 2*eta].
    pub fn needs_resample(&self) -> bool {
        let eta = self.target_spacing;
        self.points.iter().enumerate().any(|(j, &p)| {
            let q = self.points[(j + 1) % self.points.len()];
            let d = p.dist(q);
            d < 0.5 * eta || d > 2.0 * eta
        })
    }
}

fn chord_lengths(points: &[Point2]) -> Vec<f64> {
    let n = points.len();
    let mut cum = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    cum.push(0.0);
    for j in 0..n {
        acc += points[j].dist(points[(j + 1) % n]);
        cum.push(acc);
    }
    cum
}

/// Cyclic tridiagonal solve (Thomas + Sherman-Morrison). `sub[i]` couples
/// x[i-1] (sub[0] couples x[n-1]), `sup[i]` couples x[i+1] (sup[n-1] couples
/// x[0]).
fn solve_cyclic_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    assert!(n >= 3);
    let alpha = sub[0];
    let beta = sup[n - 1];
    let gamma = -diag[0];
    let mut b = diag.to_vec();
    b[0] = diag[0] - gamma;
    b[n - 1] = diag[n - 1] - alpha * beta / gamma;
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = beta;

    let thomas = |d: &[f64]| -> Vec<f64> {
        let mut c = vec![0.0; n];
        let mut x = vec![0.0; n];
        c[0] = sup[0] / b[0];
        x[0] = d[0] / b[0];
        for i in 1..n {
            let m = b[i] - sub[i] * c[i - 1];
            if i < n - 1 {
                c[i] = sup[i] / m;
            }
            x[i] = (d[i] - sub[i] * x[i - 1]) / m;
        }
        for i in (0..n - 1).rev() {
            x[i] -= c[i] * x[i + 1];
        }
        x
    };

    let x1 = thomas(rhs);
    let x2 = thomas(&u);
    let factor =
        (x1[0] + alpha / gamma * x1[n - 1]) / (1.0 + x2[0] + alpha / gamma * x2[n - 1]);
    (0..n).map(|i| x1[i] - factor * x2[i]).collect()
}

/// Periodic cubic interpolating spline of a vector-valued function of the
/// parameter. Knots need not be uniform.
#[derive(Clone, Debug)]
pub struct PeriodicVecSpline {
    /// length J+1, knots[J] = knots[0] + period
    knots: Vec<f64>,
    /// per-span coefficients: value + d1*dt + d2*dt^2 + d3*dt^3
    coef: Vec<[Point2; 4]>,
    period: f64,
}

impl PeriodicVecSpline {
    /// Interpolate `values[j]` at `knots[j]` (j < J) with period
    /// `knots[J] - knots[0]`; `knots` has length J+1 and is strictly
    /// increasing.
    pub fn fit(knots: Vec<f64>, values: &[Point2]) -> Self {
        let j_count = values.len();
        assert_eq!(knots.len(), j_count + 1);
        let period = knots[j_count] - knots[0];
        assert!(period > 0.0);
        let h: Vec<f64> = (0..j_count).map(|j| knots[j + 1] - knots[j]).collect();
        let at = |j: usize| values[j % j_count];

        let solve_component = |get: &dyn Fn(Point2) -> f64| -> Vec<f64> {
            let mut sub = vec![0.0; j_count];
            let mut diag = vec![0.0; j_count];
            let mut sup = vec![0.0; j_count];
            let mut rhs = vec![0.0; j_count];
            for j in 0..j_count {
                let hm = h[(j + j_count - 1) % j_count];
                let hp = h[j];
                sub[j] = hm / 6.0;
                diag[j] = (hm + hp) / 3.0;
                sup[j] = hp / 6.0;
                rhs[j] = (get(at(j + 1)) - get(at(j))) / hp
                    - (get(at(j)) - get(at(j + j_count - 1))) / hm;
            }
            solve_cyclic_tridiagonal(&sub, &diag, &sup, &rhs)
        };
        let mx = solve_component(&|p: Point2| p.x);
        let my = solve_component(&|p: Point2| p.y);

        let mut coef = Vec::with_capacity(j_count);
        for j in 0..j_count {
            let hj = h[j];
            let m0 = Point2::new(mx[j], my[j]);
            let m1 = Point2::new(mx[(j + 1) % j_count], my[(j + 1) % j_count]);
            let a = at(j);
            let b = (at(j + 1) - at(j)) / hj - (m0 * 2.0 + m1) * (hj / 6.0);
            let c = m0 * 0.5;
            let d = (m1 - m0) / (6.0 * hj);
            coef.push([a, b, c, d]);
        }
        Self {
            knots,
            coef,
            period,
        }
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    fn wrap(&self, t: f64) -> f64 {
        let t0 = self.knots[0];
        t0 + (t - t0).rem_euclid(self.period)
    }

    fn span_of(&self, t: f64) -> (usize, f64) {
        let t = self.wrap(t);
        let j_count = self.coef.len();
        // near-uniform spans: initial guess then local walk
        let mut j = (((t - self.knots[0]) / self.period) * j_count as f64) as usize;
        j = j.min(j_count - 1);
        while j > 0 && t < self.knots[j] {
            j -= 1;
        }
        while j + 1 < j_count && t >= self.knots[j + 1] {
            j += 1;
        }
        (j, t - self.knots[j])
    }

    pub fn eval(&self, t: f64) -> Point2 {
        let (j, dt) = self.span_of(t);
        let [a, b, c, d] = self.coef[j];
        a + (b + (c + d * dt) * dt) * dt
    }

    pub fn eval_d(&self, t: f64) -> Point2 {
        let (j, dt) = self.span_of(t);
        let [_, b, c, d] = self.coef[j];
        b + (c * 2.0 + d * (3.0 * dt)) * dt
    }

    pub fn eval_dd(&self, t: f64) -> Point2 {
        let (j, dt) = self.span_of(t);
        let [_, _, c, d] = self.coef[j];
        c * 2.0 + d * (6.0 * dt)
    }

    /// Raw cubic of span j: (t_j, h_j, coefficients in local dt).
    pub fn span_cubic(&self, j: usize) -> (f64, f64, [Point2; 4]) {
        (
            self.knots[j],
            self.knots[j + 1] - self.knots[j],
            self.coef[j],
        )
    }

    pub fn n_spans(&self) -> usize {
        self.coef.len()
    }
}

/// Maximal parameter interval of a curve inside one cell. `t1` may exceed the
/// curve length to express wrap-around; always `t0 < t1`.
#[derive(Clone, Copy, Debug)]
pub struct CurveSegment {
    pub component: usize,
    pub t0: f64,
    pub t1: f64,
}

/// Result of a closest-point query.
#[derive(Clone, Copy, Debug)]
pub struct ClosestPoint {
    pub point: Point2,
    pub param: f64,
    pub distance: f64,
    /// Two candidates at (numerically) the same distance; the smallest
    /// parameter was returned.
    pub ambiguous: bool,
}

/// Spatial bucket grid over spline sample points, used to narrow candidate
/// spans for closest-point queries.
#[derive(Clone, Debug)]
struct AccelGrid {
    x0: f64,
    y0: f64,
    cell: f64,
    nx: usize,
    ny: usize,
    buckets: Vec<Vec<(u32, f64)>>,
}

impl AccelGrid {
    fn build(spline: &PeriodicVecSpline) -> Self {
        let mut min = Point2::new(f64::INFINITY, f64::INFINITY);
        let mut max = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        let per_span = 4usize;
        let mut samples = Vec::with_capacity(spline.n_spans() * per_span);
        for j in 0..spline.n_spans() {
            let (t0, h, _) = spline.span_cubic(j);
            for q in 0..per_span {
                let t = t0 + h * (q as f64 + 0.5) / per_span as f64;
                let p = spline.eval(t);
                min.x = min.x.min(p.x);
                min.y = min.y.min(p.y);
                max.x = max.x.max(p.x);
                max.y = max.y.max(p.y);
                samples.push((j as u32, t, p));
            }
        }
        let mean_span = spline.period / spline.n_spans() as f64;
        let cell = mean_span.max(1e-12);
        let nx = (((max.x - min.x) / cell).ceil() as usize + 1).max(1);
        let ny = (((max.y - min.y) / cell).ceil() as usize + 1).max(1);
        let mut buckets = vec![Vec::new(); nx * ny];
        for (j, t, p) in samples {
            let bx = (((p.x - min.x) / cell) as usize).min(nx - 1);
            let by = (((p.y - min.y) / cell) as usize).min(ny - 1);
            buckets[by * nx + bx].push((j, t));
        }
        Self {
            x0: min.x,
            y0: min.y,
            cell,
            nx,
            ny,
            buckets,
        }
    }

    /// Candidate (span, t) samples near x; expands rings until everything
    /// closer than best + 2 cells has been seen.
    fn candidates(&self, x: Point2, out: &mut Vec<(u32, f64)>) {
        out.clear();
        let bx = ((x.x - self.x0) / self.cell).floor() as i64;
        let by = ((x.y - self.y0) / self.cell).floor() as i64;
        let max_ring = (self.nx.max(self.ny)) as i64 + 2;
        let mut found_ring: Option<i64> = None;
        for r in 0..=max_ring {
            let mut any = false;
            let mut visit = |ix: i64, iy: i64, out: &mut Vec<(u32, f64)>, any: &mut bool| {
                if ix < 0 || iy < 0 || ix >= self.nx as i64 || iy >= self.ny as i64 {
                    return;
                }
                let b = &self.buckets[iy as usize * self.nx + ix as usize];
                if !b.is_empty() {
                    *any = true;
                    out.extend_from_slice(b);
                }
            };
            if r == 0 {
                visit(bx, by, out, &mut any);
            } else {
                for ix in (bx - r)..=(bx + r) {
                    visit(ix, by - r, out, &mut any);
                    visit(ix, by + r, out, &mut any);
                }
                for iy in (by - r + 1)..(by + r) {
                    visit(bx - r, iy, out, &mut any);
                    visit(bx + r, iy, out, &mut any);
                }
            }
            if any && found_ring.is_none() {
                found_ring = Some(r);
            }
            if let Some(fr) = found_ring {
                // continue two extra rings past the first non-empty one
                if r >= fr + 2 {
                    break;
                }
            }
        }
    }
}

/// Closed counterclockwise boundary curve: a periodic cubic spline through
/// the markers, parameterized by cumulative chord length.
#[derive(Clone, Debug)]
pub struct ClosedCurve {
    spline: PeriodicVecSpline,
    markers: Vec<Point2>,
    accel: AccelGrid,
    signed_area: f64,
}

/// Fit a periodic C^2 cubic spline through the markers; orientation is
/// normalized to counterclockwise.
pub fn fit_closed_spline(markers: &MarkerSet) -> Result<ClosedCurve> {
    if markers.len() < 4 {
        return Err(Error::TooFewMarkers(markers.len()));
    }
    if let Some((i, j)) = polygon_self_intersection(&markers.points) {
        return Err(Error::SelfIntersectingPolygon(i, j));
    }
    let curve = ClosedCurve::fit_unchecked(markers.points.clone());
    Ok(curve)
}

fn polygon_self_intersection(pts: &[Point2]) -> Option<(usize, usize)> {
    let n = pts.len();
    let seg = |i: usize| (pts[i], pts[(i + 1) % n]);
    for i in 0..n {
        let (a, b) = seg(i);
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue; // adjacent through wrap
            }
            let (c, d) = seg(j);
            if segments_properly_intersect(a, b, c, d) {
                return Some((i, j));
            }
        }
    }
    None
}

fn segments_properly_intersect(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let d1 = (b - a).cross(c - a);
    let d2 = (b - a).cross(d - a);
    let d3 = (d - c).cross(a - c);
    let d4 = (d - c).cross(b - c);
    (d1 * d2 < 0.0) && (d3 * d4 < 0.0)
}

impl ClosedCurve {
    /// Fit without the polygon checks (used internally where the input is
    /// already known to be a valid closed polyline).
    pub fn fit_unchecked(mut points: Vec<Point2>) -> Self {
        let mut spline = Self::spline_through(&points);
        let mut area = Self::spline_area(&spline);
        if area < 0.0 {
            points.reverse();
            spline = Self::spline_through(&points);
            area = Self::spline_area(&spline);
        }
        let accel = AccelGrid::build(&spline);
        Self {
            spline,
            markers: points,
            accel,
            signed_area: area,
        }
    }

    fn spline_through(points: &[Point2]) -> PeriodicVecSpline {
        let knots = chord_lengths(points);
        PeriodicVecSpline::fit(knots, points)
    }

    fn spline_area(spline: &PeriodicVecSpline) -> f64 {
        // 0.5 * integral of x y' - y x'; integrand degree 5 per span
        let g = gauss_unit(3);
        let mut area = 0.0;
        for j in 0..spline.n_spans() {
            let (t0, h, _) = spline.span_cubic(j);
            for (&gt, &gw) in g.nodes.iter().zip(&g.weights) {
                let t = t0 + gt * h;
                let p = spline.eval(t);
                let d = spline.eval_d(t);
                area += gw * h * p.cross(d);
            }
        }
        0.5 * area
    }

    pub fn markers(&self) -> &[Point2] {
        &self.markers
    }

    /// Chord-length parameter of marker j.
    pub fn marker_param(&self, j: usize) -> f64 {
        self.spline.knots[j]
    }

    pub fn n_markers(&self) -> usize {
        self.markers.len()
    }

    /// Total parameter length (chord-length perimeter).
    pub fn param_len(&self) -> f64 {
        self.spline.period
    }

    pub fn signed_area(&self) -> f64 {
        self.signed_area
    }

    pub fn spline(&self) -> &PeriodicVecSpline {
        &self.spline
    }

    pub fn eval(&self, t: f64) -> Point2 {
        self.spline.eval(t)
    }

    pub fn eval_d(&self, t: f64) -> Point2 {
        self.spline.eval_d(t)
    }

    pub fn eval_dd(&self, t: f64) -> Point2 {
        self.spline.eval_dd(t)
    }

    /// Unit outward normal (counterclockwise curve).
    pub fn outward_normal(&self, t: f64) -> Point2 {
        let d = self.eval_d(t);
        Point2::new(d.y, -d.x) / d.norm()
    }

    /// Split [t0, t1] (t1 may exceed the period) at interior spline knots.
    pub fn split_at_knots(&self, t0: f64, t1: f64) -> Vec<(f64, f64)> {
        let period = self.spline.period;
        let knots = &self.spline.knots;
        let base = knots[0];
        let mut pieces = Vec::new();
        let mut cur = t0;
        let eps = 1e-13 * period;
        while cur < t1 - eps {
            // next knot strictly greater than cur
            let local = base + (cur - base).rem_euclid(period);
            let (j, _) = self.spline.span_of(local);
            let next_local = knots[j + 1];
            let step = next_local - local;
            let next = if step <= eps { cur + period / self.spline.n_spans() as f64 } else { cur + step };
            pieces.push((cur, next.min(t1)));
            cur = next;
        }
        if pieces.is_empty() {
            pieces.push((t0, t1));
        }
        pieces
    }

    /// True arc length by per-span Gauss quadrature.
    pub fn arc_length(&self) -> f64 {
        let g = gauss_unit(8);
        let mut len = 0.0;
        for j in 0..self.spline.n_spans() {
            let (t0, h, _) = self.spline.span_cubic(j);
            for (&gt, &gw) in g.nodes.iter().zip(&g.weights) {
                len += gw * h * self.eval_d(t0 + gt * h).norm();
            }
        }
        len
    }

    fn arc_between(&self, t0: f64, t1: f64) -> f64 {
        let g = gauss_unit(8);
        let mut len = 0.0;
        for (a, b) in self.split_at_knots(t0, t1) {
            let h = b - a;
            for (&gt, &gw) in g.nodes.iter().zip(&g.weights) {
                len += gw * h * self.eval_d(a + gt * h).norm();
            }
        }
        len
    }

    /// Closest point on the curve to x.
    pub fn closest_point(&self, x: Point2) -> ClosestPoint {
        let mut cand = Vec::new();
        self.accel.candidates(x, &mut cand);
        debug_assert!(!cand.is_empty());
        // refine per candidate span (dedup spans)
        let mut spans: Vec<u32> = cand.iter().map(|&(j, _)| j).collect();
        spans.sort_unstable();
        spans.dedup();
        let mut best: Vec<(f64, f64, Point2)> = Vec::new(); // (dist, t, point)
        for &j in &spans {
            let (t0, h, _) = self.spline.span_cubic(j as usize);
            let (t, p, d) = self.refine_closest_in(x, t0, t0 + h);
            best.push((d, t, p));
        }
        best.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let (mut d0, mut t_best, mut p_best) = best[0];
        // ambiguity: a second minimum at a distinct location within 1e-12
        let mut ambiguous = false;
        for &(d, t, p) in best.iter().skip(1) {
            if d - d0 > 1e-12 {
                break;
            }
            if p.dist(p_best) > 1e-9 {
                ambiguous = true;
                if t < t_best {
                    t_best = t;
                    p_best = p;
                    d0 = d;
                }
            }
        }
        ClosestPoint {
            point: p_best,
            param: t_best,
            distance: d0,
            ambiguous,
        }
    }

    /// Minimize |chi(t) - x| over [lo, hi]: dense samples, golden-section
    /// localization, then Newton polish on (chi - x) . chi'.
    fn refine_closest_in(&self, x: Point2, lo: f64, hi: f64) -> (f64, Point2, f64) {
        let m = 8;
        let mut t_best = lo;
        let mut d_best = f64::INFINITY;
        for q in 0..=m {
            let t = lo + (hi - lo) * q as f64 / m as f64;
            let d = self.eval(t).dist(x);
            if d < d_best {
                d_best = d;
                t_best = t;
            }
        }
        let bracket = (hi - lo) / m as f64;
        let (lo_x, hi_x) = (t_best - bracket, t_best + bracket);
        let (mut a, mut b) = (lo_x, hi_x);
        let phi = 0.5 * (3.0 - 5.0f64.sqrt());
        let f = |t: f64| self.eval(t).dist(x);
        let mut x1 = a + phi * (b - a);
        let mut x2 = b - phi * (b - a);
        let mut f1 = f(x1);
        let mut f2 = f(x2);
        for _ in 0..30 {
            if f1 < f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = a + phi * (b - a);
                f1 = f(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = b - phi * (b - a);
                f2 = f(x2);
            }
        }
        let mut t = 0.5 * (a + b);
        for _ in 0..8 {
            let p = self.eval(t);
            let d1 = self.eval_d(t);
            let d2 = self.eval_dd(t);
            let g = (p - x).dot(d1);
            let gp = d1.norm_sq() + (p - x).dot(d2);
            if gp.abs() <= 1e-300 {
                break;
            }
            let step = (-g / gp).clamp(lo_x - t, hi_x - t);
            t += step;
            if step.abs() < 1e-16 * self.spline.period.max(1.0) {
                break;
            }
        }
        let p = self.eval(t);
        let d = p.dist(x);
        if d <= d_best {
            (t, p, d)
        } else {
            (t_best, self.eval(t_best), d_best)
        }
    }

    /// Winding number by adaptive polyline refinement; None when x is too
    /// close to the polyline to certify.
    pub fn winding_number(&self, x: Point2) -> Option<i32> {
        let mut params: Vec<f64> = (0..self.spline.n_spans())
            .flat_map(|j| {
                let (t0, h, _) = self.spline.span_cubic(j);
                [t0, t0 + 0.5 * h]
            })
            .collect();
        params.push(self.spline.knots[0] + self.spline.period);
        for _ in 0..12 {
            // max deviation of the spline from each chord
            let mut ok = true;
            let mut angle = 0.0;
            for w in params.windows(2) {
                let (a, b) = (self.eval(w[0]), self.eval(w[1]));
                // cubic-chord deviation bound: |chi''| h^2 / 8
                let h = w[1] - w[0];
                let dd = self
                    .eval_dd(0.5 * (w[0] + w[1]))
                    .norm()
                    .max(self.eval_dd(w[0]).norm());
                let dev = dd * h * h / 8.0 * 1.5;
                let da = a - x;
                let db = b - x;
                let dist_chord = point_segment_distance(x, a, b);
                if dist_chord <= dev + 1e-14 {
                    ok = false;
                    break;
                }
                angle += da.cross(db).atan2(da.dot(db));
            }
            if ok {
                return Some((angle / (2.0 * std::f64::consts::PI)).round() as i32);
            }
            // refine everywhere (cheap enough; refinement is rare)
            let mut refined = Vec::with_capacity(params.len() * 2);
            for w in params.windows(2) {
                refined.push(w[0]);
                refined.push(0.5 * (w[0] + w[1]));
            }
            refined.push(*params.last().unwrap());
            params = refined;
        }
        None
    }

    /// Point-in-region test. Errors when x lies within 1e-12 of the curve.
    pub fn inside(&self, x: Point2) -> Result<bool> {
        let cp = self.closest_point(x);
        if cp.distance < 1e-12 {
            return Err(Error::OnBoundary(x));
        }
        Ok(self.side_of(&cp, x))
    }

    /// Like `inside` but classifies on-boundary points as inside.
    pub fn inside_unchecked(&self, x: Point2) -> bool {
        let cp = self.closest_point(x);
        self.side_of(&cp, x)
    }

    fn side_of(&self, cp: &ClosestPoint, x: Point2) -> bool {
        // at the closest point the offset is normal to the tangent, so the
        // sign of the cross product is well conditioned
        let tangent = self.eval_d(cp.param);
        let cross = tangent.cross(x - cp.point);
        if cross.abs() > 1e-9 * tangent.norm() * cp.distance.max(1e-300) {
            cross > 0.0
        } else {
            // degenerate (tie on the medial axis or curve corner): fall back
            // to the certified winding number
            match self.winding_number(x) {
                Some(w) => w != 0,
                None => cross >= 0.0,
            }
        }
    }

    /// Maximal parameter intervals of the curve inside the closed cell.
    pub fn intersect_cell(&self, cell: &CellRect) -> Vec<CurveSegment> {
        let period = self.spline.period;
        let mut params: Vec<f64> = Vec::new();
        let (cx0, cy0, ch) = (cell.x0, cell.y0, cell.h);
        let lines = [
            (0, cx0),      // x = x0
            (0, cx0 + ch), // x = x0 + h
            (1, cy0),      // y = y0
            (1, cy0 + ch), // y = y0 + h
        ];
        let tol = 1e-10 * ch;
        for j in 0..self.spline.n_spans() {
            let (t0, h, c) = self.spline.span_cubic(j);
            // bbox prefilter per span
            let (bmin, bmax) = span_bbox(&c, h);
            if bmax.x < cx0 - tol
                || bmin.x > cx0 + ch + tol
                || bmax.y < cy0 - tol
                || bmin.y > cy0 + ch + tol
            {
                continue;
            }
            for (axis, level) in lines {
                let (c0, c1, c2, c3) = if axis == 0 {
                    (c[0].x - level, c[1].x, c[2].x, c[3].x)
                } else {
                    (c[0].y - level, c[1].y, c[2].y, c[3].y)
                };
                for s in cubic_roots_in(c0, c1, c2, c3, -tol, h + tol) {
                    let t = t0 + s.clamp(0.0, h);
                    let p = self.eval(t);
                    let other = if axis == 0 { p.y } else { p.x };
                    let (lo, hi) = if axis == 0 {
                        (cy0, cy0 + ch)
                    } else {
                        (cx0, cx0 + ch)
                    };
                    if other >= lo - tol && other <= hi + tol {
                        params.push(t);
                    }
                }
            }
        }
        if params.is_empty() {
            // no boundary crossings: curve entirely inside or outside
            return if cell.contains(self.eval(0.0), 0.0) {
                vec![CurveSegment {
                    component: 0,
                    t0: self.spline.knots[0],
                    t1: self.spline.knots[0] + period,
                }]
            } else {
                Vec::new()
            };
        }
        params.sort_by(|a, b| a.partial_cmp(b).unwrap());
        params.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * period);
        if params.len() >= 2 {
            let first = params[0];
            let last = *params.last().unwrap();
            if (first + period - last).abs() < 1e-12 * period {
                params.pop();
            }
        }
        // classify gaps by midpoint, merge consecutive inside gaps
        let n = params.len();
        let mut segs: Vec<CurveSegment> = Vec::new();
        let mut inside_flags = vec![false; n];
        for i in 0..n {
            let a = params[i];
            let b = if i + 1 < n {
                params[i + 1]
            } else {
                params[0] + period
            };
            let mid = self.eval(0.5 * (a + b));
            inside_flags[i] = cell.contains(mid, tol);
        }
        if inside_flags.iter().all(|&f| f) {
            return vec![CurveSegment {
                component: 0,
                t0: self.spline.knots[0],
                t1: self.spline.knots[0] + period,
            }];
        }
        // start from a gap that is outside, walk forward collecting runs
        let start = inside_flags.iter().position(|&f| !f).unwrap();
        let mut i = start;
        loop {
            let next = (i + 1) % n;
            if inside_flags[next] {
                // run of inside gaps starting at params[next]
                let t_start = params[next];
                let mut jj = next;
                while inside_flags[(jj + 1) % n] {
                    jj = (jj + 1) % n;
                    if jj == next {
                        break;
                    }
                }
                let t_end_idx = (jj + 1) % n;
                let mut t_end = params[t_end_idx];
                while t_end <= t_start {
                    t_end += period;
                }
                if t_end - t_start > 1e-9 * ch {
                    segs.push(CurveSegment {
                        component: 0,
                        t0: t_start,
                        t1: t_end,
                    });
                }
                i = jj;
            }
            i = (i + 1) % n;
            if i == start {
                break;
            }
        }
        segs.sort_by(|a, b| a.t0.partial_cmp(&b.t0).unwrap());
        segs
    }
}

fn point_segment_distance(x: Point2, a: Point2, b: Point2) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sq();
    if len2 == 0.0 {
        return x.dist(a);
    }
    let s = ((x - a).dot(ab) / len2).clamp(0.0, 1.0);
    x.dist(a + ab * s)
}

fn span_bbox(c: &[Point2; 4], h: f64) -> (Point2, Point2) {
    // control-free bound: sample endpoints + coefficient norms
    let p0 = c[0];
    let p1 = c[0] + (c[1] + (c[2] + c[3] * h) * h) * h;
    let slack = (c[2].norm() * h * h + c[3].norm() * h * h * h) * 0.5 + 1e-15;
    let min = Point2::new(p0.x.min(p1.x) - slack, p0.y.min(p1.y) - slack);
    let max = Point2::new(p0.x.max(p1.x) + slack, p0.y.max(p1.y) + slack);
    (min, max)
}

/// Real roots of c0 + c1 s + c2 s^2 + c3 s^3 in [lo, hi].
fn cubic_roots_in(c0: f64, c1: f64, c2: f64, c3: f64, lo: f64, hi: f64) -> Vec<f64> {
    let scale = c0.abs().max(c1.abs()).max(c2.abs()).max(c3.abs());
    if scale == 0.0 {
        return Vec::new();
    }
    let mut roots = Vec::new();
    if c3.abs() < 1e-13 * scale {
        if c2.abs() < 1e-13 * scale {
            if c1.abs() > 0.0 {
                roots.push(-c0 / c1);
            }
        } else {
            let disc = c1 * c1 - 4.0 * c2 * c0;
            if disc >= 0.0 {
                let sq = disc.sqrt();
                let q = -0.5 * (c1 + c1.signum() * sq);
                if q != 0.0 {
                    roots.push(q / c2);
                    roots.push(c0 / q);
                } else {
                    roots.push(0.0);
                }
            }
        }
    } else {
        // depressed cubic y^3 + p y + q, s = y - c2/(3 c3)
        let a = c2 / c3;
        let b = c1 / c3;
        let c = c0 / c3;
        let p = b - a * a / 3.0;
        let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
        let shift = -a / 3.0;
        let disc = 0.25 * q * q + p * p * p / 27.0;
        if disc > 0.0 {
            let sq = disc.sqrt();
            let u = cbrt(-0.5 * q + sq);
            let v = cbrt(-0.5 * q - sq);
            roots.push(u + v + shift);
        } else if p.abs() < 1e-300 {
            roots.push(shift);
        } else {
            let r = (-p / 3.0).sqrt();
            let phi = (3.0 * q / (2.0 * p * r)).clamp(-1.0, 1.0).acos();
            for kk in 0..3 {
                roots.push(2.0 * r * ((phi - 2.0 * std::f64::consts::PI * kk as f64) / 3.0).cos() + shift);
            }
        }
    }
    // Newton polish + range filter
    let f = |s: f64| c0 + s * (c1 + s * (c2 + s * c3));
    let fd = |s: f64| c1 + s * (2.0 * c2 + s * 3.0 * c3);
    let mut out = Vec::new();
    for mut r in roots {
        for _ in 0..3 {
            let d = fd(r);
            if d.abs() > 1e-300 {
                r -= f(r) / d;
            }
        }
        if r.is_finite() && r >= lo && r <= hi {
            out.push(r);
        }
    }
    out.sort_by(|x, y| x.partial_cmp(y).unwrap());
    out.dedup_by(|x, y| (*x - *y).abs() < 1e-12 * (hi - lo).abs().max(1.0));
    out
}

fn cbrt(x: f64) -> f64 {
    x.signum() * x.abs().powf(1.0 / 3.0)
}

/// Resample the curve to quasi-uniform arc-length spacing `eta`; the first
/// marker (parameter 0) is retained.
pub fn resample(curve: &ClosedCurve, eta: f64) -> MarkerSet {
    let total = curve.arc_length();
    assert!(
        eta < total / 4.0,
        "marker spacing {eta} too coarse for curve of length {total}"
    );
    let count = (total / eta).round().max(4.0) as usize;
    let step = total / count as f64;
    // cumulative arc length at knots
    let nsp = curve.spline.n_spans();
    let mut cum = Vec::with_capacity(nsp + 1);
    cum.push(0.0);
    for j in 0..nsp {
        let (t0, h, _) = curve.spline.span_cubic(j);
        cum.push(cum[j] + curve.arc_between(t0, t0 + h));
    }
    let knots = curve.spline.knots.clone();
    let mut points = Vec::with_capacity(count);
    for m in 0..count {
        let target = m as f64 * step;
        // locate span by binary search on cum
        let j = match cum.binary_search_by(|v| v.partial_cmp(&target).unwrap()) {
            Ok(j) => j.min(nsp - 1),
            Err(j) => (j - 1).min(nsp - 1),
        };
        // Newton on A(t) = target within span j
        let (mut t, t_lo, t_hi) = (
            knots[j] + (knots[j + 1] - knots[j]) * (target - cum[j]) / (cum[j + 1] - cum[j]),
            knots[j],
            knots[j + 1],
        );
        for _ in 0..30 {
            let a = cum[j] + curve.arc_between(t_lo, t);
            let da = curve.eval_d(t).norm();
            let dt = (target - a) / da;
            t = (t + dt).clamp(t_lo, t_hi);
            if dt.abs() < 1e-14 * curve.spline.period {
                break;
            }
        }
        points.push(curve.eval(t));
    }
    MarkerSet::new(points, eta)
}

/// Symmetric Hausdorff distance via dense sampling plus closest-point
/// refinement of every sample.
pub fn hausdorff_distance(a: &ClosedCurve, b: &ClosedCurve) -> f64 {
    hausdorff_distance_sampled(a, b, 10_000)
}

pub fn hausdorff_distance_sampled(a: &ClosedCurve, b: &ClosedCurve, samples: usize) -> f64 {
    let one_sided = |from: &ClosedCurve, to: &ClosedCurve| -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..samples {
            let t = from.param_len() * i as f64 / samples as f64;
            let p = from.eval(t);
            worst = worst.max(to.closest_point(p).distance);
        }
        worst
    };
    one_sided(a, b).max(one_sided(b, a))
}

/// A union of disjoint closed curves bounding the physical region.
#[derive(Clone, Debug)]
pub struct CurveSet {
    pub components: Vec<ClosedCurve>,
}

impl CurveSet {
    pub fn single(curve: ClosedCurve) -> Self {
        Self {
            components: vec![curve],
        }
    }

    pub fn total_param_len(&self) -> f64 {
        self.components.iter().map(|c| c.param_len()).sum()
    }

    pub fn enclosed_area(&self) -> f64 {
        self.components.iter().map(|c| c.signed_area()).sum()
    }

    pub fn inside(&self, x: Point2) -> Result<bool> {
        let mut any = false;
        for c in &self.components {
            if c.inside(x)? {
                any = true;
            }
        }
        Ok(any)
    }

    pub fn inside_unchecked(&self, x: Point2) -> bool {
        self.components.iter().any(|c| c.inside_unchecked(x))
    }

    pub fn closest_point(&self, x: Point2) -> (usize, ClosestPoint) {
        let mut best = (0, self.components[0].closest_point(x));
        for (i, c) in self.components.iter().enumerate().skip(1) {
            let cp = c.closest_point(x);
            if cp.distance < best.1.distance {
                best = (i, cp);
            }
        }
        best
    }

    pub fn intersect_cell(&self, cell: &CellRect) -> Vec<CurveSegment> {
        let mut out = Vec::new();
        for (i, c) in self.components.iter().enumerate() {
            for mut s in c.intersect_cell(cell) {
                s.component = i;
                out.push(s);
            }
        }
        out
    }
}

impl From<ClosedCurve> for CurveSet {
    fn from(c: ClosedCurve) -> Self {
        Self::single(c)
    }
}

/// Analytic level-set geometry: the region is { phi(x, t) < 0 }.
pub struct LevelSetGeometry {
    pub phi: Box<dyn Fn(Point2, f64) -> f64 + Send + Sync>,
    /// Contour-extraction sampling resolution (grid cells per side).
    pub band: usize,
    /// Sampling box lower-left corner and side length.
    pub origin: Point2,
    pub side: f64,
}

impl LevelSetGeometry {
    fn grad(&self, x: Point2, t: f64) -> Point2 {
        let e = 1e-6 * self.side;
        Point2::new(
            ((self.phi)(Point2::new(x.x + e, x.y), t) - (self.phi)(Point2::new(x.x - e, x.y), t))
                / (2.0 * e),
            ((self.phi)(Point2::new(x.x, x.y + e), t) - (self.phi)(Point2::new(x.x, x.y - e), t))
                / (2.0 * e),
        )
    }

    fn project(&self, mut x: Point2, t: f64) -> Point2 {
        for _ in 0..60 {
            let v = (self.phi)(x, t);
            if v.abs() <= 1e-13 {
                break;
            }
            let g = self.grad(x, t);
            let n2 = g.norm_sq().max(1e-30);
            x -= g * (v / n2);
        }
        x
    }
}

/// Extract the zero contour of phi(., t) as one MarkerSet per connected
/// component, markers spaced by eta and projected onto the zero set.
pub fn extract_contour(ls: &LevelSetGeometry, t: f64, eta: f64) -> Result<Vec<MarkerSet>> {
    let n = ls.band.max(16);
    let hs = ls.side / n as f64;
    let val = |i: usize, j: usize| {
        (ls.phi)(
            Point2::new(ls.origin.x + i as f64 * hs, ls.origin.y + j as f64 * hs),
            t,
        )
    };
    // sample grid
    let mut phi = vec![0.0; (n + 1) * (n + 1)];
    for j in 0..=n {
        for i in 0..=n {
            phi[j * (n + 1) + i] = val(i, j);
        }
    }
    let p = |i: usize, j: usize| phi[j * (n + 1) + i];

    // edge crossing points, keyed by (horizontal? , i, j)
    use std::collections::HashMap;
    let mut crossings: HashMap<(u8, usize, usize), Point2> = HashMap::new();
    let mut edge_point = |horiz: u8, i: usize, j: usize| -> Option<Point2> {
        let (va, vb, pa, pb) = if horiz == 1 {
            (
                p(i, j),
                p(i + 1, j),
                Point2::new(ls.origin.x + i as f64 * hs, ls.origin.y + j as f64 * hs),
                Point2::new(ls.origin.x + (i + 1) as f64 * hs, ls.origin.y + j as f64 * hs),
            )
        } else {
            (
                p(i, j),
                p(i, j + 1),
                Point2::new(ls.origin.x + i as f64 * hs, ls.origin.y + j as f64 * hs),
                Point2::new(ls.origin.x + i as f64 * hs, ls.origin.y + (j + 1) as f64 * hs),
            )
        };
        if (va < 0.0) == (vb < 0.0) {
            return None;
        }
        let s = va / (va - vb);
        Some(pa + (pb - pa) * s)
    };

    // per grid cell, the set of crossed edges; connect them into segments
    let mut adjacency: HashMap<(u8, usize, usize), Vec<(u8, usize, usize)>> = HashMap::new();
    for j in 0..n {
        for i in 0..n {
            let mut edges: Vec<(u8, usize, usize)> = Vec::new();
            for key in [
                (1u8, i, j),         // bottom
                (1u8, i, j + 1),     // top
                (0u8, i, j),         // left
                (0u8, i + 1, j),     // right
            ] {
                let exists = match key.0 {
                    1 => (p(key.1, key.2) < 0.0) != (p(key.1 + 1, key.2) < 0.0),
                    _ => (p(key.1, key.2) < 0.0) != (p(key.1, key.2 + 1) < 0.0),
                };
                if exists {
                    if let Some(pt) = edge_point(key.0, key.1, key.2) {
                        crossings.entry(key).or_insert(pt);
                        edges.push(key);
                    }
                }
            }
            match edges.len() {
                0 => {}
                2 => {
                    adjacency.entry(edges[0]).or_default().push(edges[1]);
                    adjacency.entry(edges[1]).or_default().push(edges[0]);
                }
                4 => {
                    // saddle: resolve by center sample
                    let c = (ls.phi)(
                        Point2::new(
                            ls.origin.x + (i as f64 + 0.5) * hs,
                            ls.origin.y + (j as f64 + 0.5) * hs,
                        ),
                        t,
                    );
                    let corner = p(i, j) < 0.0;
                    // pair edges so the contour separates the center from the
                    // corners consistently
                    let pairs = if (c < 0.0) == corner {
                        [(0usize, 3usize), (1, 2)]
                    } else {
                        [(0, 2), (1, 3)]
                    };
                    // edges order: bottom, top, left, right
                    for (a, b) in pairs {
                        adjacency.entry(edges[a.min(edges.len() - 1)]).or_default().push(edges[b.min(edges.len() - 1)]);
                        adjacency.entry(edges[b.min(edges.len() - 1)]).or_default().push(edges[a.min(edges.len() - 1)]);
                    }
                }
                _ => {
                    // grazing through a node; skip, neighbors will pick it up
                }
            }
        }
    }
    if crossings.is_empty() {
        return Err(Error::NoContour(t));
    }

    // walk loops
    let mut visited: HashMap<(u8, usize, usize), bool> = HashMap::new();
    let mut loops: Vec<Vec<Point2>> = Vec::new();
    let mut keys: Vec<_> = crossings.keys().cloned().collect();
    keys.sort();
    for start in keys {
        if visited.get(&start).copied().unwrap_or(false) {
            continue;
        }
        let mut looped = Vec::new();
        let mut cur = start;
        let mut prev: Option<(u8, usize, usize)> = None;
        loop {
            visited.insert(cur, true);
            looped.push(crossings[&cur]);
            let nexts = match adjacency.get(&cur) {
                Some(v) => v,
                None => break,
            };
            let next = nexts
                .iter()
                .find(|&&k| Some(k) != prev && !visited.get(&k).copied().unwrap_or(false));
            match next {
                Some(&k) => {
                    prev = Some(cur);
                    cur = k;
                }
                None => break,
            }
        }
        if looped.len() >= 6 {
            loops.push(looped);
        }
    }
    if loops.is_empty() {
        return Err(Error::NoContour(t));
    }

    let mut out = Vec::new();
    for mut pts in loops {
        // Newton-project the raw marching-squares points, then thin to eta
        for q in pts.iter_mut() {
            *q = ls.project(*q, t);
        }
        pts.dedup_by(|a, b| a.dist(*b) < 1e-12);
        if pts.len() >= 4 && pts[0].dist(*pts.last().unwrap()) < 1e-12 {
            pts.pop();
        }
        if pts.len() < 4 {
            continue;
        }
        let dense = ClosedCurve::fit_unchecked(pts);
        let markers = resample(&dense, eta.min(dense.arc_length() / 8.0));
        let mut projected: Vec<Point2> =
            markers.points.iter().map(|&q| ls.project(q, t)).collect();
        projected.dedup_by(|a, b| a.dist(*b) < 1e-12);
        out.push(MarkerSet::new(projected, eta));
    }
    if out.is_empty() {
        return Err(Error::NoContour(t));
    }
    // deterministic component order: by lowest marker y, then x
    out.sort_by(|a, b| {
        let ka = a
            .points
            .iter()
            .map(|p| (p.y, p.x))
            .fold((f64::INFINITY, f64::INFINITY), |acc, v| {
                if v < acc {
                    v
                } else {
                    acc
                }
            });
        let kb = b
            .points
            .iter()
            .map(|p| (p.y, p.x))
            .fold((f64::INFINITY, f64::INFINITY), |acc, v| {
                if v < acc {
                    v
                } else {
                    acc
                }
            });
        ka.partial_cmp(&kb).unwrap()
    });
    Ok(out)
}

#[cfg(test)]
pub(crate) fn circle_markers(center: Point2, r: f64, n: usize) -> MarkerSet {
    let pts = (0..n)
        .map(|i| {
            let a = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            center + Point2::new(a.cos(), a.sin()) * r
        })
        .collect();
    MarkerSet::new(pts, 2.0 * std::f64::consts::PI * r / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn square_interpolation() {
        let ms = MarkerSet::new(
            vec![
                Point2::new(0.0, 0.0),
                Point2::new(1.0, 0.0),
                Point2::new(1.0, 1.0),
                Point2::new(0.0, 1.0),
            ],
            1.0,
        );
        let c = fit_closed_spline(&ms).unwrap();
        for (j, &p) in ms.points.iter().enumerate() {
            let q = c.eval(c.marker_param(j));
            assert!(p.dist(q) < 1e-13);
        }
        assert!(c.signed_area() > 0.0);
    }

    #[test]
    fn too_few_markers() {
        let ms = MarkerSet::new(
            vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.5, 1.0)],
            1.0,
        );
        assert!(matches!(
            fit_closed_spline(&ms),
            Err(Error::TooFewMarkers(3))
        ));
    }

    #[test]
    fn self_intersection_detected() {
        let ms = MarkerSet::new(
            vec![
                Point2::new(0.0, 0.0),
                Point2::new(1.0, 1.0),
                Point2::new(1.0, 0.0),
                Point2::new(0.0, 1.0),
            ],
            1.0,
        );
        assert!(matches!(
            fit_closed_spline(&ms),
            Err(Error::SelfIntersectingPolygon(_, _))
        ));
    }

    #[test]
    fn circle_fit_quartic_accuracy() {
        // interpolation error on a circle decays like eta^4
        let center = Point2::new(0.3, 0.4);
        let r = 0.15;
        let mut errs = Vec::new();
        for n in [16usize, 32, 64] {
            let c = fit_closed_spline(&circle_markers(center, r, n)).unwrap();
            let mut worst: f64 = 0.0;
            for i in 0..10_000 {
                let t = c.param_len() * i as f64 / 10_000.0;
                let p = c.eval(t);
                worst = worst.max(((p - center).norm() - r).abs());
            }
            errs.push(worst);
        }
        let rate1 = (errs[0] / errs[1]).log2();
        let rate2 = (errs[1] / errs[2]).log2();
        assert!(rate1 > 3.5 && rate2 > 3.5, "rates {rate1} {rate2}");
        // 64 markers: max distance below C*eta^4
        let eta = 2.0 * PI * r / 64.0;
        assert!(errs[2] < 2.0 * eta.powi(4) / r.powi(3));
    }

    #[test]
    fn refit_idempotent_at_markers() {
        let c0 = fit_closed_spline(&circle_markers(Point2::new(0.5, 0.5), 0.2, 24)).unwrap();
        let pts: Vec<Point2> = (0..24).map(|j| c0.eval(c0.marker_param(j))).collect();
        let c1 = fit_closed_spline(&MarkerSet::new(pts.clone(), 0.05)).unwrap();
        for (j, &p) in pts.iter().enumerate() {
            assert!(c1.eval(c1.marker_param(j)).dist(p) < 1e-12);
        }
    }

    #[test]
    fn c2_continuity_at_knots() {
        let c = fit_closed_spline(&circle_markers(Point2::new(0.0, 0.0), 1.0, 20)).unwrap();
        for j in 0..c.n_markers() {
            let t = c.marker_param(j);
            let eps = 1e-9;
            let before = c.eval_dd(t - eps + if j == 0 { c.param_len() } else { 0.0 });
            let after = c.eval_dd(t + eps);
            assert!(before.dist(after) < 1e-5, "D2 jump at knot {j}");
        }
    }

    #[test]
    fn closest_point_circle() {
        let center = Point2::new(0.5, 0.5);
        let r = 0.25;
        let c = fit_closed_spline(&circle_markers(center, r, 128)).unwrap();
        let x = Point2::new(1.2, 0.9);
        let expected = center + (x - center) * (r / (x - center).norm());
        let cp = c.closest_point(x);
        assert!(cp.point.dist(expected) < 1e-8);
        assert!(!cp.ambiguous);

        // center: ambiguous tie
        let cp0 = c.closest_point(center);
        assert!(cp0.ambiguous);
        assert!((cp0.distance - r).abs() < 1e-6);
    }

    #[test]
    fn inside_tests() {
        let c = fit_closed_spline(&circle_markers(Point2::new(0.5, 0.5), 0.125, 64)).unwrap();
        assert!(c.inside(Point2::new(0.5, 0.5)).unwrap());
        assert!(!c.inside(Point2::new(0.9, 0.9)).unwrap());
        // near-boundary
        assert!(c.inside(Point2::new(0.5 + 0.1249, 0.5)).unwrap());
        assert!(!c.inside(Point2::new(0.5 + 0.1261, 0.5)).unwrap());
    }

    #[test]
    fn inside_matches_winding() {
        let c = fit_closed_spline(&circle_markers(Point2::new(0.5, 0.5), 0.2, 48)).unwrap();
        let mut state = 123456789u64;
        let mut rng = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..300 {
            let x = Point2::new(rng(), rng());
            let d = (x - Point2::new(0.5, 0.5)).norm();
            if (d - 0.2).abs() < 1e-3 {
                continue;
            }
            assert_eq!(c.inside(x).unwrap(), d < 0.2, "at {x:?}");
        }
    }

    #[test]
    fn intersect_cell_circle() {
        // circle r=0.25 at origin-ish; cell crossing one edge twice
        let c = fit_closed_spline(&circle_markers(Point2::new(0.5, 0.5), 0.25, 96)).unwrap();
        // cell to the right of the circle, straddling the rightmost arc
        let cell = CellRect {
            x0: 0.7,
            y0: 0.4375,
            h: 0.125,
        };
        let segs = c.intersect_cell(&cell);
        assert_eq!(segs.len(), 1);
        let (a, b) = (c.eval(segs[0].t0), c.eval(segs[0].t1));
        // endpoints on the cell boundary
        for p in [a, b] {
            let on = (p.x - cell.x0).abs() < 1e-8
                || (p.x - cell.x0 - cell.h).abs() < 1e-8
                || (p.y - cell.y0).abs() < 1e-8
                || (p.y - cell.y0 - cell.h).abs() < 1e-8;
            assert!(on, "endpoint {p:?} not on cell boundary");
        }
        // endpoints match the analytic circle crossings of the horizontal
        // edges y = 0.4375 and y = 0.5625 (dy = 0.0625 from the center)
        let x_exact = 0.5 + (0.25f64.powi(2) - 0.0625f64.powi(2)).sqrt();
        for p in [a, b] {
            assert!(
                (p.x - x_exact).abs() < 1e-6
                    && ((p.y - 0.4375).abs() < 1e-9 || (p.y - 0.5625).abs() < 1e-9),
                "unexpected intersection {p:?}"
            );
        }

        // far cell: empty
        let far = CellRect {
            x0: 0.9,
            y0: 0.9,
            h: 0.05,
        };
        assert!(c.intersect_cell(&far).is_empty());
        // cell fully inside circle: curve does not enter it
        let inside_cell = CellRect {
            x0: 0.48,
            y0: 0.48,
            h: 0.04,
        };
        assert!(c.intersect_cell(&inside_cell).is_empty());
    }

    #[test]
    fn segments_tile_parameter_range() {
        let c = fit_closed_spline(&circle_markers(Point2::new(0.5, 0.5), 0.23, 80)).unwrap();
        let n = 16;
        let h = 1.0 / n as f64;
        let mut segs = Vec::new();
        for j in 0..n {
            for i in 0..n {
                let cell = CellRect {
                    x0: i as f64 * h,
                    y0: j as f64 * h,
                    h,
                };
                segs.extend(c.intersect_cell(&cell));
            }
        }
        let total: f64 = segs.iter().map(|s| s.t1 - s.t0).sum();
        assert!(
            (total - c.param_len()).abs() < 1e-8 * c.param_len(),
            "tiling defect: {total} vs {}",
            c.param_len()
        );
    }

    #[test]
    fn resample_uniform_circle() {
        let c = fit_closed_spline(&circle_markers(Point2::new(0.0, 0.0), 1.0, 64)).unwrap();
        let total = c.arc_length();
        let ms = resample(&c, total / 8.0);
        assert_eq!(ms.len(), 8);
        // equal arc gaps
        for w in 0..8 {
            let d = ms.points[w].dist(ms.points[(w + 1) % 8]);
            let expected = 2.0 * (PI / 8.0).sin(); // chord of 1/8 circle
            assert!((d - expected).abs() < 1e-5, "gap {d} vs {expected}");
        }
        // first marker retained
        assert!(ms.points[0].dist(c.eval(0.0)) < 1e-12);
    }

    #[test]
    fn resample_idempotent() {
        let c = fit_closed_spline(&circle_markers(Point2::new(0.2, 0.1), 0.5, 40)).unwrap();
        let eta = c.arc_length() / 32.0;
        let m1 = resample(&c, eta);
        let c1 = fit_closed_spline(&m1).unwrap();
        let m2 = resample(&c1, eta);
        assert_eq!(m1.len(), m2.len());
        for (a, b) in m1.points.iter().zip(&m2.points) {
            assert!(a.dist(*b) < 1e-7, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn ellipse_resample_within_band() {
        // ellipse a=0.56, b=0.5; eta = h = 1/16
        let n = 200;
        let pts: Vec<Point2> = (0..n)
            .map(|i| {
                let a = 2.0 * PI * i as f64 / n as f64;
                Point2::new(0.56 * a.cos(), 0.5 * a.sin())
            })
            .collect();
        let c = fit_closed_spline(&MarkerSet::new(pts, 0.02)).unwrap();
        let eta = 1.0 / 16.0;
        let ms = resample(&c, eta);
        let m = ms.len();
        for j in 0..m {
            let d = ms.points[j].dist(ms.points[(j + 1) % m]);
            assert!(d > 0.88 * eta && d < 1.12 * eta, "spacing {d} vs eta {eta}");
        }
    }

    #[test]
    fn hausdorff_cases() {
        let a = fit_closed_spline(&circle_markers(Point2::new(0.0, 0.0), 0.5, 64)).unwrap();
        let b = fit_closed_spline(&circle_markers(Point2::new(0.0, 0.0), 0.5, 64)).unwrap();
        assert!(hausdorff_distance_sampled(&a, &b, 2000) < 1e-12);
        let c = fit_closed_spline(&circle_markers(Point2::new(0.0, 0.0), 0.55, 64)).unwrap();
        let d = hausdorff_distance_sampled(&a, &c, 2000);
        assert!((d - 0.05).abs() < 1e-6, "hausdorff {d}");
    }

    #[test]
    fn level_set_two_circles() {
        let ls = LevelSetGeometry {
            phi: Box::new(|x: Point2, t: f64| {
                let c1 = Point2::new(0.5, 0.75 - 0.5 * t);
                let c2 = Point2::new(0.5, 0.25 + 0.5 * t);
                (x.dist(c1)).min(x.dist(c2)) - 0.15
            }),
            band: 256,
            origin: Point2::new(0.0, 0.0),
            side: 1.0,
        };
        // t = 0: two components, radius 0.15
        let comps = extract_contour(&ls, 0.0, 0.02).unwrap();
        assert_eq!(comps.len(), 2);
        for ms in &comps {
            let c = fit_closed_spline(ms).unwrap();
            let area = c.signed_area();
            assert!((area - PI * 0.15 * 0.15).abs() < 1e-4, "area {area}");
            for p in &ms.points {
                let d1 = p.dist(Point2::new(0.5, 0.75));
                let d2 = p.dist(Point2::new(0.5, 0.25));
                assert!((d1.min(d2) - 0.15).abs() < 1e-8);
            }
        }
        // t = 0.5: merged into one circle
        let comps = extract_contour(&ls, 0.5, 0.02).unwrap();
        assert_eq!(comps.len(), 1);
        // single circle markers within 1e-10 of the circle
        for p in &comps[0].points {
            assert!((p.dist(Point2::new(0.5, 0.5)) - 0.15).abs() < 1e-10);
        }
    }

    #[test]
    fn split_at_knots_covers() {
        let c = fit_closed_spline(&circle_markers(Point2::new(0.0, 0.0), 1.0, 12)).unwrap();
        let lens = c.param_len();
        let pieces = c.split_at_knots(0.3, lens * 0.7);
        let total: f64 = pieces.iter().map(|(a, b)| b - a).sum();
        assert!((total - (lens * 0.7 - 0.3)).abs() < 1e-12);
        // wrap-around span
        let pieces = c.split_at_knots(lens * 0.9, lens * 1.2);
        let total: f64 = pieces.iter().map(|(a, b)| b - a).sum();
        assert!((total - lens * 0.3).abs() < 1e-12);
    }
}
