//! Simple polygons in the plane.
//!
//! Besides the usual predicates this module computes the geometric kernel of
//! a polygon (the set of points from which the whole polygon is visible) and
//! the largest ball inside it, which is what certifies star-shapedness with
//! respect to a ball.

use serde::{Deserialize, Serialize};

use super::{Ball, GeometryError, IntervalSet, Point};
use crate::Real;

#[inline]
pub(crate) fn cross<T: Real>(o: [T; 2], a: [T; 2], b: [T; 2]) -> T {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

#[inline]
fn dist_point_segment<T: Real>(p: [T; 2], a: [T; 2], b: [T; 2]) -> T {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > T::zero() {
        (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2)
            .max(T::zero())
            .min(T::one())
    } else {
        T::zero()
    };
    let (qx, qy) = (a[0] + t * dx - p[0], a[1] + t * dy - p[1]);
    (qx * qx + qy * qy).sqrt()
}

/// Closed-segment intersection test (touching counts).
fn segments_touch<T: Real>(a: [T; 2], b: [T; 2], c: [T; 2], d: [T; 2]) -> bool {
    let d1 = cross(c, d, a);
    let d2 = cross(c, d, b);
    let d3 = cross(a, b, c);
    let d4 = cross(a, b, d);
    let z = T::zero();
    if ((d1 > z && d2 < z) || (d1 < z && d2 > z)) && ((d3 > z && d4 < z) || (d3 < z && d4 > z)) {
        return true;
    }
    let on = |p: [T; 2], q: [T; 2], r: [T; 2]| {
        r[0] >= p[0].min(q[0]) && r[0] <= p[0].max(q[0]) && r[1] >= p[1].min(q[1]) && r[1] <= p[1].max(q[1])
    };
    (d1 == z && on(c, d, a)) || (d2 == z && on(c, d, b)) || (d3 == z && on(a, b, c)) || (d4 == z && on(a, b, d))
}

/// Parameter `t` along `a→b` where it meets segment `c→d`, if it does.
fn segment_hit<T: Real>(a: [T; 2], b: [T; 2], c: [T; 2], d: [T; 2], ray: bool) -> Vec<T> {
    let r = [b[0] - a[0], b[1] - a[1]];
    let s = [d[0] - c[0], d[1] - c[1]];
    let denom = r[0] * s[1] - r[1] * s[0];
    let qp = [c[0] - a[0], c[1] - a[1]];
    let rr = r[0] * r[0] + r[1] * r[1];
    let ss = s[0] * s[0] + s[1] * s[1];
    let tiny = T::epsilon() * T::lit(64.0);
    if denom.abs() <= tiny * (rr * ss).sqrt() {
        // parallel; only collinear overlaps matter
        let col = qp[0] * r[1] - qp[1] * r[0];
        if col.abs() > tiny * (rr * (qp[0] * qp[0] + qp[1] * qp[1])).sqrt().max(tiny) {
            return Vec::new();
        }
        let t0 = (qp[0] * r[0] + qp[1] * r[1]) / rr;
        let t1 = ((d[0] - a[0]) * r[0] + (d[1] - a[1]) * r[1]) / rr;
        return [t0, t1]
            .into_iter()
            .filter(|&t| t >= T::zero() && (ray || t <= T::one()))
            .collect();
    }
    let t = (qp[0] * s[1] - qp[1] * s[0]) / denom;
    let u = (qp[0] * r[1] - qp[1] * r[0]) / denom;
    let slack = T::lit(1e-12);
    if u >= -slack && u <= T::one() + slack && t >= T::zero() && (ray || t <= T::one()) {
        vec![t]
    } else {
        Vec::new()
    }
}

/// Counter-clockwise simple polygon.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
#[serde(try_from = "Vec<[T; 2]>", into = "Vec<[T; 2]>")]
pub struct Polygon<T: Real = f64> {
    vertices: Vec<[T; 2]>,
}

impl<T: Real> Polygon<T> {
    /// Validates: at least three finite vertices, no self-intersection, and
    /// positive signed area (counter-clockwise orientation).
    pub fn new(vertices: Vec<[T; 2]>) -> Result<Self, GeometryError> {
        if vertices.len() < 3 {
            return Err(GeometryError::DegeneratePolygon("fewer than 3 vertices"));
        }
        if vertices.iter().flatten().any(|c| !c.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        let poly = Self { vertices };
        if !poly.is_simple() {
            return Err(GeometryError::DegeneratePolygon("self-intersecting boundary"));
        }
        if !(poly.signed_area() > T::zero()) {
            return Err(GeometryError::DegeneratePolygon(
                "non-positive signed area (vertices must be counter-clockwise)",
            ));
        }
        Ok(poly)
    }

    /// Like [`Polygon::new`] but accepts clockwise input.
    pub fn from_any_orientation(mut vertices: Vec<[T; 2]>) -> Result<Self, GeometryError> {
        let probe = Self {
            vertices: vertices.clone(),
        };
        if probe.signed_area() < T::zero() {
            vertices.reverse();
        }
        Self::new(vertices)
    }

    pub(crate) fn new_unchecked(vertices: Vec<[T; 2]>) -> Self {
        Self { vertices }
    }

    /// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
    pub fn rectangle(x0: T, y0: T, x1: T, y1: T) -> Result<Self, GeometryError> {
        Self::new(vec![[x0, y0], [x1, y0], [x1, y1], [x0, y1]])
    }

    pub fn vertices(&self) -> &[[T; 2]] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = ([T; 2], [T; 2])> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn signed_area(&self) -> T {
        let half = T::lit(0.5);
        self.edges()
            .fold(T::zero(), |acc, (a, b)| acc + (a[0] * b[1] - b[0] * a[1]))
            * half
    }

    pub fn area(&self) -> T {
        self.signed_area().abs()
    }

    pub fn diameter(&self) -> T {
        let mut best = T::zero();
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                let d = ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt();
                if d > best {
                    best = d;
                }
            }
        }
        best
    }

    pub fn bounding_box(&self) -> ([T; 2], [T; 2]) {
        let mut lo = self.vertices[0];
        let mut hi = self.vertices[0];
        for v in &self.vertices {
            lo = [lo[0].min(v[0]), lo[1].min(v[1])];
            hi = [hi[0].max(v[0]), hi[1].max(v[1])];
        }
        (lo, hi)
    }

    pub fn centroid(&self) -> [T; 2] {
        let a6 = self.signed_area() * T::lit(6.0);
        let (mut cx, mut cy) = (T::zero(), T::zero());
        for (p, q) in self.edges() {
            let w = p[0] * q[1] - q[0] * p[1];
            cx += (p[0] + q[0]) * w;
            cy += (p[1] + q[1]) * w;
        }
        [cx / a6, cy / a6]
    }

    fn is_simple(&self) -> bool {
        let n = self.vertices.len();
        for i in 0..n {
            let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
            if a == b {
                return false;
            }
            // consecutive edges must not fold back onto each other
            let c = self.vertices[(i + 2) % n];
            if cross(a, b, c) == T::zero() {
                let dot = (b[0] - a[0]) * (c[0] - b[0]) + (b[1] - a[1]) * (c[1] - b[1]);
                if dot < T::zero() {
                    return false;
                }
            }
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (c, d) = (self.vertices[j], self.vertices[(j + 1) % n]);
                if segments_touch(a, b, c, d) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_convex(&self) -> bool {
        let n = self.vertices.len();
        let tol = T::epsilon() * T::lit(16.0) * self.diameter().powi(2);
        (0..n).all(|i| {
            cross(
                self.vertices[i],
                self.vertices[(i + 1) % n],
                self.vertices[(i + 2) % n],
            ) >= -tol
        })
    }

    pub fn distance_to_boundary(&self, p: [T; 2]) -> T {
        self.edges()
            .map(|(a, b)| dist_point_segment(p, a, b))
            .fold(T::infinity(), T::min)
    }

    /// Crossing-number test on the open polygon.
    pub fn contains_strict(&self, p: [T; 2]) -> bool {
        let mut inside = false;
        for (a, b) in self.edges() {
            if (a[1] > p[1]) != (b[1] > p[1]) {
                let xi = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
                if p[0] < xi {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// Interior points, plus anything within `eps` of the boundary.
    pub fn contains_with_tol(&self, p: [T; 2], eps: T) -> bool {
        self.distance_to_boundary(p) <= eps || self.contains_strict(p)
    }

    /// Exact containment test for the closed segment `[a, b]`.
    pub fn segment_inside(&self, a: [T; 2], b: [T; 2], eps: T) -> bool {
        if !self.contains_with_tol(a, eps) || !self.contains_with_tol(b, eps) {
            return false;
        }
        if a == b {
            return true;
        }
        let mut ts = vec![T::zero(), T::one()];
        for (c, d) in self.edges() {
            ts.extend(segment_hit(a, b, c, d, false));
        }
        ts.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
        let half = T::lit(0.5);
        ts.windows(2).all(|w| {
            if w[1] - w[0] <= T::epsilon() {
                return true;
            }
            let t = (w[0] + w[1]) * half;
            let m = [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
            self.contains_with_tol(m, eps)
        })
    }

    /// `{ t ≥ 0 : origin + t·dir ∈ P }`.
    pub fn ray_intervals(&self, origin: [T; 2], dir: [T; 2]) -> IntervalSet<T> {
        let far = [origin[0] + dir[0], origin[1] + dir[1]];
        let mut ts = vec![T::zero()];
        for (c, d) in self.edges() {
            ts.extend(segment_hit(origin, far, c, d, true));
        }
        ts.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
        ts.dedup();
        let half = T::lit(0.5);
        let mut raw = Vec::new();
        for w in ts.windows(2) {
            let t = (w[0] + w[1]) * half;
            if self.contains_strict([origin[0] + t * dir[0], origin[1] + t * dir[1]]) {
                raw.push((w[0], w[1]));
            }
        }
        IntervalSet::from_unsorted(raw)
    }

    /// Intervals of the vertical cross-section at abscissa `x`.
    pub fn cross_section(&self, x: T) -> IntervalSet<T> {
        let mut ys = Vec::new();
        for (a, b) in self.edges() {
            let (lo, hi) = if a[0] < b[0] { (a, b) } else { (b, a) };
            if lo[0] <= x && x < hi[0] {
                ys.push(lo[1] + (x - lo[0]) * (hi[1] - lo[1]) / (hi[0] - lo[0]));
            }
        }
        ys.sort_by(|p, q| p.partial_cmp(q).expect("finite"));
        IntervalSet::from_unsorted(ys.chunks_exact(2).map(|c| (c[0], c[1])).collect())
    }

    /// Inward unit normals and offsets: the inner half-plane of edge `i` is
    /// `{ x : n_i · x ≥ c_i }`.
    pub fn half_planes(&self) -> Vec<([T; 2], T)> {
        self.edges()
            .filter_map(|(a, b)| {
                let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
                let len = (dx * dx + dy * dy).sqrt();
                if len == T::zero() {
                    return None;
                }
                let n = [-dy / len, dx / len];
                Some((n, n[0] * a[0] + n[1] * a[1]))
            })
            .collect()
    }

    /// Whether the whole ball sees the whole polygon, i.e. the ball lies in
    /// the geometric kernel. `eps` is an absolute slack.
    pub fn ball_in_kernel(&self, ball: &Ball<T>, eps: T) -> bool {
        let c = ball.center().to_xy();
        self.half_planes()
            .iter()
            .all(|(n, off)| n[0] * c[0] + n[1] * c[1] - *off >= ball.radius() - eps)
    }

    pub fn contains_ball(&self, ball: &Ball<T>, eps: T) -> bool {
        let c = ball.center().to_xy();
        self.contains_strict(c) && self.distance_to_boundary(c) >= ball.radius() - eps
    }

    /// Geometric kernel as a convex polygon (vertex list, CCW), or `None`
    /// when it has empty interior.
    pub fn kernel(&self) -> Option<Vec<[T; 2]>> {
        let (lo, hi) = self.bounding_box();
        let mut region = vec![[lo[0], lo[1]], [hi[0], lo[1]], [hi[0], hi[1]], [lo[0], hi[1]]];
        // Edges at convex vertices never cut the kernel, but clipping by all
        // of them is harmless and keeps the routine uniform.
        for (n, off) in self.half_planes() {
            region = clip_half_plane(&region, n, off);
            if region.len() < 3 {
                return None;
            }
        }
        // clipping leaves near-duplicate vertices whose edge normals are noise
        let tiny = self.diameter() * T::lit(1e-10);
        let region = dedup_cyclic(region, tiny);
        if region.len() < 3 {
            return None;
        }
        let area = Self::new_unchecked(region.clone()).signed_area();
        if area <= T::epsilon() * self.area() {
            None
        } else {
            Some(region)
        }
    }

    /// Largest ball inside the geometric kernel (Chebyshev ball).
    pub fn kernel_ball(&self) -> Option<Ball<T>> {
        let kernel = self.kernel()?;
        let (c, r) = chebyshev_ball(&kernel)?;
        Ball::new(Point::xy(c[0], c[1]), r).ok()
    }

    /// Ear-clipping triangulation; returns vertex index triples (CCW).
    pub fn triangulate(&self) -> Vec<[usize; 3]> {
        let mut idx: Vec<usize> = (0..self.vertices.len()).collect();
        let mut tris = Vec::with_capacity(idx.len().saturating_sub(2));
        let v = &self.vertices;
        // rounding in `cross` grows with both the extent and the offset of the coordinates
        let reach = v.iter().fold(T::zero(), |m, p| m.max(p[0].abs()).max(p[1].abs()));
        let scale = self.diameter() * (self.diameter() + reach) * T::epsilon() * T::lit(8.0);
        while idx.len() > 3 {
            let m = idx.len();
            let mut clipped = false;
            for k in 0..m {
                let (ip, ic, inext) = (idx[(k + m - 1) % m], idx[k], idx[(k + 1) % m]);
                let (a, b, c) = (v[ip], v[ic], v[inext]);
                if cross(a, b, c) <= scale {
                    continue;
                }
                let blocked = idx.iter().any(|&j| {
                    if j == ip || j == ic || j == inext {
                        return false;
                    }
                    let p = v[j];
                    cross(a, b, p) >= -scale && cross(b, c, p) >= -scale && cross(c, a, p) >= -scale
                });
                if !blocked {
                    tris.push([ip, ic, inext]);
                    idx.remove(k);
                    clipped = true;
                    break;
                }
            }
            if !clipped {
                // only collinear vertices remain ear candidates; drop one
                let k = (0..m)
                    .find(|&k| {
                        let (ip, ic, inext) = (idx[(k + m - 1) % m], idx[k], idx[(k + 1) % m]);
                        cross(v[ip], v[ic], v[inext]).abs() <= scale
                    })
                    .unwrap_or(0);
                idx.remove(k);
            }
        }
        if idx.len() == 3 && cross(v[idx[0]], v[idx[1]], v[idx[2]]) > scale {
            tris.push([idx[0], idx[1], idx[2]]);
        }
        tris
    }

    /// Applies `f` to every vertex; the image must stay a valid CCW polygon.
    pub fn map_vertices(&self, f: impl Fn([T; 2]) -> [T; 2]) -> Result<Self, GeometryError> {
        Self::new(self.vertices.iter().map(|&p| f(p)).collect())
    }

    /// Drops vertices lying on the segment between their neighbours.
    pub fn without_collinear(&self) -> Self {
        let tol = self.diameter().powi(2) * T::epsilon() * T::lit(64.0);
        let mut verts = self.vertices.clone();
        loop {
            let n = verts.len();
            if n <= 3 {
                break;
            }
            let hit = (0..n).find(|&i| {
                let (a, b, c) = (verts[(i + n - 1) % n], verts[i], verts[(i + 1) % n]);
                cross(a, b, c).abs() <= tol
                    && (b[0] - a[0]) * (c[0] - b[0]) + (b[1] - a[1]) * (c[1] - b[1]) >= T::zero()
            });
            match hit {
                Some(i) => {
                    verts.remove(i);
                }
                None => break,
            }
        }
        Self { vertices: verts }
    }
}

impl<T: Real> TryFrom<Vec<[T; 2]>> for Polygon<T> {
    type Error = GeometryError;

    fn try_from(v: Vec<[T; 2]>) -> Result<Self, Self::Error> {
        Self::new(v)
    }
}

impl<T: Real> From<Polygon<T>> for Vec<[T; 2]> {
    fn from(p: Polygon<T>) -> Self {
        p.vertices
    }
}

fn dedup_cyclic<T: Real>(mut pts: Vec<[T; 2]>, tiny: T) -> Vec<[T; 2]> {
    let close = |a: [T; 2], b: [T; 2]| (a[0] - b[0]).hypot(a[1] - b[1]) <= tiny;
    pts.dedup_by(|a, b| close(*a, *b));
    while pts.len() > 1 && close(pts[0], pts[pts.len() - 1]) {
        pts.pop();
    }
    pts
}

/// Sutherland–Hodgman step: keeps `{ x : n·x ≥ off }`.
pub(crate) fn clip_half_plane<T: Real>(poly: &[[T; 2]], n: [T; 2], off: T) -> Vec<[T; 2]> {
    let mut out = Vec::with_capacity(poly.len() + 1);
    let m = poly.len();
    let val = |p: [T; 2]| n[0] * p[0] + n[1] * p[1] - off;
    for i in 0..m {
        let (p, q) = (poly[i], poly[(i + 1) % m]);
        let (vp, vq) = (val(p), val(q));
        if vp >= T::zero() {
            out.push(p);
        }
        if (vp >= T::zero()) != (vq >= T::zero()) {
            let t = vp / (vp - vq);
            out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
        }
    }
    out
}

/// Chebyshev centre and radius of a convex CCW polygon.
///
/// The optimum of the 3-variable linear program `max r` subject to
/// `n_i·c − r ≥ c_i` sits on a vertex of the feasible polytope, so all
/// triples of tight constraints are enumerated. When the optimum is not
/// unique the optimal vertices are averaged, which keeps the centre in the
/// middle of elongated kernels.
pub fn chebyshev_ball<T: Real>(convex: &[[T; 2]]) -> Option<([T; 2], T)> {
    let planes = Polygon::new_unchecked(convex.to_vec()).half_planes();
    let m = planes.len();
    if m < 3 {
        return None;
    }
    let scale = {
        let p = Polygon::new_unchecked(convex.to_vec());
        p.diameter().max(T::min_positive_value())
    };
    let feas_tol = scale * T::lit(1e-10);
    let mut best_r = T::neg_infinity();
    let mut optimal: Vec<[T; 2]> = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let rows = [planes[i], planes[j], planes[k]];
                let Some((c, r)) = solve_tight(rows) else { continue };
                if r <= T::zero() {
                    continue;
                }
                let feasible = planes
                    .iter()
                    .all(|(n, off)| n[0] * c[0] + n[1] * c[1] - r - *off >= -feas_tol);
                if !feasible {
                    continue;
                }
                if r > best_r + feas_tol {
                    best_r = r;
                    optimal.clear();
                    optimal.push(c);
                } else if (r - best_r).abs() <= feas_tol {
                    optimal.push(c);
                }
            }
        }
    }
    if optimal.is_empty() {
        return None;
    }
    let k = T::count(optimal.len());
    let cx = optimal.iter().map(|c| c[0]).sum::<T>() / k;
    let cy = optimal.iter().map(|c| c[1]).sum::<T>() / k;
    // recompute the radius at the averaged centre (it is optimal up to rounding)
    let r = planes
        .iter()
        .map(|(n, off)| n[0] * cx + n[1] * cy - *off)
        .fold(T::infinity(), T::min);
    Some(([cx, cy], r))
}

/// Solves `n_i·c − r = off_i` for three constraints (Cramer's rule).
fn solve_tight<T: Real>(rows: [([T; 2], T); 3]) -> Option<([T; 2], T)> {
    let a = |i: usize| [rows[i].0[0], rows[i].0[1], -T::one()];
    let (r0, r1, r2) = (a(0), a(1), a(2));
    let det3 = |c0: [T; 3], c1: [T; 3], c2: [T; 3]| {
        c0[0] * (c1[1] * c2[2] - c1[2] * c2[1]) - c0[1] * (c1[0] * c2[2] - c1[2] * c2[0])
            + c0[2] * (c1[0] * c2[1] - c1[1] * c2[0])
    };
    let det = det3(r0, r1, r2);
    if det.abs() < T::lit(1e-12) {
        return None;
    }
    let b = [rows[0].1, rows[1].1, rows[2].1];
    let with_col = |col: usize| {
        let mut m = [r0, r1, r2];
        for (row, bi) in m.iter_mut().zip(b) {
            row[col] = bi;
        }
        det3(m[0], m[1], m[2])
    };
    Some(([with_col(0) / det, with_col(1) / det], with_col(2) / det))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    pub(crate) fn l_shape() -> Polygon<f64> {
        Polygon::new(vec![[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0], [1.0, 2.0], [0.0, 2.0]]).unwrap()
    }

    #[test]
    fn validation() {
        assert!(Polygon::new(vec![[0.0, 0.0], [1.0, 0.0]]).is_err());
        // clockwise
        assert!(Polygon::new(vec![[0.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 0.0]]).is_err());
        assert!(Polygon::from_any_orientation(vec![[0.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 0.0]]).is_ok());
        // bow-tie
        assert!(Polygon::new(vec![[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]]).is_err());
    }

    #[test]
    fn area_diameter() {
        let sq = Polygon::rectangle(0.0, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(sq.area(), 1.0);
        assert_relative_eq!(sq.diameter(), 2f64.sqrt());
        assert_eq!(l_shape().area(), 3.0);
        assert!(sq.is_convex());
        assert!(!l_shape().is_convex());
    }

    #[test]
    fn membership() {
        let sq = Polygon::rectangle(0.0, 0.0, 1.0, 1.0).unwrap();
        assert!(sq.contains_with_tol([0.5, 1.0 - 1e-12], 1e-9));
        assert!(sq.contains_with_tol([0.5, 1.0 + 1e-12], 1e-9));
        assert!(!sq.contains_with_tol([0.5, 1.0 + 1e-6], 1e-9));
        assert!(!sq.contains_with_tol([2.0, 0.5], 1e-9));
    }

    #[test]
    fn segments_in_l_shape() {
        let l = l_shape();
        // opposite arms, segment crosses the notch
        assert!(!l.segment_inside([1.8, 0.8], [0.8, 1.8], 1e-9));
        // both in the corner square
        assert!(l.segment_inside([0.2, 0.2], [0.9, 0.9], 1e-9));
        // grazing the reflex corner exactly stays in the closure
        assert!(l.segment_inside([2.0, 0.0], [0.0, 2.0], 1e-9));
    }

    #[test]
    fn kernel_of_l_is_corner_square() {
        let k = l_shape().kernel().unwrap();
        let kp = Polygon::new_unchecked(k);
        assert_relative_eq!(kp.area(), 1.0, max_relative = 1e-12);
        let b = l_shape().kernel_ball().unwrap();
        assert_relative_eq!(b.radius(), 0.5, max_relative = 1e-12);
        assert_relative_eq!(b.center().x(), 0.5, max_relative = 1e-12);
        assert_relative_eq!(b.center().y(), 0.5, max_relative = 1e-12);
    }

    #[test]
    fn chebyshev_of_rectangle_is_centered() {
        let r = Polygon::rectangle(0.0, 0.0, 2.0, 1.0).unwrap();
        let b = r.kernel_ball().unwrap();
        assert_relative_eq!(b.radius(), 0.5, max_relative = 1e-12);
        assert_relative_eq!(b.center().x(), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn triangulation_covers_area() {
        for p in [l_shape(), Polygon::rectangle(0.0, 0.0, 3.0, 1.0).unwrap()] {
            let tris = p.triangulate();
            assert_eq!(tris.len(), p.len() - 2);
            let v = p.vertices();
            let total: f64 = tris.iter().map(|t| cross(v[t[0]], v[t[1]], v[t[2]]) * 0.5).sum();
            assert_relative_eq!(total, p.area(), max_relative = 1e-12);
        }
    }

    #[test]
    fn cross_sections_and_rays() {
        let l = l_shape();
        assert_eq!(l.cross_section(0.5).parts(), &[(0.0, 2.0)]);
        assert_eq!(l.cross_section(1.5).parts(), &[(0.0, 1.0)]);
        let iv = l.ray_intervals([1.5, 0.5], [-1.0, 0.0]);
        assert_eq!(iv.parts(), &[(0.0, 1.5)]);
        // from the lower arm upwards: leaves at y = 1
        let iv = l.ray_intervals([1.5, 0.5], [0.0, 1.0]);
        assert_eq!(iv.parts(), &[(0.0, 0.5)]);
    }
}
