use serde::Serialize;

use super::slab::{region_measure, Region};
use super::{Ball, GeometryError, IntervalSet, Point, Polygon, StarPiece};
use crate::Real;

/// Relative boundary tolerance: points within `GEO_EPS · diam` of the
/// boundary count as inside.
pub const GEO_EPS: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "")]
#[serde(rename_all = "snake_case")]
pub enum Shape<T: Real> {
    Ball(Ball<T>),
    Polygon(Polygon<T>),
    Union(Vec<StarPiece<T>>),
}

/// A bounded open connected region with cached measure and diameter.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "")]
pub struct Domain<T: Real = f64> {
    shape: Shape<T>,
    dim: usize,
    measure: T,
    measure_error: T,
    diameter: T,
}

impl<T: Real> Domain<T> {
    pub fn ball(b: Ball<T>) -> Self {
        Self {
            dim: b.dim(),
            measure: b.measure(),
            measure_error: T::zero(),
            diameter: b.diameter(),
            shape: Shape::Ball(b),
        }
    }

    pub fn polygon(p: Polygon<T>) -> Self {
        Self {
            dim: 2,
            measure: p.area(),
            measure_error: T::zero(),
            diameter: p.diameter(),
            shape: Shape::Polygon(p),
        }
    }

    /// Union of the bodies of `pieces`. The overlap graph must be connected.
    pub fn union(pieces: Vec<StarPiece<T>>) -> Result<Self, GeometryError> {
        let first = pieces.first().ok_or(GeometryError::EmptyUnion)?;
        let dim = first.body().dim();
        for p in &pieces {
            if matches!(p.body().shape(), Shape::Union(_)) {
                return Err(GeometryError::NestedUnion);
            }
            if p.body().dim() != dim {
                return Err(GeometryError::DimensionMismatch {
                    expected: dim,
                    found: p.body().dim(),
                });
            }
        }
        if !overlap_graph_connected(&pieces.iter().map(|p| p.body()).collect::<Vec<_>>()) {
            return Err(GeometryError::DisconnectedUnion);
        }
        let mut d = Self {
            shape: Shape::Union(pieces),
            dim,
            measure: T::zero(),
            measure_error: T::zero(),
            diameter: T::zero(),
        };
        let (m, e) = region_measure(&Region::Leaf(&d));
        d.measure = m;
        d.measure_error = e;
        d.diameter = hull_diameter(&d.leaves());
        Ok(d)
    }

    pub fn shape(&self) -> &Shape<T> {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn measure(&self) -> T {
        self.measure
    }

    /// Error estimate of [`Domain::measure`]; zero for balls and polygons.
    pub fn measure_error(&self) -> T {
        self.measure_error
    }

    pub fn diameter(&self) -> T {
        self.diameter
    }

    pub fn as_polygon(&self) -> Option<&Polygon<T>> {
        match &self.shape {
            Shape::Polygon(p) => Some(p),
            _ => None,
        }
    }

    pub fn as_ball(&self) -> Option<&Ball<T>> {
        match &self.shape {
            Shape::Ball(b) => Some(b),
            _ => None,
        }
    }

    pub fn pieces(&self) -> Option<&[StarPiece<T>]> {
        match &self.shape {
            Shape::Union(p) => Some(p),
            _ => None,
        }
    }

    /// Balls and polygons making up the domain.
    pub fn leaves(&self) -> Vec<&Domain<T>> {
        match &self.shape {
            Shape::Union(pieces) => pieces.iter().map(|p| p.body()).collect(),
            _ => vec![self],
        }
    }

    pub fn boundary_tolerance(&self) -> T {
        T::lit(GEO_EPS) * self.diameter
    }

    pub fn contains(&self, x: &Point<T>) -> Result<bool, GeometryError> {
        x.check_dim(self.dim)?;
        Ok(self.contains_slice(x.coords(), self.boundary_tolerance()))
    }

    /// Membership without the dimension check.
    pub fn contains_slice(&self, x: &[T], eps: T) -> bool {
        match &self.shape {
            Shape::Ball(b) => {
                let d2 = x
                    .iter()
                    .zip(b.center().coords())
                    .fold(T::zero(), |acc, (&a, &c)| acc + (a - c) * (a - c));
                d2.sqrt() <= b.radius() + eps
            }
            Shape::Polygon(p) => p.contains_with_tol([x[0], x[1]], eps),
            Shape::Union(pieces) => pieces.iter().any(|pc| pc.body().contains_slice(x, eps)),
        }
    }

    /// Number of leaves containing `x` (at least 1 for points of the domain).
    pub(crate) fn multiplicity(&self, x: &[T]) -> usize {
        self.leaves()
            .iter()
            .filter(|l| l.contains_slice(x, T::zero()))
            .count()
            .max(1)
    }

    /// `{ t ≥ 0 : origin + t·dir ∈ Ω }` for a unit direction.
    pub fn ray_intervals(&self, origin: &[T], dir: &[T]) -> IntervalSet<T> {
        match &self.shape {
            Shape::Ball(b) => b.ray_intervals(&Point::from_slice(origin), &Point::from_slice(dir)),
            Shape::Polygon(p) => p.ray_intervals([origin[0], origin[1]], [dir[0], dir[1]]),
            Shape::Union(pieces) => pieces.iter().fold(IntervalSet::empty(), |acc, pc| {
                acc.union(&pc.body().ray_intervals(origin, dir))
            }),
        }
    }

    pub fn bounding_box(&self) -> (Vec<T>, Vec<T>) {
        match &self.shape {
            Shape::Ball(b) => (
                b.center().coords().iter().map(|&c| c - b.radius()).collect(),
                b.center().coords().iter().map(|&c| c + b.radius()).collect(),
            ),
            Shape::Polygon(p) => {
                let (lo, hi) = p.bounding_box();
                (lo.to_vec(), hi.to_vec())
            }
            Shape::Union(pieces) => {
                let mut lo = vec![T::infinity(); self.dim];
                let mut hi = vec![T::neg_infinity(); self.dim];
                for pc in pieces {
                    let (a, b) = pc.body().bounding_box();
                    for k in 0..self.dim {
                        lo[k] = lo[k].min(a[k]);
                        hi[k] = hi[k].max(b[k]);
                    }
                }
                (lo, hi)
            }
        }
    }

    /// Supremum of `|x − c|` over the domain.
    pub fn max_distance_from(&self, c: &[T]) -> T {
        self.leaves()
            .iter()
            .map(|l| match l.shape() {
                Shape::Ball(b) => Point::from_slice(c).dist(b.center()) + b.radius(),
                Shape::Polygon(p) => p
                    .vertices()
                    .iter()
                    .map(|v| ((v[0] - c[0]).powi(2) + (v[1] - c[1]).powi(2)).sqrt())
                    .fold(T::zero(), T::max),
                Shape::Union(_) => unreachable!("leaves are never unions"),
            })
            .fold(T::zero(), T::max)
    }
}

/// Measure of `a ∩ b` with an error estimate; exact for two balls.
pub fn overlap_measure<T: Real>(a: &Domain<T>, b: &Domain<T>) -> Result<(T, T), GeometryError> {
    if a.dim() != b.dim() {
        return Err(GeometryError::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    if let (Shape::Ball(x), Shape::Ball(y)) = (a.shape(), b.shape()) {
        if let Some(v) = x.overlap_measure(y) {
            return Ok((v, T::zero()));
        }
    }
    Ok(region_measure(&Region::Intersection(vec![Region::Leaf(a), Region::Leaf(b)])))
}

fn leaf_pair_diameter<T: Real>(a: &Domain<T>, b: &Domain<T>) -> T {
    match (a.shape(), b.shape()) {
        (Shape::Ball(x), Shape::Ball(y)) => x.center().dist(y.center()) + x.radius() + y.radius(),
        (Shape::Ball(x), Shape::Polygon(p)) | (Shape::Polygon(p), Shape::Ball(x)) => p
            .vertices()
            .iter()
            .map(|v| Point::xy(v[0], v[1]).dist(x.center()) + x.radius())
            .fold(T::zero(), T::max),
        (Shape::Polygon(p), Shape::Polygon(q)) => {
            let mut best = T::zero();
            for u in p.vertices() {
                for v in q.vertices() {
                    best = best.max(((u[0] - v[0]).powi(2) + (u[1] - v[1]).powi(2)).sqrt());
                }
            }
            best
        }
        _ => unreachable!("leaves are never unions"),
    }
}

/// Exact diameter of a union of balls and polygons: the farthest pair of
/// points is realised by two vertices or by vertex/centre pairs pushed out
/// by the radii.
pub fn hull_diameter<T: Real>(leaves: &[&Domain<T>]) -> T {
    let mut best = T::zero();
    for (i, a) in leaves.iter().enumerate() {
        for b in &leaves[i..] {
            best = best.max(leaf_pair_diameter(a, b));
        }
    }
    best
}

fn overlap_graph_connected<T: Real>(bodies: &[&Domain<T>]) -> bool {
    let n = bodies.len();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if !seen[j] {
                let (v, _) = overlap_measure(bodies[i], bodies[j]).unwrap_or((T::zero(), T::zero()));
                if v > T::zero() {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::StarPiece;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn disk_piece(x: f64, y: f64) -> StarPiece<f64> {
        let body = Domain::ball(Ball::new(Point::xy(x, y), 1.0).unwrap());
        StarPiece::uncertified(body, Ball::new(Point::xy(x, y), 0.5).unwrap()).unwrap()
    }

    #[test]
    fn basic_measures() {
        assert_relative_eq!(Domain::ball(Ball::<f64>::unit(2)).measure(), PI);
        let sq = Domain::polygon(Polygon::rectangle(0.0, 0.0, 1.0, 1.0).unwrap());
        assert_eq!(sq.measure(), 1.0);
        assert_relative_eq!(sq.diameter(), 2f64.sqrt());
        assert_eq!(Domain::ball(Ball::new(Point::xy(0.0, 0.0), 1.5).unwrap()).diameter(), 3.0);
    }

    #[test]
    fn membership() {
        let d = Domain::ball(Ball::<f64>::unit(2));
        assert!(d.contains(&Point::xy(0.0, 0.0)).unwrap());
        assert!(!d.contains(&Point::xy(2.0, 0.0)).unwrap());
        assert!(d.contains(&Point::new(&[0.0, 0.0, 0.0]).unwrap()).is_err());
        let sq = Domain::polygon(Polygon::rectangle(0.0, 0.0, 1.0, 1.0).unwrap());
        assert!(sq.contains(&Point::xy(0.5, 1.0 - 1e-12)).unwrap());
    }

    #[test]
    fn union_of_far_disks_is_rejected() {
        let err = Domain::union(vec![disk_piece(0.0, 0.0), disk_piece(3.0, 0.0)]).unwrap_err();
        assert_eq!(err, GeometryError::DisconnectedUnion);
    }

    #[test]
    fn union_measure_and_diameter() {
        let u = Domain::union(vec![disk_piece(0.0, 0.0), disk_piece(1.0, 0.0)]).unwrap();
        let lens = 2.0 * (0.5f64).acos() - 3f64.sqrt() / 2.0;
        assert_relative_eq!(u.measure(), 2.0 * PI - lens, max_relative = 1e-10);
        assert_relative_eq!(u.diameter(), 3.0);
        assert!(u.contains(&Point::xy(1.9, 0.0)).unwrap());
    }
}
