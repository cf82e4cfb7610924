use serde::{Deserialize, Serialize};

use super::{GeometryError, IntervalSet, Point};
use crate::scalar::unit_ball_volume;
use crate::Real;

/// Open ball `B_r(c)` in `R^n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
#[serde(try_from = "RawBall<T>")]
pub struct Ball<T: Real = f64> {
    center: Point<T>,
    radius: T,
}

#[derive(Deserialize)]
struct RawBall<T> {
    center: Vec<T>,
    radius: T,
}

impl<T: Real> TryFrom<RawBall<T>> for Ball<T> {
    type Error = GeometryError;

    fn try_from(raw: RawBall<T>) -> Result<Self, Self::Error> {
        Ball::new(Point::new(&raw.center)?, raw.radius)
    }
}

impl<T: Real> Ball<T> {
    pub fn new(center: Point<T>, radius: T) -> Result<Self, GeometryError> {
        if !(radius > T::zero()) || !radius.is_finite() {
            return Err(GeometryError::InvalidRadius(radius.as_f64()));
        }
        Point::new(center.coords())?;
        Ok(Self { center, radius })
    }

    pub fn unit(dim: usize) -> Self {
        Self {
            center: Point::origin(dim),
            radius: T::one(),
        }
    }

    pub fn center(&self) -> &Point<T> {
        &self.center
    }

    pub fn radius(&self) -> T {
        self.radius
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    pub fn measure(&self) -> T {
        unit_ball_volume::<T>(self.dim()) * self.radius.powi(self.dim() as i32)
    }

    pub fn diameter(&self) -> T {
        self.radius + self.radius
    }

    /// Same center, new radius.
    pub fn with_radius(&self, radius: T) -> Result<Self, GeometryError> {
        Self::new(self.center.clone(), radius)
    }

    /// Signed distance to the sphere (negative inside).
    #[inline]
    pub fn signed_distance(&self, x: &Point<T>) -> T {
        self.center.dist(x) - self.radius
    }

    #[inline]
    pub fn contains_with_tol(&self, x: &Point<T>, eps: T) -> bool {
        self.signed_distance(x) <= eps
    }

    /// `{ t ≥ 0 : origin + t·dir ∈ B }` for a unit direction.
    pub fn ray_intervals(&self, origin: &Point<T>, dir: &Point<T>) -> IntervalSet<T> {
        let oc = origin.sub(&self.center);
        let b = oc.dot(dir);
        let c = oc.norm_sq() - self.radius * self.radius;
        let disc = b * b - c;
        if disc <= T::zero() {
            return IntervalSet::empty();
        }
        let s = disc.sqrt();
        let t0 = -b - s;
        let t1 = -b + s;
        if t1 <= T::zero() {
            return IntervalSet::empty();
        }
        IntervalSet::single(t0.max(T::zero()), t1)
    }

    /// Whether this ball lies inside `other` (up to `eps`).
    pub fn inside_ball(&self, other: &Ball<T>, eps: T) -> bool {
        self.center.dist(&other.center) + self.radius <= other.radius + eps
    }

    /// Exact measure of `self ∩ other` for `n ∈ {1, 2, 3}`.
    pub fn overlap_measure(&self, other: &Ball<T>) -> Option<T> {
        let n = self.dim();
        let d = self.center.dist(&other.center);
        let (r1, r2) = (self.radius, other.radius);
        if d >= r1 + r2 {
            return Some(T::zero());
        }
        let (small, large) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
        if d + small <= large {
            return Some(unit_ball_volume::<T>(n) * small.powi(n as i32));
        }
        let two = T::lit(2.0);
        match n {
            1 => Some(r1 + r2 - d),
            2 => {
                let a1 = ((d * d + r1 * r1 - r2 * r2) / (two * d * r1)).max(-T::one()).min(T::one());
                let a2 = ((d * d + r2 * r2 - r1 * r1) / (two * d * r2)).max(-T::one()).min(T::one());
                let k = (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2);
                Some(
                    r1 * r1 * a1.acos() + r2 * r2 * a2.acos()
                        - T::lit(0.5) * k.max(T::zero()).sqrt(),
                )
            }
            3 => {
                let s = r1 + r2 - d;
                let num = T::PI()
                    * s
                    * s
                    * (d * d + two * d * r2 - T::lit(3.0) * r2 * r2 + two * d * r1
                        + T::lit(6.0) * r1 * r2
                        - T::lit(3.0) * r1 * r1);
                Some(num / (T::lit(12.0) * d))
            }
            _ => None,
        }
    }
}
