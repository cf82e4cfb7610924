use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use super::GeometryError;
use crate::Real;

/// A point (or vector) in `R^n`.
///
/// Coordinates are stored inline for `n ≤ 3`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
#[serde(transparent)]
pub struct Point<T: Real = f64> {
    coords: SmallVec<[T; 3]>,
}

impl<T: Real> Point<T> {
    /// Checked constructor: `n ≥ 1` and all coordinates finite.
    pub fn new(coords: &[T]) -> Result<Self, GeometryError> {
        if coords.is_empty() {
            return Err(GeometryError::EmptyPoint);
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        Ok(Self::from_slice(coords))
    }

    /// Unchecked constructor for internal hot paths.
    #[inline]
    pub fn from_slice(coords: &[T]) -> Self {
        Self {
            coords: SmallVec::from_slice(coords),
        }
    }

    #[inline]
    pub fn xy(x: T, y: T) -> Self {
        Self::from_slice(&[x, y])
    }

    pub fn origin(dim: usize) -> Self {
        Self {
            coords: SmallVec::from_elem(T::zero(), dim),
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    #[inline]
    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    #[inline]
    pub fn coords_mut(&mut self) -> &mut [T] {
        &mut self.coords
    }

    #[inline]
    pub fn x(&self) -> T {
        self.coords[0]
    }

    #[inline]
    pub fn y(&self) -> T {
        self.coords[1]
    }

    pub fn to_xy(&self) -> [T; 2] {
        [self.coords[0], self.coords[1]]
    }

    #[inline]
    pub fn dot(&self, other: &Self) -> T {
        self.coords
            .iter()
            .zip(other.coords.iter())
            .fold(T::zero(), |acc, (&a, &b)| acc + a * b)
    }

    #[inline]
    pub fn norm_sq(&self) -> T {
        self.dot(self)
    }

    #[inline]
    pub fn norm(&self) -> T {
        self.norm_sq().sqrt()
    }

    #[inline]
    pub fn sub(&self, other: &Self) -> Self {
        Self {
            coords: self
                .coords
                .iter()
                .zip(other.coords.iter())
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }

    #[inline]
    pub fn add(&self, other: &Self) -> Self {
        Self {
            coords: self
                .coords
                .iter()
                .zip(other.coords.iter())
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    #[inline]
    pub fn scale(&self, t: T) -> Self {
        Self {
            coords: self.coords.iter().map(|&a| a * t).collect(),
        }
    }

    /// `self + t·dir`
    #[inline]
    pub fn add_scaled(&self, dir: &Self, t: T) -> Self {
        Self {
            coords: self
                .coords
                .iter()
                .zip(dir.coords.iter())
                .map(|(&a, &d)| a + t * d)
                .collect(),
        }
    }

    /// Point at parameter `t` on the segment from `self` to `other`.
    #[inline]
    pub fn lerp(&self, other: &Self, t: T) -> Self {
        Self {
            coords: self
                .coords
                .iter()
                .zip(other.coords.iter())
                .map(|(&a, &b)| a + t * (b - a))
                .collect(),
        }
    }

    #[inline]
    pub fn dist(&self, other: &Self) -> T {
        self.coords
            .iter()
            .zip(other.coords.iter())
            .fold(T::zero(), |acc, (&a, &b)| acc + (a - b) * (a - b))
            .sqrt()
    }

    pub fn check_dim(&self, dim: usize) -> Result<(), GeometryError> {
        if self.dim() == dim {
            Ok(())
        } else {
            Err(GeometryError::DimensionMismatch {
                expected: dim,
                found: self.dim(),
            })
        }
    }

    pub fn cast<U: Real>(&self) -> Point<U> {
        Point {
            coords: self.coords.iter().map(|c| U::lit(c.as_f64())).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_points() {
        assert!(Point::<f64>::new(&[]).is_err());
        assert!(Point::new(&[1.0, f64::NAN]).is_err());
        assert!(Point::new(&[1.0, f64::INFINITY]).is_err());
        assert_eq!(Point::new(&[1.0, 2.0, 3.0]).unwrap().dim(), 3);
    }

    #[test]
    fn vector_ops() {
        let a = Point::xy(1.0, 2.0);
        let b = Point::xy(4.0, 6.0);
        assert_eq!(a.dist(&b), 5.0);
        assert_eq!(a.lerp(&b, 0.5), Point::xy(2.5, 4.0));
        assert_eq!(a.add_scaled(&b, 2.0), Point::xy(9.0, 14.0));
        assert_eq!(b.sub(&a).norm(), 5.0);
    }
}
