use serde::Serialize;

use super::domain::overlap_measure;
use super::slab::{region_measure, Region};
use super::{Domain, GeometryError, StarPiece};
use crate::Real;

/// Ordered star pieces with a common kernel radius, each overlapping the
/// union of its predecessors.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "")]
pub struct Chain<T: Real = f64> {
    pieces: Vec<StarPiece<T>>,
    /// Input index of each piece, in chain order.
    order: Vec<usize>,
    radius: T,
    /// `|D_{i+1} ∩ (D_1 ∪ … ∪ D_i)|` for `i = 1..N−1`.
    overlaps: Vec<T>,
    omega: Domain<T>,
}

impl<T: Real> Chain<T> {
    pub fn pieces(&self) -> &[StarPiece<T>] {
        &self.pieces
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Common kernel radius `R`.
    pub fn radius(&self) -> T {
        self.radius
    }

    pub fn overlaps(&self) -> &[T] {
        &self.overlaps
    }

    /// Smallest prefix overlap; `None` for a single piece.
    pub fn lambda(&self) -> Option<T> {
        self.overlaps.iter().copied().reduce(T::min)
    }

    pub fn omega(&self) -> &Domain<T> {
        &self.omega
    }

    pub fn dim(&self) -> usize {
        self.omega.dim()
    }

    /// Replaces the union domain by an equal one with a better
    /// representation (e.g. the polygon that was decomposed).
    pub fn with_omega(mut self, omega: Domain<T>) -> Result<Self, GeometryError> {
        if omega.dim() != self.omega.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: self.omega.dim(),
                found: omega.dim(),
            });
        }
        self.omega = omega;
        Ok(self)
    }

    /// `|Ω Δ (D_1 ∪ … ∪ D_N)|`.
    pub fn symmetric_difference(&self) -> T {
        let bodies: Vec<Region<'_, T>> = self.pieces.iter().map(|p| Region::Leaf(p.body())).collect();
        let (u, _) = region_measure(&Region::Union(bodies.clone()));
        let (i, _) = region_measure(&Region::Intersection(vec![
            Region::Leaf(&self.omega),
            Region::Union(bodies),
        ]));
        (self.omega.measure() + u - i - i).max(T::zero())
    }
}

/// Greedy chain ordering: start from the first piece and repeatedly append
/// the remaining piece with the largest overlap with the current union.
pub fn order_chain<T: Real>(pieces: Vec<StarPiece<T>>) -> Result<Chain<T>, GeometryError> {
    if pieces.is_empty() {
        return Err(GeometryError::EmptyUnion);
    }
    let radii: Vec<T> = pieces.iter().map(|p| p.kernel().radius()).collect();
    let rmin = radii.iter().copied().fold(T::infinity(), T::min);
    let rmax = radii.iter().copied().fold(T::neg_infinity(), T::max);
    if rmax - rmin > rmax * T::lit(1e-12) {
        return Err(GeometryError::UnequalKernelRadii {
            min: rmin.as_f64(),
            max: rmax.as_f64(),
        });
    }
    let n = pieces.len();
    let mut order = vec![0usize];
    let mut overlaps = Vec::with_capacity(n.saturating_sub(1));
    let mut remaining: Vec<usize> = (1..n).collect();
    while !remaining.is_empty() {
        let mut best: Option<(usize, T)> = None;
        for (slot, &j) in remaining.iter().enumerate() {
            let prefix: Vec<Region<'_, T>> = order.iter().map(|&i| Region::Leaf(pieces[i].body())).collect();
            let v = if prefix.len() == 1 {
                overlap_measure(pieces[order[0]].body(), pieces[j].body())?.0
            } else {
                region_measure(&Region::Intersection(vec![
                    Region::Leaf(pieces[j].body()),
                    Region::Union(prefix),
                ]))
                .0
            };
            if v > T::zero() && best.map_or(true, |(_, b)| v > b) {
                best = Some((slot, v));
            }
        }
        let (slot, v) = best.ok_or(GeometryError::DisconnectedUnion)?;
        order.push(remaining.remove(slot));
        overlaps.push(v);
    }
    let mut slots: Vec<Option<StarPiece<T>>> = pieces.into_iter().map(Some).collect();
    let ordered: Vec<StarPiece<T>> = order.iter().map(|&i| slots[i].take().expect("each index once")).collect();
    let omega = if ordered.len() == 1 {
        ordered[0].body().clone()
    } else {
        Domain::union(ordered.clone())?
    };
    Ok(Chain {
        pieces: ordered,
        order,
        radius: rmin,
        overlaps,
        omega,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Ball, Point};

    fn piece(x: f64) -> StarPiece<f64> {
        let body = Domain::ball(Ball::new(Point::xy(x, 0.0), 1.0).unwrap());
        StarPiece::uncertified(body, Ball::new(Point::xy(x, 0.0), 0.5).unwrap()).unwrap()
    }

    #[test]
    fn keeps_a_valid_order() {
        let c = order_chain(vec![piece(0.0), piece(1.5), piece(3.0)]).unwrap();
        assert_eq!(c.order(), &[0, 1, 2]);
        assert!(c.lambda().unwrap() > 0.0);
    }

    #[test]
    fn reorders_row_of_disks() {
        let c = order_chain(vec![piece(0.0), piece(3.0), piece(1.5)]).unwrap();
        assert_eq!(c.order(), &[0, 2, 1]);
        for w in 1..c.len() {
            assert!(c.overlaps()[w - 1] > 0.0);
        }
    }

    #[test]
    fn disjoint_disks_fail() {
        assert_eq!(
            order_chain(vec![piece(0.0), piece(3.0)]).unwrap_err(),
            GeometryError::DisconnectedUnion
        );
    }

    #[test]
    fn single_piece_has_no_lambda() {
        let c = order_chain(vec![piece(0.0)]).unwrap();
        assert_eq!(c.lambda(), None);
        assert_eq!(c.radius(), 0.5);
    }
}
