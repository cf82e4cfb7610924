use serde::{Deserialize, Serialize};

use super::FunctionError;
use crate::geometry::{Ball, Domain, Polygon, Shape};
use crate::Real;

/// Where a piecewise-constant exponent takes a given value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "", tag = "type", rename_all = "snake_case")]
pub enum Region<T: Real> {
    /// `{ x : normal · x < offset }`
    HalfSpace { normal: Vec<T>, offset: T },
    Ball { ball: Ball<T> },
    Polygon { polygon: Polygon<T> },
}

impl<T: Real> Region<T> {
    pub fn contains(&self, x: &[T]) -> bool {
        match self {
            Region::HalfSpace { normal, offset } => dot(normal, x) < *offset,
            Region::Ball { ball } => {
                let d2 = x
                    .iter()
                    .zip(ball.center().coords())
                    .fold(T::zero(), |a, (&p, &c)| a + (p - c) * (p - c));
                d2 < ball.radius() * ball.radius()
            }
            Region::Polygon { polygon } => polygon.contains_strict([x[0], x[1]]),
        }
    }

    /// Conservative: may report `true` for a region that only touches `d`.
    fn meets(&self, d: &Domain<T>) -> bool {
        d.leaves().iter().any(|leaf| match (self, leaf.shape()) {
            (Region::HalfSpace { normal, offset }, _) => support_min(leaf, normal) < *offset,
            (Region::Ball { ball }, Shape::Ball(b)) => ball.center().dist(b.center()) < ball.radius() + b.radius(),
            (Region::Ball { ball }, Shape::Polygon(p)) => {
                let c = ball.center().to_xy();
                p.contains_strict(c) || p.distance_to_boundary(c) < ball.radius()
            }
            (Region::Polygon { polygon }, Shape::Ball(b)) => {
                let c = b.center().to_xy();
                polygon.contains_strict(c) || polygon.distance_to_boundary(c) < b.radius()
            }
            (Region::Polygon { polygon }, Shape::Polygon(p)) => {
                // bounding boxes are a valid over-approximation here
                let (a0, a1) = polygon.bounding_box();
                let (b0, b1) = p.bounding_box();
                a0[0] < b1[0] && b0[0] < a1[0] && a0[1] < b1[1] && b0[1] < a1[1]
            }
            (_, Shape::Union(_)) => true,
        })
    }

    /// Whether `d` lies entirely inside the region.
    fn covers(&self, d: &Domain<T>) -> bool {
        d.leaves().iter().all(|leaf| match (self, leaf.shape()) {
            (Region::HalfSpace { normal, offset }, _) => {
                let neg: Vec<T> = normal.iter().map(|&v| -v).collect();
                -support_min(leaf, &neg) < *offset
            }
            (Region::Ball { ball }, Shape::Ball(b)) => b.inside_ball(ball, T::zero()),
            (Region::Ball { ball }, Shape::Polygon(p)) => p
                .vertices()
                .iter()
                .all(|v| crate::geometry::Point::xy(v[0], v[1]).dist(ball.center()) < ball.radius()),
            (Region::Polygon { polygon }, Shape::Polygon(p)) => {
                polygon.is_convex() && p.vertices().iter().all(|&v| polygon.contains_strict(v))
            }
            _ => false,
        })
    }

    fn validate(&self, dim: Option<usize>) -> Result<(), FunctionError> {
        if let Region::HalfSpace { normal, offset } = self {
            if normal.iter().all(|v| *v == T::zero()) || !offset.is_finite() {
                return Err(FunctionError::InvalidRegion);
            }
            if let Some(n) = dim {
                if normal.len() != n {
                    return Err(FunctionError::InvalidRegion);
                }
            }
        }
        Ok(())
    }
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

/// `inf { n · x : x ∈ leaf }`.
fn support_min<T: Real>(leaf: &Domain<T>, n: &[T]) -> T {
    match leaf.shape() {
        Shape::Ball(b) => dot(n, b.center().coords()) - b.radius() * dot(n, n).sqrt(),
        Shape::Polygon(p) => p
            .vertices()
            .iter()
            .map(|v| dot(n, v))
            .fold(T::infinity(), T::min),
        Shape::Union(_) => unreachable!("leaves are never unions"),
    }
}

/// A bounded measurable exponent `p ≥ 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "", tag = "type", rename_all = "snake_case")]
pub enum VariableExponent<T: Real = f64> {
    Constant {
        p: T,
    },
    /// `p(x) = 𝗉(|x − center|)` with `𝗉` piecewise linear through `knots`
    /// (first knot at radius 0) and extended linearly past the last knot.
    RadialIncreasing {
        center: Vec<T>,
        knots: Vec<(T, T)>,
    },
    /// First matching region wins, otherwise `default`.
    PiecewiseConstant {
        regions: Vec<(Region<T>, T)>,
        default: T,
    },
}

impl<T: Real> VariableExponent<T> {
    pub fn constant(p: T) -> Result<Self, FunctionError> {
        let e = VariableExponent::Constant { p };
        e.validate()?;
        Ok(e)
    }

    /// `𝗉(r) = a + b·r` about `center`.
    pub fn radial_affine(center: &[T], a: T, b: T) -> Result<Self, FunctionError> {
        let e = VariableExponent::RadialIncreasing {
            center: center.to_vec(),
            knots: vec![(T::zero(), a), (T::one(), a + b)],
        };
        e.validate()?;
        Ok(e)
    }

    pub fn validate(&self) -> Result<(), FunctionError> {
        let at_least_one = |p: T| {
            if p >= T::one() && p.is_finite() {
                Ok(())
            } else {
                Err(FunctionError::ExponentBelowOne(p.as_f64()))
            }
        };
        match self {
            VariableExponent::Constant { p } => at_least_one(*p),
            VariableExponent::RadialIncreasing { center, knots } => {
                if center.is_empty() || knots.len() < 2 || knots[0].0 != T::zero() {
                    return Err(FunctionError::InvalidProfile);
                }
                for w in knots.windows(2) {
                    if !(w[1].0 > w[0].0 && w[1].1 > w[0].1) {
                        return Err(FunctionError::InvalidProfile);
                    }
                }
                at_least_one(knots[0].1)
            }
            VariableExponent::PiecewiseConstant { regions, default } => {
                at_least_one(*default)?;
                for (r, p) in regions {
                    r.validate(None)?;
                    at_least_one(*p)?;
                }
                Ok(())
            }
        }
    }

    /// Profile value `𝗉(r)` of a radial exponent.
    pub fn profile(knots: &[(T, T)], r: T) -> T {
        let k = knots.len();
        let seg = knots.windows(2).position(|w| r <= w[1].0).unwrap_or(k - 2);
        let (r0, p0) = knots[seg];
        let (r1, p1) = knots[seg + 1];
        p0 + (p1 - p0) * (r - r0) / (r1 - r0)
    }

    pub fn eval(&self, x: &[T]) -> T {
        match self {
            VariableExponent::Constant { p } => *p,
            VariableExponent::RadialIncreasing { center, knots } => {
                let r = x
                    .iter()
                    .zip(center)
                    .fold(T::zero(), |a, (&p, &c)| a + (p - c) * (p - c))
                    .sqrt();
                Self::profile(knots, r)
            }
            VariableExponent::PiecewiseConstant { regions, default } => regions
                .iter()
                .find(|(r, _)| r.contains(x))
                .map(|(_, p)| *p)
                .unwrap_or(*default),
        }
    }

    /// Supremum of `p` over `d`.
    pub fn p_plus(&self, d: &Domain<T>) -> T {
        match self {
            VariableExponent::Constant { p } => *p,
            VariableExponent::RadialIncreasing { center, knots } => Self::profile(knots, d.max_distance_from(center)),
            VariableExponent::PiecewiseConstant { regions, default } => {
                let mut best = T::neg_infinity();
                let mut covered = false;
                for (r, p) in regions {
                    if r.meets(d) {
                        best = best.max(*p);
                    }
                    if r.covers(d) {
                        covered = true;
                        break;
                    }
                }
                if !covered {
                    best = best.max(*default);
                }
                best
            }
        }
    }

    /// Extra break lines for quadrature: abscissae where `p` jumps along a
    /// vertical line.
    pub(crate) fn vertical_jumps(&self) -> Vec<T> {
        match self {
            VariableExponent::PiecewiseConstant { regions, .. } => regions
                .iter()
                .filter_map(|(r, _)| match r {
                    Region::HalfSpace { normal, offset } if normal.len() == 2 && normal[1] == T::zero() => {
                        Some(*offset / normal[0])
                    }
                    _ => None,
                })
                .collect(),
            _ => Vec::new(),
        }
    }

    /// Spheres where a radial profile has a kink.
    pub(crate) fn feature_spheres(&self) -> Vec<(Vec<T>, T)> {
        match self {
            VariableExponent::RadialIncreasing { center, knots } if knots.len() > 2 => knots[1..knots.len() - 1]
                .iter()
                .map(|&(r, _)| (center.clone(), r))
                .collect(),
            _ => Vec::new(),
        }
    }

    pub fn is_constant(&self) -> Option<T> {
        match self {
            VariableExponent::Constant { p } => Some(*p),
            _ => None,
        }
    }
}
