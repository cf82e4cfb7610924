//! Star-shapedness with respect to a ball: every segment from a point of the
//! kernel ball to a point of the body stays in the body.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Ball, Domain, GeometryError, Point, Shape};
use crate::Real;

/// Sample counts used by [`check_starshaped`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarSamples {
    pub kernel: usize,
    pub body: usize,
    pub segment: usize,
    pub seed: u64,
}

impl Default for StarSamples {
    fn default() -> Self {
        Self {
            kernel: 32,
            body: 256,
            segment: 16,
            seed: 0x5747_2a11,
        }
    }
}

/// Evidence that all sampled kernel/body segments stayed inside the body.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kernel_samples: usize,
    pub body_samples: usize,
    pub segment_samples: usize,
    pub pairs_checked: usize,
    pub max_violation: f64,
    /// The polygon half-plane test passed as well (polygon bodies only).
    pub exact_polygon_test: bool,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum StarCheck<T: Real> {
    Certified(Certificate),
    Violation { a: Point<T>, b: Point<T> },
}

impl<T: Real> StarCheck<T> {
    pub fn is_certified(&self) -> bool {
        matches!(self, StarCheck::Certified(_))
    }
}

/// A body together with a kernel ball it is star-shaped with respect to.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "")]
pub struct StarPiece<T: Real = f64> {
    body: Domain<T>,
    kernel: Ball<T>,
    certificate: Option<Certificate>,
}

impl<T: Real> StarPiece<T> {
    /// Runs [`check_starshaped`] and keeps the certificate.
    pub fn certify(body: Domain<T>, kernel: Ball<T>, samples: StarSamples) -> Result<Self, GeometryError> {
        match check_starshaped(&body, &kernel, samples)? {
            StarCheck::Certified(c) => Ok(Self {
                body,
                kernel,
                certificate: Some(c),
            }),
            StarCheck::Violation { .. } => Err(GeometryError::NotStarShaped),
        }
    }

    /// Only checks that the kernel lies in the body.
    pub fn uncertified(body: Domain<T>, kernel: Ball<T>) -> Result<Self, GeometryError> {
        if !kernel_inside(&body, &kernel) {
            return Err(GeometryError::KernelNotContained);
        }
        Ok(Self {
            body,
            kernel,
            certificate: None,
        })
    }

    pub fn body(&self) -> &Domain<T> {
        &self.body
    }

    pub fn kernel(&self) -> &Ball<T> {
        &self.kernel
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        self.certificate.as_ref()
    }

    /// Same centre, smaller radius. The certificate stays valid because the
    /// new kernel is a subset of the old one.
    pub fn shrink_kernel(&mut self, radius: T) -> Result<(), GeometryError> {
        if radius > self.kernel.radius() {
            return Err(GeometryError::InvalidRadius(radius.as_f64()));
        }
        self.kernel = self.kernel.with_radius(radius)?;
        Ok(())
    }
}

fn kernel_inside<T: Real>(body: &Domain<T>, kernel: &Ball<T>) -> bool {
    let eps = body.boundary_tolerance();
    if kernel.dim() != body.dim() {
        return false;
    }
    body.leaves().iter().any(|leaf| match leaf.shape() {
        Shape::Ball(b) => kernel.inside_ball(b, eps),
        Shape::Polygon(p) => p.contains_ball(kernel, eps),
        Shape::Union(_) => false,
    })
}

/// Whether `m` equispaced interior points of `[a, b]` lie in `d`; for
/// polygons the segment is additionally tested exactly against the edges.
pub fn segment_in_domain<T: Real>(d: &Domain<T>, a: &Point<T>, b: &Point<T>, m: usize) -> bool {
    let eps = d.boundary_tolerance();
    if let Shape::Polygon(p) = d.shape() {
        if !p.segment_inside(a.to_xy(), b.to_xy(), eps) {
            return false;
        }
    }
    let step = T::one() / T::count(m + 1);
    (1..=m).all(|k| d.contains_slice(a.lerp(b, step * T::count(k)).coords(), eps))
}

fn sample_in<T: Real>(
    rng: &mut ChaCha8Rng,
    lo: &[T],
    hi: &[T],
    accept: impl Fn(&[T]) -> bool,
) -> Point<T> {
    let mut x = vec![T::zero(); lo.len()];
    loop {
        for k in 0..lo.len() {
            x[k] = lo[k] + (hi[k] - lo[k]) * T::lit(rng.gen::<f64>());
        }
        if accept(&x) {
            return Point::from_slice(&x);
        }
    }
}

/// Checks the segment condition on `samples.kernel × samples.body` random
/// pairs. For polygon bodies the ball is also tested exactly against every
/// edge's inner half-plane; a failure there is turned into an explicit
/// blocked segment.
pub fn check_starshaped<T: Real>(
    body: &Domain<T>,
    kernel: &Ball<T>,
    samples: StarSamples,
) -> Result<StarCheck<T>, GeometryError> {
    kernel.center().check_dim(body.dim())?;
    if !kernel_inside(body, kernel) {
        return Err(GeometryError::KernelNotContained);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(samples.seed);
    let klo: Vec<T> = kernel.center().coords().iter().map(|&c| c - kernel.radius()).collect();
    let khi: Vec<T> = kernel.center().coords().iter().map(|&c| c + kernel.radius()).collect();
    let ks: Vec<Point<T>> = (0..samples.kernel)
        .map(|_| {
            sample_in(&mut rng, &klo, &khi, |x| {
                kernel.signed_distance(&Point::from_slice(x)) < T::zero()
            })
        })
        .collect();
    let (blo, bhi) = body.bounding_box();
    let ds: Vec<Point<T>> = (0..samples.body)
        .map(|_| sample_in(&mut rng, &blo, &bhi, |x| body.contains_slice(x, T::zero())))
        .collect();
    for s in &ks {
        for y in &ds {
            if !segment_in_domain(body, s, y, samples.segment) {
                return Ok(StarCheck::Violation {
                    a: s.clone(),
                    b: y.clone(),
                });
            }
        }
    }
    let mut exact = false;
    if let Shape::Polygon(p) = body.shape() {
        if let Some((a, b)) = half_plane_witness(body, p, kernel) {
            return Ok(StarCheck::Violation { a, b });
        }
        exact = true;
    }
    Ok(StarCheck::Certified(Certificate {
        kernel_samples: samples.kernel,
        body_samples: samples.body,
        segment_samples: samples.segment,
        pairs_checked: samples.kernel * samples.body,
        max_violation: 0.0,
        exact_polygon_test: exact,
        seed: samples.seed,
    }))
}

/// If the ball pokes out of some edge's inner half-plane, returns a kernel
/// point behind that edge and a body point just inside it whose segment
/// crosses the edge.
fn half_plane_witness<T: Real>(
    body: &Domain<T>,
    p: &super::Polygon<T>,
    kernel: &Ball<T>,
) -> Option<(Point<T>, Point<T>)> {
    let c = kernel.center().to_xy();
    let r = kernel.radius();
    let eps = body.boundary_tolerance();
    let edges: Vec<_> = p.edges().collect();
    for ((n, off), (e0, e1)) in p.half_planes().into_iter().zip(edges) {
        let sd = n[0] * c[0] + n[1] * c[1] - off;
        if sd >= r - eps {
            continue;
        }
        let back = r * T::lit(1.0 - 1e-6);
        let s = [c[0] - back * n[0], c[1] - back * n[1]];
        let mut delta = body.diameter() * T::lit(1e-3);
        for _ in 0..30 {
            for frac in [0.5, 0.25, 0.75, 0.1, 0.9] {
                let f = T::lit(frac);
                let q = [e0[0] + f * (e1[0] - e0[0]), e0[1] + f * (e1[1] - e0[1])];
                let y = [q[0] + delta * n[0], q[1] + delta * n[1]];
                if p.contains_strict(y) && !p.segment_inside(s, y, eps) {
                    return Some((Point::xy(s[0], s[1]), Point::xy(y[0], y[1])));
                }
            }
            delta = delta * T::lit(0.5);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Polygon;

    fn l_shape() -> Domain<f64> {
        Domain::polygon(
            Polygon::new(vec![[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0], [1.0, 2.0], [0.0, 2.0]]).unwrap(),
        )
    }

    #[test]
    fn disk_is_starshaped_wrt_inner_ball() {
        let body = Domain::ball(Ball::<f64>::unit(2));
        let k = Ball::new(Point::xy(0.0, 0.0), 0.5).unwrap();
        assert!(check_starshaped(&body, &k, StarSamples::default()).unwrap().is_certified());
    }

    #[test]
    fn l_shape_with_kernel_in_one_arm_fails() {
        let k = Ball::new(Point::xy(1.6, 0.5), 0.3).unwrap();
        match check_starshaped(&l_shape(), &k, StarSamples::default()).unwrap() {
            StarCheck::Violation { a, b } => {
                assert!(!segment_in_domain(&l_shape(), &a, &b, 64));
            }
            StarCheck::Certified(_) => panic!("expected a violation"),
        }
    }

    #[test]
    fn l_shape_with_corner_kernel_passes() {
        let k = Ball::new(Point::xy(0.5, 0.5), 0.45).unwrap();
        let res = check_starshaped(&l_shape(), &k, StarSamples::default()).unwrap();
        assert!(matches!(res, StarCheck::Certified(Certificate { exact_polygon_test: true, .. })));
    }

    #[test]
    fn kernel_outside_body_is_an_error() {
        let k = Ball::new(Point::xy(1.5, 1.5), 0.2).unwrap();
        assert_eq!(
            check_starshaped(&l_shape(), &k, StarSamples::default()).unwrap_err(),
            GeometryError::KernelNotContained
        );
    }

    #[test]
    fn degenerate_segment() {
        let d = Domain::ball(Ball::<f64>::unit(2));
        let a = Point::xy(0.3, 0.3);
        assert!(segment_in_domain(&d, &a, &a, 8));
    }
}
