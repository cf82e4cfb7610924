//! Uniform sampling of domains and directions from unit-cube coordinates.
//!
//! Every sampler consumes `[0, 1)` coordinates, so plain and stratified Monte
//! Carlo share the same maps. Random streams are split per chunk of outer
//! samples, which keeps results independent of the thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::P3;
use crate::geometry::{Domain, Shape};
use crate::Real;

pub(crate) const CHUNK: usize = 64;
pub(crate) const REPLICATES: usize = 8;

/// Sub-seed for an independent purpose (outer points, inner rays, ...).
pub(crate) fn sub_seed(seed: u64, purpose: u64) -> u64 {
    // splitmix64 finaliser
    let mut z = seed ^ purpose.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub(crate) fn chunk_rng(seed: u64, chunk: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    rng
}

pub(crate) fn uniforms<R: Rng>(rng: &mut R, out: &mut [f64]) {
    for u in out {
        *u = rng.gen::<f64>();
    }
}

enum Kind<T: Real> {
    Ball { center: P3<T>, radius: T, n: usize },
    Triangles { tris: Vec<[[T; 2]; 3]>, cdf: Vec<f64> },
    Union { members: Vec<Sampler<T>>, cdf: Vec<f64> },
}

/// Maps unit-cube points to points of a domain together with the weight
/// that makes `weight · g(x)` an unbiased estimate of `∫ g`.
pub(crate) struct Sampler<T: Real> {
    kind: Kind<T>,
    total: T,
}

fn pick(cdf: &[f64], u: f64) -> (usize, f64) {
    let k = cdf.partition_point(|&c| c <= u).min(cdf.len() - 1);
    let lo = if k == 0 { 0.0 } else { cdf[k - 1] };
    let width = cdf[k] - lo;
    let t = if width > 0.0 { ((u - lo) / width).clamp(0.0, 1.0 - f64::EPSILON) } else { 0.5 };
    (k, t)
}

fn normalised_cdf(weights: &[f64]) -> Vec<f64> {
    let total: f64 = weights.iter().sum();
    let mut acc = 0.0;
    let mut cdf: Vec<f64> = weights
        .iter()
        .map(|w| {
            acc += w;
            acc / total
        })
        .collect();
    if let Some(last) = cdf.last_mut() {
        *last = 1.0;
    }
    cdf
}

impl<T: Real> Sampler<T> {
    pub(crate) fn new(d: &Domain<T>) -> Self {
        match d.shape() {
            Shape::Ball(b) => {
                let mut center = [T::zero(); 3];
                center[..b.dim()].copy_from_slice(b.center().coords());
                Sampler {
                    kind: Kind::Ball {
                        center,
                        radius: b.radius(),
                        n: b.dim(),
                    },
                    total: b.measure(),
                }
            }
            Shape::Polygon(p) => {
                let v = p.vertices();
                let tris: Vec<[[T; 2]; 3]> = p.triangulate().iter().map(|t| [v[t[0]], v[t[1]], v[t[2]]]).collect();
                let areas: Vec<f64> = tris
                    .iter()
                    .map(|t| crate::geometry::cross(t[0], t[1], t[2]).abs().as_f64())
                    .collect();
                Sampler {
                    kind: Kind::Triangles {
                        cdf: normalised_cdf(&areas),
                        tris,
                    },
                    total: p.area(),
                }
            }
            Shape::Union(pieces) => {
                let members: Vec<Sampler<T>> = pieces.iter().map(|pc| Sampler::new(pc.body())).collect();
                let weights: Vec<f64> = members.iter().map(|m| m.total.as_f64()).collect();
                let total = members.iter().map(|m| m.total).sum();
                Sampler {
                    kind: Kind::Union {
                        cdf: normalised_cdf(&weights),
                        members,
                    },
                    total,
                }
            }
        }
    }

    /// Number of unit-cube coordinates consumed per sample.
    pub(crate) fn dims(&self) -> usize {
        match &self.kind {
            Kind::Ball { n, .. } => *n,
            Kind::Triangles { .. } => 2,
            Kind::Union { members, .. } => members.iter().map(|m| m.dims()).max().unwrap_or(1),
        }
    }

    /// Point and weight for unit-cube coordinates `u` (length ≥ `dims()`);
    /// the first coordinate is reused after selecting a member or triangle,
    /// so stratifying it stratifies the whole map.
    pub(crate) fn sample(&self, d: &Domain<T>, u: &[f64]) -> (P3<T>, T) {
        match &self.kind {
            Kind::Ball { center, radius, n } => (ball_point(center, *radius, *n, u), self.total),
            Kind::Triangles { tris, cdf } => {
                let (k, t) = pick(cdf, u[0]);
                let [a, b, c] = tris[k];
                let s = T::lit(t.sqrt());
                let v = T::lit(u[1]);
                let one = T::one();
                let p = [
                    (one - s) * a[0] + s * (one - v) * b[0] + s * v * c[0],
                    (one - s) * a[1] + s * (one - v) * b[1] + s * v * c[1],
                    T::zero(),
                ];
                (p, self.total)
            }
            Kind::Union { members, cdf } => {
                let (k, t) = pick(cdf, u[0]);
                let mut v = [0.0; 3];
                v[..u.len().min(3)].copy_from_slice(&u[..u.len().min(3)]);
                v[0] = t;
                let (x, _) = members[k].sample(d, &v);
                let m = d.multiplicity(&x[..d.dim()]);
                (x, self.total / T::count(m))
            }
        }
    }
}

fn ball_point<T: Real>(center: &P3<T>, radius: T, n: usize, u: &[f64]) -> P3<T> {
    let mut p = *center;
    match n {
        1 => p[0] += radius * T::lit(2.0 * u[0] - 1.0),
        2 => {
            let r = radius * T::lit(u[0].sqrt());
            let th = T::lit(std::f64::consts::TAU * u[1]);
            p[0] += r * th.cos();
            p[1] += r * th.sin();
        }
        _ => {
            let r = radius * T::lit(u[0].cbrt());
            let dir = direction::<T>(3, &u[1..]);
            for k in 0..3 {
                p[k] += r * dir[k];
            }
        }
    }
    p
}

/// Uniform direction on `S^{n−1}` from `n − 1` coordinates (one for `n = 1`).
pub(crate) fn direction<T: Real>(n: usize, u: &[f64]) -> P3<T> {
    match n {
        1 => [if u[0] < 0.5 { -T::one() } else { T::one() }, T::zero(), T::zero()],
        2 => {
            let th = T::lit(std::f64::consts::TAU * u[0]);
            [th.cos(), th.sin(), T::zero()]
        }
        _ => {
            let mu = T::lit(2.0 * u[0] - 1.0);
            let phi = T::lit(std::f64::consts::TAU * u[1]);
            let s = (T::one() - mu * mu).max(T::zero()).sqrt();
            [s * phi.cos(), s * phi.sin(), mu]
        }
    }
}

pub(crate) fn direction_dims(n: usize) -> usize {
    n.saturating_sub(1).max(1)
}
