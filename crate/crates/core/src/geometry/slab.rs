//! Set algebra on domains through cross-sections.
//!
//! In the plane every region built from balls and polygons by unions and
//! intersections is integrated slab by slab: between consecutive critical
//! abscissae (vertices, circle extremes, pairwise boundary intersections)
//! the cross-section is a fixed number of intervals whose endpoints move
//! smoothly, so Gauss–Legendre in `x` converges spectrally. The substitution
//! `x = m − h·cos t` absorbs the square-root behaviour at circle extremes.
//! Lines are exact; 3-D regions fall back to seeded Monte Carlo.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Domain, IntervalSet, Shape};
use crate::quadrature::gauss_legendre;
use crate::Real;

/// Boolean combination of domains.
#[derive(Clone, Debug)]
pub enum Region<'a, T: Real> {
    Leaf(&'a Domain<T>),
    Union(Vec<Region<'a, T>>),
    Intersection(Vec<Region<'a, T>>),
}

impl<'a, T: Real> Region<'a, T> {
    pub fn leaves(&self) -> Vec<&'a Domain<T>> {
        match self {
            Region::Leaf(d) => d.leaves(),
            Region::Union(rs) | Region::Intersection(rs) => rs.iter().flat_map(|r| r.leaves()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.leaves().first().map(|d| d.dim()).unwrap_or(0)
    }

    /// Vertical cross-section `{ y : (x, y) ∈ region }` (plane only).
    pub fn cross_section(&self, x: T) -> IntervalSet<T> {
        match self {
            Region::Leaf(d) => leaf_section(d, x),
            Region::Union(rs) => rs
                .iter()
                .fold(IntervalSet::empty(), |acc, r| acc.union(&r.cross_section(x))),
            Region::Intersection(rs) => {
                let mut it = rs.iter();
                let Some(first) = it.next() else {
                    return IntervalSet::empty();
                };
                it.fold(first.cross_section(x), |acc, r| {
                    if acc.is_empty() {
                        acc
                    } else {
                        acc.intersection(&r.cross_section(x))
                    }
                })
            }
        }
    }

    /// The region on the real line (dimension 1 only).
    pub fn line_set(&self) -> IntervalSet<T> {
        match self {
            Region::Leaf(d) => d.leaves().iter().fold(IntervalSet::empty(), |acc, l| match l.shape() {
                Shape::Ball(b) => acc.union(&IntervalSet::single(
                    b.center().x() - b.radius(),
                    b.center().x() + b.radius(),
                )),
                _ => acc,
            }),
            Region::Union(rs) => rs
                .iter()
                .fold(IntervalSet::empty(), |acc, r| acc.union(&r.line_set())),
            Region::Intersection(rs) => {
                let mut it = rs.iter();
                let Some(first) = it.next() else {
                    return IntervalSet::empty();
                };
                it.fold(first.line_set(), |acc, r| acc.intersection(&r.line_set()))
            }
        }
    }

    pub fn contains(&self, x: &[T], eps: T) -> bool {
        match self {
            Region::Leaf(d) => d.contains_slice(x, eps),
            Region::Union(rs) => rs.iter().any(|r| r.contains(x, eps)),
            Region::Intersection(rs) => rs.iter().all(|r| r.contains(x, eps)),
        }
    }

    fn bounding_box(&self) -> (Vec<T>, Vec<T>) {
        let leaves = self.leaves();
        let mut lo = vec![T::infinity(); self.dim()];
        let mut hi = vec![T::neg_infinity(); self.dim()];
        for l in leaves {
            let (a, b) = l.bounding_box();
            for k in 0..lo.len() {
                lo[k] = lo[k].min(a[k]);
                hi[k] = hi[k].max(b[k]);
            }
        }
        (lo, hi)
    }
}

fn leaf_section<T: Real>(d: &Domain<T>, x: T) -> IntervalSet<T> {
    match d.shape() {
        Shape::Ball(b) => {
            let dx = x - b.center().x();
            let h2 = b.radius() * b.radius() - dx * dx;
            if h2 <= T::zero() {
                IntervalSet::empty()
            } else {
                let h = h2.sqrt();
                IntervalSet::single(b.center().y() - h, b.center().y() + h)
            }
        }
        Shape::Polygon(p) => p.cross_section(x),
        Shape::Union(_) => d
            .leaves()
            .iter()
            .fold(IntervalSet::empty(), |acc, l| acc.union(&leaf_section(l, x))),
    }
}

/// Boundary data of planar leaves: corner-like points (vertices and pairwise
/// boundary intersections) and circles.
#[derive(Clone, Debug, Default)]
pub(crate) struct Features<T> {
    pub points: Vec<[T; 2]>,
    pub circles: Vec<([T; 2], T)>,
}

type Seg<T> = ([T; 2], [T; 2]);

fn seg_seg<T: Real>(a: Seg<T>, b: Seg<T>) -> Option<[T; 2]> {
    let r = [a.1[0] - a.0[0], a.1[1] - a.0[1]];
    let s = [b.1[0] - b.0[0], b.1[1] - b.0[1]];
    let den = r[0] * s[1] - r[1] * s[0];
    if den == T::zero() {
        return None;
    }
    let q = [b.0[0] - a.0[0], b.0[1] - a.0[1]];
    let t = (q[0] * s[1] - q[1] * s[0]) / den;
    let u = (q[0] * r[1] - q[1] * r[0]) / den;
    let z = T::zero();
    if t >= z && t <= T::one() && u >= z && u <= T::one() {
        Some([a.0[0] + t * r[0], a.0[1] + t * r[1]])
    } else {
        None
    }
}

fn seg_circle<T: Real>(a: Seg<T>, c: [T; 2], rad: T) -> Vec<[T; 2]> {
    let d = [a.1[0] - a.0[0], a.1[1] - a.0[1]];
    let f = [a.0[0] - c[0], a.0[1] - c[1]];
    let aa = d[0] * d[0] + d[1] * d[1];
    let bb = T::lit(2.0) * (f[0] * d[0] + f[1] * d[1]);
    let cc = f[0] * f[0] + f[1] * f[1] - rad * rad;
    let disc = bb * bb - T::lit(4.0) * aa * cc;
    if disc < T::zero() || aa == T::zero() {
        return Vec::new();
    }
    let s = disc.sqrt();
    [(-bb - s) / (aa + aa), (-bb + s) / (aa + aa)]
        .into_iter()
        .filter(|t| *t >= T::zero() && *t <= T::one())
        .map(|t| [a.0[0] + t * d[0], a.0[1] + t * d[1]])
        .collect()
}

fn circle_circle<T: Real>(c1: [T; 2], r1: T, c2: [T; 2], r2: T) -> Vec<[T; 2]> {
    let dx = c2[0] - c1[0];
    let dy = c2[1] - c1[1];
    let d = (dx * dx + dy * dy).sqrt();
    if d == T::zero() || d > r1 + r2 || d < (r1 - r2).abs() {
        return Vec::new();
    }
    let a = (r1 * r1 - r2 * r2 + d * d) / (d + d);
    let h = (r1 * r1 - a * a).max(T::zero()).sqrt();
    let mx = c1[0] + a * dx / d;
    let my = c1[1] + a * dy / d;
    vec![[mx - h * dy / d, my + h * dx / d], [mx + h * dy / d, my - h * dx / d]]
}

pub(crate) fn boundary_features<T: Real>(leaves: &[&Domain<T>]) -> Features<T> {
    let mut feats = Features::default();
    let mut segs: Vec<Vec<Seg<T>>> = Vec::new();
    let mut circs: Vec<Option<([T; 2], T)>> = Vec::new();
    for l in leaves {
        match l.shape() {
            Shape::Ball(b) => {
                let c = b.center().to_xy();
                feats.circles.push((c, b.radius()));
                segs.push(Vec::new());
                circs.push(Some((c, b.radius())));
            }
            Shape::Polygon(p) => {
                feats.points.extend_from_slice(p.vertices());
                segs.push(p.edges().collect());
                circs.push(None);
            }
            Shape::Union(_) => {}
        }
    }
    for i in 0..segs.len() {
        for j in i + 1..segs.len() {
            for &a in &segs[i] {
                for &b in &segs[j] {
                    feats.points.extend(seg_seg(a, b));
                }
                if let Some((c, r)) = circs[j] {
                    feats.points.extend(seg_circle(a, c, r));
                }
            }
            if let Some((c, r)) = circs[i] {
                for &b in &segs[j] {
                    feats.points.extend(seg_circle(b, c, r));
                }
                if let Some((c2, r2)) = circs[j] {
                    feats.points.extend(circle_circle(c, r, c2, r2));
                }
            }
        }
    }
    feats
}

/// Critical abscissae of a planar region, restricted to its x-extent.
pub(crate) fn slab_breaks<T: Real>(region: &Region<'_, T>, extra: &[T]) -> Vec<T> {
    let leaves = region.leaves();
    let feats = boundary_features(&leaves);
    let (lo, hi) = region.bounding_box();
    let mut xs: Vec<T> = feats.points.iter().map(|p| p[0]).collect();
    for (c, r) in &feats.circles {
        xs.push(c[0] - *r);
        xs.push(c[0] + *r);
    }
    xs.extend_from_slice(extra);
    xs.push(lo[0]);
    xs.push(hi[0]);
    xs.retain(|x| *x >= lo[0] && *x <= hi[0]);
    xs.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let tol = (hi[0] - lo[0]) * T::lit(1e-13);
    xs.dedup_by(|a, b| (*a - *b).abs() <= tol);
    xs
}

/// Planar quadrature nodes for `region`: `nx` Gauss nodes per slab (with the
/// cosine substitution) and `ny` per cross-section interval.
pub(crate) fn slab_rule<T: Real>(region: &Region<'_, T>, nx: usize, ny: usize, extra: &[T]) -> Vec<([T; 2], T)> {
    let xs = slab_breaks(region, extra);
    let gx = gauss_legendre(nx);
    let gy = gauss_legendre(ny);
    let half = T::lit(0.5);
    let mut out = Vec::new();
    for w in xs.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mid = (a + b) * half;
        let hw = (b - a) * half;
        for &(node, weight) in gx.iter() {
            // t ∈ [0, π]
            let t = (T::lit(node) + T::one()) * T::FRAC_PI_2();
            let x = mid - hw * t.cos();
            let wx = T::lit(weight) * T::FRAC_PI_2() * hw * t.sin();
            for &(y0, y1) in region.cross_section(x).parts() {
                let ym = (y0 + y1) * half;
                let yh = (y1 - y0) * half;
                for &(ny_, wy) in gy.iter() {
                    out.push(([x, ym + yh * T::lit(ny_)], wx * yh * T::lit(wy)));
                }
            }
        }
    }
    out
}

fn slab_area<T: Real>(region: &Region<'_, T>, xs: &[T], nx: usize) -> T {
    let gx = gauss_legendre(nx);
    let half = T::lit(0.5);
    let mut total = T::zero();
    for w in xs.windows(2) {
        let mid = (w[0] + w[1]) * half;
        let hw = (w[1] - w[0]) * half;
        for &(node, weight) in gx.iter() {
            let t = (T::lit(node) + T::one()) * T::FRAC_PI_2();
            let x = mid - hw * t.cos();
            total += region.cross_section(x).length() * T::lit(weight) * T::FRAC_PI_2() * hw * t.sin();
        }
    }
    total
}

const MC_MEASURE_SAMPLES: usize = 1 << 18;
const MC_MEASURE_SEED: u64 = 0x9e37_79b9_7f4a_7c15;

/// Measure of a region with an error estimate.
///
/// Exact on the line; slab quadrature in the plane (error = difference to
/// the half-order rule); seeded Monte Carlo over the bounding box in 3-D
/// (error = standard error).
pub fn region_measure<T: Real>(region: &Region<'_, T>) -> (T, T) {
    match region.dim() {
        0 => (T::zero(), T::zero()),
        1 => (region.line_set().length(), T::zero()),
        2 => {
            let xs = slab_breaks(region, &[]);
            let fine = slab_area(region, &xs, 32);
            let coarse = slab_area(region, &xs, 16);
            (fine, (fine - coarse).abs())
        }
        n => {
            let (lo, hi) = region.bounding_box();
            let vol = (0..n).fold(T::one(), |acc, k| acc * (hi[k] - lo[k]));
            let mut rng = ChaCha8Rng::seed_from_u64(MC_MEASURE_SEED);
            let mut x = vec![T::zero(); n];
            let mut hits = 0usize;
            for _ in 0..MC_MEASURE_SAMPLES {
                for k in 0..n {
                    x[k] = lo[k] + (hi[k] - lo[k]) * T::lit(rng.gen::<f64>());
                }
                if region.contains(&x, T::zero()) {
                    hits += 1;
                }
            }
            let m = T::count(MC_MEASURE_SAMPLES);
            let frac = T::count(hits) / m;
            let se = (frac * (T::one() - frac) / m).sqrt();
            (vol * frac, vol * se)
        }
    }
}
