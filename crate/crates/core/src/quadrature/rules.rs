//! Deterministic Gauss rules: outer rules over a domain and polar / Duffy
//! rules for the weakly singular inner integral.

use super::P3;
use crate::functions::{TestFunction, VariableExponent};
use crate::geometry::{boundary_features, Domain, Features, IntervalSet, Polygon, Region, Shape};
use crate::quadrature::gauss_legendre;
use crate::Real;

/// Loci where integrands lose smoothness: spheres (radial features of `f`
/// or `p`) and vertical lines (jumps of `p`).
#[derive(Clone, Debug, Default)]
pub(crate) struct Hints<T: Real> {
    pub spheres: Vec<(P3<T>, T)>,
    pub x_breaks: Vec<T>,
}

impl<T: Real> Hints<T> {
    pub(crate) fn new(f: Option<&TestFunction<T>>, p: Option<&VariableExponent<T>>) -> Self {
        let mut raw = Vec::new();
        if let Some(f) = f {
            raw.extend(f.feature_spheres());
        }
        let mut x_breaks = Vec::new();
        if let Some(p) = p {
            raw.extend(p.feature_spheres());
            x_breaks = p.vertical_jumps();
        }
        let spheres = raw
            .into_iter()
            .map(|(c, r)| {
                let mut p = [T::zero(); 3];
                for (k, v) in c.into_iter().take(3).enumerate() {
                    p[k] = v;
                }
                (p, r)
            })
            .collect();
        Hints { spheres, x_breaks }
    }
}

/// A domain with the boundary data the rules need, computed once.
pub(crate) struct Prepared<'a, T: Real> {
    pub d: &'a Domain<T>,
    pub n: usize,
    feats: Features<T>,
    pub hints: Hints<T>,
}

impl<'a, T: Real> Prepared<'a, T> {
    pub(crate) fn new(d: &'a Domain<T>, hints: Hints<T>) -> Self {
        let n = d.dim();
        let feats = if n == 2 {
            boundary_features(&d.leaves())
        } else {
            Features::default()
        };
        Prepared { d, n, feats, hints }
    }

    fn polygon(&self) -> Option<&Polygon<T>> {
        self.d.as_polygon()
    }
}

fn gauss_on<T: Real>(a: T, b: T, order: usize, mut f: impl FnMut(T, T)) {
    let half = T::lit(0.5);
    let (m, h) = ((a + b) * half, (b - a) * half);
    for &(t, w) in gauss_legendre(order).iter() {
        f(m + h * T::lit(t), h * T::lit(w));
    }
}

/// Gauss rule in `t ∈ [0, π]` after `s = m − h·cos t`; clusters nodes at both
/// ends and absorbs square-root endpoint behaviour.
fn gauss_cos<T: Real>(a: T, b: T, order: usize, mut f: impl FnMut(T, T)) {
    let half = T::lit(0.5);
    let (m, h) = ((a + b) * half, (b - a) * half);
    for &(t, w) in gauss_legendre(order).iter() {
        let t = (T::lit(t) + T::one()) * T::FRAC_PI_2();
        f(m - h * t.cos(), T::lit(w) * T::FRAC_PI_2() * h * t.sin());
    }
}

fn sorted_breaks<T: Real>(mut xs: Vec<T>, lo: T, hi: T) -> Vec<T> {
    xs.push(lo);
    xs.push(hi);
    xs.retain(|x| *x >= lo && *x <= hi);
    xs.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let tol = (hi - lo).abs() * T::lit(1e-12);
    xs.dedup_by(|a, b| (*a - *b).abs() <= tol);
    xs
}

/// Outer Gauss rule of the given order over the whole domain.
pub(crate) fn outer_rule<T: Real>(prep: &Prepared<'_, T>, order: usize) -> Vec<(P3<T>, T)> {
    let d = prep.d;
    match prep.n {
        1 => {
            let set = Region::Leaf(d).line_set();
            let mut extra = prep.hints.x_breaks.clone();
            for (c, r) in &prep.hints.spheres {
                extra.push(c[0] - *r);
                extra.push(c[0] + *r);
            }
            let mut out = Vec::new();
            for &(a, b) in set.parts() {
                for w in sorted_breaks(extra.clone(), a, b).windows(2) {
                    gauss_on(w[0], w[1], order, |x, wt| out.push(([x, T::zero(), T::zero()], wt)));
                }
            }
            out
        }
        2 => match d.shape() {
            Shape::Ball(b) if !jump_inside(b.center().x(), b.radius(), &prep.hints.x_breaks) => {
                polar_ball_rule(prep, b.center().to_xy(), b.radius(), order)
            }
            _ => {
                let mut extra = prep.hints.x_breaks.clone();
                for (c, r) in &prep.hints.spheres {
                    extra.push(c[0] - *r);
                    extra.push(c[0] + *r);
                }
                crate::geometry::slab_rule(&Region::Leaf(d), order, order, &extra)
                    .into_iter()
                    .map(|(p, w)| ([p[0], p[1], T::zero()], w))
                    .collect()
            }
        },
        _ => {
            let mut out = Vec::new();
            for leaf in d.leaves() {
                let Some(b) = leaf.as_ball() else { continue };
                let mut c = [T::zero(); 3];
                c.copy_from_slice(&b.center().coords()[..3]);
                spherical_rule(c, b.radius(), order, |x, w| {
                    let m = if d.pieces().is_some() { d.multiplicity(&x) } else { 1 };
                    out.push((x, w / T::count(m)));
                });
            }
            out
        }
    }
}

fn jump_inside<T: Real>(cx: T, r: T, jumps: &[T]) -> bool {
    jumps.iter().any(|&x| (x - cx).abs() < r)
}

/// Radial Gauss (split at concentric feature circles) × trapezoid in angle.
fn polar_ball_rule<T: Real>(prep: &Prepared<'_, T>, c: [T; 2], radius: T, order: usize) -> Vec<(P3<T>, T)> {
    let tol = radius * T::lit(1e-12);
    let radii: Vec<T> = prep
        .hints
        .spheres
        .iter()
        .filter(|(s, _)| (s[0] - c[0]).abs() <= tol && (s[1] - c[1]).abs() <= tol)
        .map(|&(_, r)| r)
        .collect();
    let m = 2 * order;
    let dth = T::TAU() / T::count(m);
    let mut out = Vec::with_capacity(m * order);
    for w in sorted_breaks(radii, T::zero(), radius).windows(2) {
        gauss_on(w[0], w[1], order, |r, wr| {
            for k in 0..m {
                let th = dth * (T::count(k) + T::lit(0.5));
                out.push(([c[0] + r * th.cos(), c[1] + r * th.sin(), T::zero()], wr * r * dth));
            }
        });
    }
    out
}

fn spherical_rule<T: Real>(c: P3<T>, radius: T, order: usize, mut f: impl FnMut(P3<T>, T)) {
    let m = 2 * order;
    let dphi = T::TAU() / T::count(m);
    gauss_on(T::zero(), radius, order, |r, wr| {
        gauss_on(-T::one(), T::one(), order, |mu, wm| {
            let s = (T::one() - mu * mu).max(T::zero()).sqrt();
            for k in 0..m {
                let phi = dphi * (T::count(k) + T::lit(0.5));
                let x = [c[0] + r * s * phi.cos(), c[1] + r * s * phi.sin(), c[2] + r * mu];
                f(x, wr * r * r * wm * dphi);
            }
        });
    });
}

/// Parameters `t > 0` where the ray `x + t·dir` crosses a hint sphere.
fn sphere_crossings<T: Real>(spheres: &[(P3<T>, T)], x: &P3<T>, dir: &P3<T>, n: usize, out: &mut Vec<T>) {
    for (c, r) in spheres {
        let oc: Vec<T> = (0..n).map(|k| x[k] - c[k]).collect();
        let b = (0..n).fold(T::zero(), |a, k| a + oc[k] * dir[k]);
        let cc = oc.iter().fold(T::zero(), |a, &v| a + v * v) - *r * *r;
        let disc = b * b - cc;
        if disc > T::zero() {
            let s = disc.sqrt();
            out.extend([-b - s, -b + s].into_iter().filter(|t| *t > T::zero()));
        }
    }
}

/// Line integral of `h` along the ray over `set`, split at `breaks`.
fn ray_integral<T: Real, H: Fn(&[T]) -> T + ?Sized>(
    set: &IntervalSet<T>,
    breaks: &[T],
    x: &P3<T>,
    dir: &P3<T>,
    n: usize,
    order: usize,
    h: &H,
) -> T {
    let mut acc = T::zero();
    for &(a, b) in set.parts() {
        for w in sorted_breaks(breaks.to_vec(), a, b).windows(2) {
            gauss_on(w[0], w[1], order, |t, wt| {
                let mut z = *x;
                for k in 0..n {
                    z[k] += t * dir[k];
                }
                acc += wt * h(&z[..n]);
            });
        }
    }
    acc
}

/// `∫_Ω h(z) |z − x|^{1−n} dz` by a deterministic rule.
pub(crate) fn inner_gauss<T: Real, H: Fn(&[T]) -> T + ?Sized>(
    prep: &Prepared<'_, T>,
    x: &P3<T>,
    order: usize,
    rho: Option<T>,
    duffy: bool,
    h: &H,
) -> T {
    match prep.n {
        1 => {
            let set = Region::Leaf(prep.d).line_set();
            let mut extra = vec![x[0]];
            if let Some(r) = rho {
                extra.extend([x[0] - r, x[0] + r]);
            }
            for (c, r) in &prep.hints.spheres {
                extra.extend([c[0] - *r, c[0] + *r]);
            }
            let mut acc = T::zero();
            for &(a, b) in set.parts() {
                for w in sorted_breaks(extra.clone(), a, b).windows(2) {
                    gauss_on(w[0], w[1], order, |z, wt| acc += wt * h(&[z]));
                }
            }
            acc
        }
        2 => match prep.polygon() {
            Some(poly) if duffy => duffy_fan(poly, x, order, h),
            _ => polar_2d(prep, x, order, rho, h),
        },
        _ => polar_3d(prep, x, order, rho, h),
    }
}

/// Directions from `x` at which the ray's intersection pattern changes.
fn critical_angles<T: Real>(prep: &Prepared<'_, T>, x: &P3<T>) -> Vec<T> {
    let tiny = prep.d.diameter() * T::lit(1e-12);
    let mut out = Vec::new();
    for v in &prep.feats.points {
        let (dx, dy) = (v[0] - x[0], v[1] - x[1]);
        if dx.abs() + dy.abs() > tiny {
            out.push(dy.atan2(dx));
        }
    }
    let circles = prep
        .feats
        .circles
        .iter()
        .copied()
        .chain(prep.hints.spheres.iter().map(|(c, r)| ([c[0], c[1]], *r)));
    for (c, r) in circles {
        let (dx, dy) = (c[0] - x[0], c[1] - x[1]);
        let dd = (dx * dx + dy * dy).sqrt();
        if dd > r * (T::one() + T::lit(1e-12)) {
            let base = dy.atan2(dx);
            let half = (r / dd).asin();
            out.push(base - half);
            out.push(base + half);
        }
    }
    let tau = T::TAU();
    for a in out.iter_mut() {
        *a = *a - tau * (*a / tau).floor();
    }
    out.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    out.dedup_by(|a, b| (*a - *b).abs() <= T::lit(1e-13));
    out
}

/// Angular sectors covering `[θ₀, θ₀ + 2π)`, none wider than `π/2`.
fn sectors<T: Real>(angles: &[T]) -> Vec<(T, T)> {
    let tau = T::TAU();
    let mut raw = Vec::new();
    if angles.is_empty() {
        raw.push((T::zero(), tau));
    } else {
        for i in 0..angles.len() {
            let a = angles[i];
            let b = if i + 1 < angles.len() { angles[i + 1] } else { angles[0] + tau };
            if b > a {
                raw.push((a, b));
            }
        }
    }
    let quarter = T::FRAC_PI_2();
    let mut out = Vec::new();
    for (a, b) in raw {
        let k = ((b - a) / quarter).ceil().max(T::one()).to_usize().unwrap_or(1);
        let step = (b - a) / T::count(k);
        for j in 0..k {
            out.push((a + step * T::count(j), a + step * T::count(j + 1)));
        }
    }
    out
}

fn polar_2d<T: Real, H: Fn(&[T]) -> T + ?Sized>(prep: &Prepared<'_, T>, x: &P3<T>, order: usize, rho: Option<T>, h: &H) -> T {
    let mut acc = T::zero();
    let mut breaks = Vec::new();
    for (a, b) in sectors(&critical_angles(prep, x)) {
        gauss_cos(a, b, order, |th, wth| {
            let dir = [th.cos(), th.sin(), T::zero()];
            let set = prep.d.ray_intervals(&x[..2], &dir[..2]);
            if set.is_empty() {
                return;
            }
            breaks.clear();
            breaks.extend(rho);
            sphere_crossings(&prep.hints.spheres, x, &dir, 2, &mut breaks);
            acc += wth * ray_integral(&set, &breaks, x, &dir, 2, order, h);
        });
    }
    acc
}

fn polar_3d<T: Real, H: Fn(&[T]) -> T + ?Sized>(prep: &Prepared<'_, T>, x: &P3<T>, order: usize, rho: Option<T>, h: &H) -> T {
    let m = 2 * order;
    let dphi = T::TAU() / T::count(m);
    let mut acc = T::zero();
    let mut breaks = Vec::new();
    gauss_on(-T::one(), T::one(), order, |mu, wm| {
        let s = (T::one() - mu * mu).max(T::zero()).sqrt();
        for k in 0..m {
            let phi = dphi * (T::count(k) + T::lit(0.5));
            let dir = [s * phi.cos(), s * phi.sin(), mu];
            let set = prep.d.ray_intervals(&x[..3], &dir);
            if set.is_empty() {
                continue;
            }
            breaks.clear();
            breaks.extend(rho);
            sphere_crossings(&prep.hints.spheres, x, &dir, 3, &mut breaks);
            acc += wm * dphi * ray_integral(&set, &breaks, x, &dir, 3, order, h);
        }
    });
    acc
}

/// Signed fan over the polygon edges; triangle `(x, a, b)` is parametrised
/// by `z = x + u·((1−v)(a−x) + v(b−x))`, whose Jacobian `u·|(a−x)×(b−x)|`
/// cancels the kernel `1/|z − x| = 1/(u·|w(v)|)`.
fn duffy_fan<T: Real, H: Fn(&[T]) -> T + ?Sized>(poly: &Polygon<T>, x: &P3<T>, order: usize, h: &H) -> T {
    let scale = poly.diameter();
    let mut acc = T::zero();
    for (a, b) in poly.edges() {
        let ax = [a[0] - x[0], a[1] - x[1]];
        let bx = [b[0] - x[0], b[1] - x[1]];
        let cr = ax[0] * bx[1] - ax[1] * bx[0];
        if cr.abs() <= scale * scale * T::lit(1e-14) {
            continue;
        }
        gauss_on(T::zero(), T::one(), order, |v, wv| {
            let w = [ax[0] + v * (bx[0] - ax[0]), ax[1] + v * (bx[1] - ax[1])];
            let wn = (w[0] * w[0] + w[1] * w[1]).sqrt();
            let mut line = T::zero();
            gauss_on(T::zero(), T::one(), order, |u, wu| {
                line += wu * h(&[x[0] + u * w[0], x[1] + u * w[1]]);
            });
            acc += wv * cr / wn * line;
        });
    }
    acc
}

/// Outer rule size for `order`, used to size the local polar patch.
pub(crate) fn patch_radius<T: Real>(d: &Domain<T>, nodes: usize, fraction: T) -> T {
    let n = d.dim();
    fraction * (d.measure() / T::count(nodes.max(1))).powf(T::one() / T::count(n))
}
