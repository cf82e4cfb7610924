//! Method dispatch: the same integrand runs under Gauss, Monte Carlo or
//! stratified Monte Carlo, in parallel with a fixed reduction order.

use rand::Rng;
use rayon::prelude::*;

use super::rules::{inner_gauss, outer_rule, patch_radius, Prepared};
use super::sampling::{chunk_rng, direction, direction_dims, sub_seed, uniforms, Sampler, CHUNK, REPLICATES};
use super::spec::{IntegralResult, Method, QuadratureSpec, Singular};
use super::P3;
use crate::{unit_sphere_area, Real};

const OUTER_STREAM: u64 = 1;
const INNER_STREAM: u64 = 2;

/// What to integrate: `∫ w(x) · [inner part] dx`, where the outer closure
/// returns the weight and a context reused by every inner evaluation.
pub(crate) enum Inner<'f, T, C> {
    /// No inner integral: the weight is the integrand.
    None,
    /// `∫_Ω h(C, z) |z − x|^{1−n} dz`.
    Singular(&'f (dyn Fn(&C, &[T]) -> T + Sync)),
    /// `∫_Ω h(C, y) dy`.
    Regular(&'f (dyn Fn(&C, &[T]) -> T + Sync)),
}

pub(crate) fn integrate<T, C>(
    prep: &Prepared<'_, T>,
    spec: &QuadratureSpec<T>,
    outer: &(dyn Fn(&[T]) -> Option<(T, C)> + Sync),
    inner: Inner<'_, T, C>,
) -> IntegralResult<T>
where
    T: Real,
{
    match spec.method {
        Method::TensorGaussOnCells => gauss(prep, spec, outer, &inner),
        Method::MonteCarlo | Method::StratifiedMc => monte_carlo(prep, spec, outer, &inner),
    }
}

fn gauss<T: Real, C>(
    prep: &Prepared<'_, T>,
    spec: &QuadratureSpec<T>,
    outer: &(dyn Fn(&[T]) -> Option<(T, C)> + Sync),
    inner: &Inner<'_, T, C>,
) -> IntegralResult<T> {
    let run = |o: usize, i: usize| gauss_once(prep, spec, o, i, outer, inner);
    let (fine, n_fine) = run(spec.outer, spec.inner);
    let (coarse, _) = run((spec.outer / 2).max(1), (spec.inner / 2).max(1));
    let mut err = (fine - coarse).abs();
    let mut value = fine;
    let mut samples = n_fine;
    if err > spec.tolerance * value.abs() + T::epsilon() {
        let (finer, n) = run(2 * spec.outer, 2 * spec.inner);
        err = (finer - fine).abs();
        value = finer;
        samples = n;
    }
    IntegralResult {
        value,
        error: err,
        samples,
    }
}

fn gauss_once<T: Real, C>(
    prep: &Prepared<'_, T>,
    spec: &QuadratureSpec<T>,
    o: usize,
    i: usize,
    outer: &(dyn Fn(&[T]) -> Option<(T, C)> + Sync),
    inner: &Inner<'_, T, C>,
) -> (T, u64) {
    let n = prep.n;
    let nodes = outer_rule(prep, o);
    let (rho, duffy) = match spec.singular {
        Singular::PolarLocal { fraction } => (Some(patch_radius(prep.d, nodes.len(), fraction)), false),
        Singular::DuffySplit => (None, true),
    };
    let inner_nodes = match inner {
        Inner::Regular(_) => outer_rule(prep, i),
        _ => Vec::new(),
    };
    let partial: Vec<T> = nodes
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut acc = T::zero();
            for (x, wx) in chunk {
                let Some((w, ctx)) = outer(&x[..n]) else { continue };
                let v = match inner {
                    Inner::None => T::one(),
                    Inner::Singular(h) => inner_gauss(prep, x, i, rho, duffy, &|z: &[T]| h(&ctx, z)),
                    Inner::Regular(h) => inner_nodes
                        .iter()
                        .fold(T::zero(), |a, (y, wy)| a + *wy * h(&ctx, &y[..n])),
                };
                acc += *wx * w * v;
            }
            acc
        })
        .collect();
    let per_outer = match inner {
        Inner::None => 1,
        Inner::Regular(_) => inner_nodes.len() as u64,
        Inner::Singular(_) => (i * i) as u64,
    };
    (partial.into_iter().sum(), nodes.len() as u64 * per_outer)
}

fn monte_carlo<T: Real, C>(
    prep: &Prepared<'_, T>,
    spec: &QuadratureSpec<T>,
    outer: &(dyn Fn(&[T]) -> Option<(T, C)> + Sync),
    inner: &Inner<'_, T, C>,
) -> IntegralResult<T> {
    let n = prep.n;
    let d = prep.d;
    let sampler = Sampler::new(d);
    let dims = sampler.dims();
    let stratified = spec.method == Method::StratifiedMc;
    let total = spec.outer;
    let per_rep = total / REPLICATES;
    let count = if stratified { per_rep * REPLICATES } else { total };
    let m_inner = spec.inner;
    let sphere: T = unit_sphere_area(n);
    let (seed_o, seed_i) = (sub_seed(spec.seed, OUTER_STREAM), sub_seed(spec.seed, INNER_STREAM));
    let chunks = count.div_ceil(CHUNK);

    let estimates: Vec<Vec<T>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut ro = chunk_rng(seed_o, c);
            let mut ri = chunk_rng(seed_i, c);
            let mut u = vec![0.0; dims.max(3)];
            let mut ud = vec![0.0; 3];
            let mut out = Vec::with_capacity(CHUNK);
            for k in c * CHUNK..((c + 1) * CHUNK).min(count) {
                uniforms(&mut ro, &mut u);
                if stratified {
                    let i = k % per_rep;
                    u[0] = (i as f64 + u[0]) / per_rep as f64;
                }
                let (x, wx) = sampler.sample(d, &u);
                let Some((w, ctx)) = outer(&x[..n]) else {
                    out.push(T::zero());
                    continue;
                };
                let v = match inner {
                    Inner::None => T::one(),
                    Inner::Singular(h) => {
                        let mut acc = T::zero();
                        for j in 0..m_inner {
                            uniforms(&mut ri, &mut ud[..direction_dims(n) + 1]);
                            if stratified {
                                ud[0] = (j as f64 + ud[0]) / m_inner as f64;
                            }
                            let dir: P3<T> = direction(n, &ud);
                            let set = d.ray_intervals(&x[..n], &dir[..n]);
                            let len = set.length();
                            if len <= T::zero() {
                                continue;
                            }
                            let s = ud[direction_dims(n)];
                            let t = set.point_at_length(len * T::lit(s)).expect("non-empty");
                            let mut z = x;
                            for q in 0..n {
                                z[q] += t * dir[q];
                            }
                            acc += len * h(&ctx, &z[..n]);
                        }
                        sphere * acc / T::count(m_inner)
                    }
                    Inner::Regular(h) => {
                        let mut acc = T::zero();
                        let mut uy = vec![0.0; dims.max(3)];
                        for j in 0..m_inner {
                            uniforms(&mut ri, &mut uy);
                            if stratified {
                                uy[0] = (j as f64 + uy[0]) / m_inner as f64;
                            }
                            let (y, wy) = sampler.sample(d, &uy);
                            acc += wy * h(&ctx, &y[..n]);
                        }
                        acc / T::count(m_inner)
                    }
                };
                out.push(wx * w * v);
            }
            out
        })
        .collect();
    let flat: Vec<T> = estimates.into_iter().flatten().collect();
    let per_outer = match inner {
        Inner::None => 1,
        _ => m_inner as u64,
    };
    let samples = count as u64 * per_outer;
    if stratified {
        let reps: Vec<T> = flat.chunks(per_rep).map(mean).collect();
        let (m, se) = mean_and_se(&reps);
        IntegralResult { value: m, error: se, samples }
    } else {
        let (m, se) = mean_and_se(&flat);
        IntegralResult { value: m, error: se, samples }
    }
}

fn mean<T: Real>(v: &[T]) -> T {
    v.iter().copied().sum::<T>() / T::count(v.len().max(1))
}

fn mean_and_se<T: Real>(v: &[T]) -> (T, T) {
    let m = mean(v);
    if v.len() < 2 {
        return (m, T::zero());
    }
    let var = v.iter().fold(T::zero(), |a, &x| a + (x - m) * (x - m)) / T::count(v.len() - 1);
    (m, (var / T::count(v.len())).sqrt())
}

/// Inner singular integral at a single point.
pub(crate) fn at_point<T: Real>(
    prep: &Prepared<'_, T>,
    spec: &QuadratureSpec<T>,
    x: &P3<T>,
    h: &(dyn Fn(&[T]) -> T + Sync),
) -> IntegralResult<T> {
    let n = prep.n;
    match spec.method {
        Method::TensorGaussOnCells => {
            let (rho, duffy) = match spec.singular {
                // a single point: the patch is sized by the inner order
                Singular::PolarLocal { fraction } => (Some(patch_radius(prep.d, spec.inner * spec.inner, fraction)), false),
                Singular::DuffySplit => (None, true),
            };
            let run = |i: usize| inner_gauss(prep, x, i, rho, duffy, h);
            let fine = run(spec.inner);
            let coarse = run((spec.inner / 2).max(1));
            let mut err = (fine - coarse).abs();
            let mut value = fine;
            let mut i = spec.inner;
            if err > spec.tolerance * value.abs() + T::epsilon() {
                let finer = run(2 * spec.inner);
                err = (finer - fine).abs();
                value = finer;
                i *= 2;
            }
            IntegralResult {
                value,
                error: err,
                samples: (i * i) as u64,
            }
        }
        Method::MonteCarlo | Method::StratifiedMc => {
            let stratified = spec.method == Method::StratifiedMc;
            let count = spec.outer.max(2);
            let sphere: T = unit_sphere_area(n);
            let seed = sub_seed(spec.seed, INNER_STREAM);
            let chunks = count.div_ceil(CHUNK);
            let vals: Vec<Vec<T>> = (0..chunks)
                .into_par_iter()
                .map(|c| {
                    let mut rng = chunk_rng(seed, c);
                    let mut ud = [0.0; 3];
                    let mut out = Vec::with_capacity(CHUNK);
                    for k in c * CHUNK..((c + 1) * CHUNK).min(count) {
                        for v in ud.iter_mut() {
                            *v = rng.gen::<f64>();
                        }
                        if stratified {
                            ud[0] = (k as f64 + ud[0]) / count as f64;
                        }
                        let dir: P3<T> = direction(n, &ud);
                        let set = prep.d.ray_intervals(&x[..n], &dir[..n]);
                        let len = set.length();
                        if len <= T::zero() {
                            out.push(T::zero());
                            continue;
                        }
                        let t = set
                            .point_at_length(len * T::lit(ud[direction_dims(n)]))
                            .expect("non-empty");
                        let mut z = *x;
                        for q in 0..n {
                            z[q] += t * dir[q];
                        }
                        out.push(sphere * len * h(&z[..n]));
                    }
                    out
                })
                .collect();
            let flat: Vec<T> = vals.into_iter().flatten().collect();
            let (m, se) = mean_and_se(&flat);
            IntegralResult {
                value: m,
                error: se,
                samples: count as u64,
            }
        }
    }
}
