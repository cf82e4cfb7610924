//! Empirical best constant: maximise `modular_lhs / kernel_rhs` over linear
//! combinations of a fixed basis with a restarted Nelder–Mead search.

use serde::{Deserialize, Serialize};

use super::VerifyError;
use crate::constants::constant_c;
use crate::functions::{TestFunction, VariableExponent};
use crate::geometry::Chain;
use crate::quadrature::{kernel_rhs, modular_lhs, IntegralResult, QuadratureSpec};
use crate::Real;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizeParams {
    /// Total objective evaluations over all restarts.
    pub budget: usize,
    pub restarts: usize,
    /// Initial simplex edge relative to the largest start coordinate.
    pub step: f64,
    /// Relative spread of simplex values that counts as converged.
    pub ftol: f64,
}

impl Default for OptimizeParams {
    fn default() -> Self {
        Self {
            budget: 200,
            restarts: 2,
            step: 0.5,
            ftol: 1e-6,
        }
    }
}

impl OptimizeParams {
    pub fn with_budget(budget: usize) -> Self {
        Self { budget, ..Self::default() }
    }

    fn validate(&self) -> Result<(), VerifyError> {
        if self.budget == 0 {
            return Err(VerifyError::InvalidInput("budget must be positive"));
        }
        if !(self.step > 0.0 && self.step.is_finite()) || !(self.ftol >= 0.0) {
            return Err(VerifyError::InvalidInput("step must be positive and ftol non-negative"));
        }
        Ok(())
    }
}

/// Outcome of a minimisation.
#[derive(Clone, Debug, PartialEq)]
pub struct NelderMead<T> {
    pub x: Vec<T>,
    pub value: T,
    pub evaluations: usize,
    /// The budget ran out before the last restart converged.
    pub budget_exhausted: bool,
}

/// Minimises `f` from `x0`. Each restart rebuilds the simplex around the best
/// point so far; the search stops once a restart no longer improves it.
pub fn nelder_mead<T: Real>(mut f: impl FnMut(&[T]) -> T, x0: &[T], params: &OptimizeParams) -> NelderMead<T> {
    let d = x0.len();
    let ftol = T::lit(params.ftol);
    let tiny = T::lit(1e-300_f64.max(f64::from(f32::MIN_POSITIVE)));
    let mut evals = 0usize;
    let mut eval = |x: &[T], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            T::infinity()
        } else {
            v
        }
    };
    let mut best_x = x0.to_vec();
    let mut best = eval(x0, &mut evals);
    let mut exhausted = false;

    for _ in 0..=params.restarts {
        let scale = best_x.iter().fold(T::zero(), |m, v| m.max(v.abs())).max(T::lit(1e-3));
        let h = T::lit(params.step) * scale;
        let mut simplex: Vec<(Vec<T>, T)> = vec![(best_x.clone(), best)];
        for i in 0..d {
            if evals >= params.budget {
                break;
            }
            let mut x = best_x.clone();
            x[i] += h;
            let v = eval(&x, &mut evals);
            simplex.push((x, v));
        }
        if simplex.len() < d + 1 {
            exhausted = true;
            break;
        }
        let start = best;
        let mut converged = false;
        while evals < params.budget {
            simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
            let (lo, hi) = (simplex[0].1, simplex[d].1);
            if hi - lo <= ftol * (lo.abs() + tiny) || (hi.is_infinite() && lo.is_infinite()) {
                converged = true;
                break;
            }
            let centroid: Vec<T> = (0..d)
                .map(|k| simplex[..d].iter().fold(T::zero(), |a, s| a + s.0[k]) / T::count(d))
                .collect();
            let along = |t: T| -> Vec<T> { (0..d).map(|k| centroid[k] + t * (simplex[d].0[k] - centroid[k])).collect() };
            let xr = along(-T::one());
            let fr = eval(&xr, &mut evals);
            if fr < simplex[0].1 {
                let xe = along(T::lit(-2.0));
                let fe = if evals < params.budget { eval(&xe, &mut evals) } else { T::infinity() };
                simplex[d] = if fe < fr { (xe, fe) } else { (xr, fr) };
            } else if fr < simplex[d - 1].1 {
                simplex[d] = (xr, fr);
            } else {
                let (xc, fc) = if fr < simplex[d].1 {
                    let xc = along(T::lit(-0.5));
                    (xc.clone(), if evals < params.budget { eval(&xc, &mut evals) } else { T::infinity() })
                } else {
                    let xc = along(T::lit(0.5));
                    (xc.clone(), if evals < params.budget { eval(&xc, &mut evals) } else { T::infinity() })
                };
                if fc < fr.min(simplex[d].1) {
                    simplex[d] = (xc, fc);
                } else {
                    let x0 = simplex[0].0.clone();
                    for s in simplex.iter_mut().skip(1) {
                        if evals >= params.budget {
                            break;
                        }
                        s.0 = (0..d).map(|k| x0[k] + T::lit(0.5) * (s.0[k] - x0[k])).collect();
                        s.1 = eval(&s.0, &mut evals);
                    }
                }
            }
        }
        for (x, v) in &simplex {
            if *v < best {
                best = *v;
                best_x = x.clone();
            }
        }
        if !converged {
            exhausted = true;
            break;
        }
        if !(best < start - ftol * (start.abs() + tiny)) {
            break;
        }
    }
    NelderMead {
        x: best_x,
        value: best,
        evaluations: evals,
        budget_exhausted: exhausted,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct OptimizeReport<T: Real = f64> {
    /// Largest `lhs / rhs` found: a lower bound on the best constant.
    pub ratio: T,
    pub coefficients: Vec<T>,
    pub lhs: IntegralResult<T>,
    pub rhs: IntegralResult<T>,
    pub evaluations: usize,
    pub budget_exhausted: bool,
    /// The chain constant `C`.
    pub constant: T,
    /// `ratio ≤ C` up to the quadrature error of the best point.
    pub within_constant: bool,
}

fn combine<T: Real>(family: &[TestFunction<T>], c: &[T]) -> Option<TestFunction<T>> {
    let terms: Vec<(T, TestFunction<T>)> = family
        .iter()
        .zip(c)
        .filter(|(_, &ci)| ci != T::zero())
        .map(|(f, &ci)| (ci, f.clone()))
        .collect();
    (!terms.is_empty()).then(|| TestFunction::combination(terms))
}

/// Maximises `modular_lhs / kernel_rhs` over `Σ cᵢ fᵢ`. `start` defaults to
/// all ones; passing the zero-padded optimum of a sub-family guarantees a
/// result at least as large as that sub-family's.
pub fn empirical_best_constant<T: Real>(
    chain: &Chain<T>,
    p: &VariableExponent<T>,
    family: &[TestFunction<T>],
    params: &OptimizeParams,
    start: Option<&[T]>,
    q: &QuadratureSpec<T>,
) -> Result<OptimizeReport<T>, VerifyError> {
    params.validate()?;
    if family.is_empty() {
        return Err(VerifyError::InvalidInput("empty function family"));
    }
    let x0 = match start {
        Some(s) if s.len() == family.len() => s.to_vec(),
        Some(_) => return Err(VerifyError::InvalidInput("start has the wrong length")),
        None => vec![T::one(); family.len()],
    };
    let omega = chain.omega();
    let constant = constant_c(chain, p)?.c;
    let sides = |c: &[T]| -> Result<Option<(IntegralResult<T>, IntegralResult<T>)>, VerifyError> {
        let Some(f) = combine(family, c) else { return Ok(None) };
        let (lhs, rhs) = rayon::join(|| modular_lhs(&f, p, omega, q), || kernel_rhs(&f, p, omega, q));
        Ok(Some((lhs?, rhs?)))
    };
    let ratio_of = |s: &Option<(IntegralResult<T>, IntegralResult<T>)>| match s {
        Some((l, r)) if r.value > T::zero() => l.value / r.value,
        _ => T::neg_infinity(),
    };

    let mut failure = None;
    let found = nelder_mead(
        |c| match sides(c) {
            Ok(s) => -ratio_of(&s),
            Err(e) => {
                failure.get_or_insert(e);
                T::infinity()
            }
        },
        &x0,
        params,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let (lhs, rhs) = sides(&found.x)?.ok_or(VerifyError::InvalidInput("all coefficients vanished"))?;
    let ratio = -found.value;
    let tolerance = (lhs.error + ratio * rhs.error) / rhs.value;
    Ok(OptimizeReport {
        ratio,
        coefficients: found.x,
        within_constant: ratio <= constant + tolerance,
        lhs,
        rhs,
        evaluations: found.evaluations,
        budget_exhausted: found.budget_exhausted,
        constant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimises_a_quadratic() {
        let r = nelder_mead(
            |x: &[f64]| (x[0] - 1.0).powi(2) + 10.0 * (x[1] + 2.0).powi(2),
            &[0.0, 0.0],
            &OptimizeParams {
                budget: 2000,
                ftol: 1e-14,
                ..OptimizeParams::default()
            },
        );
        assert!((r.x[0] - 1.0).abs() < 1e-4 && (r.x[1] + 2.0).abs() < 1e-4, "{r:?}");
        assert!(!r.budget_exhausted);
    }

    #[test]
    fn rosenbrock_within_budget() {
        let rosen = |x: &[f64]| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2);
        let r = nelder_mead(rosen, &[-1.2, 1.0], &OptimizeParams {
            budget: 5000,
            ftol: 1e-14,
            ..OptimizeParams::default()
        });
        assert!(r.value < 1e-8, "{r:?}");
    }

    #[test]
    fn budget_is_respected_and_flagged() {
        let r = nelder_mead(|x: &[f64]| x.iter().map(|v| v * v).sum(), &[3.0, -4.0, 5.0], &OptimizeParams::with_budget(12));
        assert!(r.evaluations <= 12);
        assert!(r.budget_exhausted);
        assert!(r.value <= 50.0);
    }

    #[test]
    fn start_scaling_is_invisible_to_scale_free_objectives() {
        let g = |x: &[f64]| {
            let n = (x[0] * x[0] + x[1] * x[1]).sqrt();
            -(x[0] + 0.3 * x[1]) / n
        };
        let a = nelder_mead(g, &[1.0, 1.0], &OptimizeParams::with_budget(80));
        let b = nelder_mead(g, &[4.0, 4.0], &OptimizeParams::with_budget(80));
        assert!((a.value - b.value).abs() < 1e-12);
        assert_eq!(a.evaluations, b.evaluations);
    }
}
