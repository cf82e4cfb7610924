use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use super::FunctionError;
use crate::Real;

pub type Grad<T> = SmallVec<[T; 3]>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Monomial<T: Real> {
    pub coeff: T,
    /// Exponent per coordinate; missing trailing entries are zero.
    pub powers: Vec<u32>,
}

/// `amplitude · Π_i sin(wave_i · x_i + phase_i)`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct TrigTerm<T: Real> {
    pub amplitude: T,
    pub wave: Vec<T>,
    pub phase: Vec<T>,
}

/// `C¹` functions with analytic gradients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "", tag = "type", rename_all = "snake_case")]
pub enum TestFunction<T: Real = f64> {
    Polynomial {
        terms: Vec<Monomial<T>>,
    },
    TrigProduct {
        terms: Vec<TrigTerm<T>>,
    },
    /// Radial cut-off about the origin: 1 on `B_1`, 0 outside `B_{1+α}`,
    /// joined by a polynomial smoothstep of order `k` (class `C^{k−1}`).
    RadialBump {
        alpha: T,
        k: u32,
    },
    Scaled {
        lambda: T,
        inner: Box<TestFunction<T>>,
    },
    LinearCombination {
        terms: Vec<(T, TestFunction<T>)>,
    },
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// Smoothstep `S_k` on `[0, 1]`: `S(0) = 0`, `S(1) = 1`, first `k − 1`
/// derivatives vanish at both ends.
pub fn smoothstep<T: Real>(k: u32, t: T) -> T {
    let t = t.max(T::zero()).min(T::one());
    let s = T::one() - t;
    let mut acc = T::zero();
    let mut sp = T::one();
    for j in 0..k {
        acc += T::lit(binomial(k - 1 + j, j)) * sp;
        sp = sp * s;
    }
    t.powi(k as i32) * acc
}

pub fn smoothstep_derivative<T: Real>(k: u32, t: T) -> T {
    if t <= T::zero() || t >= T::one() {
        return T::zero();
    }
    // (2k−1)! / ((k−1)!)² = k · C(2k−1, k)
    let c = f64::from(k) * binomial(2 * k - 1, k);
    T::lit(c) * (t * (T::one() - t)).powi(k as i32 - 1)
}

impl<T: Real> TestFunction<T> {
    pub fn constant(c: T) -> Self {
        TestFunction::Polynomial {
            terms: vec![Monomial { coeff: c, powers: vec![] }],
        }
    }

    /// `c · x_axis`
    pub fn linear(axis: usize, c: T) -> Self {
        let mut powers = vec![0; axis + 1];
        powers[axis] = 1;
        TestFunction::Polynomial {
            terms: vec![Monomial { coeff: c, powers }],
        }
    }

    pub fn monomial(coeff: T, powers: &[u32]) -> Self {
        TestFunction::Polynomial {
            terms: vec![Monomial {
                coeff,
                powers: powers.to_vec(),
            }],
        }
    }

    pub fn bump(alpha: T, k: u32) -> Result<Self, FunctionError> {
        let f = TestFunction::RadialBump { alpha, k };
        f.validate()?;
        Ok(f)
    }

    pub fn scaled(lambda: T, inner: TestFunction<T>) -> Result<Self, FunctionError> {
        let f = TestFunction::Scaled {
            lambda,
            inner: Box::new(inner),
        };
        f.validate()?;
        Ok(f)
    }

    pub fn combination(terms: Vec<(T, TestFunction<T>)>) -> Self {
        TestFunction::LinearCombination { terms }
    }

    pub fn validate(&self) -> Result<(), FunctionError> {
        match self {
            TestFunction::Polynomial { terms } => {
                if terms.iter().any(|m| !m.coeff.is_finite()) {
                    return Err(FunctionError::NonFinite);
                }
            }
            TestFunction::TrigProduct { terms } => {
                for t in terms {
                    if t.wave.len() != t.phase.len() {
                        return Err(FunctionError::WaveMismatch);
                    }
                    if !t.amplitude.is_finite() || t.wave.iter().chain(&t.phase).any(|v| !v.is_finite()) {
                        return Err(FunctionError::NonFinite);
                    }
                }
            }
            TestFunction::RadialBump { alpha, k } => {
                if !(*alpha > T::zero() && *alpha < T::one()) {
                    return Err(FunctionError::AlphaOutOfRange(alpha.as_f64()));
                }
                if *k < 2 {
                    return Err(FunctionError::SmoothstepOrder(*k));
                }
            }
            TestFunction::Scaled { lambda, inner } => {
                if !(*lambda > T::zero() && *lambda <= T::one()) {
                    return Err(FunctionError::LambdaOutOfRange(lambda.as_f64()));
                }
                inner.validate()?;
            }
            TestFunction::LinearCombination { terms } => {
                for (c, f) in terms {
                    if !c.is_finite() {
                        return Err(FunctionError::NonFinite);
                    }
                    f.validate()?;
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, x: &[T]) -> T {
        match self {
            TestFunction::Polynomial { terms } => terms
                .iter()
                .map(|m| {
                    m.powers
                        .iter()
                        .zip(x)
                        .fold(m.coeff, |acc, (&a, &xi)| acc * xi.powi(a as i32))
                })
                .sum(),
            TestFunction::TrigProduct { terms } => terms
                .iter()
                .map(|t| {
                    (0..t.wave.len()).fold(t.amplitude, |acc, i| acc * (t.wave[i] * x[i] + t.phase[i]).sin())
                })
                .sum(),
            TestFunction::RadialBump { alpha, k } => {
                let r = norm(x);
                T::one() - smoothstep(*k, (r - T::one()) / *alpha)
            }
            TestFunction::Scaled { lambda, inner } => *lambda * inner.eval(x),
            TestFunction::LinearCombination { terms } => terms.iter().map(|(c, f)| *c * f.eval(x)).sum(),
        }
    }

    pub fn grad(&self, x: &[T]) -> Grad<T> {
        let n = x.len();
        let mut g: Grad<T> = SmallVec::from_elem(T::zero(), n);
        self.add_grad(x, T::one(), &mut g);
        g
    }

    pub fn grad_norm(&self, x: &[T]) -> T {
        norm(&self.grad(x))
    }

    fn add_grad(&self, x: &[T], scale: T, g: &mut [T]) {
        match self {
            TestFunction::Polynomial { terms } => {
                for m in terms {
                    for (j, &aj) in m.powers.iter().enumerate().take(x.len()) {
                        if aj == 0 {
                            continue;
                        }
                        let mut v = m.coeff * T::count(aj as usize) * x[j].powi(aj as i32 - 1);
                        for (i, &ai) in m.powers.iter().enumerate().take(x.len()) {
                            if i != j {
                                v = v * x[i].powi(ai as i32);
                            }
                        }
                        g[j] += scale * v;
                    }
                }
            }
            TestFunction::TrigProduct { terms } => {
                for t in terms {
                    let m = t.wave.len().min(x.len());
                    for j in 0..m {
                        let mut v = t.amplitude * t.wave[j] * (t.wave[j] * x[j] + t.phase[j]).cos();
                        for i in 0..m {
                            if i != j {
                                v = v * (t.wave[i] * x[i] + t.phase[i]).sin();
                            }
                        }
                        g[j] += scale * v;
                    }
                }
            }
            TestFunction::RadialBump { alpha, k } => {
                let r = norm(x);
                if r <= T::one() || r >= T::one() + *alpha {
                    return;
                }
                let ds = -smoothstep_derivative(*k, (r - T::one()) / *alpha) / *alpha;
                for (gj, &xj) in g.iter_mut().zip(x) {
                    *gj += scale * ds * xj / r;
                }
            }
            TestFunction::Scaled { lambda, inner } => inner.add_grad(x, scale * *lambda, g),
            TestFunction::LinearCombination { terms } => {
                for (c, f) in terms {
                    f.add_grad(x, scale * *c, g);
                }
            }
        }
    }

    /// Spheres `(center, radius)` across which the function is only finitely
    /// smooth; quadrature splits there.
    pub fn feature_spheres(&self) -> Vec<(Vec<T>, T)> {
        match self {
            TestFunction::RadialBump { alpha, .. } => {
                vec![(Vec::new(), T::one()), (Vec::new(), T::one() + *alpha)]
            }
            TestFunction::Scaled { inner, .. } => inner.feature_spheres(),
            TestFunction::LinearCombination { terms } => terms.iter().flat_map(|(_, f)| f.feature_spheres()).collect(),
            _ => Vec::new(),
        }
    }

    /// `sup |∇f|` for the bump, used by the analytic counterexample bound.
    pub fn bump_gradient_sup(alpha: T, k: u32) -> T {
        smoothstep_derivative(k, T::lit(0.5)) / alpha
    }
}

fn norm<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |a, &b| a + b * b).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn samples() -> Vec<TestFunction<f64>> {
        vec![
            TestFunction::linear(0, 1.0),
            TestFunction::Polynomial {
                terms: vec![
                    Monomial { coeff: 1.0, powers: vec![2, 0] },
                    Monomial { coeff: -0.5, powers: vec![1, 1] },
                    Monomial { coeff: 0.25, powers: vec![0, 3] },
                ],
            },
            TestFunction::TrigProduct {
                terms: vec![TrigTerm {
                    amplitude: 0.7,
                    wave: vec![1.3, 2.1],
                    phase: vec![0.2, 0.9],
                }],
            },
            TestFunction::bump(0.5, 3).unwrap(),
            TestFunction::scaled(0.3, TestFunction::bump(0.4, 4).unwrap()).unwrap(),
        ]
    }

    #[test]
    fn bump_values() {
        let b = TestFunction::<f64>::bump(0.5, 3).unwrap();
        assert_eq!(b.eval(&[0.8, 0.0]), 1.0);
        assert_eq!(b.eval(&[1.6, 0.0]), 0.0);
        assert!((b.eval(&[1.25, 0.0]) - 0.5).abs() < 1e-15);
        assert!(TestFunction::<f64>::bump(1.0, 3).is_err());
        assert!(TestFunction::<f64>::bump(0.5, 1).is_err());
    }

    #[test]
    fn smoothstep_derivative_matches_difference_quotient() {
        for k in 2..6 {
            for &t in &[0.1, 0.37, 0.5, 0.81] {
                let h = 1e-6;
                let fd = (smoothstep::<f64>(k, t + h) - smoothstep(k, t - h)) / (2.0 * h);
                assert!((fd - smoothstep_derivative::<f64>(k, t)).abs() < 1e-7);
            }
        }
    }

    proptest! {
        #[test]
        fn gradients_match_central_differences(x in -1.8f64..1.8, y in -1.8f64..1.8) {
            for f in samples() {
                let g = f.grad(&[x, y]);
                let h = 1e-6;
                for j in 0..2 {
                    let mut p = [x, y];
                    let mut m = [x, y];
                    p[j] += h;
                    m[j] -= h;
                    let fd = (f.eval(&p) - f.eval(&m)) / (2.0 * h);
                    prop_assert!((fd - g[j]).abs() / (1.0 + g[j].abs()) < 1e-6, "{:?} at {:?}", f, (x, y));
                }
            }
        }

        #[test]
        fn bump_is_monotone_and_bounded(r1 in 0.0f64..2.0, r2 in 0.0f64..2.0, k in 2u32..6) {
            let b = TestFunction::bump(0.5, k).unwrap();
            let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
            let (a, c) = (b.eval(&[lo, 0.0]), b.eval(&[0.0, hi]));
            prop_assert!((0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&c));
            prop_assert!(c <= a);
        }

        #[test]
        fn scaling_is_pointwise(lambda in 0.01f64..1.0, x in -2.0f64..2.0, y in -2.0f64..2.0) {
            let inner = TestFunction::bump(0.5, 3).unwrap();
            let s = TestFunction::scaled(lambda, inner.clone()).unwrap();
            prop_assert_eq!(s.eval(&[x, y]), lambda * inner.eval(&[x, y]));
            let (gs, gi) = (s.grad(&[x, y]), inner.grad(&[x, y]));
            for j in 0..2 {
                prop_assert!((gs[j] - lambda * gi[j]).abs() <= 1e-15 * (1.0 + gi[j].abs()));
            }
        }
    }
}
