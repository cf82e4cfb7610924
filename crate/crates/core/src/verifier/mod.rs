//! End-to-end checks of the inequalities, the counterexample sweep, and the
//! empirical best-constant search.
//!
//! Every check reports both sides with their error estimates. A check
//! passes when `C·rhs − lhs ≥ −(err_lhs + C·err_rhs)`, so quadrature noise
//! never fails an inequality that holds.

mod optimize;
mod suite;
mod sweep;

pub use optimize::{empirical_best_constant, nelder_mead, NelderMead, OptimizeParams, OptimizeReport};
pub use suite::{l_shape, standard_suite, suite_chains, suite_exponents, suite_functions, verify_suite, Fixture};
pub use sweep::{counterexample_sweep, fit_slope, SweepParams, SweepReport};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constants::{alpha, constant_c, constant_c_tilde, ConstantsError, ConstantsReport};
use crate::functions::{TestFunction, VariableExponent};
use crate::geometry::{Ball, Chain, Domain, GeometryError, Point, Shape, StarPiece};
use crate::quadrature::{
    classical_rhs, deviation_at, double_modular, kernel_at, kernel_rhs, modular_lhs, weighted_kernel_rhs,
    IntegralResult, QuadratureError, QuadratureSpec,
};
use crate::Real;

/// First positive zero of `J₁′`; the first nonzero Neumann eigenvalue of the
/// unit disk is its square.
pub const BESSEL_J1_PRIME_ZERO: f64 = 1.841_183_781_340_659_3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("a slope fit needs at least 4 grid values, got {0}")]
    GridTooCoarse(usize),
    #[error("domain is not convex")]
    NotConvex,
    #[error("invalid input: {0}")]
    InvalidInput(&'static str),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Constants(#[from] ConstantsError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct VerificationReport<T: Real = f64> {
    pub fixture: String,
    pub seed: u64,
    pub lhs: IntegralResult<T>,
    pub rhs: IntegralResult<T>,
    /// Multiplies `rhs`; 1 when the weight is already inside `rhs`.
    pub constant: T,
    pub slack: T,
    pub pass: bool,
}

impl<T: Real> VerificationReport<T> {
    pub fn new(fixture: impl Into<String>, seed: u64, lhs: IntegralResult<T>, rhs: IntegralResult<T>, constant: T) -> Self {
        let slack = constant * rhs.value - lhs.value;
        let tolerance = lhs.error + constant * rhs.error;
        Self {
            fixture: fixture.into(),
            seed,
            pass: slack >= -tolerance,
            lhs,
            rhs,
            constant,
            slack,
        }
    }

    /// `lhs / rhs`, or `None` when the right side vanishes.
    pub fn ratio(&self) -> Option<T> {
        (self.rhs.value > T::zero()).then(|| self.lhs.value / self.rhs.value)
    }
}

/// Main inequality on a chain: `∫|f − ⟨f⟩|^{p(x)} ≤ C ∫∫ |∇f(z)|^{p(x)}/|z−x|^{n−1}`.
pub fn verify_main<T: Real>(
    chain: &Chain<T>,
    p: &VariableExponent<T>,
    f: &TestFunction<T>,
    q: &QuadratureSpec<T>,
) -> Result<(VerificationReport<T>, ConstantsReport<T>), VerifyError> {
    let omega = chain.omega();
    let constants = constant_c(chain, p)?;
    let (lhs, rhs) = rayon::join(|| modular_lhs(f, p, omega, q), || kernel_rhs(f, p, omega, q));
    Ok((VerificationReport::new("main", q.seed, lhs?, rhs?, constants.c), constants))
}

/// `diam^{n+p−1}/(n+p−1)`.
fn radial_factor<T: Real>(diam: T, n: usize, p: T) -> T {
    let e = T::count(n) + p - T::one();
    diam.powf(e) / e
}

fn is_convex<T: Real>(d: &Domain<T>) -> bool {
    match d.shape() {
        Shape::Ball(_) => true,
        Shape::Polygon(p) => p.is_convex(),
        Shape::Union(_) => false,
    }
}

/// Convex domains: the x-dependent weight `diam^{n+p(x)−1}/((n+p(x)−1)|Ω|)`
/// sits inside the right-hand integral.
pub fn verify_convex<T: Real>(
    omega: &Domain<T>,
    p: &VariableExponent<T>,
    f: &TestFunction<T>,
    q: &QuadratureSpec<T>,
) -> Result<VerificationReport<T>, VerifyError> {
    if !is_convex(omega) {
        return Err(VerifyError::NotConvex);
    }
    let (n, diam, measure) = (omega.dim(), omega.diameter(), omega.measure());
    let (lhs, rhs) = rayon::join(
        || modular_lhs(f, p, omega, q),
        || weighted_kernel_rhs(f, p, omega, q, |_, px| radial_factor(diam, n, px) / measure),
    );
    Ok(VerificationReport::new("convex", q.seed, lhs?, rhs?, T::one()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ClassicalReport<T: Real = f64> {
    pub report: VerificationReport<T>,
    /// `lhs / rhs`.
    pub ratio: Option<T>,
    /// `1/μ₁` for a disk with `p = 2`, the best constant.
    pub neumann_reference: Option<T>,
    pub within_reference: Option<bool>,
}

/// Constant exponent: `∫|f − ⟨f⟩|^p ≤ C̃ ∫|∇f|^p`.
pub fn verify_classical<T: Real>(
    chain: &Chain<T>,
    p: T,
    f: &TestFunction<T>,
    q: &QuadratureSpec<T>,
) -> Result<ClassicalReport<T>, VerifyError> {
    let omega = chain.omega();
    let exponent = VariableExponent::constant(p).map_err(QuadratureError::from)?;
    let c_tilde = constant_c_tilde(&constant_c(chain, &exponent)?, omega)?;
    let (lhs, rhs) = rayon::join(|| modular_lhs(f, &exponent, omega, q), || classical_rhs(f, p, omega, q));
    let report = VerificationReport::new("classical", q.seed, lhs?, rhs?, c_tilde);
    let ratio = report.ratio();
    let neumann_reference = match omega.shape() {
        Shape::Ball(b) if b.dim() == 2 && p == T::lit(2.0) => {
            let j = T::lit(BESSEL_J1_PRIME_ZERO);
            Some(b.radius() * b.radius() / (j * j))
        }
        _ => None,
    };
    let within_reference = neumann_reference.zip(ratio).map(|(r, q)| {
        let tol = report.lhs.error / report.rhs.value + q * report.rhs.error / report.rhs.value;
        q <= r + tol
    });
    Ok(ClassicalReport {
        report,
        ratio,
        neumann_reference,
        within_reference,
    })
}

/// Pointwise Morrey-type bounds on a star piece at `samples` random points
/// of the kernel ball `S` and `samples` random points of `D ∖ S`. Inside `S`
/// the left side integrates over `D`, outside over `S`.
pub fn morrey_check<T: Real>(
    piece: &StarPiece<T>,
    p: &VariableExponent<T>,
    f: &TestFunction<T>,
    samples: usize,
    q: &QuadratureSpec<T>,
) -> Result<Vec<VerificationReport<T>>, VerifyError> {
    let body = piece.body();
    let s = piece.kernel();
    let s_domain = Domain::ball(s.clone());
    let (n, diam) = (body.dim(), body.diameter());
    let mut rng = ChaCha8Rng::seed_from_u64(q.seed);
    let inside: Vec<Point<T>> = (0..samples).map(|_| sample_ball(&mut rng, s)).collect();
    let outside: Vec<Point<T>> = (0..samples)
        .map(|_| sample_where(&mut rng, body, |x| s.signed_distance(x) > T::zero()))
        .collect::<Option<_>>()
        .ok_or(VerifyError::InvalidInput("the kernel ball fills the piece"))?;
    let jobs: Vec<(&str, Point<T>, &Domain<T>)> = inside
        .into_iter()
        .map(|x| ("morrey_in_kernel", x, body))
        .chain(outside.into_iter().map(|x| ("morrey_outside_kernel", x, &s_domain)))
        .collect();
    jobs.into_par_iter()
        .map(|(tag, x, lhs_domain)| {
            let lhs = deviation_at(f, p, &x, lhs_domain, q)?;
            let rhs = kernel_at(f, p, &x, body, q)?;
            let weight = radial_factor(diam, n, p.eval(x.coords()));
            Ok(VerificationReport::new(format!("{tag}@{:?}", x.coords()), q.seed, lhs, rhs, weight))
        })
        .collect()
}

fn sample_ball<T: Real>(rng: &mut ChaCha8Rng, b: &Ball<T>) -> Point<T> {
    let n = b.dim();
    loop {
        let u: Vec<T> = (0..n).map(|_| T::lit(2.0 * rng.gen::<f64>() - 1.0)).collect();
        if u.iter().fold(T::zero(), |a, &v| a + v * v) < T::one() {
            let c = b.center().coords();
            let x: Vec<T> = (0..n).map(|k| c[k] + b.radius() * u[k]).collect();
            return Point::from_slice(&x);
        }
    }
}

/// Rejection sampling in `d` subject to `accept`; `None` after many misses.
fn sample_where<T: Real>(rng: &mut ChaCha8Rng, d: &Domain<T>, accept: impl Fn(&Point<T>) -> bool) -> Option<Point<T>> {
    let (lo, hi) = d.bounding_box();
    for _ in 0..100_000 {
        let x: Vec<T> = lo.iter().zip(&hi).map(|(&a, &b)| a + (b - a) * T::lit(rng.gen::<f64>())).collect();
        let pt = Point::from_slice(&x);
        if d.contains_slice(&x, T::zero()) && accept(&pt) {
            return Some(pt);
        }
    }
    None
}

/// Star piece: `∫_D∫_D |f(x)−f(y)|^{p(x)} ≤ α ∫_D diam^{n+p(x)−1}/(n+p(x)−1) ∫_D |∇f(z)|^{p(x)}/|z−x|^{n−1}`.
pub fn verify_starshaped<T: Real>(
    piece: &StarPiece<T>,
    p: &VariableExponent<T>,
    f: &TestFunction<T>,
    q: &QuadratureSpec<T>,
) -> Result<VerificationReport<T>, VerifyError> {
    let body = piece.body();
    let (n, diam) = (body.dim(), body.diameter());
    let a = alpha(p.p_plus(body), piece.kernel(), body);
    let (lhs, rhs) = rayon::join(
        || double_modular(f, p, body, q),
        || weighted_kernel_rhs(f, p, body, q, |_, px| radial_factor(diam, n, px)),
    );
    Ok(VerificationReport::new("starshaped", q.seed, lhs?, rhs?, a))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_rule_is_error_aware() {
        let r = |v: f64, e: f64| IntegralResult {
            value: v,
            error: e,
            samples: 1,
        };
        assert!(VerificationReport::new("a", 0, r(1.0, 0.0), r(1.0, 0.0), 1.0).pass);
        assert!(!VerificationReport::new("b", 0, r(1.1, 0.0), r(1.0, 0.0), 1.0).pass);
        assert!(VerificationReport::new("c", 0, r(1.1, 0.06), r(1.0, 0.06), 1.0).pass);
        assert!(VerificationReport::new("d", 0, r(0.0, 0.0), r(0.0, 0.0), 7.0).pass);
    }

    #[test]
    fn convexity_is_required() {
        let l = crate::geometry::Polygon::new(vec![[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0], [1.0, 2.0], [0.0, 2.0]]).unwrap();
        let p = VariableExponent::constant(2.0).unwrap();
        let f = TestFunction::linear(0, 1.0);
        assert_eq!(
            verify_convex(&Domain::polygon(l), &p, &f, &QuadratureSpec::default()),
            Err(VerifyError::NotConvex)
        );
    }
}
