//! Integrals over domains: means, modulars, and the weakly singular double
//! integral `∫∫ |∇f(z)|^{p(x)} |z − x|^{1−n} dz dx`.
//!
//! Inner singular integrals are taken in polar coordinates about the outer
//! point (or over a Duffy fan for polygons), where `r^{n−1}` cancels the
//! kernel. Supported dimensions are 1, 2 and 3.

mod engine;
mod gauss;
mod rules;
pub(crate) mod sampling;
mod spec;

pub use gauss::gauss_legendre;
pub use spec::{IntegralResult, Method, QuadratureSpec, Singular};

use thiserror::Error;

use crate::functions::{FunctionError, TestFunction, VariableExponent};
use crate::geometry::{Domain, Point};
use crate::Real;
use engine::{at_point, integrate, Inner};
use rules::{Hints, Prepared};

pub(crate) type P3<T> = [T; 3];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadratureError {
    #[error("domain has zero measure")]
    ZeroMeasure,
    #[error("quadrature supports dimensions 1, 2 and 3, got {0}")]
    UnsupportedDimension(usize),
    #[error("invalid quadrature spec: {0}")]
    InvalidSpec(&'static str),
    #[error("point has dimension {found}, domain has {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Function(#[from] FunctionError),
}

fn check<T: Real>(d: &Domain<T>, q: &QuadratureSpec<T>) -> Result<(), QuadratureError> {
    q.validate()?;
    match d.dim() {
        1..=3 => Ok(()),
        n => Err(QuadratureError::UnsupportedDimension(n)),
    }
}

fn pow_abs<T: Real>(v: T, p: T) -> T {
    let a = v.abs();
    if a == T::zero() {
        T::zero()
    } else {
        a.powf(p)
    }
}

/// `(1/|Ω|) ∫_Ω f`, as the ratio of the rule applied to `f` and to `1`, so
/// constants are reproduced exactly.
pub fn mean_value<T: Real>(f: &TestFunction<T>, d: &Domain<T>, q: &QuadratureSpec<T>) -> Result<IntegralResult<T>, QuadratureError> {
    check(d, q)?;
    if !(d.measure() > T::zero()) {
        return Err(QuadratureError::ZeroMeasure);
    }
    let prep = Prepared::new(d, Hints::new(Some(f), None));
    // shifting by a reference value makes constants cancel without rounding
    let (lo, hi) = d.bounding_box();
    let mid: Vec<T> = lo.iter().zip(&hi).map(|(&a, &b)| (a + b) * T::lit(0.5)).collect();
    let shift = f.eval(&mid);
    let num = integrate(&prep, q, &|x: &[T]| Some((f.eval(x) - shift, ())), Inner::None);
    let den = integrate(&prep, q, &|_: &[T]| Some((T::one(), ())), Inner::None);
    if !(den.value > T::zero()) {
        return Err(QuadratureError::ZeroMeasure);
    }
    let dev = num.value / den.value;
    Ok(IntegralResult {
        value: shift + dev,
        error: (num.error + dev.abs() * den.error) / den.value,
        samples: num.samples,
    })
}

/// `∫_Ω |f − ⟨f⟩_Ω|^{p(x)} dx`; the error includes the propagated error of
/// the mean.
pub fn modular_lhs<T: Real>(
    f: &TestFunction<T>,
    p: &VariableExponent<T>,
    d: &Domain<T>,
    q: &QuadratureSpec<T>,
) -> Result<IntegralResult<T>, QuadratureError> {
    let m = mean_value(f, d, q)?;
    let v = deviation_modular(f, p, m.value, d, q)?;
    let sens = if m.error > T::zero() {
        let prep = Prepared::new(d, Hints::new(Some(f), Some(p)));
        integrate(
            &prep,
            q,
            &|x: &[T]| {
                let px = p.eval(x);
                Some((px * pow_abs(f.eval(x) - m.value, px - T::one()), ()))
            },
            Inner::None,
        )
        .value
    } else {
        T::zero()
    };
    Ok(IntegralResult {
        value: v.value,
        error: v.error + sens.abs() * m.error,
        samples: v.samples,
    })
}

/// `∫_Ω |f − c|^{p(x)} dx` for a given centre `c`.
pub fn deviation_modular<T: Real>(
    f: &TestFunction<T>,
    p: &VariableExponent<T>,
    c: T,
    d: &Domain<T>,
    q: &QuadratureSpec<T>,
) -> Result<IntegralResult<T>, QuadratureError> {
    check(d, q)?;
    let prep = Prepared::new(d, Hints::new(Some(f), Some(p)));
    Ok(integrate(
        &prep,
        q,
        &|x: &[T]| Some((pow_abs(f.eval(x) - c, p.eval(x)), ())),
        Inner::None,
    ))
}

/// `∫_Ω ∫_Ω |∇f(z)|^{p(x)} |z − x|^{1−n} dz dx`.
pub fn kernel_rhs<T: Real>(
    f: &TestFunction<T>,
    p: &VariableExponent<T>,
    d: &Domain<T>,
    q: &QuadratureSpec<T>,
) -> Result<IntegralResult<T>, QuadratureError> {
    weighted_kernel_rhs(f, p, d, q, |_, _| T::one())
}

/// `∫_Ω w(x, p(x)) ∫_Ω |∇f(z)|^{p(x)} |z − x|^{1−n} dz dx`.
pub fn weighted_kernel_rhs<T: Real>(
    f: &TestFunction<T>,
    p: &VariableExponent<T>,
    d: &Domain<T>,
    q: &QuadratureSpec<T>,
    weight: impl Fn(&[T], T) -> T + Sync,
) -> Result<IntegralResult<T>, QuadratureError> {
    check(d, q)?;
    let prep = Prepared::new(d, Hints::new(Some(f), Some(p)));
    let h = |px: &T, z: &[T]| pow_abs(f.grad_norm(z), *px);
    Ok(integrate(
        &prep,
        q,
        &|x: &[T]| {
            let px = p.eval(x);
            Some((weight(x, px), px))
        },
        Inner::Singular(&h),
    ))
}

/// `∫_Ω |∇f(x)|^{p(x)} dx`.
pub fn gradient_modular<T: Real>(
    f: &TestFunction<T>,
    p: &VariableExponent<T>,
    d: &Domain<T>,
    q: &QuadratureSpec<T>,
) -> Result<IntegralResult<T>, QuadratureError> {
    check(d, q)?;
    let prep = Prepared::new(d, Hints::new(Some(f), Some(p)));
    Ok(integrate(
        &prep,
        q,
        &|x: &[T]| Some((pow_abs(f.grad_norm(x), p.eval(x)), ())),
        Inner::None,
    ))
}

/// `∫_Ω |∇f|^p` for a constant exponent.
pub fn classical_rhs<T: Real>(
    f: &TestFunction<T>,
    p: T,
    d: &Domain<T>,
    q: &QuadratureSpec<T>,
) -> Result<IntegralResult<T>, QuadratureError> {
    gradient_modular(f, &VariableExponent::constant(p)?, d, q)
}

/// `∫_Ω |z − x|^{1−n} dx`.
pub fn newton_potential<T: Real>(z: &Point<T>, d: &Domain<T>, q: &QuadratureSpec<T>) -> Result<IntegralResult<T>, QuadratureError> {
    check(d, q)?;
    let x = to_p3(z, d)?;
    let prep = Prepared::new(d, Hints::default());
    Ok(at_point(&prep, q, &x, &|_: &[T]| T::one()))
}

/// `∫_Ω ∫_Ω |f(x) − f(y)|^{p(x)} dy dx`.
pub fn double_modular<T: Real>(
    f: &TestFunction<T>,
    p: &VariableExponent<T>,
    d: &Domain<T>,
    q: &QuadratureSpec<T>,
) -> Result<IntegralResult<T>, QuadratureError> {
    check(d, q)?;
    let prep = Prepared::new(d, Hints::new(Some(f), Some(p)));
    let h = |c: &(T, T), y: &[T]| pow_abs(c.0 - f.eval(y), c.1);
    Ok(integrate(
        &prep,
        q,
        &|x: &[T]| Some((T::one(), (f.eval(x), p.eval(x)))),
        Inner::Regular(&h),
    ))
}

/// `∫_A |f(x) − f(y)|^{p(x)} dy` for a fixed point `x`.
pub fn deviation_at<T: Real>(
    f: &TestFunction<T>,
    p: &VariableExponent<T>,
    x: &Point<T>,
    a: &Domain<T>,
    q: &QuadratureSpec<T>,
) -> Result<IntegralResult<T>, QuadratureError> {
    check(a, q)?;
    to_p3(x, a)?;
    let (fx, px) = (f.eval(x.coords()), p.eval(x.coords()));
    let prep = Prepared::new(a, Hints::new(Some(f), None));
    Ok(integrate(
        &prep,
        q,
        &|y: &[T]| Some((pow_abs(fx - f.eval(y), px), ())),
        Inner::None,
    ))
}

/// `∫_Ω |∇f(z)|^{p(x)} |z − x|^{1−n} dz` for a fixed point `x`.
pub fn kernel_at<T: Real>(
    f: &TestFunction<T>,
    p: &VariableExponent<T>,
    x: &Point<T>,
    d: &Domain<T>,
    q: &QuadratureSpec<T>,
) -> Result<IntegralResult<T>, QuadratureError> {
    check(d, q)?;
    let xp = to_p3(x, d)?;
    let px = p.eval(x.coords());
    let prep = Prepared::new(d, Hints::new(Some(f), None));
    Ok(at_point(&prep, q, &xp, &|z: &[T]| pow_abs(f.grad_norm(z), px)))
}

fn to_p3<T: Real>(x: &Point<T>, d: &Domain<T>) -> Result<P3<T>, QuadratureError> {
    if x.dim() != d.dim() {
        return Err(QuadratureError::DimensionMismatch {
            expected: d.dim(),
            found: x.dim(),
        });
    }
    let mut p = [T::zero(); 3];
    p[..x.dim()].copy_from_slice(x.coords());
    Ok(p)
}
