//! Rayleigh quotients of `f_λ = λη` for a radial bump `η` under a radially
//! increasing exponent. The gradient modular over the deviation modular
//! behaves like `λ^{𝗉(1)−𝗉(1−α)}` or faster, so no inequality without the
//! kernel can hold; the kernel quotient stays above `1/C`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::VerifyError;
use crate::constants::constant_c;
use crate::functions::{TestFunction, VariableExponent};
use crate::geometry::{Ball, Chain, Domain, Point, Shape};
use crate::quadrature::{deviation_modular, gradient_modular, kernel_rhs, mean_value, modular_lhs, QuadratureSpec};
use crate::Real;

/// Points used for the slope fit, taken from the small-λ end of the grid.
const FIT_POINTS: usize = 4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct SweepParams<T: Real = f64> {
    /// Width of the transition annulus `B_{1+α} ∖ B₁`.
    pub alpha: T,
    /// Smoothstep order of the bump.
    #[serde(default = "default_order")]
    pub k: u32,
    pub profile: VariableExponent<T>,
    /// Strictly decreasing values in `(0, 1)`.
    pub lambdas: Vec<T>,
}

fn default_order() -> u32 {
    3
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct SweepReport<T: Real = f64> {
    pub alpha: T,
    pub k: u32,
    pub lambdas: Vec<T>,
    /// `∫_Ω |∇f_λ|^{p(x)}`.
    pub numerators: Vec<T>,
    /// `∫_Ω |f_λ − ⟨f_λ⟩|^{p(x)}`.
    pub denominators: Vec<T>,
    pub quotients: Vec<T>,
    /// Numerator over the deviation modular restricted to `B_{1−α}`.
    pub bound_quotients_inner: Vec<T>,
    /// Numerator over the deviation modular restricted to `B₁`.
    pub bound_quotients_unit: Vec<T>,
    /// `∫∫ |∇f_λ(z)|^{p(x)}/|z−x|^{n−1}` over the denominator.
    pub kernel_quotients: Vec<T>,
    /// Combined relative error of each kernel quotient.
    pub kernel_quotient_errors: Vec<T>,
    /// Least-squares slope of `log quotient` against `log λ`.
    pub fitted_slope: T,
    /// `𝗉(1) − 𝗉(1−α)`.
    pub theoretical_exponent: T,
    pub monotone: bool,
    pub min_kernel_quotient: T,
    pub inverse_constant: T,
    pub kernel_bound_holds: bool,
}

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope<T: Real>(xs: &[T], ys: &[T]) -> T {
    let n = T::count(xs.len());
    let mx = xs.iter().copied().sum::<T>() / n;
    let my = ys.iter().copied().sum::<T>() / n;
    let (sxy, sxx) = xs.iter().zip(ys).fold((T::zero(), T::zero()), |(a, b), (&x, &y)| {
        (a + (x - mx) * (y - my), b + (x - mx) * (x - mx))
    });
    sxy / sxx
}

fn contains_ball<T: Real>(d: &Domain<T>, b: &Ball<T>) -> Result<bool, VerifyError> {
    let eps = d.boundary_tolerance();
    match d.shape() {
        Shape::Ball(outer) => Ok(b.inside_ball(outer, eps)),
        Shape::Polygon(p) => Ok(p.contains_ball(b, eps)),
        Shape::Union(_) => Err(VerifyError::InvalidInput("the sweep needs a ball or polygon domain")),
    }
}

fn radial_about_origin<T: Real>(p: &VariableExponent<T>) -> bool {
    match p {
        VariableExponent::Constant { .. } => true,
        VariableExponent::RadialIncreasing { center, .. } => center.iter().all(|c| *c == T::zero()),
        VariableExponent::PiecewiseConstant { .. } => false,
    }
}

pub fn counterexample_sweep<T: Real>(
    params: &SweepParams<T>,
    chain: &Chain<T>,
    q: &QuadratureSpec<T>,
) -> Result<SweepReport<T>, VerifyError> {
    let SweepParams { alpha, k, profile, lambdas } = params;
    let (alpha, k) = (*alpha, *k);
    if lambdas.len() < FIT_POINTS {
        return Err(VerifyError::GridTooCoarse(lambdas.len()));
    }
    if lambdas.windows(2).any(|w| !(w[1] < w[0])) || lambdas.iter().any(|&l| !(l > T::zero() && l < T::one())) {
        return Err(VerifyError::InvalidInput("λ grid must be strictly decreasing in (0, 1)"));
    }
    if !radial_about_origin(profile) {
        return Err(VerifyError::InvalidInput("exponent must be radial about the origin"));
    }
    profile.validate().map_err(crate::quadrature::QuadratureError::from)?;
    let omega = chain.omega();
    let n = omega.dim();
    let origin = Point::origin(n);
    let outer = Ball::new(origin.clone(), T::one() + alpha)?;
    if !contains_ball(omega, &outer)? {
        return Err(VerifyError::InvalidInput("domain must contain the ball of radius 1 + α"));
    }
    let eta = TestFunction::bump(alpha, k).map_err(crate::quadrature::QuadratureError::from)?;
    let inner = Domain::ball(Ball::new(origin.clone(), T::one() - alpha)?);
    let unit = Domain::ball(Ball::new(origin, T::one())?);
    let eta_mean = mean_value(&eta, omega, q)?.value;
    let constants = constant_c(chain, profile)?;
    let inverse_constant = T::one() / constants.c;

    let at = |r: T| {
        let mut x = vec![T::zero(); n];
        x[0] = r;
        profile.eval(&x)
    };
    let theoretical_exponent = at(T::one()) - at(T::one() - alpha);

    type Row<T> = (T, T, T, T, T, T);
    let rows: Vec<Row<T>> = lambdas
        .par_iter()
        .map(|&lambda| {
            let f = TestFunction::scaled(lambda, eta.clone()).map_err(crate::quadrature::QuadratureError::from)?;
            let centre = lambda * eta_mean;
            let num = gradient_modular(&f, profile, omega, q)?;
            let den = modular_lhs(&f, profile, omega, q)?;
            let den_inner = deviation_modular(&f, profile, centre, &inner, q)?;
            let den_unit = deviation_modular(&f, profile, centre, &unit, q)?;
            let kern = kernel_rhs(&f, profile, omega, q)?;
            let rel = kern.error / kern.value + den.error / den.value;
            Ok((
                num.value,
                den.value,
                num.value / den_inner.value,
                num.value / den_unit.value,
                kern.value / den.value,
                rel,
            ))
        })
        .collect::<Result<_, VerifyError>>()?;

    let numerators: Vec<T> = rows.iter().map(|r| r.0).collect();
    let denominators: Vec<T> = rows.iter().map(|r| r.1).collect();
    let quotients: Vec<T> = rows.iter().map(|r| r.0 / r.1).collect();
    let kernel_quotients: Vec<T> = rows.iter().map(|r| r.4).collect();
    let kernel_quotient_errors: Vec<T> = rows.iter().map(|r| r.5).collect();
    let tail = lambdas.len() - FIT_POINTS;
    let xs: Vec<T> = lambdas[tail..].iter().map(|l| l.ln()).collect();
    let ys: Vec<T> = quotients[tail..].iter().map(|v| v.ln()).collect();
    let kernel_bound_holds = kernel_quotients
        .iter()
        .zip(&kernel_quotient_errors)
        .all(|(&kq, &rel)| kq * (T::one() + rel) >= inverse_constant);
    Ok(SweepReport {
        alpha,
        k,
        lambdas: lambdas.clone(),
        monotone: quotients.windows(2).all(|w| w[1] < w[0]),
        fitted_slope: fit_slope(&xs, &ys),
        min_kernel_quotient: kernel_quotients.iter().copied().fold(T::infinity(), T::min),
        numerators,
        denominators,
        quotients,
        bound_quotients_inner: rows.iter().map(|r| r.2).collect(),
        bound_quotients_unit: rows.iter().map(|r| r.3).collect(),
        kernel_quotients,
        kernel_quotient_errors,
        theoretical_exponent,
        inverse_constant,
        kernel_bound_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_a_power_law() {
        let xs: Vec<f64> = [1e-1, 1e-2, 1e-3, 1e-4].iter().map(|v: &f64| v.ln()).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 0.5 * x + 2.0).collect();
        assert!((fit_slope(&xs, &ys) - 0.5).abs() < 1e-12);
    }
}
