//! Explicit constants of the modular Poincaré–Wirtinger inequality for a
//! chain of star pieces.
//!
//! With `κ = (n+1)ω_n diamⁿ`, `κ_p = 2^{p₊}κ/λ` and `α̃ = 2^{p₊}κ/(ω_nRⁿ)`,
//! the chain constants obey `β′₁ = 2α̃(κ_p+1)`, `β′ᵢ = (κ_p+1)(β′ᵢ₋₁+α̃)` and
//! the final constant is
//! `C = λ/(ω_nRⁿ) · (1 + 2^{p₊+1}κ/λ)^N · max{diam, 1}^{n+p₊−1} / (n|Ω|)`.
//! A single piece uses `C = α · max{diam, 1}^{n+p₊−1} / (n|Ω|)` instead.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::functions::VariableExponent;
use crate::geometry::{overlap_measure, Ball, Chain, Domain, GeometryError};
use crate::{unit_ball_volume, Real};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstantsError {
    #[error("the two pieces do not overlap")]
    EmptyOverlap,
    #[error("constant must be positive and finite, got {0}")]
    NonPositive(f64),
    #[error("invalid input: {0}")]
    InvalidInput(&'static str),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// `κ(D) = (n+1)·ω_n·diam(D)ⁿ`.
pub fn kappa<T: Real>(d: &Domain<T>) -> T {
    kappa_from(d.dim(), d.diameter())
}

pub fn kappa_from<T: Real>(n: usize, diam: T) -> T {
    T::count(n + 1) * unit_ball_volume::<T>(n) * diam.powi(n as i32)
}

/// `α = 2^{p₊}·κ(D)/|S|`.
pub fn alpha<T: Real>(p_plus: T, s: &Ball<T>, d: &Domain<T>) -> T {
    T::lit(2.0).powf(p_plus) * kappa(d) / s.measure()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Betas<T: Real = f64> {
    pub beta: T,
    pub beta_prime: T,
    /// `α_{Ω,i} = 2^{p₊}κ(Ω)/|S_i|`.
    pub alpha_omega: [T; 2],
    pub overlap: T,
}

/// Two-piece constants `β` and `β′` from their ingredients.
pub fn betas_from<T: Real>(p_plus: T, kappa_omega: T, overlap: T, s1: T, s2: T) -> Result<Betas<T>, ConstantsError> {
    if !(overlap > T::zero()) {
        return Err(ConstantsError::EmptyOverlap);
    }
    let two = T::lit(2.0);
    let a1 = two.powf(p_plus) * kappa_omega / s1;
    let a2 = two.powf(p_plus) * kappa_omega / s2;
    let beta = two.powf(p_plus - T::one()) * kappa_omega / overlap * (a1 + a2);
    let beta_prime = (two.powf(p_plus) * kappa_omega / overlap + T::one()) * (a1 + a2);
    Ok(Betas {
        beta,
        beta_prime,
        alpha_omega: [a1, a2],
        overlap,
    })
}

/// `β` and `β′` for pieces `D₁, D₂` with kernel balls `S₁, S₂` inside `Ω`.
pub fn betas<T: Real>(
    p_plus: T,
    s1: &Ball<T>,
    s2: &Ball<T>,
    d1: &Domain<T>,
    d2: &Domain<T>,
    omega: &Domain<T>,
) -> Result<Betas<T>, ConstantsError> {
    let (overlap, _) = overlap_measure(d1, d2)?;
    betas_from(p_plus, kappa(omega), overlap, s1.measure(), s2.measure())
}

/// `β′₁, …, β′_{N−1}` by iteration.
pub fn chain_recurrence<T: Real>(kappa_p: T, alpha_tilde: T, n: usize) -> Vec<T> {
    let k1 = kappa_p + T::one();
    let mut out = Vec::with_capacity(n.saturating_sub(1));
    if n < 2 {
        return out;
    }
    let mut b = k1 * (alpha_tilde + alpha_tilde);
    out.push(b);
    for _ in 2..n {
        b = k1 * (b + alpha_tilde);
        out.push(b);
    }
    out
}

/// Closed form `(α̃/κ_p)((2κ_p+1)(κ_p+1)^i − (κ_p+1))` of the recurrence.
pub fn recurrence_closed_form<T: Real>(kappa_p: T, alpha_tilde: T, i: usize) -> T {
    let k1 = kappa_p + T::one();
    alpha_tilde / kappa_p * ((kappa_p + kappa_p + T::one()) * k1.powi(i as i32) - k1)
}

/// Upper bound `(α̃/κ_p)(1+2κ_p)^N` for `β′_{N−1}`.
pub fn recurrence_bound<T: Real>(kappa_p: T, alpha_tilde: T, n: usize) -> T {
    alpha_tilde / kappa_p * (T::one() + kappa_p + kappa_p).powi(n as i32)
}

/// Scalar inputs of the constant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ChainParams<T: Real = f64> {
    pub dim: usize,
    pub pieces: usize,
    pub p_plus: T,
    pub diameter: T,
    pub measure: T,
    pub radius: T,
    /// `None` for a single piece.
    pub lambda: Option<T>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ConstantsReport<T: Real = f64> {
    pub dim: usize,
    pub pieces: usize,
    pub p_plus: T,
    pub diameter: T,
    pub measure: T,
    pub radius: T,
    pub omega_n: T,
    pub kappa: T,
    pub lambda: Option<T>,
    /// `α(p₊, S_i, D_i)` per piece, in chain order.
    pub alpha: Vec<T>,
    pub alpha_tilde: T,
    pub kappa_p: Option<T>,
    pub beta_prime: Vec<T>,
    /// `(α̃/κ_p)(1+2κ_p)^N`, or `α` for a single piece.
    pub chain_constant: T,
    /// `λ/(ω_nRⁿ)·(1+2^{p₊+1}κ/λ)^N`; equals `chain_constant` algebraically.
    pub leading_factor: Option<T>,
    /// `max{diam, 1}^{n+p₊−1}/n`.
    pub diam_factor: T,
    /// `max_{1 ≤ q ≤ p₊} diam^{n+q−1}/(n+q−1)`, the sharper radial factor.
    pub sharp_diam_factor: T,
    #[serde(rename = "C")]
    pub c: T,
    /// `chain_constant · diam_factor / |Ω|`.
    pub c_from_chain: T,
    #[serde(rename = "C_tilde")]
    pub c_tilde: T,
    /// `C·nω_n^{1−1/n}|Ω|^{1/n}`, from the exact sphere measure.
    #[serde(rename = "C_tilde_sharp")]
    pub c_tilde_sharp: T,
}

/// Assembles every constant from scalar inputs; `alpha` lists the per-piece
/// values (empty uses `α̃` for each piece).
pub fn assemble<T: Real>(params: &ChainParams<T>, alpha: Vec<T>) -> Result<ConstantsReport<T>, ConstantsError> {
    let ChainParams {
        dim: n,
        pieces,
        p_plus,
        diameter,
        measure,
        radius,
        lambda,
    } = *params;
    if pieces == 0 || n == 0 {
        return Err(ConstantsError::InvalidInput("empty chain"));
    }
    if !(p_plus >= T::one()) || !(diameter > T::zero()) || !(measure > T::zero()) || !(radius > T::zero()) {
        return Err(ConstantsError::InvalidInput("p₊ ≥ 1 and positive geometry required"));
    }
    let two = T::lit(2.0);
    let omega_n: T = unit_ball_volume(n);
    let kappa = kappa_from(n, diameter);
    let s = omega_n * radius.powi(n as i32);
    let alpha_tilde = two.powf(p_plus) * kappa / s;
    let alpha = if alpha.is_empty() { vec![alpha_tilde; pieces] } else { alpha };
    let nn = T::count(n);
    let diam_factor = diameter.max(T::one()).powf(nn + p_plus - T::one()) / nn;
    let radial = |q: T| diameter.powf(nn + q - T::one()) / (nn + q - T::one());
    let sharp_diam_factor = radial(T::one()).max(radial(p_plus));

    let (kappa_p, beta_prime, chain_constant, leading_factor) = if pieces == 1 {
        (None, Vec::new(), alpha[0], None)
    } else {
        let lambda = lambda.ok_or(ConstantsError::InvalidInput("λ required for several pieces"))?;
        if !(lambda > T::zero()) {
            return Err(ConstantsError::EmptyOverlap);
        }
        let kp = two.powf(p_plus) * kappa / lambda;
        let lead = lambda / s * (T::one() + two.powf(p_plus + T::one()) * kappa / lambda).powi(pieces as i32);
        (
            Some(kp),
            chain_recurrence(kp, alpha_tilde, pieces),
            recurrence_bound(kp, alpha_tilde, pieces),
            Some(lead),
        )
    };
    let c_from_chain = chain_constant * diam_factor / measure;
    let c = leading_factor.map_or(c_from_chain, |l| l * diam_factor / measure);
    if !(c > T::zero()) || !c.is_finite() {
        return Err(ConstantsError::NonPositive(c.as_f64()));
    }
    let root = measure.powf(T::one() / nn);
    let shape = omega_n.powf(T::one() - T::one() / nn) * root;
    Ok(ConstantsReport {
        dim: n,
        pieces,
        p_plus,
        diameter,
        measure,
        radius,
        omega_n,
        kappa,
        lambda: if pieces == 1 { None } else { lambda },
        alpha,
        alpha_tilde,
        kappa_p,
        beta_prime,
        chain_constant,
        leading_factor,
        diam_factor,
        sharp_diam_factor,
        c,
        c_from_chain,
        c_tilde: c * T::count(n + 1) * shape,
        c_tilde_sharp: c * nn * shape,
    })
}

/// The constant `C` and its ingredients for a chain and an exponent.
pub fn constant_c<T: Real>(chain: &Chain<T>, p: &VariableExponent<T>) -> Result<ConstantsReport<T>, ConstantsError> {
    let omega = chain.omega();
    let p_plus = p.p_plus(omega);
    let params = ChainParams {
        dim: omega.dim(),
        pieces: chain.len(),
        p_plus,
        diameter: omega.diameter(),
        measure: omega.measure(),
        radius: chain.radius(),
        lambda: chain.lambda(),
    };
    let alphas = chain
        .pieces()
        .iter()
        .map(|pc| alpha(p_plus, pc.kernel(), pc.body()))
        .collect();
    assemble(&params, alphas)
}

/// `C̃ = C·(n+1)·ω_n^{1−1/n}·|Ω|^{1/n}`.
pub fn constant_c_tilde<T: Real>(report: &ConstantsReport<T>, omega: &Domain<T>) -> Result<T, ConstantsError> {
    if !(report.c > T::zero()) || !report.c.is_finite() {
        return Err(ConstantsError::NonPositive(report.c.as_f64()));
    }
    let n = omega.dim();
    let nn = T::count(n);
    let w: T = unit_ball_volume(n);
    Ok(report.c * T::count(n + 1) * w.powf(T::one() - T::one() / nn) * omega.measure().powf(T::one() / nn))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use std::f64::consts::PI;

    #[test]
    fn kappa_values() {
        let disk = Domain::ball(Ball::<f64>::unit(2));
        assert!((kappa(&disk) - 12.0 * PI).abs() < 1e-12);
        let sq = Domain::polygon(crate::geometry::Polygon::rectangle(0.0, 0.0, 1.0, 1.0).unwrap());
        assert!((kappa(&sq) - 6.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn alpha_values() {
        let disk = Domain::ball(Ball::<f64>::unit(2));
        let s = Ball::new(Point::origin(2), 0.5).unwrap();
        assert!((alpha(2.0, &s, &disk) - 192.0).abs() < 1e-12);
        assert!((alpha(1.0, &Ball::unit(2), &disk) - 24.0).abs() < 1e-12);
    }

    #[test]
    fn recurrence_by_hand() {
        assert_eq!(chain_recurrence(1.0, 1.0, 4), vec![4.0, 10.0, 22.0]);
        assert_eq!(chain_recurrence(1.0, 1.0, 2), vec![4.0]);
        assert!(chain_recurrence(1.0, 1.0, 1).is_empty());
        assert_eq!(recurrence_bound(1.0, 1.0, 3), 27.0);
    }

    #[test]
    fn empty_overlap() {
        assert_eq!(betas_from(1.0, 1.0, 0.0, 1.0, 1.0), Err(ConstantsError::EmptyOverlap));
    }

    #[test]
    fn rejects_bad_inputs() {
        let mut p = ChainParams {
            dim: 2,
            pieces: 2,
            p_plus: 2.0,
            diameter: 2.0,
            measure: 3.0,
            radius: 0.5,
            lambda: None,
        };
        assert!(assemble(&p, vec![]).is_err());
        p.lambda = Some(0.0);
        assert_eq!(assemble(&p, vec![]), Err(ConstantsError::EmptyOverlap));
        p.lambda = Some(1.0);
        p.p_plus = 0.5;
        assert!(assemble(&p, vec![]).is_err());
    }
}
