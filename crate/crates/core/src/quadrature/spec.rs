use serde::{Deserialize, Serialize};

use super::QuadratureError;
use crate::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Gauss–Legendre on geometric cells; `outer`/`inner` are rule orders and
    /// the error is the difference to the half-order rule.
    TensorGaussOnCells,
    /// Plain Monte Carlo; `outer` points, `inner` rays per point.
    MonteCarlo,
    /// Jittered Monte Carlo over independent replicates.
    StratifiedMc,
}

/// Treatment of the kernel `|z − x|^{1−n}` around the outer point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "", tag = "type", rename_all = "snake_case")]
pub enum Singular<T: Real> {
    /// Polar coordinates about `x`, with an extra radial break at
    /// `fraction × (|Ω| / outer nodes)^{1/n}`.
    PolarLocal { fraction: T },
    /// Signed fan of triangles with apex `x` over the polygon edges, each
    /// mapped to the unit square so the Jacobian cancels the kernel. Falls
    /// back to polar coordinates on non-polygonal domains.
    DuffySplit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "", default)]
pub struct QuadratureSpec<T: Real = f64> {
    pub method: Method,
    pub outer: usize,
    pub inner: usize,
    pub singular: Singular<T>,
    pub seed: u64,
    /// Gauss results are refined once when the relative error estimate
    /// exceeds this.
    pub tolerance: T,
}

impl<T: Real> Default for QuadratureSpec<T> {
    fn default() -> Self {
        Self::gauss(16)
    }
}

impl<T: Real> QuadratureSpec<T> {
    pub fn gauss(order: usize) -> Self {
        Self {
            method: Method::TensorGaussOnCells,
            outer: order,
            inner: order,
            singular: Singular::PolarLocal { fraction: T::one() },
            seed: 0,
            tolerance: T::lit(1e-3),
        }
    }

    pub fn monte_carlo(outer: usize, inner: usize, seed: u64) -> Self {
        Self {
            method: Method::MonteCarlo,
            outer,
            inner,
            singular: Singular::PolarLocal { fraction: T::one() },
            seed,
            tolerance: T::lit(1e-2),
        }
    }

    pub fn stratified(outer: usize, inner: usize, seed: u64) -> Self {
        Self {
            method: Method::StratifiedMc,
            ..Self::monte_carlo(outer, inner, seed)
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_singular(mut self, singular: Singular<T>) -> Self {
        self.singular = singular;
        self
    }

    /// Same spec with twice the outer budget.
    pub fn doubled(&self) -> Self {
        let mut s = self.clone();
        s.outer *= 2;
        s
    }

    pub fn is_monte_carlo(&self) -> bool {
        self.method != Method::TensorGaussOnCells
    }

    pub fn validate(&self) -> Result<(), QuadratureError> {
        if self.outer == 0 || self.inner == 0 {
            return Err(QuadratureError::InvalidSpec("sample counts must be positive"));
        }
        if !(self.tolerance > T::zero() && self.tolerance < T::one()) {
            return Err(QuadratureError::InvalidSpec("tolerance must lie in (0, 1)"));
        }
        if let Singular::PolarLocal { fraction } = self.singular {
            if !(fraction > T::zero()) || !fraction.is_finite() {
                return Err(QuadratureError::InvalidSpec("patch fraction must be positive"));
            }
        }
        if self.method == Method::StratifiedMc && self.outer < super::sampling::REPLICATES {
            return Err(QuadratureError::InvalidSpec("stratified sampling needs at least 8 outer samples"));
        }
        Ok(())
    }
}

/// A quadrature value with an error estimate: the standard error for Monte
/// Carlo, the difference to the coarser rule for Gauss.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct IntegralResult<T: Real = f64> {
    pub value: T,
    pub error: T,
    pub samples: u64,
}

impl<T: Real> IntegralResult<T> {
    pub fn exact(value: T) -> Self {
        Self {
            value,
            error: T::zero(),
            samples: 0,
        }
    }

    pub fn relative_error(&self) -> T {
        if self.value == T::zero() {
            if self.error == T::zero() {
                T::zero()
            } else {
                T::infinity()
            }
        } else {
            self.error / self.value.abs()
        }
    }
}
