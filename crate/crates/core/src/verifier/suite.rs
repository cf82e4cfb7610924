//! The standard fixture grid: three chains, three exponents, four functions.

use std::sync::Arc;

use rayon::prelude::*;

use super::{verify_main, VerificationReport, VerifyError};
use crate::decomposition::{decompose, DecompositionParams};
use crate::functions::{Region, TestFunction, TrigTerm, VariableExponent};
use crate::geometry::{order_chain, Ball, Chain, Domain, Point, Polygon, StarPiece, StarSamples};
use crate::quadrature::{QuadratureError, QuadratureSpec};
use crate::Real;

#[derive(Clone, Debug)]
pub struct Fixture<T: Real = f64> {
    /// `chain/exponent/function`.
    pub id: String,
    pub chain: Arc<Chain<T>>,
    pub p: VariableExponent<T>,
    pub f: TestFunction<T>,
}

impl<T: Real> Fixture<T> {
    pub fn verify(&self, q: &QuadratureSpec<T>) -> Result<VerificationReport<T>, VerifyError> {
        let (mut report, _) = verify_main(&self.chain, &self.p, &self.f, q)?;
        report.fixture = self.id.clone();
        Ok(report)
    }
}

fn disk_piece<T: Real>(cx: f64, cy: f64) -> Result<StarPiece<T>, VerifyError> {
    let c = Point::xy(T::lit(cx), T::lit(cy));
    Ok(StarPiece::certify(
        Domain::ball(Ball::new(c.clone(), T::one())?),
        Ball::new(c, T::lit(0.5))?,
        StarSamples::default(),
    )?)
}

/// The L-shaped hexagon `[0,2]² ∖ (1,2]²`.
pub fn l_shape<T: Real>() -> Polygon<T> {
    let v = [[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0], [1.0, 2.0], [0.0, 2.0]];
    Polygon::new(v.iter().map(|&[x, y]| [T::lit(x), T::lit(y)]).collect()).expect("valid hexagon")
}

/// Unit disk with kernel `B_{1/2}`; the L-shape split in two; three unit
/// disks centred 1.2 apart on the x-axis.
pub fn suite_chains<T: Real>() -> Result<Vec<(&'static str, Arc<Chain<T>>)>, VerifyError> {
    let disk = order_chain(vec![disk_piece(0.0, 0.0)?])?;
    let l = decompose(&l_shape(), &DecompositionParams::with_pieces(2))
        .map_err(|_| VerifyError::InvalidInput("L-shape decomposition failed"))?;
    let three = order_chain(vec![disk_piece(0.0, 0.0)?, disk_piece(1.2, 0.0)?, disk_piece(2.4, 0.0)?])?;
    Ok(vec![("disk", Arc::new(disk)), ("l_shape", Arc::new(l)), ("three_disks", Arc::new(three))])
}

/// Constant 2, radial `1 + |x|`, and `{1.2 left of the bounding-box centre, 3 right}`.
pub fn suite_exponents<T: Real>(omega: &Domain<T>) -> Result<Vec<(&'static str, VariableExponent<T>)>, VerifyError> {
    let (lo, hi) = omega.bounding_box();
    let mid = (lo[0] + hi[0]) / T::lit(2.0);
    let piecewise = VariableExponent::PiecewiseConstant {
        regions: vec![(
            Region::HalfSpace {
                normal: vec![T::one(), T::zero()],
                offset: mid,
            },
            T::lit(1.2),
        )],
        default: T::lit(3.0),
    };
    piecewise.validate().map_err(QuadratureError::from)?;
    Ok(vec![
        ("const2", VariableExponent::constant(T::lit(2.0)).map_err(QuadratureError::from)?),
        ("radial", VariableExponent::radial_affine(&[T::zero(), T::zero()], T::one(), T::one()).map_err(QuadratureError::from)?),
        ("piecewise", piecewise),
    ])
}

/// `x`, `x² − xy + y³/2`, a trigonometric product, and `0.5·η + 0.3x`.
pub fn suite_functions<T: Real>() -> Result<Vec<(&'static str, TestFunction<T>)>, VerifyError> {
    let l = T::lit;
    let poly = TestFunction::combination(vec![
        (T::one(), TestFunction::monomial(T::one(), &[2, 0])),
        (-T::one(), TestFunction::monomial(T::one(), &[1, 1])),
        (l(0.5), TestFunction::monomial(T::one(), &[0, 3])),
    ]);
    let trig = TestFunction::TrigProduct {
        terms: vec![TrigTerm {
            amplitude: T::one(),
            wave: vec![l(1.3), l(0.7)],
            phase: vec![l(0.2), l(0.5)],
        }],
    };
    let bump = TestFunction::bump(l(0.5), 3).map_err(QuadratureError::from)?;
    let mixed = TestFunction::combination(vec![(l(0.5), bump), (l(0.3), TestFunction::linear(0, T::one()))]);
    Ok(vec![
        ("linear", TestFunction::linear(0, T::one())),
        ("polynomial", poly),
        ("trig", trig),
        ("bump_mix", mixed),
    ])
}

/// All 36 fixtures in id order.
pub fn standard_suite<T: Real>() -> Result<Vec<Fixture<T>>, VerifyError> {
    let functions = suite_functions()?;
    let mut out = Vec::new();
    for (cname, chain) in suite_chains()? {
        for (pname, p) in suite_exponents(chain.omega())? {
            for (fname, f) in &functions {
                out.push(Fixture {
                    id: format!("{cname}/{pname}/{fname}"),
                    chain: Arc::clone(&chain),
                    p: p.clone(),
                    f: f.clone(),
                });
            }
        }
    }
    Ok(out)
}

/// Runs `verify_main` on every fixture concurrently; reports keep fixture order.
pub fn verify_suite<T: Real>(fixtures: &[Fixture<T>], q: &QuadratureSpec<T>) -> Result<Vec<VerificationReport<T>>, VerifyError> {
    fixtures.par_iter().map(|fx| fx.verify(q)).collect()
}
