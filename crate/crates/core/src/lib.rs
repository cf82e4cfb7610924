//! Numerical laboratory for modular Poincaré–Wirtinger inequalities with
//! variable exponents on Lipschitz domains.
//!
//! The crate builds domains out of balls and simple polygons, decomposes
//! polygons into chains of pieces that are star-shaped with respect to balls
//! of a common radius, evaluates the explicit constants attached to such a
//! chain, and checks the resulting inequalities by quadrature.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the
//! `*64` / `*32` aliases below fix the scalar.

pub mod constants;
pub mod decomposition;
pub mod functions;
pub mod geometry;
pub mod io;
pub mod quadrature;
mod scalar;
pub mod verifier;

pub use scalar::{unit_ball_volume, unit_sphere_area, Real};

pub type Point64 = geometry::Point<f64>;
pub type Point32 = geometry::Point<f32>;
pub type Ball64 = geometry::Ball<f64>;
pub type Ball32 = geometry::Ball<f32>;
pub type Polygon64 = geometry::Polygon<f64>;
pub type Polygon32 = geometry::Polygon<f32>;
pub type Domain64 = geometry::Domain<f64>;
pub type Domain32 = geometry::Domain<f32>;
pub type Chain64 = geometry::Chain<f64>;
pub type Chain32 = geometry::Chain<f32>;
pub type Exponent64 = functions::VariableExponent<f64>;
pub type Exponent32 = functions::VariableExponent<f32>;
pub type TestFunction64 = functions::TestFunction<f64>;
pub type TestFunction32 = functions::TestFunction<f32>;
pub type QuadratureSpec64 = quadrature::QuadratureSpec<f64>;
pub type QuadratureSpec32 = quadrature::QuadratureSpec<f32>;
pub type ConstantsReport64 = constants::ConstantsReport<f64>;
pub type ConstantsReport32 = constants::ConstantsReport<f32>;
