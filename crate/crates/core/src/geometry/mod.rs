//! Domains built from balls and simple polygons, star-shapedness
//! certificates, and chains of overlapping star-shaped pieces.

mod ball;
mod chain;
mod domain;
mod interval;
mod point;
mod polygon;
mod slab;
mod star;

pub use ball::Ball;
pub use chain::{order_chain, Chain};
pub use domain::{hull_diameter, overlap_measure, Domain, Shape, GEO_EPS};
pub use interval::IntervalSet;
pub use point::Point;
pub use polygon::{chebyshev_ball, Polygon};
pub use slab::{region_measure, Region};
pub use star::{check_starshaped, segment_in_domain, Certificate, StarCheck, StarPiece, StarSamples};

pub(crate) use polygon::cross;
pub(crate) use slab::{boundary_features, slab_rule, Features};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("a point needs at least one coordinate")]
    EmptyPoint,
    #[error("coordinates must be finite")]
    NonFinite,
    #[error("radius must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("degenerate polygon: {0}")]
    DegeneratePolygon(&'static str),
    #[error("body is not star-shaped with respect to the kernel ball")]
    NotStarShaped,
    #[error("kernel ball is not contained in the body")]
    KernelNotContained,
    #[error("pieces do not form a connected union")]
    DisconnectedUnion,
    #[error("a union needs at least one piece")]
    EmptyUnion,
    #[error("nested unions are not supported")]
    NestedUnion,
    #[error("kernel radii differ: {min} vs {max}")]
    UnequalKernelRadii { min: f64, max: f64 },
    #[error("operation not supported in dimension {0}")]
    UnsupportedDimension(usize),
}
