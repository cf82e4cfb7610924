//! JSON file formats: polygons, chains, exponents, test functions and
//! quadrature specs. Parse errors carry the line and column.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::functions::{FunctionError, TestFunction, VariableExponent};
use crate::geometry::{order_chain, Ball, Certificate, Chain, Domain, GeometryError, Polygon, Shape, StarPiece, StarSamples};
use crate::quadrature::{QuadratureError, QuadratureSpec};
use crate::Real;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("chain file has no pieces")]
    EmptyChain,
    #[error("nested union bodies cannot be written to a chain file")]
    NestedBody,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Function(#[from] FunctionError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

pub fn read_to_string(path: impl AsRef<Path>) -> Result<String, IoError> {
    let path = path.as_ref();
    std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.to_path_buf(),
        source,
    })
}

fn parse<D: DeserializeOwned>(text: &str) -> Result<D, IoError> {
    Ok(serde_json::from_str(text)?)
}

/// Array of `[x, y]` pairs in counter-clockwise order.
pub fn parse_polygon<T: Real>(text: &str) -> Result<Polygon<T>, IoError> {
    parse(text)
}

pub fn parse_exponent<T: Real>(text: &str) -> Result<VariableExponent<T>, IoError> {
    let p: VariableExponent<T> = parse(text)?;
    p.validate()?;
    Ok(p)
}

pub fn parse_function<T: Real>(text: &str) -> Result<TestFunction<T>, IoError> {
    let f: TestFunction<T> = parse(text)?;
    f.validate()?;
    Ok(f)
}

pub fn parse_quadrature<T: Real>(text: &str) -> Result<QuadratureSpec<T>, IoError> {
    let q: QuadratureSpec<T> = parse(text)?;
    q.validate()?;
    Ok(q)
}

/// Body of a chain piece.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "", tag = "type", rename_all = "snake_case")]
pub enum BodyFile<T: Real> {
    Ball { ball: Ball<T> },
    Polygon { vertices: Polygon<T> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct PieceFile<T: Real> {
    pub body: BodyFile<T>,
    pub kernel: Ball<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

/// On-disk chain: pieces in chain order with their kernel balls.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ChainFile<T: Real> {
    pub pieces: Vec<PieceFile<T>>,
    #[serde(rename = "R")]
    pub radius: T,
    pub lambda: Option<T>,
    /// Input index of each piece before ordering.
    pub order: Vec<usize>,
    #[serde(default)]
    pub overlaps: Vec<T>,
    /// The decomposed polygon, when the union is one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<Polygon<T>>,
}

impl<T: Real> ChainFile<T> {
    pub fn from_chain(chain: &Chain<T>) -> Result<Self, IoError> {
        let pieces = chain
            .pieces()
            .iter()
            .map(|p| {
                Ok(PieceFile {
                    body: body_file(p.body())?,
                    kernel: p.kernel().clone(),
                    certificate: p.certificate().cloned(),
                })
            })
            .collect::<Result<_, IoError>>()?;
        Ok(Self {
            pieces,
            radius: chain.radius(),
            lambda: chain.lambda(),
            order: chain.order().to_vec(),
            overlaps: chain.overlaps().to_vec(),
            omega: chain.omega().as_polygon().cloned(),
        })
    }

    /// Rebuilds the chain, re-certifying every piece with the sample counts
    /// stored in its certificate (or the defaults).
    pub fn into_chain(self) -> Result<Chain<T>, IoError> {
        if self.pieces.is_empty() {
            return Err(IoError::EmptyChain);
        }
        let pieces = self
            .pieces
            .into_iter()
            .map(|p| {
                let body = match p.body {
                    BodyFile::Ball { ball } => Domain::ball(ball),
                    BodyFile::Polygon { vertices } => Domain::polygon(vertices),
                };
                let samples = p.certificate.map_or_else(StarSamples::default, |c| StarSamples {
                    kernel: c.kernel_samples,
                    body: c.body_samples,
                    segment: c.segment_samples,
                    seed: c.seed,
                });
                StarPiece::certify(body, p.kernel, samples)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let chain = order_chain(pieces)?;
        Ok(match self.omega {
            Some(poly) => chain.with_omega(Domain::polygon(poly))?,
            None => chain,
        })
    }
}

fn body_file<T: Real>(d: &Domain<T>) -> Result<BodyFile<T>, IoError> {
    match d.shape() {
        Shape::Ball(b) => Ok(BodyFile::Ball { ball: b.clone() }),
        Shape::Polygon(p) => Ok(BodyFile::Polygon { vertices: p.clone() }),
        Shape::Union(_) => Err(IoError::NestedBody),
    }
}

pub fn parse_chain<T: Real>(text: &str) -> Result<Chain<T>, IoError> {
    parse::<ChainFile<T>>(text)?.into_chain()
}

pub fn chain_to_json<T: Real>(chain: &Chain<T>) -> Result<String, IoError> {
    Ok(serde_json::to_string_pretty(&ChainFile::from_chain(chain)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    #[test]
    fn polygon_file() {
        let p: Polygon<f64> = parse_polygon("[[0,0],[1,0],[1,1],[0,1]]").unwrap();
        assert_eq!(p.area(), 1.0);
        // clockwise input is rejected
        assert!(parse_polygon::<f64>("[[0,0],[0,1],[1,1],[1,0]]").is_err());
    }

    #[test]
    fn errors_have_positions() {
        let e = parse_polygon::<f64>("[[0,0],\n[1,0],\n[1,1]").unwrap_err();
        match e {
            IoError::Json { line, .. } => assert_eq!(line, 3),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn descriptors_are_validated() {
        assert!(parse_exponent::<f64>(r#"{"type":"constant","p":0.5}"#).is_err());
        assert!(parse_function::<f64>(r#"{"type":"radial_bump","alpha":1.5,"k":3}"#).is_err());
        assert!(parse_quadrature::<f64>(r#"{"outer":0}"#).is_err());
        let q: QuadratureSpec<f64> = parse_quadrature("{}").unwrap();
        assert_eq!(q, QuadratureSpec::default());
    }

    #[test]
    fn chain_round_trip() {
        let a = StarPiece::certify(
            Domain::ball(Ball::unit(2)),
            Ball::new(Point::xy(0.0, 0.0), 0.5).unwrap(),
            StarSamples::default(),
        )
        .unwrap();
        let b = StarPiece::certify(
            Domain::ball(Ball::new(Point::xy(1.0, 0.0), 1.0).unwrap()),
            Ball::new(Point::xy(1.0, 0.0), 0.5).unwrap(),
            StarSamples::default(),
        )
        .unwrap();
        let chain = order_chain(vec![a, b]).unwrap();
        let json = chain_to_json(&chain).unwrap();
        assert!(json.contains("\"R\""));
        let back: Chain<f64> = parse_chain(&json).unwrap();
        assert_eq!(back, chain);
    }
}
