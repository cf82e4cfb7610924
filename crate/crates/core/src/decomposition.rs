//! Splitting a simple polygon into a chain of pieces that are star-shaped
//! with respect to balls of one common radius.
//!
//! The polygon is triangulated and adjacent groups of triangles are merged
//! greedily while the merged group keeps a large kernel ball. Adjacent
//! groups then overlap through a thin triangle glued across a shared edge.
//! Kernels are the Chebyshev balls of the pieces' geometric kernels, shrunk
//! to the smallest radius without moving their centres.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{order_chain, Ball, Chain, Domain, GeometryError, Polygon, StarPiece, StarSamples};
use crate::Real;

/// A piece with glued slivers must keep this fraction of its kernel radius.
const SLIVER_KEEP: f64 = 0.75;
/// Halvings of the sliver height before a direction is given up.
const SLIVER_STEPS: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DecompositionParams {
    /// Merging stops once this many pieces remain.
    pub piece_hint: usize,
    /// Kernel radii below this fraction of the diameter are rejected.
    pub min_radius_fraction: f64,
    /// Body samples per piece in the star-shapedness certificate.
    pub mc_budget: usize,
    pub seed: u64,
}

impl Default for DecompositionParams {
    fn default() -> Self {
        Self {
            piece_hint: 1,
            min_radius_fraction: 0.01,
            mc_budget: 256,
            seed: StarSamples::default().seed,
        }
    }
}

impl DecompositionParams {
    pub fn with_pieces(piece_hint: usize) -> Self {
        Self {
            piece_hint,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), DecompositionError> {
        if self.piece_hint == 0 {
            return Err(DecompositionError::InvalidParams("piece hint must be positive"));
        }
        if !(self.min_radius_fraction > 0.0 && self.min_radius_fraction <= 1.0) {
            return Err(DecompositionError::InvalidParams("minimum radius fraction must lie in (0, 1]"));
        }
        if self.mc_budget == 0 {
            return Err(DecompositionError::InvalidParams("sample budget must be positive"));
        }
        Ok(())
    }

    fn samples(&self) -> StarSamples {
        StarSamples {
            body: self.mc_budget,
            seed: self.seed,
            ..StarSamples::default()
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecompositionError {
    #[error("kernel ball radius {radius} is below the required {required}")]
    DegenerateKernel { radius: f64, required: f64 },
    #[error("invalid decomposition parameters: {0}")]
    InvalidParams(&'static str),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Largest ball inside the geometric kernel, or `None` if the kernel is
/// empty.
pub fn kernel_ball<T: Real>(poly: &Polygon<T>) -> Option<Ball<T>> {
    poly.kernel_ball()
}

pub fn decompose<T: Real>(poly: &Polygon<T>, params: &DecompositionParams) -> Result<Chain<T>, DecompositionError> {
    params.validate()?;
    let poly = poly.without_collinear();
    let min_r = poly.diameter() * T::lit(params.min_radius_fraction);
    let samples = params.samples();

    if params.piece_hint == 1 {
        if let Some(ball) = kernel_ball(&poly).filter(|b| b.radius() >= min_r) {
            let piece = StarPiece::certify(Domain::polygon(poly.clone()), ball, samples)?;
            return Ok(order_chain(vec![piece])?);
        }
    }

    let mesh = Mesh::from_polygon(&poly);
    let groups = merge(&mesh, params.piece_hint, min_r);
    for g in &groups {
        if g.radius < min_r {
            return Err(DecompositionError::DegenerateKernel {
                radius: g.radius.as_f64(),
                required: min_r.as_f64(),
            });
        }
    }
    let polys = if groups.len() == 1 {
        vec![poly.clone()]
    } else {
        add_slivers(mesh, &groups, min_r)
    };

    let balls: Vec<Ball<T>> = polys
        .iter()
        .map(|p| kernel_ball(p).ok_or(GeometryError::NotStarShaped))
        .collect::<Result<_, _>>()?;
    let radius = balls.iter().map(|b| b.radius()).fold(T::infinity(), T::min);
    if radius < min_r {
        return Err(DecompositionError::DegenerateKernel {
            radius: radius.as_f64(),
            required: min_r.as_f64(),
        });
    }
    let pieces: Vec<StarPiece<T>> = polys
        .into_par_iter()
        .zip(balls)
        .map(|(p, b)| {
            let mut piece = StarPiece::certify(Domain::polygon(p), b, samples)?;
            piece.shrink_kernel(radius)?;
            Ok(piece)
        })
        .collect::<Result<_, GeometryError>>()?;
    Ok(order_chain(pieces)?.with_omega(Domain::polygon(poly))?)
}

/// Triangle mesh of a polygon with counter-clockwise triangles.
#[derive(Clone, Debug)]
struct Mesh<T: Real> {
    pts: Vec<[T; 2]>,
    tris: Vec<[usize; 3]>,
}

impl<T: Real> Mesh<T> {
    fn from_polygon(poly: &Polygon<T>) -> Self {
        Self {
            pts: poly.vertices().to_vec(),
            tris: poly.triangulate(),
        }
    }

    /// Directed edge to the triangle it belongs to.
    fn edge_owner(&self) -> HashMap<(usize, usize), usize> {
        let mut m = HashMap::with_capacity(3 * self.tris.len());
        for (t, &[a, b, c]) in self.tris.iter().enumerate() {
            for e in [(a, b), (b, c), (c, a)] {
                m.insert(e, t);
            }
        }
        m
    }

    /// Boundary of a set of triangles as a counter-clockwise vertex loop, or
    /// `None` if the set is not a topological disk.
    fn outline_loop(&self, tris: &[usize]) -> Option<Vec<usize>> {
        let mut edges = BTreeSet::new();
        for &t in tris {
            let [a, b, c] = self.tris[t];
            edges.extend([(a, b), (b, c), (c, a)]);
        }
        let boundary: Vec<(usize, usize)> = edges.iter().copied().filter(|&(a, b)| !edges.contains(&(b, a))).collect();
        let mut next = HashMap::with_capacity(boundary.len());
        for &(a, b) in &boundary {
            if next.insert(a, b).is_some() {
                return None;
            }
        }
        let start = boundary.first()?.0;
        let mut lp = vec![start];
        let mut v = next[&start];
        while v != start {
            if lp.len() > boundary.len() {
                return None;
            }
            lp.push(v);
            v = *next.get(&v)?;
        }
        (lp.len() == boundary.len()).then_some(lp)
    }

    fn polygon(&self, lp: &[usize]) -> Option<Polygon<T>> {
        let verts = lp.iter().map(|&i| self.pts[i]).collect();
        Polygon::new(Polygon::new_unchecked(verts).without_collinear().vertices().to_vec()).ok()
    }

    fn star(&self, lp: &[usize]) -> Option<(Polygon<T>, Ball<T>)> {
        let p = self.polygon(lp)?;
        let b = kernel_ball(&p)?;
        Some((p, b))
    }
}

#[derive(Clone, Debug)]
struct Group<T: Real> {
    tris: Vec<usize>,
    radius: T,
}

/// Greedy merging of edge-adjacent groups. Convex results are preferred,
/// then larger kernel balls; a merge never lowers the smallest kernel
/// radius among the groups.
fn merge<T: Real>(mesh: &Mesh<T>, hint: usize, min_r: T) -> Vec<Group<T>> {
    let owner = mesh.edge_owner();
    let mut group_of: Vec<usize> = (0..mesh.tris.len()).collect();
    let mut groups: Vec<Option<Group<T>>> = (0..mesh.tris.len())
        .map(|t| {
            // a sliver triangle gets radius 0 so it is merged away or reported
            let radius = mesh.star(&mesh.tris[t]).map_or(T::zero(), |(_, b)| b.radius());
            Some(Group { tris: vec![t], radius })
        })
        .collect();
    loop {
        if groups.iter().flatten().count() <= hint {
            break;
        }
        let floor = groups
            .iter()
            .flatten()
            .map(|g| g.radius)
            .fold(T::infinity(), T::min)
            .max(min_r);
        let mut pairs = BTreeSet::new();
        for (&(a, b), &t) in &owner {
            if let Some(&u) = owner.get(&(b, a)) {
                let (g, h) = (group_of[t], group_of[u]);
                if g != h {
                    pairs.insert((g.min(h), g.max(h)));
                }
            }
        }
        let pairs: Vec<(usize, usize)> = pairs.into_iter().collect();
        let scored: Vec<Option<(bool, T)>> = pairs
            .par_iter()
            .map(|&(g, h)| {
                let mut tris = groups[g].as_ref()?.tris.clone();
                tris.extend(&groups[h].as_ref()?.tris);
                let (p, b) = mesh.star(&mesh.outline_loop(&tris)?)?;
                (b.radius() >= floor).then(|| (p.is_convex(), b.radius()))
            })
            .collect();
        let best = scored
            .iter()
            .enumerate()
            .filter_map(|(k, s)| s.map(|s| (k, s)))
            .fold(None, |acc: Option<(usize, (bool, T))>, cur| match acc {
                // radii equal up to rounding keep the earlier pair, so rigid motions give the same merges
                Some(a) if a.1 .0 > cur.1 .0 || (a.1 .0 == cur.1 .0 && a.1 .1 * T::lit(1.0 + 1e-9) >= cur.1 .1) => Some(a),
                _ => Some(cur),
            });
        let Some((k, (_, radius))) = best else { break };
        let (g, h) = pairs[k];
        let absorbed = groups[h].take().expect("active group");
        for &t in &absorbed.tris {
            group_of[t] = g;
        }
        let keep = groups[g].as_mut().expect("active group");
        keep.tris.extend(absorbed.tris);
        keep.tris.sort_unstable();
        keep.radius = radius;
    }
    groups.into_iter().flatten().collect()
}

/// For every pair of adjacent groups, glues a thin triangle onto one of
/// them across their longest shared edge. The apex lies on the median of
/// the neighbouring triangle and is pulled towards the edge until the
/// kernel ball keeps `SLIVER_KEEP` of its radius.
fn add_slivers<T: Real>(mut mesh: Mesh<T>, groups: &[Group<T>], min_r: T) -> Vec<Polygon<T>> {
    let owner = mesh.edge_owner();
    let mut group_of = vec![0; mesh.tris.len()];
    for (g, grp) in groups.iter().enumerate() {
        for &t in &grp.tris {
            group_of[t] = g;
        }
    }
    let mut loops: Vec<Vec<usize>> = groups
        .iter()
        .map(|g| mesh.outline_loop(&g.tris).expect("merged groups are disks"))
        .collect();
    let floors: Vec<T> = groups.iter().map(|g| (g.radius * T::lit(SLIVER_KEEP)).max(min_r)).collect();

    // longest shared edge per adjacent pair, directed as in the lower group
    let mut shared: BTreeMap<(usize, usize), (T, (usize, usize))> = BTreeMap::new();
    for (&(a, b), &t) in &owner {
        let Some(&u) = owner.get(&(b, a)) else { continue };
        let (g, h) = (group_of[t], group_of[u]);
        if g >= h {
            continue;
        }
        let len = dist2(mesh.pts[a], mesh.pts[b]);
        let e = shared.entry((g, h)).or_insert((len, (a, b)));
        if len > e.0 || (len == e.0 && (a, b) < e.1) {
            *e = (len, (a, b));
        }
    }

    for (&(g, h), &(_, (a, b))) in &shared {
        let tries = [(g, (a, b)), (h, (b, a))];
        let mut best: Option<(T, usize, Vec<usize>, [T; 2])> = None;
        for (piece, (p, q)) in tries {
            let across = owner[&(q, p)];
            let c = mesh.tris[across].into_iter().find(|&v| v != p && v != q).expect("triangle");
            let Some(pos) = position_of_edge(&loops[piece], p, q) else { continue };
            let m = [(mesh.pts[p][0] + mesh.pts[q][0]) * T::lit(0.5), (mesh.pts[p][1] + mesh.pts[q][1]) * T::lit(0.5)];
            let mut t = T::one();
            for _ in 0..SLIVER_STEPS {
                let apex = [m[0] + t * (mesh.pts[c][0] - m[0]), m[1] + t * (mesh.pts[c][1] - m[1])];
                mesh.pts.push(apex);
                let mut lp = loops[piece].clone();
                lp.insert(pos + 1, mesh.pts.len() - 1);
                let ok = mesh.star(&lp).is_some_and(|(_, ball)| ball.radius() >= floors[piece]);
                mesh.pts.pop();
                if ok {
                    if best.as_ref().map_or(true, |b| t > b.0) {
                        best = Some((t, piece, lp, apex));
                    }
                    break;
                }
                t = t * T::lit(0.5);
            }
        }
        // trial loops refer to the apex by the next free point index
        if let Some((_, piece, lp, apex)) = best {
            mesh.pts.push(apex);
            loops[piece] = lp;
        }
    }
    loops
        .iter()
        .map(|lp| mesh.polygon(lp).expect("validated while gluing"))
        .collect()
}

fn dist2<T: Real>(a: [T; 2], b: [T; 2]) -> T {
    (a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1])
}

/// Index `i` with `lp[i] == p` and `lp[i + 1] == q` (cyclically).
fn position_of_edge(lp: &[usize], p: usize, q: usize) -> Option<usize> {
    let n = lp.len();
    (0..n).find(|&i| lp[i] == p && lp[(i + 1) % n] == q)
}
