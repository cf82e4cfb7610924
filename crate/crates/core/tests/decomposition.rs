use std::time::Instant;

use proptest::prelude::*;
use pwlab_core::decomposition::{decompose, kernel_ball, DecompositionError, DecompositionParams};
use pwlab_core::geometry::{check_starshaped, overlap_measure, Chain, Polygon, StarSamples};

fn l_shape() -> Polygon<f64> {
    Polygon::new(vec![[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0], [1.0, 2.0], [0.0, 2.0]]).unwrap()
}

fn u_shape() -> Polygon<f64> {
    Polygon::new(vec![
        [0.0, 0.0],
        [3.0, 0.0],
        [3.0, 3.0],
        [2.6, 3.0],
        [2.6, 0.4],
        [0.4, 0.4],
        [0.4, 3.0],
        [0.0, 3.0],
    ])
    .unwrap()
}

fn spiral() -> Polygon<f64> {
    Polygon::from_any_orientation(vec![
        [0.0, 0.0],
        [5.0, 0.0],
        [5.0, 5.0],
        [0.0, 5.0],
        [0.0, 2.0],
        [3.0, 2.0],
        [3.0, 3.0],
        [1.0, 3.0],
        [1.0, 4.0],
        [4.0, 4.0],
        [4.0, 1.0],
        [0.0, 1.0],
    ])
    .unwrap()
}

/// Every chain invariant that can be rechecked from the outside.
fn assert_valid_chain(chain: &Chain<f64>, poly: &Polygon<f64>) {
    let area = poly.area();
    assert!(chain.symmetric_difference() < 1e-3 * area, "{}", chain.symmetric_difference());
    let r = chain.radius();
    for piece in chain.pieces() {
        assert_eq!(piece.kernel().radius(), r);
        assert!(piece.certificate().is_some());
        let check = check_starshaped(piece.body(), piece.kernel(), StarSamples::default()).unwrap();
        assert!(check.is_certified());
    }
    if chain.len() > 1 {
        assert!(chain.lambda().unwrap() > 0.0);
        // each piece overlaps some predecessor
        for i in 1..chain.len() {
            let best = (0..i)
                .map(|j| overlap_measure(chain.pieces()[i].body(), chain.pieces()[j].body()).unwrap().0)
                .fold(0.0, f64::max);
            assert!(best > 0.0, "piece {i} is isolated");
            assert!(chain.overlaps()[i - 1] >= chain.lambda().unwrap());
        }
    }
}

#[test]
fn convex_polygons_are_single_pieces() {
    let sq = Polygon::<f64>::rectangle(0.0, 0.0, 1.0, 1.0).unwrap();
    let chain: Chain<f64> = decompose(&sq, &DecompositionParams::default()).unwrap();
    assert_eq!(chain.len(), 1);
    assert_eq!(chain.pieces()[0].body().as_polygon().unwrap(), &sq);
    assert!((chain.radius() - 0.5).abs() < 1e-12);
    assert!(chain.lambda().is_none());

    // 3-4-5 right triangle: incircle radius 1 at (1, 1)
    let tri = Polygon::<f64>::new(vec![[0.0, 0.0], [4.0, 0.0], [0.0, 3.0]]).unwrap();
    let b = kernel_ball(&tri).unwrap();
    assert!((b.radius() - 1.0).abs() < 1e-9);
    assert!((b.center().coords()[0] - 1.0).abs() < 1e-9);
    let chain = decompose(&tri, &DecompositionParams::default()).unwrap();
    assert_eq!(chain.len(), 1);
}

#[test]
fn l_shape_two_pieces() {
    let t = Instant::now();
    let l = l_shape();
    let chain = decompose(&l, &DecompositionParams::with_pieces(2)).unwrap();
    assert_eq!(chain.len(), 2);
    assert_valid_chain(&chain, &l);
    assert!((chain.radius() - 0.5).abs() < 1e-9);
    assert!(t.elapsed().as_secs() < 60);
}

#[test]
fn l_shape_is_star_shaped_as_a_whole() {
    let chain = decompose(&l_shape(), &DecompositionParams::default()).unwrap();
    assert_eq!(chain.len(), 1);
    assert!((chain.radius() - 0.5).abs() < 1e-9);
}

#[test]
fn thin_u_follows_the_arms() {
    let u = u_shape();
    assert!(kernel_ball(&u).is_none());
    let chain = decompose(&u, &DecompositionParams::with_pieces(3)).unwrap();
    assert_eq!(chain.len(), 3);
    assert_valid_chain(&chain, &u);
    // the two arms are the ends of the chain
    let side = |i: usize| chain.pieces()[i].kernel().center().coords()[0];
    let (first, last) = (side(0), side(2));
    assert!((first < 1.0 && last > 2.0) || (first > 2.0 && last < 1.0), "{first} {last}");
    // without a hint the U still needs more than one piece
    assert!(decompose(&u, &DecompositionParams::default()).unwrap().len() >= 2);
}

#[test]
fn spiral_has_empty_kernel_but_decomposes() {
    let s = spiral();
    assert!(kernel_ball(&s).is_none());
    let chain = decompose(&s, &DecompositionParams::default()).unwrap();
    assert!(chain.len() >= 3);
    assert_valid_chain(&chain, &s);
}

#[test]
fn degenerate_kernels_are_rejected() {
    let params = DecompositionParams {
        piece_hint: 2,
        min_radius_fraction: 0.5,
        ..DecompositionParams::default()
    };
    assert!(matches!(
        decompose(&l_shape(), &params),
        Err(DecompositionError::DegenerateKernel { .. })
    ));
    let sliver = Polygon::new(vec![[0.0, 0.0], [100.0, 0.0], [100.0, 0.1]]).unwrap();
    assert!(matches!(
        decompose(&sliver, &DecompositionParams::default()),
        Err(DecompositionError::DegenerateKernel { .. })
    ));
}

#[test]
fn deterministic_and_union_matches() {
    let a = decompose(&u_shape(), &DecompositionParams::with_pieces(3)).unwrap();
    let b = decompose(&u_shape(), &DecompositionParams::with_pieces(3)).unwrap();
    assert_eq!(a, b);
    assert!((a.omega().measure() - u_shape().area()).abs() < 1e-12);
    assert!(a.omega().as_polygon().is_some());
}

/// Staircase with `k` unit steps: star-shaped only for small `k`.
fn staircase(k: usize) -> Polygon<f64> {
    let mut v = vec![[0.0, 0.0]];
    for i in 0..k {
        let x = (k - i) as f64;
        v.push([x, i as f64]);
        v.push([x, (i + 1) as f64]);
    }
    v.push([0.0, k as f64]);
    Polygon::new(v).unwrap().without_collinear()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn convex_ngons_are_single_pieces(n in 3usize..12, rx in 0.5f64..3.0, ry in 0.5f64..3.0, phase in 0.0f64..1.0) {
        let v: Vec<[f64; 2]> = (0..n)
            .map(|i| {
                let t = std::f64::consts::TAU * (i as f64 + phase) / n as f64;
                [rx * t.cos(), ry * t.sin()]
            })
            .collect();
        let p = Polygon::new(v).unwrap();
        let chain = decompose(&p, &DecompositionParams::default()).unwrap();
        prop_assert_eq!(chain.len(), 1);
        let b = kernel_ball(&p).unwrap();
        prop_assert!(p.contains_ball(&b, 1e-9));
    }

    #[test]
    fn staircases_give_valid_chains(k in 2usize..6, hint in 1usize..5) {
        let p = staircase(k);
        let chain = decompose(&p, &DecompositionParams::with_pieces(hint)).unwrap();
        assert_valid_chain(&chain, &p);
        prop_assert!(chain.len() >= hint.min(chain.len()));
    }

    #[test]
    fn rigid_motions_give_the_same_chain(th in 0.0f64..std::f64::consts::TAU, tx in -20.0f64..20.0, ty in -20.0f64..20.0) {
        let (c, s) = (th.cos(), th.sin());
        let moved = |p: Polygon<f64>| p.map_vertices(|[x, y]| [c * x - s * y + tx, s * x + c * y + ty]).unwrap();
        let l = decompose(&moved(l_shape()), &DecompositionParams::with_pieces(2)).unwrap();
        prop_assert_eq!(l.len(), 2);
        prop_assert!((l.radius() - 0.5).abs() < 1e-9, "R = {}", l.radius());
        prop_assert!((l.lambda().unwrap() - 1.0).abs() < 1e-9);
        let u = decompose(&moved(u_shape()), &DecompositionParams::with_pieces(3)).unwrap();
        prop_assert_eq!(u.len(), 3);
        prop_assert!((u.radius() - 0.2).abs() < 1e-9, "R = {}", u.radius());
    }
}
