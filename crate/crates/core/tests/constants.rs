use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pwlab_core::constants::{
    alpha, assemble, betas, betas_from, chain_recurrence, constant_c, constant_c_tilde, kappa, recurrence_bound,
    recurrence_closed_form, ChainParams, ConstantsError,
};
use pwlab_core::decomposition::{decompose, DecompositionParams};
use pwlab_core::functions::VariableExponent;
use pwlab_core::geometry::{order_chain, Ball, Domain, Point, Polygon, StarPiece, StarSamples};
use pwlab_core::verifier::l_shape;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn disk(cx: f64, cy: f64, r: f64, kernel: f64) -> StarPiece<f64> {
    let c = Point::xy(cx, cy);
    StarPiece::certify(
        Domain::ball(Ball::new(c.clone(), r).unwrap()),
        Ball::new(c, kernel).unwrap(),
        StarSamples::default(),
    )
    .unwrap()
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[test]
fn recurrence_matches_closed_form_on_random_draws() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..1000 {
        let kp = 10f64.powf(rng.gen_range(-3.0..3.0));
        let at = 10f64.powf(rng.gen_range(-2.0..4.0));
        let n = rng.gen_range(2..=20);
        let seq = chain_recurrence(kp, at, n);
        assert_eq!(seq.len(), n - 1);
        for (i, &b) in seq.iter().enumerate() {
            let closed = recurrence_closed_form(kp, at, i + 1);
            assert!(rel(b, closed) <= 1e-12, "κ_p={kp} α̃={at} i={} {b} vs {closed}", i + 1);
        }
        assert!(seq[n - 2] <= recurrence_bound(kp, at, n));
    }
}

#[test]
fn recurrence_hand_values() {
    assert_eq!(chain_recurrence(1.0, 1.0, 4), vec![4.0, 10.0, 22.0]);
    assert_eq!(chain_recurrence(0.5, 3.0, 2), vec![9.0]);
    assert!(10.0 <= recurrence_bound(1.0, 1.0, 3));
}

#[test]
fn worked_disk_constant() {
    let chain = order_chain(vec![disk(0.0, 0.0, 1.0, 0.5)]).unwrap();
    let p = VariableExponent::constant(2.0).unwrap();
    let r = constant_c(&chain, &p).unwrap();
    // 2²·(3·π·2²)/(π/4) and 192·2³/(2π)
    let alpha_oracle = 4.0 * 12.0 * 4.0;
    let c_oracle = alpha_oracle * 8.0 / 2.0 / PI;
    assert!(rel(r.alpha[0], alpha_oracle) <= 1e-12);
    assert!(rel(r.c, c_oracle) <= 1e-12);
    assert!(rel(r.c, 768.0 / PI) <= 1e-12);
    assert!(rel(constant_c_tilde(&r, chain.omega()).unwrap(), 3.0 * PI * r.c) <= 1e-12);
    assert!(rel(r.c_tilde, 3.0 * PI * r.c) <= 1e-12);
    assert!(r.beta_prime.is_empty() && r.lambda.is_none());
}

#[test]
fn beta_rational_oracle() {
    // p₊ = 1, κ(Ω) = 12π, |S_i| = |D₁∩D₂| = π: in units of π everything is rational
    let two = rat(2);
    let kappa_pi = rat(12);
    let a = two.clone() * kappa_pi.clone() / rat(1);
    let beta = kappa_pi.clone() / rat(1) * (a.clone() + a.clone());
    let beta_prime = (two * kappa_pi / rat(1) + rat(1)) * (a.clone() + a.clone());
    assert_eq!(beta, rat(576));
    assert_eq!(beta_prime, rat(1200));
    assert_eq!(beta_prime.clone(), rat(2) * beta.clone() + a.clone() + a);

    let b = betas_from(1.0, 12.0 * PI, PI, PI, PI).unwrap();
    assert!(rel(b.beta, 576.0) <= 1e-12);
    assert!(rel(b.beta_prime, 1200.0) <= 1e-12);
}

#[test]
fn betas_for_overlapping_disks() {
    let d1 = Domain::ball(Ball::new(Point::xy(0.0, 0.0), 1.0).unwrap());
    let d2 = Domain::ball(Ball::new(Point::xy(1.0, 0.0), 1.0).unwrap());
    let s1 = Ball::new(Point::xy(0.0, 0.0), 0.5).unwrap();
    let s2 = Ball::new(Point::xy(1.0, 0.0), 0.5).unwrap();
    let omega = Domain::union(vec![disk(0.0, 0.0, 1.0, 0.5), disk(1.0, 0.0, 1.0, 0.5)]).unwrap();
    let b = betas(2.0, &s1, &s2, &d1, &d2, &omega).unwrap();
    let lens = 2.0 * PI / 3.0 - 3f64.sqrt() / 2.0;
    assert!(rel(b.overlap, lens) < 1e-6);
    assert!(rel(b.beta_prime, 2.0 * b.beta + b.alpha_omega[0] + b.alpha_omega[1]) <= 1e-12);

    let far = Domain::ball(Ball::new(Point::xy(5.0, 0.0), 1.0).unwrap());
    assert_eq!(betas(2.0, &s1, &s2, &d1, &far, &omega).unwrap_err(), ConstantsError::EmptyOverlap);
}

#[test]
fn two_disk_chain_by_hand() {
    let chain = order_chain(vec![disk(0.0, 0.0, 1.0, 0.5), disk(1.0, 0.0, 1.0, 0.5)]).unwrap();
    let p = VariableExponent::constant(2.0).unwrap();
    let r = constant_c(&chain, &p).unwrap();
    let lambda = chain.lambda().unwrap();
    let lens = 2.0 * PI / 3.0 - 3f64.sqrt() / 2.0;
    assert!(rel(lambda, lens) < 1e-6);
    let (n, pp, diam) = (2.0, 2.0, 3.0);
    let measure = 2.0 * PI - lens;
    let kappa = 3.0 * PI * diam * diam;
    let hand = lambda / (PI * 0.25) * (1.0 + 2f64.powf(pp + 1.0) * kappa / lambda).powi(2) * diam.powf(n + pp - 1.0)
        / (n * measure);
    assert!(rel(r.kappa, kappa) <= 1e-12);
    assert!(rel(r.c, hand) <= 1e-6, "{} vs {hand}", r.c);
    assert!(rel(r.c, r.c_from_chain) <= 1e-12);
}

#[test]
fn constants_reject_and_scale() {
    let disk = Domain::ball(Ball::<f64>::unit(2));
    let s = Ball::new(Point::origin(2), 0.5).unwrap();
    let big = Ball::new(Point::origin(2), 0.5 * 2f64.sqrt()).unwrap();
    assert!(rel(alpha(2.0, &big, &disk), alpha(2.0, &s, &disk) / 2.0) <= 1e-12);
    let scaled = Domain::ball(Ball::new(Point::origin(2), 3.0).unwrap());
    assert!(rel(kappa(&scaled), 9.0 * kappa(&disk)) <= 1e-12);
    let mut r = constant_c(&order_chain(vec![self::disk(0.0, 0.0, 1.0, 0.5)]).unwrap(), &VariableExponent::constant(2.0).unwrap()).unwrap();
    r.c = 0.0;
    assert!(constant_c_tilde(&r, &disk).is_err());
}

#[test]
fn small_domains_drop_the_diameter_factor() {
    let p = ChainParams {
        dim: 2,
        pieces: 1,
        p_plus: 3.0,
        diameter: 0.8,
        measure: 0.3,
        radius: 0.1,
        lambda: None,
    };
    assert_eq!(assemble(&p, vec![]).unwrap().diam_factor, 0.5);
}

#[test]
fn more_pieces_never_lower_the_l_shape_constant() {
    let p = VariableExponent::radial_affine(&[0.0, 0.0], 1.0, 1.0).unwrap();
    let cs: Vec<f64> = (1..=3)
        .map(|h| {
            let chain = decompose(&l_shape::<f64>(), &DecompositionParams::with_pieces(h)).unwrap();
            (chain.len(), constant_c(&chain, &p).unwrap().c)
        })
        .map(|(n, c)| {
            assert!(n >= 1);
            c
        })
        .collect();
    assert!(cs.windows(2).all(|w| w[1] >= w[0]), "{cs:?}");
}

#[test]
fn rigid_motions_leave_constants_unchanged() {
    let p = VariableExponent::constant(2.5).unwrap();
    let base = decompose(&l_shape::<f64>(), &DecompositionParams::with_pieces(2)).unwrap();
    let (th, tx, ty) = (0.7f64, 3.0, -1.5);
    let moved_poly: Polygon<f64> = l_shape::<f64>()
        .map_vertices(|[x, y]| [th.cos() * x - th.sin() * y + tx, th.sin() * x + th.cos() * y + ty])
        .unwrap();
    let moved = decompose(&moved_poly, &DecompositionParams::with_pieces(2)).unwrap();
    let (a, b) = (constant_c(&base, &p).unwrap(), constant_c(&moved, &p).unwrap());
    assert!(rel(a.c, b.c) < 1e-9, "{} vs {}", a.c, b.c);
}

proptest! {
    #[test]
    fn closed_form_and_leading_factor_agree(
        kp in 1e-3f64..1e3, at in 1e-2f64..1e4, n in 2usize..=20,
    ) {
        let seq = chain_recurrence(kp, at, n);
        prop_assert!(rel(seq[n - 2], recurrence_closed_form(kp, at, n - 1)) <= 1e-12);
        prop_assert!(seq[n - 2] <= recurrence_bound(kp, at, n));
    }

    #[test]
    fn c_is_monotone(
        pieces in 1usize..8, pp in 1.0f64..4.0, diam in 0.5f64..5.0, r in 0.05f64..0.5, lambda in 0.01f64..2.0,
        bump in 1.01f64..2.0,
    ) {
        let base = ChainParams { dim: 2, pieces, p_plus: pp, diameter: diam, measure: 1.0, radius: r, lambda: Some(lambda) };
        let c = |p: ChainParams<f64>| assemble(&p, vec![]).unwrap().c;
        let c0 = c(base);
        let tol = 1.0 + 1e-12;
        let more = c(ChainParams { pieces: pieces + 1, ..base });
        let higher_p = c(ChainParams { p_plus: pp * bump, ..base });
        let wider = c(ChainParams { diameter: diam * bump, ..base });
        let fatter = c(ChainParams { radius: r * bump, ..base });
        prop_assert!(more * tol >= c0);
        prop_assert!(higher_p * tol >= c0);
        prop_assert!(wider * tol >= c0);
        prop_assert!(fatter <= c0 * tol);
        if pieces > 1 {
            let thicker = c(ChainParams { lambda: Some(lambda * bump), ..base });
            prop_assert!(thicker <= c0 * tol);
        }
        let rep = assemble(&base, vec![]).unwrap();
        prop_assert!(rel(rep.c_tilde, rep.c * 3.0 * PI.sqrt() * 1.0) <= 1e-12);
        prop_assert!(rep.c > 0.0 && rep.alpha_tilde > 0.0 && rep.kappa > 0.0);
    }
}
