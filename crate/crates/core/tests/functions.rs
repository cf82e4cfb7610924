use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pwlab_core::functions::{smoothstep, Region, TestFunction, TrigTerm, VariableExponent};
use pwlab_core::geometry::{Ball, Domain, Point};
use pwlab_core::io::{parse_exponent, parse_function};
use pwlab_core::verifier::suite_functions;

fn variants() -> Vec<TestFunction<f64>> {
    let mut out: Vec<TestFunction<f64>> = suite_functions().unwrap().into_iter().map(|(_, f)| f).collect();
    out.push(TestFunction::TrigProduct {
        terms: vec![
            TrigTerm {
                amplitude: 0.7,
                wave: vec![2.0, -1.0],
                phase: vec![0.0, 1.0],
            },
            TrigTerm {
                amplitude: -0.2,
                wave: vec![0.5, 3.0],
                phase: vec![0.3, 0.0],
            },
        ],
    });
    for k in 2..=5 {
        out.push(TestFunction::scaled(0.3, TestFunction::bump(0.4, k).unwrap()).unwrap());
    }
    out
}

fn central_difference(f: &TestFunction<f64>, x: &[f64]) -> Vec<f64> {
    let h = 1e-6;
    (0..x.len())
        .map(|k| {
            let (mut a, mut b) = (x.to_vec(), x.to_vec());
            a[k] += h;
            b[k] -= h;
            (f.eval(&a) - f.eval(&b)) / (2.0 * h)
        })
        .collect()
}

#[test]
fn gradients_match_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for f in variants() {
        for _ in 0..100 {
            let x = [rng.gen_range(-1.9..1.9), rng.gen_range(-1.9..1.9)];
            let g = f.grad(&x);
            let fd = central_difference(&f, &x);
            let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
            let err = g.iter().zip(&fd).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            assert!(err / (1.0 + norm) <= 1e-6, "{f:?} at {x:?}: {g:?} vs {fd:?}");
        }
    }
}

#[test]
fn exponent_examples() {
    let two = VariableExponent::constant(2.0).unwrap();
    assert_eq!(two.eval(&[5.0, -3.0]), 2.0);
    let radial = VariableExponent::<f64>::radial_affine(&[0.0, 0.0], 1.0, 1.0).unwrap();
    assert!((radial.eval(&[0.3, 0.4]) - 1.5).abs() < 1e-15);
    let piecewise = VariableExponent::PiecewiseConstant {
        regions: vec![(
            Region::HalfSpace {
                normal: vec![1.0, 0.0],
                offset: 0.0,
            },
            1.2,
        )],
        default: 3.0,
    };
    assert_eq!(piecewise.eval(&[1.0, 0.0]), 3.0);
    assert_eq!(piecewise.eval(&[-1.0, 0.0]), 1.2);

    let disk = Domain::ball(Ball::unit(2));
    assert_eq!(two.p_plus(&disk), 2.0);
    assert!((radial.p_plus(&disk) - 2.0).abs() < 1e-12);
    assert_eq!(piecewise.p_plus(&disk), 3.0);
    let left = Domain::ball(Ball::new(Point::xy(-3.0, 0.0), 1.0).unwrap());
    assert_eq!(piecewise.p_plus(&left), 1.2);
}

#[test]
fn bump_examples() {
    let eta = TestFunction::bump(0.5, 3).unwrap();
    assert_eq!(eta.eval(&[0.8, 0.0]), 1.0);
    assert_eq!(eta.eval(&[0.0, -1.6]), 0.0);
    assert!((eta.eval(&[1.25 / 2f64.sqrt(), 1.25 / 2f64.sqrt()]) - 0.5).abs() < 1e-12);
    assert!(TestFunction::bump(1.0, 3).is_err());
    assert!(TestFunction::bump(0.5, 1).is_err());
    for k in 2..8 {
        assert!((smoothstep(k, 0.5f64) - 0.5).abs() < 1e-12);
    }
}

#[test]
fn descriptors_round_trip_through_json() {
    for f in variants() {
        let text = serde_json::to_string(&f).unwrap();
        assert_eq!(parse_function::<f64>(&text).unwrap(), f);
    }
    let p: VariableExponent<f64> = parse_exponent(r#"{"type":"radial_increasing","center":[0,0],"knots":[[0,1],[1,2]]}"#).unwrap();
    assert_eq!(p, VariableExponent::radial_affine(&[0.0, 0.0], 1.0, 1.0).unwrap());
    // decreasing profiles are rejected
    assert!(parse_exponent::<f64>(r#"{"type":"radial_increasing","center":[0,0],"knots":[[0,2],[1,1.5]]}"#).is_err());
}

#[test]
fn single_precision_evaluation() {
    let f: TestFunction<f32> = suite_functions().unwrap().remove(2).1;
    let g: TestFunction<f64> = suite_functions().unwrap().remove(2).1;
    let (a, b) = (f.eval(&[0.3f32, -0.2]), g.eval(&[0.3, -0.2]));
    assert!((f64::from(a) - b).abs() < 1e-6);
}
