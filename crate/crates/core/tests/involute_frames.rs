use std::f64::consts::SQRT_2;

use mcurves::curve::DEFAULT_DOMAIN;
use mcurves::involute::{frame_discrepancy_up_to_sign, transfer_at};
use mcurves::{
    frenet_apparatus, involute, involute_causal_signature, involute_frenet_numeric, minkowski_inner,
    w_curve_circular_helix, w_curve_hyperbolic_helix, worked_example, Domain, ParametricCurve,
};

fn evolutes() -> Vec<ParametricCurve> {
    vec![
        worked_example(DEFAULT_DOMAIN),
        w_curve_hyperbolic_helix(1.0, 2.0, DEFAULT_DOMAIN).unwrap(),
        w_curve_circular_helix(2.0, 1.0, DEFAULT_DOMAIN).unwrap(),
        w_curve_circular_helix(3.0, -1.0, DEFAULT_DOMAIN).unwrap(),
    ]
}

// Twenty interior samples that avoid the singular point c = 2.
fn samples() -> Vec<f64> {
    Domain::new(-4.0, 4.0).unwrap().samples(21).into_iter().filter(|s| (s - 2.0).abs() > 0.1).take(20).collect()
}

#[test]
fn transfer_agrees_with_numeric_frames() {
    for ev in evolutes() {
        let inv = involute(&ev, 2.0).unwrap();
        for s in samples() {
            let (_, _, f) = transfer_at(&ev, s).unwrap();
            let nf = involute_frenet_numeric(&inv, s).unwrap();
            let d = frame_discrepancy_up_to_sign(f.vectors(), nf.vectors());
            let scale = f.n_star.euclidean_norm().max(1.0);
            assert!(d <= 1e-5 * scale, "{} at s = {s}: {d:e}", ev.label());
            assert_eq!(nf.characters, f.causal_signature);
        }
    }
}

#[test]
fn transfer_satisfies_signature() {
    for ev in evolutes() {
        for s in samples() {
            let (fr, dd, f) = transfer_at(&ev, s).unwrap();
            assert_eq!(f.causal_signature, involute_causal_signature(dd.case));
            assert_eq!(f.t_star, fr.n);
            let vs = f.vectors();
            for (v, ch) in vs.iter().zip(f.causal_signature) {
                let target = if ch == mcurves::CausalCharacter::Timelike { -1.0 } else { 1.0 };
                assert!((minkowski_inner(*v, *v) - target).abs() <= 1e-8 * v.euclidean_norm_sq().max(1.0));
            }
        }
    }
}

#[test]
fn involute_tangent_is_orthogonal_to_evolute_tangent() {
    for ev in evolutes() {
        let inv = involute(&ev, 2.0).unwrap();
        for s in samples() {
            let d = inv.derivative(s).unwrap();
            let t = frenet_apparatus(&ev, s).unwrap().t;
            assert!(minkowski_inner(d, t).abs() <= 1e-8 * d.euclidean_norm().max(1.0) * t.euclidean_norm());
            // α*′ is parallel to n.
            let n = frenet_apparatus(&ev, s).unwrap().n;
            let resid = d - n * minkowski_inner(d, n);
            assert!(resid.euclidean_norm() <= 1e-8 * d.euclidean_norm().max(1.0));
        }
    }
}

#[test]
fn w_curve_transfer_moves_rigidly_with_the_frame() {
    // For constant θ the transferred frame has the same coordinates in the
    // evolute frame at every s.
    let ev = w_curve_circular_helix(2.0, 1.0, DEFAULT_DOMAIN).unwrap();
    let coords = |s: f64| {
        let (fr, _, f) = transfer_at(&ev, s).unwrap();
        [minkowski_inner(f.n_star, fr.t), minkowski_inner(f.n_star, fr.b), minkowski_inner(f.b_star, fr.t)]
    };
    let (a, b) = (coords(-1.3), coords(2.9));
    for i in 0..3 {
        assert!((a[i] - b[i]).abs() <= 1e-12);
    }
}

#[test]
fn example_involute_closed_form() {
    let inv = involute(&worked_example(DEFAULT_DOMAIN), 2.0).unwrap();
    for s in [-4.0, -1.0, 0.0, 1.0] {
        let p = inv.point(s).unwrap();
        let k = 2.0 - s;
        let expect = mcurves::Vec3::new(s.sinh() + k * s.cosh(), s.cosh() + k * s.sinh(), SQRT_2 * s + SQRT_2 * k);
        assert!(p.max_abs_diff(expect) <= 1e-12 * expect.euclidean_norm().max(1.0));
    }
}
