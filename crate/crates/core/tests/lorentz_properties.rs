use mcurves::lorentz::{causal_character, lorentz_cross, minkowski_inner, pseudo_norm, Vec3, CAUSAL_TOL};
use proptest::prelude::*;

fn component() -> impl Strategy<Value = f64> {
    -1e3..1e3f64
}

fn vec3() -> impl Strategy<Value = Vec3> {
    (component(), component(), component()).prop_map(|(a, b, c)| Vec3::new(a, b, c))
}

// Rounding in a sum of three products is bounded by a few ulps of the
// largest product, so compare against the Euclidean magnitudes.
fn scale(u: Vec3, v: Vec3) -> f64 {
    (u.euclidean_norm() * v.euclidean_norm()).max(1.0)
}

proptest! {
    #[test]
    fn inner_is_symmetric(u in vec3(), v in vec3()) {
        prop_assert_eq!(minkowski_inner(u, v), minkowski_inner(v, u));
    }

    #[test]
    fn inner_is_bilinear(u in vec3(), v in vec3(), w in vec3(), a in -10.0..10.0f64, b in -10.0..10.0f64) {
        let lhs = minkowski_inner(u * a + v * b, w);
        let rhs = a * minkowski_inner(u, w) + b * minkowski_inner(v, w);
        let tol = 1e-12 * 10.0 * (scale(u, w) + scale(v, w));
        prop_assert!((lhs - rhs).abs() <= tol, "{} vs {}", lhs, rhs);
    }

    #[test]
    fn cross_is_g_orthogonal(u in vec3(), v in vec3()) {
        let w = lorentz_cross(u, v);
        let tol = 1e-12 * scale(u, v) * u.euclidean_norm().max(v.euclidean_norm()).max(1.0);
        prop_assert!(minkowski_inner(w, u).abs() <= tol);
        prop_assert!(minkowski_inner(w, v).abs() <= tol);
    }

    #[test]
    fn cross_is_antisymmetric(u in vec3(), v in vec3()) {
        prop_assert_eq!(lorentz_cross(u, v), -lorentz_cross(v, u));
        prop_assert_eq!(lorentz_cross(u, u), Vec3::ZERO);
    }

    #[test]
    fn pseudo_norm_squares_to_abs_inner(v in vec3()) {
        let q = minkowski_inner(v, v).abs();
        prop_assert!((pseudo_norm(v).powi(2) - q).abs() <= 1e-12 * v.euclidean_norm_sq().max(1.0));
    }

    // The null threshold scales with |v|² once |v| ≥ 1, so the classification
    // is scale invariant in that regime.
    #[test]
    fn causal_character_is_scale_invariant(v in vec3(), lambda in prop_oneof![-1e3..-1.0f64, 1.0..1e3f64]) {
        prop_assume!(v.euclidean_norm() >= 1.0);
        prop_assert_eq!(causal_character(v, CAUSAL_TOL), causal_character(v * lambda, CAUSAL_TOL));
    }
}
