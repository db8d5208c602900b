use std::f64::consts::PI;

use idealpoly_core::specfun::*;
use idealpoly_oracle::quad::lobachevsky_quadrature;
use proptest::prelude::*;

#[test]
fn lobachevsky_matches_quadrature_on_grid() {
    for i in 0..100 {
        let theta = -PI + 2.0 * PI * (i as f64 + 0.5) / 100.0;
        let (a, b) = (lobachevsky(theta), lobachevsky_quadrature(theta));
        assert!((a - b).abs() < 1e-10, "θ = {theta}: series {a}, quadrature {b}");
    }
}

#[test]
fn closed_form_volumes() {
    assert!((3.0 * lobachevsky(PI / 3.0) - 1.014942).abs() < 5e-6);
    assert!((8.0 * lobachevsky(PI / 4.0) - 3.663862).abs() < 5e-6);
    assert!((regular_tetrahedron_volume() - 3.0 * lobachevsky_quadrature(PI / 3.0)).abs() < 1e-12);
}

#[test]
fn maximum_at_pi_over_six() {
    let peak = lobachevsky(PI / 6.0);
    for i in 1..200 {
        let t = PI * i as f64 / 200.0;
        assert!(lobachevsky(t) <= peak + 1e-15);
    }
    assert!(lobachevsky_deriv(PI / 6.0).unwrap().abs() < 1e-14);
}

#[test]
fn special_functions_match_statrs() {
    for &x in &[0.1, 0.5, 1.0, 2.5, 7.3, 13.26, 40.0, 150.0] {
        assert!((ln_gamma(x) - statrs::function::gamma::ln_gamma(x)).abs() < 1e-12 * (1.0 + ln_gamma(x).abs()), "lnΓ({x})");
        assert!((digamma(x).unwrap() - statrs::function::gamma::digamma(x)).abs() < 1e-12, "ψ({x})");
    }
    for &(a, b) in &[(2.0, 3.0), (13.26, 6.12), (0.5, 0.5), (32.5, 14.5), (1.0, 1.0)] {
        for i in 1..20 {
            let x = i as f64 / 20.0;
            let ours = regularized_incomplete_beta(a, b, x).unwrap();
            let theirs = statrs::function::beta::beta_reg(a, b, x);
            assert!((ours - theirs).abs() < 1e-12, "I_{x}({a}, {b}): {ours} vs {theirs}");
        }
    }
}

#[test]
fn trigamma_is_digamma_derivative() {
    for &x in &[0.3, 1.0, 4.0, 12.0, 50.0] {
        let h = 1e-5 * x;
        let fd = (digamma(x + h).unwrap() - digamma(x - h).unwrap()) / (2.0 * h);
        assert!((trigamma(x).unwrap() - fd).abs() < 1e-7 * trigamma(x).unwrap());
    }
}

#[test]
fn kolmogorov_tail_reference_values() {
    // Direct alternating series, summed far past convergence.
    let series = |l: f64| 2.0 * (1..200).map(|k| (-1f64).powi(k - 1) * (-2.0 * (k * k) as f64 * l * l).exp()).sum::<f64>();
    for &l in &[0.6, 0.8, 0.99, 1.0, 1.01, 1.36, 2.0] {
        assert!((kolmogorov_tail(l).unwrap() - series(l)).abs() < 1e-12, "λ = {l}");
    }
    assert!((kolmogorov_tail(1.358).unwrap() - 0.05).abs() < 5e-4);
    assert!((kolmogorov_tail(0.2).unwrap() - 1.0).abs() < 1e-12);
}

proptest! {
    #[test]
    fn odd_and_periodic(theta in -20.0f64..20.0) {
        prop_assert!((lobachevsky(-theta) + lobachevsky(theta)).abs() < 1e-14);
        prop_assert!((lobachevsky(theta + PI) - lobachevsky(theta)).abs() < 1e-12);
    }

    #[test]
    fn duplication_formula(theta in 0.01f64..1.5) {
        let lhs = lobachevsky(2.0 * theta);
        let rhs = 2.0 * lobachevsky(theta) + 2.0 * lobachevsky(theta + PI / 2.0);
        prop_assert!((lhs - rhs).abs() < 1e-13);
    }

    #[test]
    fn derivative_matches_difference(theta in 0.05f64..3.09) {
        let h = 1e-5;
        let fd = (lobachevsky(theta + h) - lobachevsky(theta - h)) / (2.0 * h);
        prop_assert!((lobachevsky_deriv(theta).unwrap() - fd).abs() < 1e-8);
    }
}
