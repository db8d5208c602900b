use std::sync::Arc;

use idealpoly_core::geom::*;
use idealpoly_core::optvol::optimize_link;
use idealpoly_core::rivin::DEFAULT_EPSILON;
use idealpoly_core::rng::trial_rng;
use idealpoly_oracle::corpus::corpus;
use idealpoly_oracle::delaunay::verify_delaunay;
use num_complex::Complex64;
use proptest::prelude::*;

#[test]
fn delaunay_passes_brute_force_check() {
    for i in 0..1000u64 {
        let n = 5 + (i % 8) as usize;
        let config = random_configuration(n, &mut trial_rng(2024, i)).unwrap();
        let pt = delaunay(&config).unwrap();
        verify_delaunay(&pt).unwrap_or_else(|e| panic!("configuration {i} (n = {n}): {e}"));
    }
}

#[test]
fn layout_round_trips_optimizer_output() {
    for (name, t) in corpus() {
        let Ok(link) = t.build_link(t.choose_apex()).map(Arc::new) else { continue };
        let Ok(r) = optimize_link(&link, DEFAULT_EPSILON) else { continue };
        let lay = layout(&link, &r.angles).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(lay.closure_residual < 1e-6, "{name}");
        let positions: Vec<Option<Complex64>> = lay.config.points().iter().map(|p| p.finite()).collect();
        let back = angles_at_positions(&link, &positions).unwrap();
        for (x, y) in back.values().iter().zip(r.angles.values()) {
            assert!((x - y).abs() < 1e-8, "{name}: {x} vs {y}");
        }
        // The laid-out points are in convex position around the interior
        // vertices, so their Delaunay triangulation has the optimal type.
        let (closed, _) = close_with_infinity(&delaunay(&lay.config).unwrap()).unwrap();
        assert!(closed.is_isomorphic(&t), "{name}");
        assert!((config_volume(&lay.config).unwrap() - r.volume).abs() < 1e-9, "{name}");
    }
}

#[test]
fn configuration_json_round_trip() {
    let config = random_configuration(9, &mut trial_rng(3, 3)).unwrap();
    let s = serde_json::to_string(&config).unwrap();
    let back: PointConfiguration = serde_json::from_str(&s).unwrap();
    assert_eq!(back, config);
    assert!(serde_json::from_str::<PointConfiguration>(r#"{"points": [[0,0],[1,0],[0,1],[2,2]]}"#).is_err());
}

#[test]
fn ball_coordinates_lie_on_the_sphere() {
    let config = random_configuration(10, &mut trial_rng(4, 0)).unwrap();
    let balls = to_ball_models(&config);
    for p in balls.klein.iter().chain(&balls.poincare) {
        assert!(((p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt() - 1.0).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn volume_is_similarity_invariant(seed in 0u64..10_000, n in 5usize..12, re in -3.0f64..3.0, im in -3.0f64..3.0, shift in -5.0f64..5.0) {
        prop_assume!(re.abs() + im.abs() > 0.1);
        let config = random_configuration(n, &mut trial_rng(seed, 0)).unwrap();
        let moved = config.transformed(Complex64::new(re, im), Complex64::new(shift, -shift)).unwrap();
        let (a, b) = (config_volume(&config).unwrap(), config_volume(&moved).unwrap());
        prop_assert!((a - b).abs() < 1e-9 * (1.0 + a));
    }

    #[test]
    fn stereographic_round_trip(x in -1.0f64..1.0, y in -1.0f64..1.0, z in -0.999f64..0.999) {
        let r = (x * x + y * y + z * z).sqrt();
        prop_assume!(r > 0.1);
        let p = [x / r, y / r, z / r];
        prop_assume!(p[2] < 0.999);
        let q = inverse_stereographic(stereographic(p));
        for k in 0..3 {
            prop_assert!((p[k] - q[k]).abs() < 1e-9);
        }
    }
}
