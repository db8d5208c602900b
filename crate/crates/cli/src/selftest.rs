//! The embedded acceptance suite. Each check returns one [`CheckOutcome`];
//! several take the function under test as a parameter so that faulty
//! variants can be fed through the same check.

use std::f64::consts::PI;
use std::sync::Arc;

use idealpoly_core::geom::{angles_at_positions, close_with_infinity, config_volume, delaunay, layout, random_configuration};
use idealpoly_core::optvol::{
    detect_rational, dihedral_angles, maximize_volume, optimize_link, optimize_triangulation, AngleAssignment, DihedralAngles,
    DEFAULT_MAX_DENOMINATOR, DEFAULT_RATIONAL_TOL,
};
use idealpoly_core::rivin::{check_feasible, is_realizable_at, ConstraintSystem, DEFAULT_EPSILON};
use idealpoly_core::rng::trial_rng;
use idealpoly_core::specfun::lobachevsky;
use idealpoly_core::stats::{fit_beta, fit_beta_values, sample_volumes, scaling_fit, search_max_volume, table_vmax, BetaFit, VmaxSource};
use idealpoly_core::triang::SphereTriangulation;
use idealpoly_oracle::corpus::corpus;
use idealpoly_oracle::delaunay::verify_delaunay;
use idealpoly_oracle::grid::{grid_feasible, GridOutcome};
use idealpoly_oracle::interior::random_interior_point;
use idealpoly_oracle::quad::lobachevsky_quadrature;
use rand_distr::{Beta, Distribution};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(id: u32, name: &'static str, passed: bool, detail: String) -> Self {
        Self { id, name, passed, detail }
    }
}

/// `(n, trials, volume, tolerance)` rows that are gated.
pub const TABLE1: [(usize, usize, f64, f64); 5] =
    [(4, 1, 1.014942, 1e-4), (5, 5, 2.029883, 1e-4), (6, 30, 3.663862, 1e-4), (7, 100, 4.986773, 1e-3), (8, 200, 6.488469, 1e-3)];

/// Vertex counts and reference fits `(n, α, β)` used by the statistical checks.
pub const TABLE2: [(usize, f64, f64); 6] =
    [(5, 2.88, 1.53), (6, 6.74, 4.11), (7, 9.67, 4.84), (8, 13.26, 6.12), (10, 23.02, 10.05), (12, 32.56, 14.49)];
pub const SAMPLE_COUNT: usize = 5000;

pub fn table1_volumes(seed: u64) -> CheckOutcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for (n, trials, expected, tol) in TABLE1 {
        match search_max_volume(n, trials, seed, DEFAULT_EPSILON) {
            Ok(r) => {
                let ok = (r.best_volume - expected).abs() <= tol;
                passed &= ok;
                parts.push(format!("n={n}: {:.6} (table {expected})", r.best_volume));
            }
            Err(e) => {
                passed = false;
                parts.push(format!("n={n}: {e}"));
            }
        }
    }
    CheckOutcome::new(1, "maximal volumes n=4..8", passed, parts.join("; "))
}

/// Denominators of the corner angles at the tetrahedron optimum and of the
/// dihedral angles at the octahedron optimum, with `rule` turning corner
/// angles into dihedral angles.
pub fn rational_denominators(rule: fn(&AngleAssignment) -> DihedralAngles) -> CheckOutcome {
    let detect = |t: f64| detect_rational(t, DEFAULT_MAX_DENOMINATOR, DEFAULT_RATIONAL_TOL).map(|r| (r.p, r.q));
    let run = || -> Result<(bool, String), String> {
        let tet = optimize_triangulation(&SphereTriangulation::tetrahedron(), 0, DEFAULT_EPSILON).map_err(|e| e.to_string())?;
        let corners: Vec<_> = tet.angles.values().iter().map(|&t| detect(t)).collect();
        let oct = optimize_triangulation(&SphereTriangulation::octahedron(), 0, DEFAULT_EPSILON).map_err(|e| e.to_string())?;
        let dihedrals: Vec<_> = rule(&oct.angles).per_edge.values().map(|&t| detect(t)).collect();
        let ok = corners.iter().all(|r| *r == Some((1, 3))) && dihedrals.len() == 12 && dihedrals.iter().all(|r| *r == Some((1, 2)));
        let third = corners.iter().filter(|r| **r == Some((1, 3))).count();
        let half = dihedrals.iter().filter(|r| **r == Some((1, 2))).count();
        Ok((
            ok,
            format!("tetrahedron: {third}/{} corners at 1/3 π; octahedron: {half}/{} dihedrals at 1/2 π", corners.len(), dihedrals.len()),
        ))
    };
    match run() {
        Ok((ok, detail)) => CheckOutcome::new(2, "rational angles at optima", ok, detail),
        Err(e) => CheckOutcome::new(2, "rational angles at optima", false, e),
    }
}

pub fn lambda_identities(lob: &(dyn Fn(f64) -> f64 + Sync)) -> CheckOutcome {
    let v4 = 3.0 * lob(PI / 3.0);
    let v8 = 8.0 * lob(PI / 4.0);
    let worst = (0..100)
        .map(|i| {
            let theta = -PI + 2.0 * PI * (i as f64 + 0.5) / 100.0;
            (lob(theta) - lobachevsky_quadrature(theta)).abs()
        })
        .fold(0.0f64, f64::max);
    let passed = (v4 - 1.014942).abs() < 5e-6 && (v8 - 3.663862).abs() < 5e-6 && worst < 1e-10;
    CheckOutcome::new(
        3,
        "Lobachevsky closed forms and quadrature",
        passed,
        format!("3Λ(π/3) = {v4:.9}, 8Λ(π/4) = {v8:.9}, max quadrature gap {worst:.2e}"),
    )
}

fn realizable_corpus() -> Vec<(String, SphereTriangulation)> {
    corpus().into_par_iter().filter(|(_, t)| is_realizable_at(t, t.choose_apex(), DEFAULT_EPSILON).is_ok_and(|r| r.realizable())).collect()
}

pub fn uniqueness() -> CheckOutcome {
    let pool: Vec<_> = realizable_corpus().into_iter().filter(|(_, t)| t.n() <= 10).collect();
    let picks: Vec<_> = (0..20).map(|i| pool[i * pool.len() / 20].clone()).collect();
    let spreads: Vec<Result<(f64, f64), String>> = picks
        .par_iter()
        .enumerate()
        .map(|(k, (name, t))| {
            let link = Arc::new(t.build_link(t.choose_apex()).map_err(|e| e.to_string())?);
            let system = ConstraintSystem::assemble(&link, DEFAULT_EPSILON);
            let mut runs = Vec::new();
            for s in 0..10 {
                let x = random_interior_point(&system, &mut trial_rng(500 + k as u64, s)).ok_or(format!("{name}: no interior point"))?;
                let start = AngleAssignment::new(link.clone(), x).map_err(|e| e.to_string())?;
                runs.push(maximize_volume(&link, DEFAULT_EPSILON, &start).map_err(|e| format!("{name}: {e}"))?);
            }
            let dv = runs.iter().map(|r| (r.volume - runs[0].volume).abs()).fold(0.0, f64::max);
            let da = runs
                .iter()
                .flat_map(|r| r.angles.values().iter().zip(runs[0].angles.values()).map(|(x, y)| (x - y).abs()))
                .fold(0.0, f64::max);
            Ok((dv, da))
        })
        .collect();
    let name = "unique optimum from random starts";
    let mut worst = (0.0f64, 0.0f64);
    for s in spreads {
        match s {
            Ok((dv, da)) => worst = (worst.0.max(dv), worst.1.max(da)),
            Err(e) => return CheckOutcome::new(4, name, false, e),
        }
    }
    let passed = picks.len() == 20 && worst.0 < 1e-9 && worst.1 < 1e-6;
    CheckOutcome::new(
        4,
        name,
        passed,
        format!("{} triangulations, max volume spread {:.2e}, max angle spread {:.2e}", picks.len(), worst.0, worst.1),
    )
}

/// Realizability and maximal volume for every apex of every corpus entry.
/// The maximal volume is the supremum over the closed angle polytope
/// (`limit_volume`); the volume at `ε = 1e-6` is reported alongside.
pub fn apex_invariance() -> CheckOutcome {
    let name = "apex invariance";
    type PerApex = Vec<Option<(f64, f64)>>;
    let rows: Vec<(String, PerApex)> = corpus()
        .into_par_iter()
        .map(|(name, t)| {
            let per_apex =
                (0..t.n()).map(|a| optimize_triangulation(&t, a, DEFAULT_EPSILON).ok().map(|r| (r.limit_volume, r.volume))).collect();
            (name, per_apex)
        })
        .collect();
    let (mut limit_spread, mut eps_spread) = (0.0f64, 0.0f64);
    let mut failures = Vec::new();
    for (entry, per_apex) in &rows {
        if per_apex.iter().any(Option::is_some) != per_apex.iter().all(Option::is_some) {
            failures.push(format!("{entry}: realizability depends on apex"));
            continue;
        }
        let vals: Vec<(f64, f64)> = per_apex.iter().flatten().copied().collect();
        if let Some(&(l0, v0)) = vals.first() {
            let l = vals.iter().map(|(l, _)| (l - l0).abs()).fold(0.0, f64::max);
            if l.is_nan() || l >= 1e-8 {
                failures.push(format!("{entry}: maximal volume spread {l:.2e}"));
            }
            limit_spread = limit_spread.max(l);
            eps_spread = eps_spread.max(vals.iter().map(|(_, v)| (v - v0).abs()).fold(0.0, f64::max));
        }
    }
    let detail = format!(
        "{} triangulations, max spread {limit_spread:.2e} (at ε = 1e-6: {eps_spread:.2e}){}",
        rows.len(),
        if failures.is_empty() { String::new() } else { format!("; {}", failures.join("; ")) }
    );
    CheckOutcome::new(5, name, failures.is_empty(), detail)
}

pub fn gradient_check() -> CheckOutcome {
    let pool = realizable_corpus();
    let worst = (0..100usize)
        .into_par_iter()
        .map(|i| {
            let (_, t) = &pool[i % pool.len()];
            let link = Arc::new(t.build_link(i % t.n()).ok()?);
            let system = ConstraintSystem::assemble(&link, DEFAULT_EPSILON);
            let x = random_interior_point(&system, &mut trial_rng(77, i as u64))?;
            let grad = AngleAssignment::new(link.clone(), x.clone()).ok()?.volume_gradient().ok()?;
            let h = 1e-5;
            let vol = |y: Vec<f64>| AngleAssignment::new(link.clone(), y).ok()?.volume().ok();
            let mut worst = 0.0f64;
            for c in 0..x.len() {
                let (mut plus, mut minus) = (x.clone(), x.clone());
                plus[c] += h;
                minus[c] -= h;
                let fd = (vol(plus)? - vol(minus)?) / (2.0 * h);
                worst = worst.max((grad[c] - fd).abs());
            }
            Some(worst)
        })
        .collect::<Option<Vec<f64>>>();
    match worst {
        Some(w) => {
            let w = w.into_iter().fold(0.0, f64::max);
            CheckOutcome::new(6, "gradient vs central differences", w < 1e-6, format!("100 points, max deviation {w:.2e}"))
        }
        None => CheckOutcome::new(6, "gradient vs central differences", false, "could not evaluate a sample point".into()),
    }
}

pub fn delaunay_oracle() -> CheckOutcome {
    let failures: Vec<String> = (0..1000u64)
        .into_par_iter()
        .filter_map(|i| {
            let n = 5 + (i % 8) as usize;
            let result = random_configuration(n, &mut trial_rng(2024, i))
                .map_err(|e| e.to_string())
                .and_then(|c| delaunay(&c).map_err(|e| e.to_string()))
                .and_then(|pt| verify_delaunay(&pt));
            result.err().map(|e| format!("configuration {i}: {e}"))
        })
        .collect();
    CheckOutcome::new(
        7,
        "Delaunay empty circumcircles",
        failures.is_empty(),
        format!("1000 configurations, {} failures {}", failures.len(), failures.join("; ")).trim().to_string(),
    )
}

pub fn layout_round_trip() -> CheckOutcome {
    let results: Vec<Result<(f64, f64), String>> = realizable_corpus()
        .into_par_iter()
        .map(|(name, t)| {
            let link = Arc::new(t.build_link(t.choose_apex()).map_err(|e| e.to_string())?);
            let r = optimize_link(&link, DEFAULT_EPSILON).map_err(|e| format!("{name}: {e}"))?;
            let lay = layout(&link, &r.angles).map_err(|e| format!("{name}: {e}"))?;
            let positions: Vec<_> = lay.config.points().iter().map(|p| p.finite()).collect();
            let back = angles_at_positions(&link, &positions).map_err(|e| format!("{name}: {e}"))?;
            let dev = back.values().iter().zip(r.angles.values()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            let (closed, _) = close_with_infinity(&delaunay(&lay.config).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            if !closed.is_isomorphic(&t) {
                return Err(format!("{name}: laid-out points triangulate to another type"));
            }
            let dv = (config_volume(&lay.config).map_err(|e| e.to_string())? - r.volume).abs();
            if dv > 1e-9 {
                return Err(format!("{name}: configuration volume off by {dv:.2e}"));
            }
            Ok((dev, lay.closure_residual))
        })
        .collect();
    let name = "layout round trip";
    let mut worst = (0.0f64, 0.0f64);
    for r in &results {
        match r {
            Ok((d, c)) => worst = (worst.0.max(*d), worst.1.max(*c)),
            Err(e) => return CheckOutcome::new(8, name, false, e.clone()),
        }
    }
    CheckOutcome::new(
        8,
        name,
        worst.0 < 1e-8 && worst.1 < 1e-6,
        format!("{} triangulations, max angle deviation {:.2e}, max closure residual {:.2e}", results.len(), worst.0, worst.1),
    )
}

/// Beta fits of `SAMPLE_COUNT` normalized volumes at every reference vertex
/// count, normalized by the tabulated maximal volume.
pub fn table2_fits(seed: u64) -> Result<Vec<(usize, BetaFit)>, String> {
    TABLE2
        .iter()
        .map(|&(n, _, _)| {
            let vmax = table_vmax(n).ok_or(format!("no maximal volume for n = {n}"))?;
            let sample = sample_volumes(n, SAMPLE_COUNT, seed, vmax, VmaxSource::Table).map_err(|e| e.to_string())?;
            Ok((n, fit_beta(&sample).map_err(|e| e.to_string())?))
        })
        .collect()
}

pub fn table2_statistics(fits: &[(usize, BetaFit)]) -> CheckOutcome {
    let name = "Beta fit statistics n=8, n=12";
    let (Some((_, f8)), Some((_, f12))) = (fits.iter().find(|(n, _)| *n == 8), fits.iter().find(|(n, _)| *n == 12)) else {
        return CheckOutcome::new(9, name, false, "missing fits".into());
    };
    let passed = (f8.mean - 0.685).abs() <= 0.015
        && (f8.std - 0.103).abs() <= 0.010
        && (f8.alpha - 13.26).abs() <= 2.0
        && (f8.beta - 6.12).abs() <= 1.0
        && f8.p_value > 0.01
        && (f12.mean - 0.692).abs() <= 0.015;
    CheckOutcome::new(
        9,
        name,
        passed,
        format!(
            "n=8: mean {:.4}, std {:.4}, alpha {:.3}, beta {:.3}, p {:.3}; n=12: mean {:.4}",
            f8.mean, f8.std, f8.alpha, f8.beta, f8.p_value, f12.mean
        ),
    )
}

pub fn scaling(fits: &[(usize, BetaFit)]) -> CheckOutcome {
    let name = "parameter scaling";
    match scaling_fit(fits) {
        Ok(s) => {
            let means: Vec<f64> = s.rows.iter().filter(|r| r.n >= 8).map(|r| r.sample_mean).collect();
            let passed = (s.alpha.slope - 4.25).abs() <= 0.5
                && (s.beta.slope - 1.78).abs() <= 0.25
                && means.iter().all(|m| (m - 0.69).abs() <= 0.02);
            CheckOutcome::new(
                10,
                name,
                passed,
                format!("alpha slope {:.3}, beta slope {:.3}, means n>=8 {means:.4?}", s.alpha.slope, s.beta.slope),
            )
        }
        Err(e) => CheckOutcome::new(10, name, false, e.to_string()),
    }
}

pub fn beta_mle_oracle() -> CheckOutcome {
    let dist = Beta::new(2.0, 3.0).expect("valid parameters");
    let hits: Vec<bool> = (0..20u64)
        .into_par_iter()
        .map(|seed| {
            let mut rng = trial_rng(seed, 0);
            let xs: Vec<f64> = (0..100_000).map(|_| dist.sample(&mut rng)).collect();
            fit_beta_values(&xs).is_ok_and(|f| {
                let (sa, sb) = f.standard_errors();
                (f.alpha - 2.0).abs() <= 3.0 * sa && (f.beta - 3.0).abs() <= 3.0 * sb
            })
        })
        .collect();
    let good = hits.iter().filter(|&&h| h).count();
    CheckOutcome::new(11, "Beta MLE recovers Beta(2,3)", good >= 18, format!("{good}/20 seeds within 3 standard errors"))
}

pub fn feasibility_oracle() -> CheckOutcome {
    let name = "LP feasibility vs grid search";
    let mut jobs = Vec::new();
    for (entry, t) in corpus() {
        for apex in 0..t.n() {
            if let Ok(link) = t.build_link(apex) {
                let system = ConstraintSystem::assemble(&link, DEFAULT_EPSILON);
                if system.reduced_dimension() <= 5 {
                    jobs.push((format!("{entry} apex {apex}"), system));
                }
            }
        }
    }
    let failures: Vec<String> = jobs
        .par_iter()
        .filter_map(|(label, system)| {
            let lp = match check_feasible(system) {
                Ok(r) => r.feasible,
                Err(e) => return Some(format!("{label}: {e}")),
            };
            match grid_feasible(system, 720, 2_000_000) {
                GridOutcome::Undecided => Some(format!("{label}: grid search undecided")),
                GridOutcome::Feasible(_) if !lp => Some(format!("{label}: grid feasible, LP infeasible")),
                GridOutcome::Infeasible if lp => Some(format!("{label}: LP feasible, grid infeasible")),
                _ => None,
            }
        })
        .collect();
    let passed = failures.is_empty() && !jobs.is_empty();
    CheckOutcome::new(
        12,
        name,
        passed,
        format!("{} links, {} disagreements {}", jobs.len(), failures.len(), failures.join("; ")).trim().to_string(),
    )
}

/// Runs all checks in order.
pub fn run_all(seed: u64) -> Vec<CheckOutcome> {
    let mut out = vec![
        table1_volumes(seed),
        rational_denominators(dihedral_angles),
        lambda_identities(&lobachevsky),
        uniqueness(),
        apex_invariance(),
        gradient_check(),
        delaunay_oracle(),
        layout_round_trip(),
    ];
    match table2_fits(seed) {
        Ok(fits) => {
            out.push(table2_statistics(&fits));
            out.push(scaling(&fits));
        }
        Err(e) => {
            out.push(CheckOutcome::new(9, "Beta fit statistics n=8, n=12", false, e.clone()));
            out.push(CheckOutcome::new(10, "parameter scaling", false, e));
        }
    }
    out.push(beta_mle_oracle());
    out.push(feasibility_oracle());
    out
}
