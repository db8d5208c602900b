use idealpoly_core::rivin::{check_feasible, is_realizable, is_realizable_at, ConstraintSystem, DEFAULT_EPSILON};
use idealpoly_oracle::corpus::{corpus, triakis_tetrahedron};
use idealpoly_oracle::grid::{grid_feasible, GridOutcome};

#[test]
fn lp_agrees_with_grid_search_on_small_links() {
    let mut checked = 0;
    for (name, t) in corpus() {
        for apex in 0..t.n() {
            let link = t.build_link(apex).unwrap();
            let system = ConstraintSystem::assemble(&link, DEFAULT_EPSILON);
            if system.reduced_dimension() > 5 {
                continue;
            }
            let lp = check_feasible(&system).unwrap().feasible;
            let grid = grid_feasible(&system, 720, 2_000_000);
            assert_ne!(grid, GridOutcome::Undecided, "{name} apex {apex}");
            assert_eq!(lp, matches!(grid, GridOutcome::Feasible(_)), "{name} apex {apex}");
            checked += 1;
        }
    }
    assert!(checked >= 5, "only {checked} links checked");
}

#[test]
fn grid_search_never_contradicts_lp() {
    // Larger links: the grid search may run out of budget, but any answer
    // it gives must match.
    let mut decided = 0;
    for (name, t) in corpus().into_iter().filter(|(_, t)| t.n() <= 8) {
        for apex in 0..t.n() {
            let system = ConstraintSystem::assemble(&t.build_link(apex).unwrap(), DEFAULT_EPSILON);
            let lp = check_feasible(&system).unwrap().feasible;
            match grid_feasible(&system, 720, 50_000) {
                GridOutcome::Feasible(_) => assert!(lp, "{name} apex {apex}"),
                GridOutcome::Infeasible => assert!(!lp, "{name} apex {apex}"),
                GridOutcome::Undecided => continue,
            }
            decided += 1;
        }
    }
    assert!(decided > 50);
}

#[test]
fn realizability_is_apex_independent() {
    for (name, t) in corpus() {
        let answers: Vec<bool> = (0..t.n()).map(|a| is_realizable_at(&t, a, DEFAULT_EPSILON).unwrap().realizable()).collect();
        assert!(answers.iter().all(|&b| b == answers[0]), "{name}: {answers:?}");
        if t.canonical_code() == triakis_tetrahedron().canonical_code() {
            assert!(!answers[0], "{name}");
        }
    }
}

#[test]
fn witness_is_strictly_interior() {
    for (name, t) in corpus() {
        let r = is_realizable(&t).unwrap();
        if let Some(w) = &r.result.witness {
            let link = t.build_link(r.apex).unwrap();
            let s = ConstraintSystem::assemble(&link, DEFAULT_EPSILON);
            assert!(s.max_violation(w) < 1e-9, "{name}");
            assert!(s.min_slack(w) > 1e-4, "{name}");
        }
    }
}

#[test]
fn feasibility_is_monotone_in_epsilon() {
    for (name, t) in corpus().into_iter().take(12) {
        let link = t.build_link(t.choose_apex()).unwrap();
        let mut previous = true;
        for eps in [1e-9, 1e-6, 1e-3, 0.1, 0.3, 0.6, 1.0] {
            let feasible = check_feasible(&ConstraintSystem::assemble(&link, eps)).unwrap().feasible;
            assert!(previous || !feasible, "{name} becomes feasible at ε = {eps}");
            previous = feasible;
        }
    }
}
