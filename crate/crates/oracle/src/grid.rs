use std::f64::consts::PI;

use idealpoly_core::rivin::ConstraintSystem;

/// Result of an integer grid search over the angle polytope.
#[derive(Debug, Clone, PartialEq)]
pub enum GridOutcome {
    /// Angles in grid units (multiples of `π / units`).
    Feasible(Vec<i64>),
    Infeasible,
    /// Node budget exhausted.
    Undecided,
}

struct Row {
    vars: Vec<usize>,
    rhs: i64,
    equality: bool,
}

/// Looks for angles on the grid `π / units` satisfying `system`, by domain
/// bisection with bound propagation. Corners must be at least one grid
/// step; a row bounded by `π - ε` must stay at least one step below π.
pub fn grid_feasible(system: &ConstraintSystem, units: i64, max_nodes: usize) -> GridOutcome {
    let step = PI / units as f64;
    let mut rows = Vec::new();
    for r in &system.equalities {
        rows.push(Row { vars: r.vars.clone(), rhs: (r.rhs / step).round() as i64, equality: true });
    }
    for r in &system.upper {
        rows.push(Row { vars: r.vars.clone(), rhs: (r.rhs / step).floor() as i64, equality: false });
    }
    let lo = ((system.epsilon / step).ceil() as i64).max(1);
    let mut domains = vec![(lo, units - 1); system.num_vars];
    let mut nodes = 0;
    match search(&rows, &mut domains, &mut nodes, max_nodes) {
        Some(true) => GridOutcome::Feasible(domains.iter().map(|d| d.0).collect()),
        Some(false) => GridOutcome::Infeasible,
        None => GridOutcome::Undecided,
    }
}

fn propagate(rows: &[Row], d: &mut [(i64, i64)]) -> bool {
    loop {
        let mut changed = false;
        for r in rows {
            let min_sum: i64 = r.vars.iter().map(|&v| d[v].0).sum();
            let max_sum: i64 = r.vars.iter().map(|&v| d[v].1).sum();
            if min_sum > r.rhs || (r.equality && max_sum < r.rhs) {
                return false;
            }
            for &v in &r.vars {
                let hi = r.rhs - (min_sum - d[v].0);
                if hi < d[v].1 {
                    d[v].1 = hi;
                    changed = true;
                }
                if r.equality {
                    let lo = r.rhs - (max_sum - d[v].1);
                    if lo > d[v].0 {
                        d[v].0 = lo;
                        changed = true;
                    }
                }
                if d[v].0 > d[v].1 {
                    return false;
                }
            }
        }
        if !changed {
            return true;
        }
    }
}

fn search(rows: &[Row], d: &mut Vec<(i64, i64)>, nodes: &mut usize, max_nodes: usize) -> Option<bool> {
    *nodes += 1;
    if *nodes > max_nodes {
        return None;
    }
    if !propagate(rows, d) {
        return Some(false);
    }
    let Some(v) = (0..d.len()).filter(|&v| d[v].0 < d[v].1).min_by_key(|&v| d[v].1 - d[v].0) else {
        return Some(true);
    };
    let (lo, hi) = d[v];
    let mid = lo + (hi - lo) / 2;
    // Central value first: feasible points tend to sit away from the bounds.
    for part in [(mid, mid), (lo, mid - 1), (mid + 1, hi)] {
        if part.0 > part.1 {
            continue;
        }
        let mut trial = d.clone();
        trial[v] = part;
        match search(rows, &mut trial, nodes, max_nodes) {
            Some(true) => {
                *d = trial;
                return Some(true);
            }
            Some(false) => {}
            None => return None,
        }
    }
    Some(false)
}
