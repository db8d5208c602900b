//! Log-barrier continuation with damped Newton steps in the null space of
//! the equality constraints.
//!
//! The volume is strictly concave on the equality surface (each triangle's
//! restricted Hessian `diag(-cot θ)` is negative definite when its angles
//! sum to π), so every barrier subproblem has a unique maximizer and the
//! reduced Hessian can be factored by Cholesky.

use nalgebra::{DMatrix, DVector};

use crate::rivin::ConstraintSystem;
use crate::specfun::{lobachevsky, lobachevsky_deriv};

use super::OptError;

pub const MU_START: f64 = 1e-1;
pub const MU_FACTOR: f64 = 0.2;
pub const MU_FINAL: f64 = 1e-9;
const ARMIJO_SLOPE: f64 = 1e-4;
const BACKTRACK: f64 = 0.5;
const GRAD_TOL: f64 = 1e-10;
/// Gradient norm (relative to `1 + |V|`) below which a failed line search
/// is treated as having hit the roundoff floor rather than as a stall.
const ROUNDOFF_FLOOR: f64 = 1e-7;
const MAX_NEWTON_PER_STAGE: usize = 200;
/// Slack below which an inequality counts as active for the KKT check.
const ACTIVE_SLACK: f64 = 1e-6;

/// `s = offset + sign * Σ θ[vars]`, required positive.
#[derive(Debug, Clone)]
pub(crate) struct Inequality {
    pub vars: Vec<usize>,
    pub sign: f64,
    pub offset: f64,
}

impl Inequality {
    fn slack(&self, theta: &[f64]) -> f64 {
        self.offset + self.sign * self.vars.iter().map(|&c| theta[c]).sum::<f64>()
    }

    fn directional(&self, dir: &[f64]) -> f64 {
        self.sign * self.vars.iter().map(|&c| dir[c]).sum::<f64>()
    }
}

pub(crate) fn inequalities(system: &ConstraintSystem) -> Vec<Inequality> {
    let mut out: Vec<Inequality> = (0..system.num_vars).map(|c| Inequality { vars: vec![c], sign: 1.0, offset: -system.epsilon }).collect();
    out.extend(system.upper.iter().map(|r| Inequality { vars: r.vars.clone(), sign: -1.0, offset: r.rhs }));
    out
}

/// Orthonormal basis of `{d : E d = 0}` for the equality rows.
pub(crate) fn null_space(system: &ConstraintSystem) -> DMatrix<f64> {
    let rows: Vec<Vec<f64>> = system
        .equalities
        .iter()
        .map(|r| {
            let mut a = vec![0.0; system.num_vars];
            r.vars.iter().for_each(|&c| a[c] = 1.0);
            a
        })
        .collect();
    null_space_of(rows, system.num_vars)
}

/// Orthonormal basis of the null space of `rows`, from the reduced row
/// echelon form followed by a QR pass.
fn null_space_of(mut rows: Vec<Vec<f64>>, k: usize) -> DMatrix<f64> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..k {
        let Some(p) = (rank..rows.len()).max_by(|&a, &b| rows[a][col].abs().total_cmp(&rows[b][col].abs())) else {
            break;
        };
        if rows[p][col].abs() < 1e-12 {
            continue;
        }
        rows.swap(rank, p);
        let pv = rows[rank][col];
        rows[rank].iter_mut().for_each(|x| *x /= pv);
        let pivot_row = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[col] != 0.0 {
                let f = row[col];
                row.iter_mut().zip(&pivot_row).for_each(|(x, p)| *x -= f * p);
            }
        }
        pivots.push(col);
        rank += 1;
    }
    let free: Vec<usize> = (0..k).filter(|c| !pivots.contains(c)).collect();
    if free.is_empty() {
        return DMatrix::zeros(k, 0);
    }
    let mut basis = DMatrix::zeros(k, free.len());
    for (j, &f) in free.iter().enumerate() {
        basis[(f, j)] = 1.0;
        for (r, &p) in pivots.iter().enumerate() {
            basis[(p, j)] = -rows[r][f];
        }
    }
    basis.qr().q()
}

pub(crate) struct BarrierProblem<'a> {
    pub ineqs: &'a [Inequality],
    pub basis: &'a DMatrix<f64>,
}

#[derive(Debug, Clone)]
pub(crate) struct BarrierOutcome {
    pub theta: Vec<f64>,
    pub stage_volumes: Vec<f64>,
    pub newton_steps: usize,
}

pub(crate) fn volume_of(theta: &[f64]) -> f64 {
    theta.iter().map(|&t| lobachevsky(t)).sum()
}

/// `Λ'(θ)`, or 0 at an endpoint of `[0, π]` (only reached by coordinates
/// pinned to a bound, which never move).
fn grad_or_pinned(t: f64) -> f64 {
    lobachevsky_deriv(t).ok().filter(|_| t > 0.0 && t < std::f64::consts::PI).unwrap_or(0.0)
}

fn curvature_or_pinned(t: f64) -> f64 {
    if t > 0.0 && t < std::f64::consts::PI {
        -t.cos() / t.sin()
    } else {
        0.0
    }
}

impl BarrierProblem<'_> {
    /// Barrier objective, or `None` outside the open polytope.
    fn value(&self, theta: &[f64], mu: f64) -> Option<f64> {
        let mut log_sum = 0.0;
        for q in self.ineqs {
            let s = q.slack(theta);
            if !(s > 0.0) {
                return None;
            }
            log_sum += s.ln();
        }
        if theta.iter().any(|&t| !(t > 0.0 && t < std::f64::consts::PI)) {
            return None;
        }
        Some(volume_of(theta) + mu * log_sum)
    }

    fn gradient_and_hessian(&self, theta: &[f64], mu: f64) -> (DVector<f64>, DMatrix<f64>) {
        let k = theta.len();
        let mut g = DVector::from_iterator(k, theta.iter().map(|&t| lobachevsky_deriv(t).expect("angle in (0, π)")));
        let mut h = DMatrix::from_diagonal(&DVector::from_iterator(k, theta.iter().map(|&t| -t.cos() / t.sin())));
        for q in self.ineqs {
            let s = q.slack(theta);
            let w = mu / s;
            let w2 = w / s;
            for &a in &q.vars {
                g[a] += w * q.sign;
                for &b in &q.vars {
                    h[(a, b)] -= w2;
                }
            }
        }
        (g, h)
    }

    /// Maximizes `V + μ Σ log s` from a strictly feasible point.
    fn solve_stage(&self, theta: &mut Vec<f64>, mu: f64, steps: &mut usize) -> Result<(), OptError> {
        let n = self.basis;
        for _ in 0..MAX_NEWTON_PER_STAGE {
            let (g, h) = self.gradient_and_hessian(theta, mu);
            let gy = n.transpose() * &g;
            let vol = volume_of(theta);
            let gnorm = gy.norm();
            if gnorm < GRAD_TOL * (1.0 + vol.abs()) {
                return Ok(());
            }
            let neg_h = -(n.transpose() * &h * n);
            let dy = match neg_h.clone().cholesky() {
                Some(ch) => ch.solve(&gy),
                None => gy.clone(),
            };
            let decrement = gy.dot(&dy);
            let dtheta = n * &dy;
            let dir: Vec<f64> = dtheta.iter().copied().collect();

            let mut t_max = f64::INFINITY;
            for q in self.ineqs {
                let ds = q.directional(&dir);
                if ds < 0.0 {
                    t_max = t_max.min(-q.slack(theta) / ds);
                }
            }
            let mut t = if t_max.is_finite() { (0.99 * t_max).min(1.0) } else { 1.0 };
            let f0 = self.value(theta, mu).ok_or(OptError::InfeasibleStart)?;
            let mut accepted = false;
            for _ in 0..80 {
                let trial: Vec<f64> = theta.iter().zip(&dir).map(|(x, d)| x + t * d).collect();
                if let Some(f) = self.value(&trial, mu) {
                    if f >= f0 + ARMIJO_SLOPE * t * decrement {
                        *theta = trial;
                        accepted = true;
                        break;
                    }
                }
                t *= BACKTRACK;
            }
            *steps += 1;
            if !accepted {
                if gnorm < ROUNDOFF_FLOOR * (1.0 + vol.abs()) {
                    return Ok(());
                }
                return Err(OptError::LineSearchStall { mu, gradient_norm: gnorm });
            }
            // Predicted gain below roundoff of the objective itself.
            if decrement < 1e-28 * (1.0 + vol.abs()) {
                return Ok(());
            }
        }
        Ok(())
    }

    pub fn run(&self, start: &[f64]) -> Result<BarrierOutcome, OptError> {
        let mut theta = start.to_vec();
        if self.value(&theta, MU_START).is_none() {
            return Err(OptError::InfeasibleStart);
        }
        let mut stage_volumes = Vec::new();
        let mut steps = 0;
        let mut mu = MU_START;
        loop {
            self.solve_stage(&mut theta, mu, &mut steps)?;
            stage_volumes.push(volume_of(&theta));
            if mu <= MU_FINAL {
                break;
            }
            mu *= MU_FACTOR;
        }
        Ok(BarrierOutcome { theta, stage_volumes, newton_steps: steps })
    }
}

/// Norm of the reduced gradient of the volume after removing the best
/// nonnegative combination of active inequality gradients.
pub(crate) fn kkt_residual(theta: &[f64], ineqs: &[Inequality], basis: &DMatrix<f64>) -> f64 {
    let k = theta.len();
    let g = DVector::from_iterator(k, theta.iter().map(|&t| grad_or_pinned(t)));
    let gy = basis.transpose() * &g;
    let active: Vec<&Inequality> = ineqs.iter().filter(|q| q.slack(theta) < ACTIVE_SLACK).collect();
    if active.is_empty() || basis.ncols() == 0 {
        return gy.norm();
    }
    let mut cols = DMatrix::zeros(basis.ncols(), active.len());
    for (j, q) in active.iter().enumerate() {
        let mut a = DVector::zeros(k);
        q.vars.iter().for_each(|&c| a[c] = q.sign);
        cols.set_column(j, &(basis.transpose() * a));
    }
    // Stationarity: ∇V + Σ λ ∇s = 0 with λ >= 0.
    let rhs = -&gy;
    let lambda = cols.clone().svd(true, true).solve(&rhs, 1e-12).unwrap_or_else(|_| DVector::zeros(active.len())).map(|l| l.max(0.0));
    (gy + cols * lambda).norm()
}

/// Least-norm correction of `theta` onto the face where the equalities and
/// the `active` inequalities hold exactly; also returns the face's rows.
fn project(system: &ConstraintSystem, ineqs: &[Inequality], theta: &[f64], active: &[usize]) -> Option<(Vec<f64>, Vec<Vec<f64>>)> {
    let k = system.num_vars;
    let mut rows = Vec::new();
    let mut targets = Vec::new();
    for r in &system.equalities {
        let mut a = vec![0.0; k];
        r.vars.iter().for_each(|&c| a[c] = 1.0);
        rows.push(a);
        targets.push(r.rhs);
    }
    for &i in active {
        let q = &ineqs[i];
        let mut a = vec![0.0; k];
        q.vars.iter().for_each(|&c| a[c] = q.sign);
        rows.push(a);
        targets.push(-q.offset);
    }
    let c = DMatrix::from_fn(rows.len(), k, |i, j| rows[i][j]);
    let th0 = DVector::from_column_slice(theta);
    let r = DVector::from_vec(targets) - &c * &th0;
    let delta = c.svd(true, true).solve(&r, 1e-12).ok()?;
    let mut th: Vec<f64> = (th0 + delta).iter().copied().collect();
    // Coordinates pinned to their lower bound land exactly on it.
    for q in active.iter().map(|&i| &ineqs[i]) {
        if q.vars.len() == 1 && q.sign > 0.0 {
            th[q.vars[0]] = -q.offset;
        }
    }
    Some((th, rows))
}

/// Newton's method on the face of the polytope where the inequalities
/// `active` hold with equality. Starts from the projection of `theta` onto
/// that face; returns `None` if the projection leaves the polytope or
/// Newton does not reach a stationary point of the face.
pub(crate) fn polish(system: &ConstraintSystem, ineqs: &[Inequality], theta: &[f64], active: &[usize]) -> Option<Vec<f64>> {
    let k = system.num_vars;
    let mut active = active.to_vec();
    let (mut th, rows) = loop {
        let (th, rows) = project(system, ineqs, theta, &active)?;
        // Constraints that become tight on the face join it; in the limit
        // ε → 0 several slacks can vanish together.
        let tight: Vec<usize> = (0..ineqs.len()).filter(|i| !active.contains(i) && ineqs[*i].slack(&th) < 1e-12).collect();
        if tight.is_empty() {
            break (th, rows);
        }
        active.extend(tight);
    };
    let inactive: Vec<&Inequality> = (0..ineqs.len()).filter(|i| !active.contains(i)).map(|i| &ineqs[i]).collect();
    let admissible = |x: &[f64]| inactive.iter().all(|q| q.slack(x) > 0.0) && x.iter().all(|&t| (0.0..=std::f64::consts::PI).contains(&t));
    if !admissible(&th) {
        return None;
    }

    let basis = null_space_of(rows, k);
    for _ in 0..100 {
        if basis.ncols() == 0 {
            return Some(th);
        }
        let g = DVector::from_iterator(k, th.iter().map(|&t| grad_or_pinned(t)));
        let gy = basis.transpose() * &g;
        let vol = volume_of(&th);
        if gy.norm() < FACE_GRAD_TOL * (1.0 + vol.abs()) {
            return Some(th);
        }
        let h = DMatrix::from_diagonal(&DVector::from_iterator(k, th.iter().map(|&t| curvature_or_pinned(t))));
        let dy = (-(basis.transpose() * h * &basis)).cholesky()?.solve(&gy);
        let dir = &basis * dy;
        let mut t = 1.0;
        let mut moved = false;
        for _ in 0..60 {
            let trial: Vec<f64> = th.iter().zip(dir.iter()).map(|(x, d)| x + t * d).collect();
            if admissible(&trial) && volume_of(&trial) >= vol - 1e-15 * vol.abs() {
                moved = trial != th;
                th = trial;
                break;
            }
            t *= BACKTRACK;
        }
        if !moved {
            break;
        }
    }
    let g = DVector::from_iterator(k, th.iter().map(|&t| grad_or_pinned(t)));
    ((basis.transpose() * g).norm() < FACE_GRAD_TOL * (1.0 + volume_of(&th).abs())).then_some(th)
}

/// Reduced gradient norm, relative to `1 + |V|`, accepted as stationary on
/// a face.
const FACE_GRAD_TOL: f64 = 1e-12;

/// Candidate active sets for the barrier solution `theta`: the `j`
/// inequalities with smallest slack, for `j = 0, 1, ...`. At the barrier
/// optimum each slack is about `μ / λ`, so truly active constraints come
/// first unless their multiplier is tiny.
pub(crate) fn active_candidates(ineqs: &[Inequality], theta: &[f64], max_size: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut order: Vec<usize> = (0..ineqs.len()).collect();
    order.sort_by(|&a, &b| ineqs[a].slack(theta).total_cmp(&ineqs[b].slack(theta)));
    (0..=max_size.min(order.len())).map(move |j| {
        let mut set = order[..j].to_vec();
        set.sort_unstable();
        set
    })
}

pub(crate) fn active_set(ineqs: &[Inequality], theta: &[f64], threshold: f64) -> Vec<usize> {
    (0..ineqs.len()).filter(|&i| ineqs[i].slack(theta) < threshold).collect()
}
