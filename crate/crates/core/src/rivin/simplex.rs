//! Dense two-phase tableau simplex with Bland's rule.
//!
//! Solves `min c·x  s.t.  A x = b, x >= 0`. Sizes here are a few dozen
//! rows and columns, so the tableau is a plain row-major `Vec`.

use thiserror::Error;

const PIVOT_TOL: f64 = 1e-11;
const COST_TOL: f64 = 1e-11;
/// Phase-one optimum above this is reported infeasible.
pub const FEASIBILITY_TOL: f64 = 1e-9;
pub const MAX_PIVOTS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimplexError {
    #[error("simplex exceeded {MAX_PIVOTS} pivots")]
    IterationCap,
    #[error("malformed program: {0}")]
    Malformed(String),
}

/// Equality-form linear program.
#[derive(Debug, Clone, Default)]
pub struct LinearProgram {
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal {
        x: Vec<f64>,
        objective: f64,
    },
    /// Positive phase-one optimum (sum of artificial variables).
    Infeasible {
        phase_one: f64,
    },
    Unbounded,
}

struct Tableau {
    rows: usize,
    cols: usize,
    /// `rows + 1` rows of `cols + 1` entries; the last row is the reduced
    /// cost row and the last column the right-hand side.
    data: Vec<f64>,
    basis: Vec<usize>,
    pivots: usize,
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * (self.cols + 1) + c]
    }

    fn at_mut(&mut self, r: usize, c: usize) -> &mut f64 {
        &mut self.data[r * (self.cols + 1) + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.cols)
    }

    fn pivot(&mut self, pr: usize, pc: usize) -> Result<(), SimplexError> {
        self.pivots += 1;
        if self.pivots > MAX_PIVOTS {
            return Err(SimplexError::IterationCap);
        }
        let w = self.cols + 1;
        let p = self.at(pr, pc);
        for c in 0..w {
            *self.at_mut(pr, c) /= p;
        }
        for r in 0..=self.rows {
            if r == pr {
                continue;
            }
            let f = self.at(r, pc);
            if f != 0.0 {
                for c in 0..w {
                    let v = self.at(pr, c);
                    *self.at_mut(r, c) -= f * v;
                }
                *self.at_mut(r, pc) = 0.0;
            }
        }
        self.basis[pr] = pc;
        Ok(())
    }

    /// Runs Bland's rule over the columns `allowed`. Returns false when
    /// unbounded.
    fn run(&mut self, allowed: &[bool]) -> Result<bool, SimplexError> {
        loop {
            let Some(enter) = (0..self.cols).find(|&j| allowed[j] && self.at(self.rows, j) < -COST_TOL) else {
                return Ok(true);
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows {
                let a = self.at(r, enter);
                if a > PIVOT_TOL {
                    let ratio = self.rhs(r) / a;
                    leave = match leave {
                        None => Some((r, ratio)),
                        Some((lr, lratio)) => {
                            if ratio < lratio - 1e-14 || (ratio <= lratio + 1e-14 && self.basis[r] < self.basis[lr]) {
                                Some((r, ratio))
                            } else {
                                Some((lr, lratio))
                            }
                        }
                    };
                }
            }
            let Some((pr, _)) = leave else {
                return Ok(false);
            };
            self.pivot(pr, enter)?;
        }
    }

    fn set_cost_row(&mut self, cost: &[f64]) {
        let w = self.cols + 1;
        let base = self.rows * w;
        for c in 0..w {
            self.data[base + c] = if c < cost.len() { cost[c] } else { 0.0 };
        }
        for r in 0..self.rows {
            let cb = cost.get(self.basis[r]).copied().unwrap_or(0.0);
            if cb != 0.0 {
                for c in 0..w {
                    let v = self.at(r, c);
                    self.data[base + c] -= cb * v;
                }
            }
        }
    }
}

pub fn solve(lp: &LinearProgram) -> Result<LpOutcome, SimplexError> {
    let m = lp.a.len();
    let n = lp.c.len();
    if lp.b.len() != m || lp.a.iter().any(|row| row.len() != n) {
        return Err(SimplexError::Malformed(format!("{} rows, {} right-hand sides, {} costs", m, lp.b.len(), n)));
    }
    let cols = n + m;
    let mut t = Tableau { rows: m, cols, data: vec![0.0; (m + 1) * (cols + 1)], basis: (n..n + m).collect(), pivots: 0 };
    for r in 0..m {
        let sign = if lp.b[r] < 0.0 { -1.0 } else { 1.0 };
        for c in 0..n {
            *t.at_mut(r, c) = sign * lp.a[r][c];
        }
        *t.at_mut(r, n + r) = 1.0;
        *t.at_mut(r, cols) = sign * lp.b[r];
    }

    // Phase one: minimize the sum of artificials.
    let mut phase_one_cost = vec![0.0; cols];
    phase_one_cost[n..].iter_mut().for_each(|c| *c = 1.0);
    t.set_cost_row(&phase_one_cost);
    let all = vec![true; cols];
    t.run(&all)?;
    let phase_one = -t.at(m, cols);
    if phase_one > FEASIBILITY_TOL {
        return Ok(LpOutcome::Infeasible { phase_one });
    }

    // Drive remaining artificials out of the basis; rows where that is
    // impossible are redundant and harmless (their artificial stays at 0
    // and is never allowed to re-enter).
    for r in 0..m {
        if t.basis[r] >= n {
            if let Some(c) = (0..n).find(|&c| t.at(r, c).abs() > 1e-9) {
                t.pivot(r, c)?;
            }
        }
    }

    let mut allowed = vec![true; cols];
    allowed[n..].iter_mut().for_each(|a| *a = false);
    t.set_cost_row(&lp.c);
    if !t.run(&allowed)? {
        return Ok(LpOutcome::Unbounded);
    }
    let mut x = vec![0.0; n];
    for r in 0..m {
        if t.basis[r] < n {
            x[t.basis[r]] = t.rhs(r).max(0.0);
        }
    }
    let objective = lp.c.iter().zip(&x).map(|(c, x)| c * x).sum();
    Ok(LpOutcome::Optimal { x, objective })
}
