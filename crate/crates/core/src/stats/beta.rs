use serde::{Deserialize, Serialize};

use super::{StatsError, VolumeSample};
use crate::specfun::{digamma, kolmogorov_tail, ln_gamma, regularized_incomplete_beta, trigamma};

/// Normalized values at or above 1 are replaced by this before fitting.
pub const CLAMP_VALUE: f64 = 1.0 - 1e-12;
const MIN_SAMPLES: usize = 10;
const MAX_NEWTON: usize = 200;
const STEP_TOL: f64 = 1e-10;
const KS_CAVEAT: &str =
    "p-value from the asymptotic Kolmogorov distribution without correction for estimated parameters; it is biased upward";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitMethod {
    MaximumLikelihood,
    /// Newton did not converge; the method-of-moments estimate is reported.
    MomentsFallback,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaFit {
    pub alpha: f64,
    pub beta: f64,
    pub mean: f64,
    pub std: f64,
    pub ks_stat: f64,
    pub p_value: f64,
    pub count: usize,
    pub clamped: usize,
    pub method: FitMethod,
    pub iterations: usize,
    pub log_likelihood: f64,
    pub caveat: String,
}

impl BetaFit {
    /// Asymptotic standard errors of `(alpha, beta)` from the inverse
    /// Fisher information.
    pub fn standard_errors(&self) -> (f64, f64) {
        let (a, b) = (self.alpha, self.beta);
        let (Ok(ta), Ok(tb), Ok(tab)) = (trigamma(a), trigamma(b), trigamma(a + b)) else {
            return (f64::NAN, f64::NAN);
        };
        let (i11, i22, i12) = (ta - tab, tb - tab, -tab);
        let det = i11 * i22 - i12 * i12;
        let n = self.count as f64;
        ((i22 / det / n).sqrt(), (i11 / det / n).sqrt())
    }
}

pub fn fit_beta(sample: &VolumeSample) -> Result<BetaFit, StatsError> {
    fit_beta_values(&sample.normalized())
}

/// Maximum-likelihood Beta fit of values in `(0, 1]`, Newton's method on the
/// score equations started from the method-of-moments estimate.
pub fn fit_beta_values(values: &[f64]) -> Result<BetaFit, StatsError> {
    if values.len() < MIN_SAMPLES {
        return Err(StatsError::TooFewSamples { needed: MIN_SAMPLES, got: values.len() });
    }
    let mut clamped = 0;
    let mut xs = Vec::with_capacity(values.len());
    for &v in values {
        if !(v > 0.0) || !v.is_finite() || v > 1.0 + 1e-9 {
            return Err(StatsError::InvalidSample { value: v });
        }
        if v >= 1.0 {
            clamped += 1;
            xs.push(CLAMP_VALUE);
        } else {
            xs.push(v);
        }
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let l1 = xs.iter().map(|x| x.ln()).sum::<f64>() / n;
    let l2 = xs.iter().map(|x| (-x).ln_1p()).sum::<f64>() / n;

    let common = (mean * (1.0 - mean) / var - 1.0).max(1e-3);
    let moments = (mean * common, (1.0 - mean) * common);
    let (alpha, beta, method, iterations) = match newton(moments, l1, l2) {
        Some((a, b, it)) => (a, b, FitMethod::MaximumLikelihood, it),
        None => (moments.0, moments.1, FitMethod::MomentsFallback, MAX_NEWTON),
    };

    xs.sort_by(f64::total_cmp);
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = regularized_incomplete_beta(alpha, beta, x).map_err(|_| StatsError::InvalidSample { value: x })?;
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    let p_value = kolmogorov_tail(n.sqrt() * d).unwrap_or(0.0).clamp(0.0, 1.0);

    Ok(BetaFit {
        alpha,
        beta,
        mean,
        std: var.sqrt(),
        ks_stat: d.clamp(0.0, 1.0),
        p_value,
        count: xs.len(),
        clamped,
        method,
        iterations,
        log_likelihood: n * log_likelihood(alpha, beta, l1, l2),
        caveat: KS_CAVEAT.to_string(),
    })
}

fn log_likelihood(a: f64, b: f64, l1: f64, l2: f64) -> f64 {
    (a - 1.0) * l1 + (b - 1.0) * l2 - (ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b))
}

fn newton(start: (f64, f64), l1: f64, l2: f64) -> Option<(f64, f64, usize)> {
    let (mut a, mut b) = start;
    for it in 1..=MAX_NEWTON {
        let psi_ab = digamma(a + b).ok()?;
        let g1 = psi_ab - digamma(a).ok()? + l1;
        let g2 = psi_ab - digamma(b).ok()? + l2;
        let t_ab = trigamma(a + b).ok()?;
        let h11 = t_ab - trigamma(a).ok()?;
        let h22 = t_ab - trigamma(b).ok()?;
        let det = h11 * h22 - t_ab * t_ab;
        if !(det.abs() > 0.0) {
            return None;
        }
        let da = -(h22 * g1 - t_ab * g2) / det;
        let db = -(h11 * g2 - t_ab * g1) / det;
        let mut step = 1.0;
        while a + step * da <= 0.0 || b + step * db <= 0.0 {
            step *= 0.5;
        }
        a += step * da;
        b += step * db;
        if !(a.is_finite() && b.is_finite()) {
            return None;
        }
        if (step * da).abs() < STEP_TOL * (1.0 + a) && (step * db).abs() < STEP_TOL * (1.0 + b) {
            return Some((a, b, it));
        }
    }
    None
}
