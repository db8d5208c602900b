use serde::{Deserialize, Serialize};

use super::{BetaFit, StatsError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
}

/// Ordinary least squares line through `(x, y)` pairs; needs two distinct
/// abscissae.
pub fn linear_fit(points: &[(f64, f64)]) -> Option<LinearFit> {
    let m = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / m;
    let my = points.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if !(sxx > 0.0) {
        return None;
    }
    let slope = sxy / sxx;
    Some(LinearFit { slope, intercept: my - slope * mx })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub ratio: f64,
    /// `alpha / (alpha + beta)`, the mean of the fitted distribution.
    pub fitted_mean: f64,
    pub sample_mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub alpha: LinearFit,
    pub beta: LinearFit,
    pub rows: Vec<ScalingRow>,
}

pub fn scaling_fit(fits: &[(usize, BetaFit)]) -> Result<ScalingFit, StatsError> {
    let mut rows: Vec<ScalingRow> = fits
        .iter()
        .map(|(n, f)| ScalingRow {
            n: *n,
            alpha: f.alpha,
            beta: f.beta,
            ratio: f.alpha / f.beta,
            fitted_mean: f.alpha / (f.alpha + f.beta),
            sample_mean: f.mean,
        })
        .collect();
    rows.sort_by_key(|r| r.n);
    let mut distinct: Vec<usize> = rows.iter().map(|r| r.n).collect();
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(StatsError::TooFewDistinct { got: distinct.len() });
    }
    let line =
        |f: fn(&ScalingRow) -> f64| linear_fit(&rows.iter().map(|r| (r.n as f64, f(r))).collect::<Vec<_>>()).expect("distinct abscissae");
    let alpha = line(|r| r.alpha);
    let beta = line(|r| r.beta);
    Ok(ScalingFit { alpha, beta, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::FitMethod;

    fn fit(alpha: f64, beta: f64, mean: f64) -> BetaFit {
        BetaFit {
            alpha,
            beta,
            mean,
            std: 0.1,
            ks_stat: 0.01,
            p_value: 0.5,
            count: 5000,
            clamped: 0,
            method: FitMethod::MaximumLikelihood,
            iterations: 5,
            log_likelihood: 0.0,
            caveat: String::new(),
        }
    }

    #[test]
    fn two_points_on_a_line() {
        let l = linear_fit(&[(1.0, 2.0), (3.0, 6.0)]).unwrap();
        assert!((l.slope - 2.0).abs() < 1e-15);
        assert!(l.intercept.abs() < 1e-15);
        assert!(linear_fit(&[(1.0, 2.0), (1.0, 3.0)]).is_none());
    }

    #[test]
    fn published_table_slopes() {
        let table = [
            (5, 2.88, 1.53, 0.659),
            (6, 6.74, 4.11, 0.623),
            (7, 9.67, 4.84, 0.667),
            (8, 13.26, 6.12, 0.685),
            (10, 23.02, 10.05, 0.696),
            (12, 32.56, 14.49, 0.692),
        ];
        let fits: Vec<(usize, BetaFit)> = table.iter().map(|&(n, a, b, m)| (n, fit(a, b, m))).collect();
        let s = scaling_fit(&fits).unwrap();
        assert!((s.alpha.slope - 4.25).abs() < 0.15, "{}", s.alpha.slope);
        assert!((s.beta.slope - 1.78).abs() < 0.15, "{}", s.beta.slope);
        for r in s.rows.iter().filter(|r| r.n >= 8) {
            assert!((r.sample_mean - 0.69).abs() < 0.02);
        }
    }

    #[test]
    fn needs_three_vertex_counts() {
        let fits = vec![(5, fit(2.0, 2.0, 0.5)), (6, fit(3.0, 2.0, 0.6)), (6, fit(3.1, 2.0, 0.6))];
        assert!(matches!(scaling_fit(&fits), Err(StatsError::TooFewDistinct { got: 2 })));
    }
}
