use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::StatsError;
use crate::geom::{close_with_infinity, delaunay, random_configuration, PointConfiguration};
use crate::optvol::{optimize_link, OptResult};
use crate::rng::trial_rng;
use crate::triang::{ApexLink, CanonicalCode, SphereTriangulation};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialSummary {
    pub trial: u64,
    pub volume: f64,
    pub type_hash: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchResult {
    pub n: usize,
    pub seed: u64,
    pub epsilon: f64,
    pub trials: usize,
    pub distinct_types: usize,
    pub best_volume: f64,
    pub best_trial: u64,
    pub best_triangulation: SphereTriangulation,
    pub best_configuration: PointConfiguration,
    pub best: OptResult,
    pub per_trial: Vec<TrialSummary>,
}

struct Trial {
    config: PointConfiguration,
    triangulation: SphereTriangulation,
    link: Arc<ApexLink>,
    code: CanonicalCode,
}

/// Best maximal volume over the combinatorial types of `trials` random
/// configurations. Each type is optimized once, from the first trial that
/// produced it; ties go to the earliest trial.
pub fn search_max_volume(n: usize, trials: usize, seed: u64, epsilon: f64) -> Result<SearchResult, StatsError> {
    if n < 4 {
        return Err(StatsError::VertexCount { n });
    }
    if trials == 0 {
        return Err(StatsError::TooFewSamples { needed: 1, got: 0 });
    }
    let drawn = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let config = random_configuration(n, &mut trial_rng(seed, i))?;
            let pt = delaunay(&config)?;
            let (triangulation, link) = close_with_infinity(&pt)?;
            let code = triangulation.canonical_code();
            Ok(Trial { config, triangulation, link, code })
        })
        .collect::<Result<Vec<Trial>, StatsError>>()?;

    let mut first_of: HashMap<&CanonicalCode, usize> = HashMap::new();
    let mut representatives = Vec::new();
    let type_of: Vec<usize> = drawn
        .iter()
        .enumerate()
        .map(|(i, t)| {
            *first_of.entry(&t.code).or_insert_with(|| {
                representatives.push(i);
                representatives.len() - 1
            })
        })
        .collect();

    let optima =
        representatives.par_iter().map(|&i| Ok(optimize_link(&drawn[i].link, epsilon)?)).collect::<Result<Vec<OptResult>, StatsError>>()?;

    let per_trial: Vec<TrialSummary> = drawn
        .iter()
        .zip(&type_of)
        .enumerate()
        .map(|(i, (t, &k))| TrialSummary { trial: i as u64, volume: optima[k].volume, type_hash: t.triangulation.type_hash() })
        .collect();
    let mut best_k = 0;
    for k in 1..optima.len() {
        if optima[k].volume > optima[best_k].volume {
            best_k = k;
        }
    }
    let best_i = representatives[best_k];
    let best_trial = &drawn[best_i];
    Ok(SearchResult {
        n,
        seed,
        epsilon,
        trials,
        distinct_types: representatives.len(),
        best_volume: optima[best_k].volume,
        best_trial: best_i as u64,
        best_triangulation: best_trial.triangulation.clone(),
        best_configuration: best_trial.config.clone(),
        best: optima[best_k].clone(),
        per_trial,
    })
}
