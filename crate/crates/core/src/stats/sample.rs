use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::StatsError;
use crate::geom::{config_volume, random_configuration};
use crate::rng::trial_rng;

/// Best known maximal volumes of ideal polyhedra with `n = 4..=12` vertices,
/// as published alongside the random-volume experiments. Used as the
/// default normalization so that normalized statistics are comparable with
/// the published ones.
pub const TABLE_VMAX: [(usize, f64); 9] = [
    (4, 1.014942),
    (5, 2.029883),
    (6, 3.663862),
    (7, 4.986773),
    (8, 6.488469),
    (9, 8.162538),
    (10, 9.839315),
    (11, 11.449290),
    (12, 13.529628),
];

pub fn table_vmax(n: usize) -> Option<f64> {
    TABLE_VMAX.iter().find(|(m, _)| *m == n).map(|&(_, v)| v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VmaxSource {
    Table,
    Search,
    Given,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeSample {
    pub n: usize,
    pub seed: u64,
    pub vmax: f64,
    pub vmax_source: VmaxSource,
    pub volumes: Vec<f64>,
}

impl VolumeSample {
    pub fn len(&self) -> usize {
        self.volumes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.volumes.is_empty()
    }

    pub fn normalized(&self) -> Vec<f64> {
        self.volumes.iter().map(|v| v / self.vmax).collect()
    }
}

/// Volumes of `count` independent random configurations; trial `i` draws
/// from its own stream derived from `(seed, i)`, so the result does not
/// depend on the thread count.
pub fn sample_volumes(n: usize, count: usize, seed: u64, vmax: f64, vmax_source: VmaxSource) -> Result<VolumeSample, StatsError> {
    if n < 4 {
        return Err(StatsError::VertexCount { n });
    }
    if count == 0 {
        return Err(StatsError::TooFewSamples { needed: 1, got: 0 });
    }
    let volumes = (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let config = random_configuration(n, &mut trial_rng(seed, i))?;
            Ok(config_volume(&config)?)
        })
        .collect::<Result<Vec<f64>, StatsError>>()?;
    Ok(VolumeSample { n, seed, vmax, vmax_source, volumes })
}
