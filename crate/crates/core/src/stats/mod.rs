//! Random-volume experiments: sampling, Beta fits, scaling of the fitted
//! parameters, and the maximal-volume search over random configurations.

mod beta;
mod sample;
mod scaling;
mod search;

use thiserror::Error;

use crate::geom::GeomError;
use crate::optvol::OptError;

pub use beta::{fit_beta, fit_beta_values, BetaFit, FitMethod, CLAMP_VALUE};
pub use sample::{sample_volumes, table_vmax, VmaxSource, VolumeSample, TABLE_VMAX};
pub use scaling::{linear_fit, scaling_fit, LinearFit, ScalingFit, ScalingRow};
pub use search::{search_max_volume, SearchResult, TrialSummary};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("vertex count {n} is below 4")]
    VertexCount { n: usize },
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("sample value {value} is not in (0, 1]")]
    InvalidSample { value: f64 },
    #[error("need at least 3 distinct vertex counts, got {got}")]
    TooFewDistinct { got: usize },
    #[error("no tabulated maximal volume for n = {n}")]
    NoTableValue { n: usize },
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Opt(#[from] OptError),
}
