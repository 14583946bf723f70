use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::pure::qfi_from_spin_covariance;
use crate::error::{Error, Result};
use crate::spin_algebra::{EulerAngles, SpinState};

pub const MIN_MC_SAMPLES: usize = 100;

/// Haar average of `Tr F` over SO(3).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HaarAverage {
    pub value: f64,
    /// Standard error of the mean; 0 for the analytic path.
    pub stderr: f64,
    /// 0 for the analytic path.
    pub n_samples: usize,
}

/// `(16/3) (dSz)^2 + (10/3) (dSx)^2 + (10/3) (dSy)^2`.
pub fn haar_avg_trace_analytic(state: &SpinState) -> HaarAverage {
    let [vx, vy, vz] = state.moments().variances();
    HaarAverage {
        value: 16.0 / 3.0 * vz + 10.0 / 3.0 * (vx + vy),
        stderr: 0.0,
        n_samples: 0,
    }
}

/// Haar-random Euler angles for sample `index`: stream `index` of a ChaCha8
/// generator keyed by `seed`, so the draw does not depend on scheduling.
pub fn haar_sample(seed: u64, index: u64) -> EulerAngles {
    let mut rng = crate::rng::substream(seed, index);
    let alpha = rng.random_range(0.0..2.0 * PI);
    let cos_beta: f64 = rng.random_range(-1.0..=1.0);
    let gamma = rng.random_range(0.0..2.0 * PI);
    EulerAngles::new(alpha, cos_beta.acos(), gamma)
}

/// Monte Carlo estimate with `alpha, gamma ~ U[0, 2pi)` and `cos beta ~ U[-1, 1]`.
pub fn haar_avg_trace_mc(state: &SpinState, n_samples: usize, seed: u64) -> Result<HaarAverage> {
    if n_samples < MIN_MC_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "Monte Carlo needs at least {MIN_MC_SAMPLES} samples, got {n_samples}"
        )));
    }
    let cov = state.moments().covariance();
    let traces: Vec<f64> = (0..n_samples as u64)
        .into_par_iter()
        .map(|i| qfi_from_spin_covariance(&cov, &haar_sample(seed, i)).trace())
        .collect();
    let n = n_samples as f64;
    let mean = traces.iter().sum::<f64>() / n;
    let var = traces.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(HaarAverage {
        value: mean,
        stderr: (var / n).sqrt(),
        n_samples,
    })
}
