use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::inversion::{fold_to_fundamental, invert_angles_with, invert_gamma, InversionTolerance};
use super::measurement::{sample_measurements, Axis};
use crate::error::{Error, Result};
use crate::qfi::ghz_crb_trace_inverse;
use crate::rng::derive_seed;
use crate::spin_algebra::{ghz_state, rotation, y_rotation, z_rotation, EulerAngles, Spin};

pub const MIN_PROTOCOL_SHOTS: usize = 100;

/// Which angles undo `(alpha, beta)` before the parity stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Realignment {
    /// The stage-1 estimates, as in a real two-stage experiment.
    Estimated,
    /// The true angles; isolates the parity stage.
    True,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    /// Copies measured along each of x, y, z.
    pub shots_per_setting: usize,
    /// Copies for the parity stage. Defaults to `3 * shots_per_setting`, an even
    /// split of the copies between the two stages.
    pub parity_shots: usize,
    pub realignment: Realignment,
}

impl ProtocolConfig {
    pub fn new(shots_per_setting: usize) -> Self {
        Self {
            shots_per_setting,
            parity_shots: 3 * shots_per_setting,
            realignment: Realignment::Estimated,
        }
    }

    pub fn total_copies(&self) -> usize {
        3 * self.shots_per_setting + self.parity_shots
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleEstimates {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub alpha_branches: [f64; 4],
    pub beta_branches: [f64; 2],
    pub gamma_ambiguity: Vec<f64>,
    /// Delta-method standard errors of `(alpha, beta, gamma)`; infinite where
    /// the estimator has no first-order sensitivity.
    pub stderr: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimationRun {
    pub n: u32,
    pub true_angles: EulerAngles,
    /// The true angles on the estimator's branch: `alpha, beta` in `[0, pi/2]`,
    /// `gamma` in `[0, pi/N]`.
    pub folded_truth: [f64; 3],
    pub shots_per_setting: usize,
    pub parity_shots: usize,
    pub realignment: Realignment,
    pub seed: u64,
    /// Estimated `<S_x^2>, <S_y^2>, <S_z^2>`.
    pub second_moments: [f64; 3],
    pub parity_mean: Option<f64>,
    pub estimates: Option<AngleEstimates>,
    /// Squared errors against `folded_truth`.
    pub empirical_error: Option<[f64; 3]>,
    /// `Tr F^{-1}` of the GHZ probe at the true `beta`; `None` at the poles.
    pub crb_trace: Option<f64>,
    pub failure: Option<String>,
}

fn check_inputs(n: u32, config: &ProtocolConfig) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument("the protocol needs N >= 2".into()));
    }
    if config.shots_per_setting < MIN_PROTOCOL_SHOTS || config.parity_shots < 1 {
        return Err(Error::InvalidArgument(format!(
            "the protocol needs at least {MIN_PROTOCOL_SHOTS} shots per setting"
        )));
    }
    Ok(())
}

pub fn run_protocol(
    true_angles: &EulerAngles,
    n: u32,
    shots_per_setting: usize,
    seed: u64,
) -> Result<EstimationRun> {
    run_protocol_with(true_angles, n, &ProtocolConfig::new(shots_per_setting), seed)
}

/// Two-stage estimation on `U(true_angles)|GHZ_N>`.
///
/// Stage 1 measures `S_x, S_y, S_z` and inverts the second moments for
/// `(alpha, beta)`. Stage 2 undoes them with `exp(i beta Jy) exp(i alpha Jz)`
/// and measures the parity, whose mean `cos(N gamma)` gives `gamma`.
/// Inversion failures are recorded in the run.
pub fn run_protocol_with(
    true_angles: &EulerAngles,
    n: u32,
    config: &ProtocolConfig,
    seed: u64,
) -> Result<EstimationRun> {
    check_inputs(n, config)?;
    let spin = Spin::from_qubits(n);
    let probe = ghz_state(n, 0.0)?.evolve(&rotation(spin, true_angles));
    let s = config.shots_per_setting;

    let records = Axis::SPIN
        .iter()
        .enumerate()
        .map(|(k, axis)| sample_measurements(&probe, *axis, s, derive_seed(seed, k as u64)))
        .collect::<Result<Vec<_>>>()?;
    let second_moments = [0, 1, 2].map(|k| records[k].second_moment());
    let moment_se = [0, 1, 2].map(|k| records[k].second_moment_stderr());

    let mut run = EstimationRun {
        n,
        true_angles: *true_angles,
        folded_truth: fold_to_fundamental(true_angles.alpha, true_angles.beta, true_angles.gamma, n),
        shots_per_setting: s,
        parity_shots: config.parity_shots,
        realignment: config.realignment,
        seed,
        second_moments,
        parity_mean: None,
        estimates: None,
        empirical_error: None,
        crb_trace: ghz_crb_trace_inverse(n, true_angles.beta).ok(),
        failure: None,
    };

    let [vx, vy, vz] = second_moments;
    let inv = match invert_angles_with(vx, vy, vz, n, InversionTolerance::for_shots(n, s)) {
        Ok(inv) => inv,
        Err(e) => {
            run.failure = Some(e.to_string());
            return Ok(run);
        }
    };

    let (ra, rb) = match config.realignment {
        Realignment::Estimated => (inv.alpha, inv.beta),
        Realignment::True => (true_angles.alpha, true_angles.beta),
    };
    let undo = y_rotation(spin, -rb) * z_rotation(spin, -ra);
    let realigned = probe.evolve(&undo);
    let parity = sample_measurements(&realigned, Axis::Parity, config.parity_shots, derive_seed(seed, 3))?;
    run.parity_mean = Some(parity.sample_mean);
    let gi = invert_gamma(parity.sample_mean, n)?;

    let nf = f64::from(n);
    let gamma_se = parity.mean_stderr() / (nf * (nf * gi.principal).sin().abs());
    let [a_se, b_se] = angle_stderr(n, inv.direction_squares, moment_se);
    let est = AngleEstimates {
        alpha: inv.alpha,
        beta: inv.beta,
        gamma: gi.principal,
        alpha_branches: inv.alpha_branches,
        beta_branches: inv.beta_branches,
        gamma_ambiguity: gi.ambiguity,
        stderr: [a_se, b_se, nan_to_inf(gamma_se)],
    };
    let t = run.folded_truth;
    run.empirical_error = Some([
        (est.alpha - t[0]).powi(2),
        (est.beta - t[1]).powi(2),
        (est.gamma - t[2]).powi(2),
    ]);
    run.estimates = Some(est);
    Ok(run)
}

fn nan_to_inf(x: f64) -> f64 {
    if x.is_nan() {
        f64::INFINITY
    } else {
        x
    }
}

/// Delta-method errors of `alpha = atan2(sqrt b, sqrt a)` and
/// `beta = acos(sqrt c)`, with `(a, b, c)` the projected rescaled moments.
fn angle_stderr(n: u32, [a, b, c]: [f64; 3], moment_se: [f64; 3]) -> [f64; 2] {
    let nf = f64::from(n);
    let k = nf * (nf - 1.0) / 4.0;
    let grad_alpha = [
        -b.sqrt() / (2.0 * a.sqrt() * (a + b)),
        a.sqrt() / (2.0 * b.sqrt() * (a + b)),
        0.0,
    ];
    let grad_beta = [0.0, 0.0, -1.0 / (2.0 * (c * (1.0 - c)).sqrt())];
    let propagate = |g: [f64; 3]| {
        // d(a, b, c)/d(moments) = P / k with P the projector off (1, 1, 1)
        let mean = (g[0] + g[1] + g[2]) / 3.0;
        let var: f64 = (0..3).map(|i| ((g[i] - mean) / k * moment_se[i]).powi(2)).sum();
        nan_to_inf(var.sqrt())
    };
    [propagate(grad_alpha), propagate(grad_beta)]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub batches: usize,
    pub failed: usize,
    /// Mean squared error per angle over the successful runs.
    pub mean_squared_error: [f64; 3],
    pub total_mean_squared_error: f64,
    pub total_mse_stderr: f64,
    pub crb_trace: Option<f64>,
    /// `crb_trace / shots_per_setting`.
    pub crb_per_shot: Option<f64>,
    /// `crb_trace / total copies` (all four settings).
    pub crb_per_copy: Option<f64>,
    /// `crb_per_shot * (1 - 3/sqrt(M))`.
    pub bound_with_slack: Option<f64>,
    pub respects_bound: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchResult {
    pub config: ProtocolConfig,
    pub runs: Vec<EstimationRun>,
    pub summary: BatchSummary,
}

/// `batches` independent runs with seeds derived from `seed`, run in
/// parallel and aggregated in index order.
pub fn run_batch(
    true_angles: &EulerAngles,
    n: u32,
    config: &ProtocolConfig,
    batches: usize,
    seed: u64,
) -> Result<BatchResult> {
    check_inputs(n, config)?;
    if batches == 0 {
        return Err(Error::InvalidArgument("batches must be at least 1".into()));
    }
    let runs = (0..batches as u64)
        .into_par_iter()
        .map(|b| run_protocol_with(true_angles, n, config, derive_seed(seed, b)))
        .collect::<Result<Vec<_>>>()?;
    let summary = summarize(&runs, config);
    Ok(BatchResult {
        config: *config,
        runs,
        summary,
    })
}

pub fn summarize(runs: &[EstimationRun], config: &ProtocolConfig) -> BatchSummary {
    let errors: Vec<[f64; 3]> = runs.iter().filter_map(|r| r.empirical_error).collect();
    let m = errors.len();
    let mf = m.max(1) as f64;
    let mut mse = [0.0; 3];
    for e in &errors {
        for i in 0..3 {
            mse[i] += e[i] / mf;
        }
    }
    let totals: Vec<f64> = errors.iter().map(|e| e.iter().sum()).collect();
    let total = totals.iter().sum::<f64>() / mf;
    let total_se = if m > 1 {
        (totals.iter().map(|t| (t - total).powi(2)).sum::<f64>() / ((m - 1) as f64) / mf).sqrt()
    } else {
        f64::INFINITY
    };
    let crb = runs.first().and_then(|r| r.crb_trace);
    let per_shot = crb.map(|c| c / config.shots_per_setting as f64);
    let slack = per_shot.map(|c| c * (1.0 - 3.0 / (runs.len() as f64).sqrt()));
    BatchSummary {
        batches: runs.len(),
        failed: runs.len() - m,
        mean_squared_error: mse,
        total_mean_squared_error: total,
        total_mse_stderr: total_se,
        crb_trace: crb,
        crb_per_shot: per_shot,
        crb_per_copy: crb.map(|c| c / config.total_copies() as f64),
        bound_with_slack: slack,
        respects_bound: if m > 0 { slack.map(|s| total >= s) } else { None },
    }
}
