//! Maximization of the Haar-averaged trace Fisher information over pure
//! states of one spin-j irrep.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, CVector};
use crate::qfi::haar_avg_trace_analytic;
use crate::rng::substream;
use crate::spin_algebra::{random_state_with, spin_operators, Spin, SpinOperators, SpinState};

/// Weights of `(dSx)^2, (dSy)^2, (dSz)^2` in the Haar-averaged trace.
pub const HAAR_WEIGHTS: [f64; 3] = [10.0 / 3.0, 10.0 / 3.0, 16.0 / 3.0];
const ARMIJO: f64 = 1e-4;
const STALL_WINDOW: usize = 10;

pub fn objective(state: &SpinState) -> f64 {
    haar_avg_trace_analytic(state).value
}

/// `f(psi) = sum_a w_a (<psi|J_a^2|psi> - <psi|J_a|psi>^2)` on unnormalized
/// amplitudes, and its gradient `g` in the sense `df = Re<g, dpsi>`:
/// `g = sum_a w_a (2 J_a^2 psi - 4 <J_a> J_a psi)`.
pub fn value_and_gradient(ops: &SpinOperators, psi: &CVector) -> (f64, CVector) {
    let mut value = 0.0;
    let mut grad = CVector::zeros(psi.len());
    for (w, op) in HAAR_WEIGHTS.iter().zip(ops.components()) {
        let a = op * psi;
        let a2 = op * &a;
        let mean = psi.dotc(&a).re;
        value += w * (a.norm_squared() - mean * mean);
        grad += (a2 * c(2.0) - a * c(4.0 * mean)) * c(*w);
    }
    (value, grad)
}

fn value_only(ops: &SpinOperators, psi: &CVector) -> f64 {
    HAAR_WEIGHTS
        .iter()
        .zip(ops.components())
        .map(|(w, op)| {
            let a = op * psi;
            let mean = psi.dotc(&a).re;
            w * (a.norm_squared() - mean * mean)
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 20,
            tol: 1e-9,
            max_iter: 5000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RestartOutcome {
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    pub gradient_norm: f64,
}

/// Moments identifying a maximizer up to numerical noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentFingerprint {
    pub first: [f64; 3],
    pub second: [[f64; 3]; 3],
}

impl MomentFingerprint {
    const RESOLUTION: f64 = 1e-4;

    pub fn of(state: &SpinState) -> Self {
        let m = state.moments();
        let r = |x: f64| (x / Self::RESOLUTION).round() * Self::RESOLUTION + 0.0;
        Self {
            first: m.first.map(r),
            second: m.second.map(|row| row.map(r)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Maximizer {
    pub restart: usize,
    pub value: f64,
    pub fingerprint: MomentFingerprint,
    pub state: SpinState,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub spin: Spin,
    /// Phase-fixed: the largest amplitude is real and positive.
    pub best_state: SpinState,
    pub best_value: f64,
    pub best_restart: usize,
    pub restarts_used: usize,
    /// Iterations of the best restart.
    pub iterations: usize,
    pub total_iterations: usize,
    /// False when every restart exhausted `max_iter`.
    pub converged: bool,
    pub restarts: Vec<RestartOutcome>,
    /// Distinct moment fingerprints among restarts within 1e-6 of the best value.
    pub maximizers: Vec<Maximizer>,
}

/// Projected gradient ascent on the unit sphere from one start.
fn ascend(ops: &SpinOperators, start: CVector, tol: f64, max_iter: usize) -> (CVector, RestartOutcome) {
    let mut psi = start;
    let (mut f, mut g) = value_and_gradient(ops, &psi);
    let mut step = 1.0;
    let mut history: Vec<f64> = vec![f];
    let mut converged = false;
    let mut gnorm = f64::INFINITY;
    let mut iterations = 0;
    while iterations < max_iter {
        let radial = psi.dotc(&g).re;
        let rg = &g - &psi * c(radial);
        gnorm = rg.norm();
        if gnorm < tol {
            converged = true;
            break;
        }
        iterations += 1;
        let mut accepted = None;
        while step > 1e-20 {
            let cand = &psi + &rg * c(step);
            let cand = &cand / c(cand.norm());
            let fc = value_only(ops, &cand);
            if fc >= f + ARMIJO * step * gnorm * gnorm {
                accepted = Some(cand);
                break;
            }
            step *= 0.5;
        }
        let Some(next) = accepted else {
            // no ascent step left at machine precision: stationary
            converged = true;
            break;
        };
        psi = next;
        (f, g) = value_and_gradient(ops, &psi);
        step = (step * 2.0).min(1e3);
        history.push(f);
        if history.len() > STALL_WINDOW && (f - history[history.len() - 1 - STALL_WINDOW]).abs() < tol {
            converged = true;
            break;
        }
    }
    (
        psi,
        RestartOutcome {
            value: f,
            iterations,
            converged,
            gradient_norm: gnorm,
        },
    )
}

pub fn maximize(spin: Spin, restarts: usize, tol: f64, max_iter: usize, seed: u64) -> Result<OptimizationResult> {
    maximize_with(
        spin,
        &OptimizerConfig {
            restarts,
            tol,
            max_iter,
            seed,
        },
    )
}

/// Best of `restarts` independent ascents from Haar-random starts. Restart `r`
/// draws its start from stream `r` of `seed`; ties go to the lower index.
pub fn maximize_with(spin: Spin, config: &OptimizerConfig) -> Result<OptimizationResult> {
    if config.restarts == 0 {
        return Err(Error::InvalidArgument("restarts must be at least 1".into()));
    }
    if config.tol.is_nan() || config.tol <= 0.0 {
        return Err(Error::InvalidArgument("tol must be positive".into()));
    }
    let ops = spin_operators(spin);
    let runs: Vec<(SpinState, RestartOutcome)> = (0..config.restarts)
        .into_par_iter()
        .map(|r| {
            let start = random_state_with(spin, &mut substream(config.seed, r as u64));
            let (psi, out) = ascend(&ops, start.into_amplitudes(), config.tol, config.max_iter);
            let state = SpinState::normalized(spin, psi).expect("ascent keeps unit norm");
            (state.canonical_phase(), out)
        })
        .collect();

    let mut best = 0;
    for (i, (_, out)) in runs.iter().enumerate() {
        if out.value > runs[best].1.value {
            best = i;
        }
    }
    let best_value = runs[best].1.value;
    let mut maximizers: Vec<Maximizer> = Vec::new();
    for (i, (state, out)) in runs.iter().enumerate() {
        if out.value < best_value - 1e-6 {
            continue;
        }
        let fp = MomentFingerprint::of(state);
        if !maximizers.iter().any(|m| m.fingerprint == fp) {
            maximizers.push(Maximizer {
                restart: i,
                value: out.value,
                fingerprint: fp,
                state: state.clone(),
            });
        }
    }
    Ok(OptimizationResult {
        spin,
        best_state: runs[best].0.clone(),
        best_value,
        best_restart: best,
        restarts_used: runs.len(),
        iterations: runs[best].1.iterations,
        total_iterations: runs.iter().map(|r| r.1.iterations).sum(),
        converged: runs.iter().any(|r| r.1.converged),
        restarts: runs.iter().map(|r| r.1).collect(),
        maximizers,
    })
}
