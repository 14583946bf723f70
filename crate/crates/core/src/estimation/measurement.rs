use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{expm_hermitian, hermitian_eigen, CMatrix};
use crate::spin_algebra::{spin_operators, Spin, SpinState};

/// A measurement setting: one collective spin component, or the parity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
    Parity,
}

impl Axis {
    pub const SPIN: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];
}

/// Possible outcomes of `axis`: `j, j-1, ..., -j` for spin components and
/// `+1, -1` for the parity.
pub fn outcome_values(spin: Spin, axis: Axis) -> Vec<f64> {
    match axis {
        Axis::Parity => vec![1.0, -1.0],
        _ => (0..spin.dim()).map(|k| spin.m(k)).collect(),
    }
}

/// Born-rule probabilities in the order of [`outcome_values`].
///
/// Spin components use the eigendecomposition of `J_axis`; the parity uses
/// `(1 +- <Pi>)/2`.
pub fn measurement_distribution(state: &SpinState, axis: Axis) -> Vec<f64> {
    let spin = state.spin();
    let psi = state.amplitudes();
    let ops = spin_operators(spin);
    let op = match axis {
        Axis::X => &ops.jx,
        Axis::Y => &ops.jy,
        Axis::Z => {
            return psi.iter().map(|a| a.norm_sqr()).collect();
        }
        Axis::Parity => {
            let e = parity_of_state(state).clamp(-1.0, 1.0);
            return vec![(1.0 + e) / 2.0, (1.0 - e) / 2.0];
        }
    };
    let eig = hermitian_eigen(op);
    // eigenvalues ascend from -j; outcomes descend from +j
    let d = spin.dim();
    (0..d)
        .map(|k| {
            let v = eig.eigenvectors.column(d - 1 - k);
            v.dotc(psi).norm_sqr()
        })
        .collect()
}

/// `<S_x^2>, <S_y^2>, <S_z^2>` of the rotated GHZ state:
/// `(N + N(N-1) sin^2 b cos^2 a)/4`, `(N + N(N-1) sin^2 b sin^2 a)/4`,
/// `(N + N(N-1) cos^2 b)/4`.
pub fn variance_formulas(n: u32, alpha: f64, beta: f64) -> [f64; 3] {
    let nf = f64::from(n);
    let k = nf * (nf - 1.0);
    let (sb, cb) = beta.sin_cos();
    let (sa, ca) = alpha.sin_cos();
    [
        (nf + k * sb * sb * ca * ca) / 4.0,
        (nf + k * sb * sb * sa * sa) / 4.0,
        (nf + k * cb * cb) / 4.0,
    ]
}

/// `Pi = i^N exp(-i pi S_x)` on the spin-`N/2` space; equals the tensor
/// product of `sigma_x` restricted to the symmetric subspace.
pub fn parity_operator(spin: Spin) -> CMatrix {
    let phase = Complex64::new(0.0, 1.0).powu(spin.n_qubits());
    expm_hermitian(&spin_operators(spin).jx, std::f64::consts::PI) * phase
}

pub fn parity_of_state(state: &SpinState) -> f64 {
    let psi = state.amplitudes();
    psi.dotc(&(parity_operator(state.spin()) * psi)).re
}

/// `(|j, j> + e^{i gamma N} |j, -j>)/sqrt 2`, the re-aligned probe.
pub fn phased_ghz(n: u32, gamma: f64) -> Result<SpinState> {
    crate::spin_algebra::ghz_state(n, gamma * f64::from(n))
}

/// `<Pi> = cos(N gamma)` on the re-aligned probe.
pub fn parity_expectation(n: u32, gamma: f64) -> Result<f64> {
    let closed = (f64::from(n) * gamma).cos();
    let from_state = parity_of_state(&phased_ghz(n, gamma)?);
    debug_assert!((closed - from_state).abs() < 1e-10);
    Ok(closed)
}

/// Finite-shot record of one measurement setting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub axis: Axis,
    pub shots: usize,
    pub outcomes: Vec<f64>,
    pub sample_mean: f64,
    /// Unbiased sample variance of the outcomes.
    pub sample_variance: f64,
}

impl MeasurementRecord {
    /// Mean of the squared outcomes, the estimate of `<S_axis^2>`.
    pub fn second_moment(&self) -> f64 {
        self.outcomes.iter().map(|x| x * x).sum::<f64>() / self.shots as f64
    }

    /// Standard error of [`Self::second_moment`].
    pub fn second_moment_stderr(&self) -> f64 {
        let m = self.second_moment();
        let n = self.shots as f64;
        if self.shots < 2 {
            return f64::INFINITY;
        }
        let var = self.outcomes.iter().map(|x| (x * x - m).powi(2)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    }

    pub fn mean_stderr(&self) -> f64 {
        (self.sample_variance / self.shots as f64).sqrt()
    }
}

/// I.i.d. samples from [`measurement_distribution`], seeded by ChaCha8.
pub fn sample_measurements(
    state: &SpinState,
    axis: Axis,
    shots: usize,
    seed: u64,
) -> Result<MeasurementRecord> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let values = outcome_values(state.spin(), axis);
    let probs = measurement_distribution(state, axis);
    let dist = WeightedIndex::new(probs.iter().map(|p| p.max(0.0)))
        .map_err(|e| Error::InvalidArgument(format!("measurement distribution: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let outcomes: Vec<f64> = (0..shots).map(|_| values[dist.sample(&mut rng)]).collect();
    let n = shots as f64;
    let mean = outcomes.iter().sum::<f64>() / n;
    let var = if shots > 1 {
        outcomes.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    Ok(MeasurementRecord {
        axis,
        shots,
        outcomes,
        sample_mean: mean,
        sample_variance: var,
    })
}
