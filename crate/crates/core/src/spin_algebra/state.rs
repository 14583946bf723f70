use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::angles::EulerAngles;
use super::operators::{spin_operators, Spin, SpinOperators};
use crate::error::{Error, Result};
use crate::linalg::{binomial, c, expectation, fidelity, CVector};

/// Normalization tolerance on `sum |a_m|^2`.
pub const NORM_TOL: f64 = 1e-12;

/// A normalized pure state of a spin-`j` irrep in the Dicke basis, `m = j .. -j`.
///
/// Serialized as `{"j": 1.5, "amplitudes": [[re, im], ...]}`; deserializing
/// normalizes the amplitudes and rejects the zero vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "StateRepr", try_from = "StateRepr")]
pub struct SpinState {
    spin: Spin,
    amplitudes: CVector,
}

#[derive(Serialize, Deserialize)]
struct StateRepr {
    j: f64,
    amplitudes: Vec<[f64; 2]>,
}

impl From<SpinState> for StateRepr {
    fn from(s: SpinState) -> Self {
        Self {
            j: s.spin.j(),
            amplitudes: s.amplitudes.iter().map(|a| [a.re, a.im]).collect(),
        }
    }
}

impl TryFrom<StateRepr> for SpinState {
    type Error = Error;
    fn try_from(r: StateRepr) -> Result<Self> {
        let spin = Spin::from_j(r.j)?;
        let a = CVector::from_iterator(
            r.amplitudes.len(),
            r.amplitudes.iter().map(|[re, im]| Complex64::new(*re, *im)),
        );
        SpinState::normalized(spin, a)
    }
}

impl SpinState {
    /// Wraps amplitudes that are already normalized.
    pub fn new(spin: Spin, amplitudes: CVector) -> Result<Self> {
        if amplitudes.len() != spin.dim() {
            return Err(Error::DimensionMismatch {
                len: amplitudes.len(),
                expected: spin.dim(),
            });
        }
        let norm_sq = amplitudes.norm_squared();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(Self { spin, amplitudes })
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(spin: Spin, amplitudes: CVector) -> Result<Self> {
        if amplitudes.len() != spin.dim() {
            return Err(Error::DimensionMismatch {
                len: amplitudes.len(),
                expected: spin.dim(),
            });
        }
        let norm = amplitudes.norm();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::ZeroState);
        }
        Ok(Self {
            spin,
            amplitudes: amplitudes / c(norm),
        })
    }

    pub fn from_slice(spin: Spin, amplitudes: &[Complex64]) -> Result<Self> {
        Self::new(spin, CVector::from_column_slice(amplitudes))
    }

    /// The Dicke state `|j, m>` with `m = j - k`.
    pub fn dicke(spin: Spin, k: usize) -> Result<Self> {
        if k >= spin.dim() {
            return Err(Error::InvalidArgument(format!(
                "Dicke index {k} out of range for j = {spin}"
            )));
        }
        let mut a = CVector::zeros(spin.dim());
        a[k] = c(1.0);
        Ok(Self { spin, amplitudes: a })
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    pub fn dim(&self) -> usize {
        self.spin.dim()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> CVector {
        self.amplitudes
    }

    /// Applies a unitary; the result is renormalized to absorb rounding.
    pub fn evolve(&self, unitary: &crate::linalg::CMatrix) -> Self {
        let v = unitary * &self.amplitudes;
        let n = v.norm();
        Self {
            spin: self.spin,
            amplitudes: v / c(n),
        }
    }

    pub fn fidelity(&self, other: &SpinState) -> f64 {
        fidelity(&self.amplitudes, &other.amplitudes)
    }

    /// Multiplies by the phase that makes the largest-magnitude amplitude real
    /// and positive. Ties go to the lowest index.
    pub fn canonical_phase(&self) -> Self {
        let mut best = 0;
        for (k, a) in self.amplitudes.iter().enumerate() {
            if a.norm() > self.amplitudes[best].norm() + 1e-15 {
                best = k;
            }
        }
        let a = self.amplitudes[best];
        let phase = if a.norm() > 0.0 { a.conj() / a.norm() } else { c(1.0) };
        Self {
            spin: self.spin,
            amplitudes: &self.amplitudes * phase,
        }
    }

    pub fn moments(&self) -> SpinMoments {
        SpinMoments::of(self, &spin_operators(self.spin))
    }
}

/// First and second moments of the collective spin in a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinMoments {
    /// `<J_a>`, a = x, y, z.
    pub first: [f64; 3],
    /// Symmetrized `<{J_a, J_b}>/2`.
    pub second: [[f64; 3]; 3],
}

impl SpinMoments {
    pub fn of(state: &SpinState, ops: &SpinOperators) -> Self {
        let psi = state.amplitudes();
        let applied: Vec<CVector> = ops.components().iter().map(|m| *m * psi).collect();
        let first = [0, 1, 2].map(|a| psi.dotc(&applied[a]).re);
        let mut second = [[0.0; 3]; 3];
        for a in 0..3 {
            for b in 0..3 {
                // <psi|A B|psi> = <A psi|B psi> for Hermitian A
                second[a][b] = applied[a].dotc(&applied[b]).re;
            }
        }
        Self { first, second }
    }

    /// Symmetrized covariance `<{J_a, J_b}>/2 - <J_a><J_b>`.
    pub fn covariance(&self) -> [[f64; 3]; 3] {
        let mut cov = self.second;
        for (a, row) in cov.iter_mut().enumerate() {
            for (b, x) in row.iter_mut().enumerate() {
                *x -= self.first[a] * self.first[b];
            }
        }
        cov
    }

    /// `(Delta J_x)^2, (Delta J_y)^2, (Delta J_z)^2`.
    pub fn variances(&self) -> [f64; 3] {
        let cov = self.covariance();
        [cov[0][0], cov[1][1], cov[2][2]]
    }

    pub fn second_diagonal(&self) -> [f64; 3] {
        [self.second[0][0], self.second[1][1], self.second[2][2]]
    }
}

/// `(|N/2, N/2> + e^{i delta} |N/2, -N/2>) / sqrt 2`.
pub fn ghz_state(n: u32, delta: f64) -> Result<SpinState> {
    if n == 0 {
        return Err(Error::InvalidArgument("GHZ state needs N >= 1".into()));
    }
    let spin = Spin::from_qubits(n);
    let mut a = CVector::zeros(spin.dim());
    a[0] = c(FRAC_1_SQRT_2);
    a[spin.dim() - 1] = Complex64::from_polar(FRAC_1_SQRT_2, delta);
    Ok(SpinState { spin, amplitudes: a })
}

/// Dicke expansion of the product state `|u>^{(x) N}` for a single-qubit `u = (u0, u1)`
/// in the `|up>, |down>` basis: `a_{j, j-k} = sqrt(C(N,k)) u0^{N-k} u1^k`.
pub fn product_state_amplitudes(n: u32, u0: Complex64, u1: Complex64) -> CVector {
    CVector::from_iterator(
        n as usize + 1,
        (0..=n).map(|k| c(binomial(n, k).sqrt()) * u0.powu(n - k) * u1.powu(k)),
    )
}

/// Spin-coherent state pointing along polar angle `theta`, azimuth `phi`.
pub fn coherent_state(spin: Spin, theta: f64, phi: f64) -> SpinState {
    let u0 = c((theta / 2.0).cos());
    let u1 = Complex64::from_polar((theta / 2.0).sin(), phi);
    let a = product_state_amplitudes(spin.n_qubits(), u0, u1);
    let n = a.norm();
    SpinState {
        spin,
        amplitudes: a / c(n),
    }
}

/// The rotated GHZ state `U(alpha, beta, gamma) |GHZ>` written as
/// `(|n>^N + e^{i gamma N} |-n>^N) / sqrt 2`, with
/// `|n> = (cos b/2, e^{ia} sin b/2)` and `|-n> = (-sin b/2, e^{ia} cos b/2)`.
///
/// Equal to `rotation(N/2, angles) * ghz_state(N, 0)` up to a global phase.
pub fn rotated_ghz_closed_form(n: u32, angles: &EulerAngles) -> Result<SpinState> {
    if n == 0 {
        return Err(Error::InvalidArgument("GHZ state needs N >= 1".into()));
    }
    let (sb, cb) = (angles.beta / 2.0).sin_cos();
    let e_a = Complex64::from_polar(1.0, angles.alpha);
    let up = product_state_amplitudes(n, c(cb), e_a * sb);
    let down = product_state_amplitudes(n, c(-sb), e_a * cb);
    let rel = Complex64::from_polar(1.0, angles.gamma * f64::from(n));
    let a = (up + down * rel) * c(FRAC_1_SQRT_2);
    let norm = a.norm();
    Ok(SpinState {
        spin: Spin::from_qubits(n),
        amplitudes: a / c(norm),
    })
}

/// Haar-random pure state: i.i.d. complex Gaussian amplitudes, normalized.
pub fn random_state_with<R: Rng + ?Sized>(spin: Spin, rng: &mut R) -> SpinState {
    loop {
        let a = CVector::from_iterator(
            spin.dim(),
            (0..spin.dim()).map(|_| {
                Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
            }),
        );
        let norm = a.norm();
        if norm > 1e-300 {
            return SpinState {
                spin,
                amplitudes: a / c(norm),
            };
        }
    }
}

pub fn random_state(spin: Spin, seed: u64) -> SpinState {
    random_state_with(spin, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// `<psi|A|psi>` for a Hermitian operator, real part.
pub fn expect_real(state: &SpinState, op: &crate::linalg::CMatrix) -> f64 {
    expectation(op, state.amplitudes()).re
}
