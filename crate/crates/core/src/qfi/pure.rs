use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::generators::{generator_coefficients, GeneratorSet};
use super::matrix::QfiMatrix;
use crate::error::{Error, Result};
use crate::linalg::{c, CVector};
use crate::spin_algebra::{rotation_matrix, spin_operators, EulerAngles, SpinState};

/// Accepted range for the finite-difference step.
pub const FD_STEP_RANGE: (f64, f64) = (1e-7, 1e-3);
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// `F_mn = 4 cov(H_m, H_n)` in the probe state, with the symmetrized covariance
/// `<{H_m, H_n}>/2 - <H_m><H_n>`.
pub fn qfi_pure(state: &SpinState, angles: &EulerAngles) -> QfiMatrix {
    let gens = GeneratorSet::from_operators(&spin_operators(state.spin()), angles);
    let psi = state.amplitudes();
    let applied: Vec<CVector> = gens.as_array().iter().map(|h| *h * psi).collect();
    let mean: Vec<f64> = applied.iter().map(|v| psi.dotc(v).re).collect();
    let mut rows = [[0.0; 3]; 3];
    for m in 0..3 {
        for n in m..3 {
            let second = applied[m].dotc(&applied[n]).re;
            let f = 4.0 * (second - mean[m] * mean[n]);
            rows[m][n] = f;
            rows[n][m] = f;
        }
    }
    QfiMatrix::from_rows(rows)
}

/// `F = 4 C cov C^T` for a covariance over `(Jx, Jy, Jz)`; `C` holds the
/// generator coefficients.
pub fn qfi_from_spin_covariance(cov: &[[f64; 3]; 3], angles: &EulerAngles) -> QfiMatrix {
    let coef = generator_coefficients(angles);
    let mut rows = [[0.0; 3]; 3];
    for m in 0..3 {
        for n in 0..3 {
            let mut s = 0.0;
            for a in 0..3 {
                for b in 0..3 {
                    s += coef[m][a] * cov[a][b] * coef[n][b];
                }
            }
            rows[m][n] = 4.0 * s;
        }
    }
    QfiMatrix::from_rows(rows)
}

/// Overlap-form evaluation by central differences of `U(theta)|psi0>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiniteDifferenceQfi {
    /// Real part of `2<d_m|d_n> + 2<d_n|d_m> + 4<psi|d_m><psi|d_n>`.
    pub matrix: QfiMatrix,
    /// Largest imaginary part dropped from the expression above.
    pub imaginary_residual: f64,
}

/// `F_mn = 2<d_m psi|d_n psi> + 2<d_n psi|d_m psi> + 4<psi|d_m psi><psi|d_n psi>`
/// with derivatives by central differences of step `step`.
pub fn qfi_pure_fd(state: &SpinState, angles: &EulerAngles, step: f64) -> Result<FiniteDifferenceQfi> {
    if !(FD_STEP_RANGE.0..=FD_STEP_RANGE.1).contains(&step) {
        return Err(Error::InvalidStep(step));
    }
    let spin = state.spin();
    let psi0 = state.amplitudes();
    let base = angles.as_array();
    let at = |theta: [f64; 3]| rotation_matrix(spin, theta[0], theta[1], theta[2]) * psi0;
    let psi = at(base);
    let derivs: Vec<CVector> = (0..3)
        .map(|m| {
            let mut plus = base;
            let mut minus = base;
            plus[m] += step;
            minus[m] -= step;
            (at(plus) - at(minus)) / c(2.0 * step)
        })
        .collect();
    let overlap: Vec<Complex64> = derivs.iter().map(|d| psi.dotc(d)).collect();
    let mut rows = [[0.0; 3]; 3];
    let mut residual: f64 = 0.0;
    for m in 0..3 {
        for n in 0..3 {
            let f = derivs[m].dotc(&derivs[n]) * 2.0
                + derivs[n].dotc(&derivs[m]) * 2.0
                + overlap[m] * overlap[n] * 4.0;
            rows[m][n] = f.re;
            residual = residual.max(f.im.abs());
        }
    }
    Ok(FiniteDifferenceQfi {
        matrix: QfiMatrix::from_rows(rows),
        imaginary_residual: residual,
    })
}

/// `Im<d_m psi|d_n psi> = Im<H_m psi0|H_n psi0>`; zero everywhere is the
/// weak-commutativity condition for saturating the multiparameter bound.
pub fn saturation_check(state: &SpinState, angles: &EulerAngles) -> [[f64; 3]; 3] {
    let gens = GeneratorSet::from_operators(&spin_operators(state.spin()), angles);
    let psi = state.amplitudes();
    let applied: Vec<CVector> = gens.as_array().iter().map(|h| *h * psi).collect();
    let mut out = [[0.0; 3]; 3];
    for m in 0..3 {
        for n in (m + 1)..3 {
            let v = applied[m].dotc(&applied[n]).im;
            out[m][n] = v;
            out[n][m] = -v;
        }
    }
    out
}
