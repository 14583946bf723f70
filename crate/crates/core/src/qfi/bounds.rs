use serde::{Deserialize, Serialize};

use super::haar::haar_avg_trace_analytic;
use super::matrix::QfiMatrix;
use crate::error::{Error, Result};
use crate::spin_algebra::SpinState;

/// Gimbal-lock guard on `|sin beta|`.
pub const SIN_BETA_GUARD: f64 = 1e-9;

fn check_beta(beta: f64) -> Result<f64> {
    let s = beta.sin();
    if s.is_nan() || s.abs() <= SIN_BETA_GUARD {
        return Err(Error::SingularRotation { sin_beta: s });
    }
    Ok(s * s)
}

fn check_n(n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    Ok(f64::from(n))
}

/// GHZ Fisher matrix
/// `[[N^2 cos^2 b + N sin^2 b, 0, N^2 cos b], [0, N, 0], [N^2 cos b, 0, N^2]]`.
pub fn closed_form_ghz_qfi(n: u32, beta: f64) -> QfiMatrix {
    let nf = f64::from(n);
    let (s, c) = beta.sin_cos();
    QfiMatrix::from_rows([
        [nf * nf * c * c + nf * s * s, 0.0, nf * nf * c],
        [0.0, nf, 0.0],
        [nf * nf * c, 0.0, nf * nf],
    ])
}

/// `Tr F^{-1} = 1/N^2 + 2/(N sin^2 b)` for the GHZ probe.
pub fn ghz_crb_trace_inverse(n: u32, beta: f64) -> Result<f64> {
    let nf = check_n(n)?;
    let s2 = check_beta(beta)?;
    Ok(1.0 / (nf * nf) + 2.0 / (nf * s2))
}

/// Published anti-coherent baseline `3/(N(N+1)) (1 + 2/sin^2 b)`.
pub fn goldberg_bound(n: u32, beta: f64) -> Result<f64> {
    let nf = check_n(n)?;
    let s2 = check_beta(beta)?;
    Ok(3.0 / (nf * (nf + 1.0)) * (1.0 + 2.0 / s2))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostBounds {
    /// Haar average of `Tr F`.
    pub mean_trace_qfi: f64,
    /// `9 / Tr(F bar)`, a lower bound on the averaged `Tr F^{-1}`.
    pub nine_over_bound: f64,
}

pub fn cost_lower_bounds(state: &SpinState) -> Result<CostBounds> {
    let v = haar_avg_trace_analytic(state).value;
    if v.is_nan() || v <= 1e-12 {
        return Err(Error::DegenerateState { value: v });
    }
    Ok(CostBounds {
        mean_trace_qfi: v,
        nine_over_bound: 9.0 / v,
    })
}
