use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Acceptance thresholds for [`invert_angles_with`], in units of `<S_a^2>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InversionTolerance {
    /// Largest accepted least-squares residual.
    pub residual: f64,
    /// Smallest accepted `N(N-1) sin^2 beta`.
    pub degeneracy: f64,
}

impl InversionTolerance {
    /// For exact moments.
    pub fn exact(n: u32) -> Self {
        let scale = (f64::from(n) * f64::from(n) / 4.0).max(1.0);
        Self {
            residual: 1e-9 * scale,
            degeneracy: 1e-9 * scale,
        }
    }

    /// For moments estimated from `shots` outcomes per axis: six standard
    /// errors of the worst-case second moment `N^2/4`.
    pub fn for_shots(n: u32, shots: usize) -> Self {
        let se = f64::from(n) * f64::from(n) / 4.0 / (shots.max(1) as f64).sqrt();
        Self {
            residual: 6.0 * se,
            degeneracy: 6.0 * se,
        }
    }
}

/// Principal-branch angles recovered from the three second moments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleInversion {
    /// In `[0, pi/2]`.
    pub alpha: f64,
    /// In `[0, pi/2]`.
    pub beta: f64,
    /// Distance of the moments from the model surface.
    pub residual: f64,
    /// `alpha, pi - alpha, pi + alpha, 2 pi - alpha`: equally consistent.
    pub alpha_branches: [f64; 4],
    /// `beta, pi - beta`: equally consistent.
    pub beta_branches: [f64; 2],
    /// Projected `(sin^2 b cos^2 a, sin^2 b sin^2 a, cos^2 b)`.
    pub direction_squares: [f64; 3],
}

pub fn invert_angles(var_x: f64, var_y: f64, var_z: f64, n: u32) -> Result<AngleInversion> {
    invert_angles_with(var_x, var_y, var_z, n, InversionTolerance::exact(n))
}

/// Least-squares inversion of
/// `<S_a^2> = (N + N(N-1) u_a^2)/4`, `u = (sin b cos a, sin b sin a, cos b)`:
/// the rescaled moments are projected onto the plane `u_x^2 + u_y^2 + u_z^2 = 1`.
pub fn invert_angles_with(
    var_x: f64,
    var_y: f64,
    var_z: f64,
    n: u32,
    tol: InversionTolerance,
) -> Result<AngleInversion> {
    if n < 2 {
        return Err(Error::InvalidArgument(
            "angle inversion needs N >= 2: for N = 1 the second moments carry no angle".into(),
        ));
    }
    let nf = f64::from(n);
    let k = nf * (nf - 1.0) / 4.0;
    let raw = [var_x, var_y, var_z].map(|v| (v - nf / 4.0) / k);
    let excess = 1.0 - raw.iter().sum::<f64>();
    let residual = k * excess.abs() / 3f64.sqrt();
    if residual.is_nan() || residual > tol.residual {
        return Err(Error::InconsistentMoments {
            residual,
            tolerance: tol.residual,
        });
    }
    let [a, b, c] = raw.map(|x| (x + excess / 3.0).clamp(0.0, 1.0));
    let sin2_beta = 1.0 - c;
    let degeneracy = nf * (nf - 1.0) * sin2_beta;
    if degeneracy.is_nan() || degeneracy < tol.degeneracy || a + b <= 0.0 {
        return Err(Error::DegenerateInversion { value: degeneracy });
    }
    let beta = (a + b).sqrt().atan2(c.sqrt());
    let alpha = b.sqrt().atan2(a.sqrt());
    Ok(AngleInversion {
        alpha,
        beta,
        residual,
        alpha_branches: [alpha, PI - alpha, PI + alpha, 2.0 * PI - alpha],
        beta_branches: [beta, PI - beta],
        direction_squares: [a, b, c],
    })
}

/// `gamma` from the parity mean `cos(N gamma)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaInversion {
    /// `arccos(mean)/N` in `[0, pi/N]`.
    pub principal: f64,
    /// `{+-principal + 2 pi k / N}` reduced to `[0, 2 pi)`, ascending.
    pub ambiguity: Vec<f64>,
    /// Whether the mean was outside `[-1, 1]` and clamped.
    pub clamped: bool,
}

pub fn invert_gamma(parity_mean: f64, n: u32) -> Result<GammaInversion> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    if parity_mean.is_nan() {
        return Err(Error::InvalidArgument("parity mean is NaN".into()));
    }
    let clamped = parity_mean.abs() > 1.0;
    let nf = f64::from(n);
    let principal = parity_mean.clamp(-1.0, 1.0).acos() / nf;
    let mut ambiguity: Vec<f64> = Vec::with_capacity(2 * n as usize);
    for k in 0..n {
        let shift = 2.0 * PI * f64::from(k) / nf;
        for g in [principal + shift, -principal + shift] {
            let g = g.rem_euclid(2.0 * PI);
            if !ambiguity.iter().any(|x| (x - g).abs() < 1e-12 || (x - g).abs() > 2.0 * PI - 1e-12) {
                ambiguity.push(g);
            }
        }
    }
    ambiguity.sort_by(f64::total_cmp);
    Ok(GammaInversion {
        principal,
        ambiguity,
        clamped,
    })
}

/// Folds true angles onto the branch the estimator reports:
/// `alpha` and `beta` into `[0, pi/2]`, `gamma` into `[0, pi/N]`.
///
/// Second moments only fix the rotation axis up to the signs of its
/// components. When the true axis is outside the first octant the stage-2
/// re-alignment lands on the wrong axis, and the folded `gamma` is not what
/// the parity stage measures; compare against the branch sets instead.
pub fn fold_to_fundamental(alpha: f64, beta: f64, gamma: f64, n: u32) -> [f64; 3] {
    let a = alpha.rem_euclid(PI);
    let a = a.min(PI - a);
    let b = beta.rem_euclid(2.0 * PI);
    let b = if b > PI { 2.0 * PI - b } else { b };
    let b = b.min(PI - b);
    let period = 2.0 * PI / f64::from(n.max(1));
    let g = gamma.rem_euclid(period);
    let g = g.min(period - g);
    [a, b, g]
}
