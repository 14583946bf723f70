use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

/// A rotation in z-y-z Euler angles, `U = exp(-i alpha Jz) exp(-i beta Jy) exp(-i gamma Jz)`.
///
/// The constructor folds the angles into `alpha, gamma in [0, 2pi)` and
/// `beta in [0, pi]`. Folding `beta` past `pi` shifts `alpha` and `gamma` by
/// `pi`; the resulting unitary agrees with the unfolded one up to a global sign
/// on half-integer spins.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EulerAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl EulerAngles {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Self {
        let mut alpha = alpha;
        let mut gamma = gamma;
        let mut beta = beta.rem_euclid(TAU);
        if beta > PI {
            beta = TAU - beta;
            alpha += PI;
            gamma += PI;
        }
        Self {
            alpha: wrap_2pi(alpha),
            beta,
            gamma: wrap_2pi(gamma),
        }
    }

    pub fn identity() -> Self {
        Self {
            alpha: 0.0,
            beta: 0.0,
            gamma: 0.0,
        }
    }

    pub fn from_degrees(alpha: f64, beta: f64, gamma: f64) -> Self {
        Self::new(alpha.to_radians(), beta.to_radians(), gamma.to_radians())
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.alpha, self.beta, self.gamma]
    }

    /// The SO(3) matrix `Rz(alpha) Ry(beta) Rz(gamma)` acting on Bloch vectors.
    pub fn so3(&self) -> [[f64; 3]; 3] {
        so3_zyz(self.alpha, self.beta, self.gamma)
    }
}

fn wrap_2pi(x: f64) -> f64 {
    let w = x.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}

pub(crate) fn so3_zyz(alpha: f64, beta: f64, gamma: f64) -> [[f64; 3]; 3] {
    let rz = |t: f64| {
        let (s, c) = t.sin_cos();
        [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]
    };
    let (s, c) = beta.sin_cos();
    let ry = [[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]];
    mat3_mul(&mat3_mul(&rz(alpha), &ry), &rz(gamma))
}

pub(crate) fn mat3_mul(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub(crate) fn mat3_apply(a: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (i, x) in out.iter_mut().enumerate() {
        *x = (0..3).map(|k| a[i][k] * v[k]).sum();
    }
    out
}
