use num_complex::Complex64;

use super::angles::EulerAngles;
use super::operators::{spin_operators, Spin};
use crate::linalg::{expm_hermitian, mul, CMatrix};

/// `exp(-i phi Jz)`: diagonal, `m = j .. -j`.
pub fn z_rotation(spin: Spin, phi: f64) -> CMatrix {
    let d = spin.dim();
    CMatrix::from_fn(d, d, |r, col| {
        if r == col {
            Complex64::from_polar(1.0, -phi * spin.m(r))
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// `exp(-i beta Jy)` from the eigendecomposition of `Jy`.
pub fn y_rotation(spin: Spin, beta: f64) -> CMatrix {
    expm_hermitian(&spin_operators(spin).jy, beta)
}

/// `U = exp(-i alpha Jz) exp(-i beta Jy) exp(-i gamma Jz)` on the raw angles,
/// without folding into the canonical ranges. Finite-difference code relies on
/// this to stay on one sheet for half-integer spins.
pub fn rotation_matrix(spin: Spin, alpha: f64, beta: f64, gamma: f64) -> CMatrix {
    let za = z_rotation(spin, alpha);
    let y = y_rotation(spin, beta);
    let zg = z_rotation(spin, gamma);
    mul(&mul(&za, &y), &zg)
}

pub fn rotation(spin: Spin, angles: &EulerAngles) -> CMatrix {
    rotation_matrix(spin, angles.alpha, angles.beta, angles.gamma)
}
