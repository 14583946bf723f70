use nalgebra::DMatrix;

use super::matrix::QfiMatrix;
use super::pure::qfi_from_spin_covariance;
use crate::density::DensityMatrix;
use crate::error::Result;
use crate::linalg::sandwich;
use crate::spin_algebra::EulerAngles;

/// Eigenvalue cutoff for the spectral sums.
pub const DEFAULT_EIG_CUTOFF: f64 = 1e-10;

/// Mixed-state Fisher information reduced to a 3x3 form over `(Jx, Jy, Jz)`.
///
/// With `rho = sum_k l_k |k><k|` and `B_a[k,l] = <k|J_a|l>`,
///
/// ```text
/// G_ab = sum_{l_k > c} 4 l_k (<k|{J_a,J_b}/2|k> - B_a[k,k] B_b[k,k])
///      - sum_{k != l, l_k + l_l > c} 8 l_k l_l / (l_k + l_l) Re(B_a[k,l] B_b[l,k])
/// ```
///
/// and the Fisher matrix at any angles is `C G C^T` with the generator
/// coefficients `C`, so one spectral decomposition serves every angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedQfi {
    /// `G / 4`, stored as a covariance-like matrix.
    form: [[f64; 3]; 3],
}

impl MixedQfi {
    pub fn new(rho: &DensityMatrix, eig_cutoff: f64) -> Result<Self> {
        let ops = rho.space().collective_operators()?;
        let eig = rho.spectrum()?;
        let lam = &eig.eigenvalues;
        let d = lam.len();

        // W[k,l] multiplies Re(B_a[k,l] conj(B_b[k,l])).
        let w = DMatrix::from_fn(d, d, |k, l| {
            let mut v = 0.0;
            if lam[k] > eig_cutoff {
                v += 4.0 * lam[k];
            }
            let s = lam[k] + lam[l];
            if k != l && s > eig_cutoff {
                v -= 8.0 * lam[k] * lam[l] / s;
            }
            v
        });
        let b: Vec<_> = ops
            .components()
            .iter()
            .map(|op| sandwich(&eig.eigenvectors, op))
            .collect();

        let mut form = [[0.0; 3]; 3];
        for a in 0..3 {
            for bb in a..3 {
                let (x, y) = (&b[a], &b[bb]);
                let mut g = 0.0;
                for l in 0..d {
                    for k in 0..d {
                        let wk = w[(k, l)];
                        if wk != 0.0 {
                            let p = x[(k, l)] * y[(k, l)].conj();
                            g += wk * p.re;
                        }
                    }
                }
                for k in 0..d {
                    if lam[k] > eig_cutoff {
                        g -= 4.0 * lam[k] * x[(k, k)].re * y[(k, k)].re;
                    }
                }
                form[a][bb] = g / 4.0;
                form[bb][a] = g / 4.0;
            }
        }
        Ok(Self { form })
    }

    pub fn at(&self, angles: &EulerAngles) -> QfiMatrix {
        qfi_from_spin_covariance(&self.form, angles)
    }
}

/// Fisher matrix of `U(angles) rho U^dagger` from the spectral decomposition of
/// `rho`. Fails on non-PSD input.
pub fn qfi_mixed(rho: &DensityMatrix, angles: &EulerAngles, eig_cutoff: f64) -> Result<QfiMatrix> {
    Ok(MixedQfi::new(rho, eig_cutoff)?.at(angles))
}
