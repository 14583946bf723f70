//! Dephasing and global depolarizing noise on the GHZ probe.

use serde::{Deserialize, Serialize};

use crate::density::{DensityMatrix, HilbertSpace};
use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix};
use crate::qfi::QfiMatrix;
use crate::qubits::{check_full_space, embed_symmetric, projector};
use crate::spin_algebra::{ghz_state, EulerAngles, SpinState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseKind {
    Dephasing,
    Depolarizing,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub kind: NoiseKind,
    pub p: f64,
}

impl NoiseModel {
    pub fn new(kind: NoiseKind, p: f64) -> Result<Self> {
        check_p(p)?;
        Ok(Self { kind, p })
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("noise parameter p = {p} outside [0, 1]")));
    }
    Ok(())
}

/// Dephased GHZ `((1+p)/2)|psi0><psi0| + ((1-p)/2)|psi0'><psi0'|`, where
/// `psi0'` is the GHZ state with relative phase `pi`.
pub fn dephase_ghz(n: u32, p: f64) -> Result<DensityMatrix> {
    check_p(p)?;
    if n < 2 {
        return Err(Error::InvalidArgument("dephasing needs N >= 2".into()));
    }
    let plus = DensityMatrix::pure(&ghz_state(n, 0.0)?);
    let minus = DensityMatrix::pure(&ghz_state(n, std::f64::consts::PI)?);
    DensityMatrix::mixture(&[((1.0 + p) / 2.0, &plus), ((1.0 - p) / 2.0, &minus)])
}

/// `N (1 + sin^2 b) + p^2 N^2 (1 + cos^2 b)`.
pub fn dephased_trace_qfi_closed(n: u32, p: f64, beta: f64) -> f64 {
    let nf = f64::from(n);
    let (s, c) = beta.sin_cos();
    nf * (1.0 + s * s) + p * p * nf * nf * (1.0 + c * c)
}

/// `(<psi0'|H_a|psi0>, <psi0'|H_b|psi0>, <psi0'|H_g|psi0>) = (-(N/2) cos b, 0, -N/2)`
/// for `N >= 2`.
pub fn dephasing_cross_terms(n: u32, angles: &EulerAngles) -> Result<[f64; 3]> {
    if n < 2 {
        return Err(Error::InvalidArgument("dephasing needs N >= 2".into()));
    }
    let half = f64::from(n) / 2.0;
    Ok([-half * angles.beta.cos(), 0.0, -half])
}

/// Where the depolarized state is represented.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DepolarizeMode {
    /// `p|psi><psi| + (1-p)/2^N I` on all `2^N` states (N <= 14).
    Full,
    /// The same operator compressed to the symmetric subspace and renormalized:
    /// `(p|psi><psi| + eta I_{N+1}) / (p + (N+1) eta)`, `eta = (1-p)/2^N`.
    Symmetric,
}

/// Global depolarizing channel applied to a spin-`N/2` probe.
pub fn depolarize(state: &SpinState, p: f64, mode: DepolarizeMode) -> Result<DensityMatrix> {
    check_p(p)?;
    let n = state.spin().n_qubits();
    let eta = (1.0 - p) / 2f64.powi(n as i32);
    match mode {
        DepolarizeMode::Full => {
            let d = check_full_space(n)?;
            let psi = embed_symmetric(state)?;
            let m = projector(&psi) * c(p) + CMatrix::identity(d, d) * c(eta);
            DensityMatrix::new(HilbertSpace::Qubits(n), m)
        }
        DepolarizeMode::Symmetric => {
            let d = state.dim();
            let psi = state.amplitudes();
            let m = (projector(psi) * c(p) + CMatrix::identity(d, d) * c(eta))
                / c(p + d as f64 * eta);
            DensityMatrix::new(HilbertSpace::Spin(state.spin()), m)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DepolFactor {
    /// `xi + eta - 4 xi eta / (xi + eta)`.
    pub exact: f64,
    /// Leading-order value `p`.
    pub leading: f64,
    /// Non-degenerate eigenvalue `p + (1-p)/2^N`.
    pub xi: f64,
    /// Degenerate eigenvalue `(1-p)/2^N`.
    pub eta: f64,
}

/// Ratio `F(rho_depol) / F(psi0)` for global depolarizing noise. Equals 0 at `p = 0`.
pub fn depol_qfi_factor(n: u32, p: f64) -> Result<DepolFactor> {
    check_p(p)?;
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    let eta = (1.0 - p) / 2f64.powi(n as i32);
    let xi = p + eta;
    let exact = if p == 0.0 { 0.0 } else { xi + eta - 4.0 * xi * eta / (xi + eta) };
    Ok(DepolFactor {
        exact,
        leading: p,
        xi,
        eta,
    })
}

/// Entrywise `noisy / pure`, `None` where the pure entry is below `floor`.
pub fn entry_ratios(noisy: &QfiMatrix, pure: &QfiMatrix, floor: f64) -> [[Option<f64>; 3]; 3] {
    let mut out = [[None; 3]; 3];
    for (m, row) in out.iter_mut().enumerate() {
        for (k, r) in row.iter_mut().enumerate() {
            if pure[(m, k)].abs() > floor {
                *r = Some(noisy[(m, k)] / pure[(m, k)]);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, CVector};
    use crate::qfi::{generators, qfi_mixed, qfi_pure, MixedQfi, DEFAULT_EIG_CUTOFF};
    use crate::spin_algebra::Spin;
    use crate::qubits::collective_operators;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn extremal(n: u32) -> (DensityMatrix, DensityMatrix) {
        let spin = Spin::from_qubits(n);
        (
            DensityMatrix::pure(&SpinState::dicke(spin, 0).unwrap()),
            DensityMatrix::pure(&SpinState::dicke(spin, n as usize).unwrap()),
        )
    }

    #[test]
    fn dephased_equals_phase_kick_form() {
        for n in 2..=8 {
            for p in [0.0, 0.3, 0.7, 1.0] {
                let rho = dephase_ghz(n, p).unwrap();
                let (up, down) = extremal(n);
                let ghz = DensityMatrix::pure(&ghz_state(n, 0.0).unwrap());
                let kick = ghz.matrix() * c(p)
                    + (up.matrix() + down.matrix()) * c((1.0 - p) / 2.0);
                assert!(max_abs_diff(rho.matrix(), &kick) < 1e-12);
                let eig = rho.spectrum().unwrap();
                let top: Vec<f64> = eig.eigenvalues.iter().rev().take(2).copied().collect();
                assert!((top[0] - (1.0 + p) / 2.0).abs() < 1e-12);
                assert!((top[1] - (1.0 - p) / 2.0).abs() < 1e-12);
                assert!(eig.eigenvalues.iter().rev().skip(2).all(|l| l.abs() < 1e-12));
            }
        }
    }

    #[test]
    fn dephasing_rejects_bad_input() {
        assert!(dephase_ghz(4, 1.5).is_err());
        assert!(dephase_ghz(4, -0.1).is_err());
        assert!(dephase_ghz(1, 0.5).is_err());
    }

    #[test]
    fn dephased_endpoints() {
        let rho = dephase_ghz(3, 1.0).unwrap();
        let ghz = DensityMatrix::pure(&ghz_state(3, 0.0).unwrap());
        assert!(max_abs_diff(rho.matrix(), ghz.matrix()) < 1e-15);
        let (up, down) = extremal(3);
        let half = (up.matrix() + down.matrix()) * c(0.5);
        assert!(max_abs_diff(dephase_ghz(3, 0.0).unwrap().matrix(), &half) < 1e-15);
        assert!((dephased_trace_qfi_closed(5, 0.0, PI / 2.0) - 10.0).abs() < 1e-12);
        let n = 6.0;
        let b: f64 = 0.8;
        let ttf = n * (1.0 + b.sin().powi(2)) + n * n * (1.0 + b.cos().powi(2));
        assert!((dephased_trace_qfi_closed(6, 1.0, b) - ttf).abs() < 1e-12);
    }

    #[test]
    fn dephased_trace_matches_generic_qfi() {
        for n in 3..=8 {
            for p in [0.0, 0.3, 0.7, 1.0] {
                let mixed = MixedQfi::new(&dephase_ghz(n, p).unwrap(), DEFAULT_EIG_CUTOFF).unwrap();
                for k in 1..6 {
                    let b = k as f64 * PI / 6.0;
                    for &(a, g) in &[(0.0, 0.0), (1.2, 0.4), (4.0, 2.5)] {
                        let t = mixed.at(&EulerAngles::new(a, b, g)).trace();
                        assert!((t - dephased_trace_qfi_closed(n, p, b)).abs() < 1e-8, "N={n} p={p}");
                    }
                }
            }
        }
    }

    #[test]
    fn two_qubit_dephasing_depends_on_gamma() {
        // Jx and Jy couple |1,1> and |1,-1> through |1,0>; the closed form only
        // holds after averaging over gamma.
        let mixed = MixedQfi::new(&dephase_ghz(2, 0.5).unwrap(), DEFAULT_EIG_CUTOFF).unwrap();
        let b = 1.0;
        let t0 = mixed.at(&EulerAngles::new(0.0, b, 0.0)).trace();
        let t1 = mixed.at(&EulerAngles::new(0.0, b, PI / 4.0)).trace();
        assert!((t0 - t1).abs() > 1e-3);
        let avg: f64 = (0..64)
            .map(|k| mixed.at(&EulerAngles::new(0.0, b, k as f64 * PI / 32.0)).trace())
            .sum::<f64>()
            / 64.0;
        assert!((avg - dephased_trace_qfi_closed(2, 0.5, b)).abs() < 1e-8);
    }

    #[test]
    fn cross_terms_match_matrix_elements() {
        for n in 2..=10 {
            let spin = Spin::from_qubits(n);
            let plus = ghz_state(n, 0.0).unwrap();
            let minus = ghz_state(n, PI).unwrap();
            for &(a, b, g) in &[(0.0, PI / 2.0, 0.0), (0.0, 0.0, 0.0), (1.0, 2.0, 3.0)] {
                let ang = EulerAngles::new(a, b, g);
                let closed = dephasing_cross_terms(n, &ang).unwrap();
                for (h, want) in generators(spin, &ang).as_array().into_iter().zip(closed) {
                    let v = minus.amplitudes().dotc(&(h * plus.amplitudes()));
                    if n >= 3 {
                        assert!((v.re - want).abs() < 1e-12 && v.im.abs() < 1e-12, "N={n}");
                    }
                }
            }
        }
        let at_pole = dephasing_cross_terms(4, &EulerAngles::identity()).unwrap();
        assert_eq!(at_pole, [-2.0, 0.0, -2.0]);
    }

    #[test]
    fn depolarize_endpoints_and_spectrum() {
        let ghz = ghz_state(4, 0.0).unwrap();
        let pure = depolarize(&ghz, 1.0, DepolarizeMode::Full).unwrap();
        let psi = embed_symmetric(&ghz).unwrap();
        assert!(max_abs_diff(pure.matrix(), &projector(&psi)) < 1e-15);
        let flat = depolarize(&ghz, 0.0, DepolarizeMode::Full).unwrap();
        let f = qfi_mixed(&flat, &EulerAngles::new(1.0, 1.0, 1.0), DEFAULT_EIG_CUTOFF).unwrap();
        assert!(f.0.abs().max() < 1e-12);

        let p = 0.4;
        let rho = depolarize(&ghz, p, DepolarizeMode::Full).unwrap();
        let fac = depol_qfi_factor(4, p).unwrap();
        let eig = rho.spectrum().unwrap();
        assert!((eig.eigenvalues[15] - fac.xi).abs() < 1e-12);
        assert!(eig.eigenvalues[..15].iter().all(|l| (l - fac.eta).abs() < 1e-12));
        assert!(depolarize(&ghz_state(15, 0.0).unwrap(), p, DepolarizeMode::Full).is_err());
    }

    #[test]
    fn depolarizing_factor_matches_full_space_qfi() {
        let ang = EulerAngles::new(0.3, 1.1, 0.6);
        for n in 2..=7 {
            let ghz = ghz_state(n, 0.0).unwrap();
            let pure = qfi_pure(&ghz, &ang);
            for p in [0.1, 0.5, 0.9] {
                let rho = depolarize(&ghz, p, DepolarizeMode::Full).unwrap();
                let noisy = qfi_mixed(&rho, &ang, DEFAULT_EIG_CUTOFF).unwrap();
                let fac = depol_qfi_factor(n, p).unwrap().exact;
                assert!((noisy.trace() - fac * pure.trace()).abs() < 1e-8);
                // every entry, including off-diagonal ones, scales by the same factor
                assert!(noisy.max_abs_diff(&pure.scale(fac)) < 1e-8);
            }
        }
    }

    #[test]
    fn depolarizing_ratio_is_angle_independent() {
        let s = crate::spin_algebra::random_state(Spin::from_qubits(4), 8);
        let mixed = MixedQfi::new(&depolarize(&s, 0.6, DepolarizeMode::Full).unwrap(), DEFAULT_EIG_CUTOFF)
            .unwrap();
        let fac = depol_qfi_factor(4, 0.6).unwrap().exact;
        for &(a, b, g) in &[(0.1, 0.2, 0.3), (2.0, 1.5, 4.0), (5.0, 3.0, 1.0)] {
            let ang = EulerAngles::new(a, b, g);
            let ratio = mixed.at(&ang).trace() / qfi_pure(&s, &ang).trace();
            assert!((ratio - fac).abs() < 1e-8);
        }
    }

    #[test]
    fn symmetric_projection_is_a_valid_state() {
        let ghz = ghz_state(6, 0.0).unwrap();
        let rho = depolarize(&ghz, 0.5, DepolarizeMode::Symmetric).unwrap();
        assert!((rho.trace() - 1.0).abs() < 1e-12);
        rho.spectrum().unwrap();
    }

    #[test]
    fn factor_limits() {
        assert_eq!(depol_qfi_factor(5, 1.0).unwrap().exact, 1.0);
        assert_eq!(depol_qfi_factor(5, 0.0).unwrap().exact, 0.0);
        assert!(depol_qfi_factor(5, 1e-12).unwrap().exact < 1e-9);
        for n in 4..=10 {
            for k in 1..=10 {
                let p = k as f64 / 10.0;
                let f = depol_qfi_factor(n, p).unwrap();
                assert!((f.exact - p).abs() <= 8.0 * (1.0 - p) / 2f64.powi(n as i32) + 1e-15);
            }
        }
    }

    #[test]
    fn local_depolarizing_on_two_qubits_is_global() {
        // Each qubit: r -> q r + (1-q) I/2. For N = 2 this equals global
        // depolarizing with p = q^2, so the factor carries over.
        let ghz = ghz_state(2, 0.0).unwrap();
        let psi = embed_symmetric(&ghz).unwrap();
        let q: f64 = 0.8;
        let rho = projector(&psi);
        let mut out = rho.clone();
        for k in 0..2 {
            let bit = 1usize << k;
            let mut traced = CMatrix::zeros(4, 4);
            for i in 0..4 {
                for j in 0..4 {
                    if (i ^ j) & bit == 0 {
                        let v = out[(i & !bit, j & !bit)] + out[(i | bit, j | bit)];
                        traced[(i, j)] = v * 0.5;
                    }
                }
            }
            out = &out * c(q) + traced * c(1.0 - q);
        }
        let local = DensityMatrix::new(HilbertSpace::Qubits(2), out).unwrap();
        let global = depolarize(&ghz, q * q, DepolarizeMode::Full).unwrap();
        assert!(max_abs_diff(local.matrix(), global.matrix()) < 1e-14);
        let ang = EulerAngles::new(0.4, 1.0, 0.2);
        let f = qfi_mixed(&local, &ang, DEFAULT_EIG_CUTOFF).unwrap();
        let fac = depol_qfi_factor(2, q * q).unwrap().exact;
        assert!(f.max_abs_diff(&qfi_pure(&ghz, &ang).scale(fac)) < 1e-10);
    }

    #[test]
    fn full_space_generators_are_collective() {
        let ops = collective_operators(3).unwrap();
        let psi: CVector = embed_symmetric(&ghz_state(3, 0.0).unwrap()).unwrap();
        let z = psi.dotc(&(&ops.jz * &psi)).re;
        assert!(z.abs() < 1e-14);
    }

    #[test]
    fn entry_ratio_skips_zero_entries() {
        let pure = QfiMatrix::from_rows([[2.0, 0.0, 1.0], [0.0, 2.0, 0.0], [1.0, 0.0, 4.0]]);
        let r = entry_ratios(&pure.scale(0.5), &pure, 1e-12);
        assert_eq!(r[0][1], None);
        assert_eq!(r[0][2], Some(0.5));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn noise_never_adds_information(n in 3u32..7, p in 0.0f64..=1.0, b in 0.05f64..3.1) {
            let ang = EulerAngles::new(0.3, b, 0.9);
            let pure = qfi_pure(&ghz_state(n, 0.0).unwrap(), &ang).trace();
            let deph = qfi_mixed(&dephase_ghz(n, p).unwrap(), &ang, DEFAULT_EIG_CUTOFF).unwrap();
            prop_assert!(deph.trace() <= pure + 1e-9);
            prop_assert!(deph.is_valid());
            let dep = depolarize(&ghz_state(n, 0.0).unwrap(), p, DepolarizeMode::Full).unwrap();
            let f = qfi_mixed(&dep, &ang, DEFAULT_EIG_CUTOFF).unwrap();
            prop_assert!(f.trace() <= pure + 1e-9);
            // swapping the mixture weights is the same as p -> -p
            prop_assert!((dephased_trace_qfi_closed(n, p, b) - dephased_trace_qfi_closed(n, -p, b)).abs() < 1e-12);
            let plus = DensityMatrix::pure(&ghz_state(n, 0.0).unwrap());
            let minus = DensityMatrix::pure(&ghz_state(n, PI).unwrap());
            let swapped = DensityMatrix::mixture(&[((1.0 - p) / 2.0, &plus), ((1.0 + p) / 2.0, &minus)]).unwrap();
            let fs = qfi_mixed(&swapped, &ang, DEFAULT_EIG_CUTOFF).unwrap();
            prop_assert!((fs.trace() - deph.trace()).abs() < 1e-8);
        }
    }
}

