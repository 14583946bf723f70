//! The full `2^N`-dimensional space of `N` qubits.
//!
//! Used where the symmetric subspace is not enough (global depolarizing noise
//! puts weight on every state) and as an independent oracle for symmetric-
//! subspace shortcuts. Basis index bit `k` is qubit `k`, with bit value 0 for
//! spin up (`m = +1/2`).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{binomial, c, CMatrix, CVector};
use crate::spin_algebra::{SpinOperators, SpinState};

/// Largest `N` for which dense `2^N` matrices are built.
pub const MAX_FULL_SPACE_QUBITS: u32 = 14;

pub fn check_full_space(n: u32) -> Result<usize> {
    if n > MAX_FULL_SPACE_QUBITS {
        return Err(Error::TooManyQubits {
            n,
            max: MAX_FULL_SPACE_QUBITS,
        });
    }
    Ok(1usize << n)
}

/// `S_a = (1/2) sum_k sigma_{a,k}` on the full space.
pub fn collective_operators(n: u32) -> Result<SpinOperators> {
    let d = check_full_space(n)?;
    let mut jx = CMatrix::zeros(d, d);
    let mut jy = CMatrix::zeros(d, d);
    let mut jz = CMatrix::zeros(d, d);
    for i in 0..d {
        let mut mz = 0.0;
        for k in 0..n {
            let bit = 1usize << k;
            let flipped = i ^ bit;
            let down = i & bit != 0;
            jx[(flipped, i)] += c(0.5);
            // sigma_y |0> = i|1>, sigma_y |1> = -i|0>
            jy[(flipped, i)] += Complex64::new(0.0, if down { -0.5 } else { 0.5 });
            mz += if down { -0.5 } else { 0.5 };
        }
        jz[(i, i)] = c(mz);
    }
    Ok(SpinOperators { jx, jy, jz })
}

/// Embeds a spin-`N/2` state into the full space via normalized Dicke states:
/// `|j, j-k>` is the uniform superposition of basis states with `k` down spins.
pub fn embed_symmetric(state: &SpinState) -> Result<CVector> {
    let n = state.spin().n_qubits();
    let d = check_full_space(n)?;
    let norms: Vec<f64> = (0..=n).map(|k| binomial(n, k).sqrt()).collect();
    Ok(CVector::from_iterator(
        d,
        (0..d).map(|i| {
            let k = i.count_ones() as usize;
            state.amplitudes()[k] / norms[k]
        }),
    ))
}

/// `sigma_x^{(x) N}` applied to a full-space vector: flips every bit.
pub fn apply_tensor_parity(n: u32, psi: &CVector) -> CVector {
    let mask = (1usize << n) - 1;
    CVector::from_iterator(psi.len(), (0..psi.len()).map(|i| psi[i ^ mask]))
}

/// `|psi><psi|` as a dense matrix.
pub fn projector(psi: &CVector) -> CMatrix {
    psi * psi.adjoint()
}
