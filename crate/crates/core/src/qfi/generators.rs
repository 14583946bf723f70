use crate::linalg::CMatrix;
use crate::spin_algebra::{spin_operators, EulerAngles, Spin, SpinOperators};

/// Hermitian generators `H_m = i (d_m U^dagger) U` of the z-y-z Euler chart.
///
/// ```text
/// H_alpha = -cos b Jz + sin b (cos g Jx - sin g Jy)
/// H_beta  = -cos g Jy - sin g Jx
/// H_gamma = -Jz
/// ```
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    pub h_alpha: CMatrix,
    pub h_beta: CMatrix,
    pub h_gamma: CMatrix,
}

/// Rows are the generators, columns the `(Jx, Jy, Jz)` coefficients.
pub fn generator_coefficients(angles: &EulerAngles) -> [[f64; 3]; 3] {
    let (sb, cb) = angles.beta.sin_cos();
    let (sg, cg) = angles.gamma.sin_cos();
    [
        [sb * cg, -sb * sg, -cb],
        [-sg, -cg, 0.0],
        [0.0, 0.0, -1.0],
    ]
}

impl GeneratorSet {
    pub fn from_operators(ops: &SpinOperators, angles: &EulerAngles) -> Self {
        let [ca, cb, _] = generator_coefficients(angles);
        Self {
            h_alpha: ops.combine(ca),
            h_beta: ops.combine(cb),
            h_gamma: -ops.jz.clone(),
        }
    }

    pub fn as_array(&self) -> [&CMatrix; 3] {
        [&self.h_alpha, &self.h_beta, &self.h_gamma]
    }
}

pub fn generators(spin: Spin, angles: &EulerAngles) -> GeneratorSet {
    GeneratorSet::from_operators(&spin_operators(spin), angles)
}
