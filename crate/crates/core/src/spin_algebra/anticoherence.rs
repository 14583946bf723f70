use serde::{Deserialize, Serialize};

use super::state::SpinState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnticoherenceReport {
    /// `<S_x>, <S_y>, <S_z>`.
    pub first_moments: [f64; 3],
    /// `<S_x^2>, <S_y^2>, <S_z^2>`.
    pub second_moments: [f64; 3],
    /// `j(j+1)/3`, the isotropic second moment.
    pub isotropic_target: f64,
    pub passes: bool,
}

/// Checks the first- and second-order anti-coherence conditions
/// `<S_a> = 0` and `<S_a^2> = j(j+1)/3` for a = x, y, z.
pub fn anticoherence_check(state: &SpinState, tol: f64) -> AnticoherenceReport {
    let m = state.moments();
    let second_moments = m.second_diagonal();
    let target = state.spin().casimir() / 3.0;
    let passes = m.first.iter().all(|x| x.abs() <= tol)
        && second_moments.iter().all(|s| (s - target).abs() <= tol);
    AnticoherenceReport {
        first_moments: m.first,
        second_moments,
        isotropic_target: target,
        passes,
    }
}
