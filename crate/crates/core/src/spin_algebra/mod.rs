//! Angular momentum on the symmetric (spin-j) subspace: operators, Euler
//! rotations, GHZ probes, Majorana points and anti-coherence diagnostics.
//!
//! All matrices use the Dicke order `m = j, j-1, ..., -j`.

mod angles;
mod anticoherence;
mod majorana;
mod operators;
mod rotation;
mod state;

pub use angles::EulerAngles;
pub use anticoherence::{anticoherence_check, AnticoherenceReport};
pub use majorana::{
    majorana_polynomial, majorana_roots, majorana_roots_of_amplitudes, state_from_majorana,
    MajoranaPoints, SpherePoint,
};
pub use operators::{spin_operators, spin_operators_for_j, Spin, SpinOperators};
pub use rotation::{rotation, rotation_matrix, y_rotation, z_rotation};
pub use state::{
    coherent_state, expect_real, ghz_state, product_state_amplitudes, random_state,
    random_state_with, rotated_ghz_closed_form,
    SpinMoments, SpinState, NORM_TOL,
};
