//! Fisher information of the Euler angles: pure and mixed states, Haar
//! averages, GHZ closed forms and comparison bounds.

mod bounds;
mod generators;
mod haar;
mod matrix;
mod mixed;
mod pure;

pub use bounds::{
    closed_form_ghz_qfi, cost_lower_bounds, ghz_crb_trace_inverse, goldberg_bound, CostBounds,
    SIN_BETA_GUARD,
};
pub use generators::{generator_coefficients, generators, GeneratorSet};
pub use haar::{haar_avg_trace_analytic, haar_avg_trace_mc, haar_sample, HaarAverage, MIN_MC_SAMPLES};
pub use matrix::{QfiMatrix, ANGLE_LABELS, DET_GUARD};
pub use mixed::{qfi_mixed, MixedQfi, DEFAULT_EIG_CUTOFF};
pub use pure::{
    qfi_from_spin_covariance, qfi_pure, qfi_pure_fd, saturation_check, FiniteDifferenceQfi,
    DEFAULT_FD_STEP, FD_STEP_RANGE,
};
