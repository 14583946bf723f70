//! Finite-shot simulation of the variance-plus-parity alignment protocol.
//!
//! Bob receives copies of `U(alpha, beta, gamma)|GHZ_N>`. The second moments
//! of `S_x, S_y, S_z` fix `(alpha, beta)` up to reflections; after undoing
//! those two rotations the parity `sigma_x^{(x) N}` has mean `cos(N gamma)`.

mod inversion;
mod measurement;
mod protocol;

pub use inversion::{
    fold_to_fundamental, invert_angles, invert_angles_with, invert_gamma, AngleInversion,
    GammaInversion, InversionTolerance,
};
pub use measurement::{
    measurement_distribution, outcome_values, parity_expectation, parity_of_state,
    parity_operator, phased_ghz, sample_measurements, variance_formulas, Axis, MeasurementRecord,
};
pub use protocol::{
    run_batch, run_protocol, run_protocol_with, summarize, AngleEstimates, BatchResult,
    BatchSummary, EstimationRun, ProtocolConfig, Realignment, MIN_PROTOCOL_SHOTS,
};
