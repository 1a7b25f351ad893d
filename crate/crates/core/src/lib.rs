//! Simulation of the quantum Fourier transform interferometer (QuFTI).
//!
//! An `n`-mode interferometer `U = V · Φ · Θ · V†` is built from the
//! quantum Fourier transform `V` and diagonal phase gradients. Feeding one
//! photon into every mode and post-selecting on one photon per output mode
//! gives a coincidence probability `P = |Per(U)|²` that acts as a witness
//! for the unknown phase.
//!
//! The crate is organised bottom-up:
//!
//! - [`matrix`]: dense complex matrices and the interferometer unitaries.
//! - [`permanent`]: exact permanent kernels (naive oracle, Gray-code Ryser,
//!   repeated-column Ryser for general Fock outcomes).
//! - [`analytics`]: the product-form permanent, the coincidence probability
//!   and its derivative, and the brute-force verification harness.
//! - [`metrology`]: phase sensitivity, resource-counting baselines,
//!   efficiency and dephasing models, and the full output distribution.

pub mod analytics;
pub mod error;
pub mod matrix;
pub mod metrology;
pub mod permanent;

pub use num_complex::Complex64;

pub use analytics::{
    coefficient_pairs, coincidence_probability, conjecture_verify, conjecture_verify_with,
    permanent_closed_form, probability_derivative, CoefficientPair, ConjectureReport, WorstCase,
};
pub use error::{QuftiError, Result};
pub use matrix::qufti_matrix_closed_form;
pub use matrix::{
    compose_qufti, phase_diagonal, qft_matrix, qufti_entry_closed_form, ComplexMatrix,
    InterferometerSpec, PhaseMask,
};
pub use metrology::{
    dephased_derivative, dephased_probability, dephased_sensitivity, fock_output_distribution,
    heisenberg_limit, noon_dephased_sensitivity, orc_photon_count, phase_sensitivity_numeric,
    phase_sensitivity_small_angle, protocol_efficiency, sensitivity_for_mask, sensitivity_point,
    shotnoise_limit, DephasingParams, FockOutcome, OutcomeDistribution, Sensitivity,
    SensitivityPoint,
};
pub use permanent::{permanent_naive, permanent_ryser, permanent_with_repeats};
