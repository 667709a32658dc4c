//! Worked models: spin-1 operator bases in three dimensions, the real
//! three-dimensional propagator, a non-hermitian matrix with real spectrum,
//! and the premeasurement model with its overlap-conservation constraint.

pub mod counterexample;
pub mod measurement;
pub mod spin1;

pub use counterexample::{nonhermitian_counterexample, NonHermitianReport};
pub use measurement::{
    build_measurement_unitary, measurement_feasibility, orthonormal_completion, CompositeState,
    MeasurementReport, Verdict,
};
pub use spin1::{
    commutator_table, real_expectation, spin1_basis, three_dim_propagator, Spin1Basis, Spin1Report,
};
