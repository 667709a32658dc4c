//! Quantum dynamics on finite-dimensional real Hilbert spaces.
//!
//! A real state evolves as `ψ(τ) = e^{Aτ} ψ(0)` with `A` skew-symmetric. The
//! crate brings `A` into 2×2 block form by a rotation `S ∈ SO(n)`
//! ([`canonical`]), propagates states in closed form ([`dynamics`]), and maps
//! the oscillating sector onto an equivalent complex unitary system
//! ([`bridge`]). [`demos`] holds the spin-1 and measurement models.

pub mod bridge;
pub mod canonical;
pub mod demos;
pub mod dynamics;
pub mod error;
pub mod expm;
pub mod matrix;
pub mod rng;
pub mod symeig;

pub use bridge::{
    complex_path, complex_structure, complexify, decomplexify, equivalence_check,
    equivalence_check_with, evolve_complex, realify, ComplexStructure, Complexified, UnitarySystem,
};
pub use canonical::{
    decompose, pseudo_hamiltonian, reconstruct, spectrum_pairing_check, CanonicalForm,
    PairingReport, PseudoHamiltonian, SkewGenerator,
};
pub use dynamics::{
    classify, pair_evolve, propagate, propagate_with, propagator, trajectory, trajectory_with,
    ModeReport, OrthogonalPropagator, PairState, Trajectory,
};
pub use error::{Error, Result};
pub use expm::expm_taylor;
pub use matrix::{
    inner_product, is_skew_symmetric, is_special_orthogonal, ComplexMatrix, ComplexVector,
    RealMatrix, RealVector, Tolerances,
};
pub use rng::{random_skew, SeededRng};
