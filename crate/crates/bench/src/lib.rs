//! Workloads shared by the criterion benchmarks.

use realqm_core::{
    complexify, decompose, CanonicalForm, SeededRng, SkewGenerator, Tolerances, UnitarySystem,
};

/// A decomposed random generator with a state in both representations.
pub struct Workload {
    pub generator: SkewGenerator,
    pub canonical: CanonicalForm,
    /// `S^T ψ`, the state in block coordinates.
    pub block_coords: Vec<f64>,
    pub complex: UnitarySystem,
}

pub fn workload(n: usize, seed: u64) -> Workload {
    let tol = Tolerances::default();
    let generator =
        SkewGenerator::new(realqm_core::random_skew(n, seed), &tol).expect("random_skew is skew");
    let canonical = decompose(&generator, &tol).expect("decomposes");
    let psi = SeededRng::new(seed ^ 0x9e37_79b9).unit_vector(n);
    let block_coords = canonical
        .rotation()
        .tr_matvec(psi.as_slice())
        .expect("dims match");
    let complex = complexify(&canonical, &psi).expect("dims match").system;
    Workload {
        generator,
        canonical,
        block_coords,
        complex,
    }
}
