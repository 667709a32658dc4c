//! Seeded, portable random generation.
//!
//! All sampling goes through ChaCha8 (`rand_chacha`) seeded with
//! `seed_from_u64`. Uniform reals are formed directly from the raw 64-bit
//! output as `(x >> 11) · 2⁻⁵³`, mapped to `[-1, 1)`, so generated matrices
//! do not depend on the distribution code of any particular `rand` release
//! and are bit-identical across platforms.

use num_complex::Complex64;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matrix::{ComplexVector, RealMatrix, RealVector};

/// Deterministic random source.
#[derive(Debug, Clone)]
pub struct SeededRng(ChaCha8Rng);

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[-1, 1)`.
    pub fn symmetric(&mut self) -> f64 {
        2.0 * self.unit() - 1.0
    }

    /// Uniform in `[lo, hi)`.
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    /// Uniform integer in `lo..=hi`.
    pub fn int_inclusive(&mut self, lo: usize, hi: usize) -> usize {
        let span = (hi - lo + 1) as u64;
        lo + (self.0.next_u64() % span) as usize
    }

    /// Random vector with entries in `[-1, 1)`, scaled to unit length.
    pub fn unit_vector(&mut self, dim: usize) -> RealVector {
        loop {
            let v: Vec<f64> = (0..dim).map(|_| self.symmetric()).collect();
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n > 1e-3 {
                return RealVector::new(v.into_iter().map(|x| x / n).collect())
                    .expect("finite by construction");
            }
        }
    }

    pub fn complex_unit_vector(&mut self, dim: usize) -> ComplexVector {
        loop {
            let v: Vec<Complex64> = (0..dim)
                .map(|_| Complex64::new(self.symmetric(), self.symmetric()))
                .collect();
            let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if n > 1e-3 {
                return ComplexVector::new(v.into_iter().map(|z| z / n).collect())
                    .expect("finite by construction");
            }
        }
    }
}

/// Random skew-symmetric generator `(M − M^T)/2` with `M` uniform in `[-1, 1)`.
///
/// Entries of `M` are drawn in row-major order. Antisymmetry is exact: the
/// lower triangle is the bitwise negation of the upper one.
pub fn random_skew(n: usize, seed: u64) -> RealMatrix {
    let mut rng = SeededRng::new(seed);
    let m: Vec<f64> = (0..n * n).map(|_| rng.symmetric()).collect();
    let mut a = RealMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let x = 0.5 * (m[i * n + j] - m[j * n + i]);
            a[(i, j)] = x;
            a[(j, i)] = -x;
        }
    }
    a
}
