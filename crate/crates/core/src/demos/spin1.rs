//! Spin-1 operator bases on a three-dimensional state space.
//!
//! `Σ_k` are the hermitian, purely imaginary generators whose real multiples
//! `iΣ_k` generate rotations about the coordinate axes. `Σ'` is the reordered
//! triple `(Σ_1, Σ_3, -Σ_2)`, and the conventional basis `s_k` is obtained
//! from it by the similarity `s_k = B⁻¹ Σ'_k B`.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::Serialize;

use crate::dynamics::OrthogonalPropagator;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, RealMatrix, RealVector};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The three operator triples plus the change of basis between them.
#[derive(Debug, Clone, Serialize)]
pub struct Spin1Basis {
    pub sigma: [ComplexMatrix; 3],
    pub sigma_prime: [ComplexMatrix; 3],
    pub s: [ComplexMatrix; 3],
    pub b_matrix: ComplexMatrix,
    /// `B⁻¹` as written out entry by entry (not computed).
    pub b_inverse: ComplexMatrix,
}

/// Numerical checks on a [`Spin1Basis`].
#[derive(Debug, Clone, Serialize)]
pub struct Spin1Report {
    pub commutator_residual_sigma: f64,
    pub commutator_residual_sigma_prime: f64,
    pub commutator_residual_s: f64,
    /// Largest entrywise `|s_k − B⁻¹ Σ'_k B|` over `k`.
    pub similarity_residual: f64,
    /// Largest entrywise `|B B⁻¹ − I|`.
    pub inverse_residual: f64,
    /// Whether the written-out `B⁻¹` agrees with `B` to 1e-14.
    pub printed_inverse_consistent: bool,
    pub sigma_hermitian_imaginary: bool,
    pub s_hermitian: bool,
    pub passed: bool,
}

/// Tolerance for all spin-1 identities; the entries are small integers and
/// multiples of `1/√2`.
pub const SPIN1_TOL: f64 = 1e-14;

pub fn spin1_basis() -> Spin1Basis {
    let sigma1 = ComplexMatrix::from_rows(&[[ZERO, ZERO, ZERO], [ZERO, ZERO, -I], [ZERO, I, ZERO]]);
    let sigma2 = ComplexMatrix::from_rows(&[[ZERO, ZERO, I], [ZERO, ZERO, ZERO], [-I, ZERO, ZERO]]);
    let sigma3 = ComplexMatrix::from_rows(&[[ZERO, -I, ZERO], [I, ZERO, ZERO], [ZERO, ZERO, ZERO]]);
    let sigma_prime = [sigma1.clone(), sigma3.clone(), sigma2.scale(-ONE)];

    let h = FRAC_1_SQRT_2;
    let s1 = ComplexMatrix::from_rows(&[
        [ZERO, c(h, 0.0), ZERO],
        [c(h, 0.0), ZERO, c(h, 0.0)],
        [ZERO, c(h, 0.0), ZERO],
    ]);
    let s2 = ComplexMatrix::from_rows(&[
        [ZERO, c(0.0, -h), ZERO],
        [c(0.0, h), ZERO, c(0.0, -h)],
        [ZERO, c(0.0, h), ZERO],
    ]);
    let s3 = ComplexMatrix::from_rows(&[[ONE, ZERO, ZERO], [ZERO, ZERO, ZERO], [ZERO, ZERO, -ONE]]);

    let b_matrix = ComplexMatrix::from_rows(&[
        [c(h, 0.0), ZERO, c(-h, 0.0)],
        [ZERO, ONE, ZERO],
        [c(0.0, h), ZERO, c(0.0, h)],
    ]);
    let b_inverse = ComplexMatrix::from_rows(&[
        [c(h, 0.0), ZERO, c(0.0, -h)],
        [ZERO, ONE, ZERO],
        [c(-h, 0.0), ZERO, c(0.0, -h)],
    ]);

    Spin1Basis {
        sigma: [sigma1, sigma2, sigma3],
        sigma_prime,
        s: [s1, s2, s3],
        b_matrix,
        b_inverse,
    }
}

impl Spin1Basis {
    /// The real skew-symmetric generator `iΣ_k` (k = 1, 2, 3).
    pub fn rotation_generator(&self, k: usize) -> RealMatrix {
        self.sigma[k - 1].scale(I).to_real().expect("iΣ_k is real")
    }

    pub fn verify(&self) -> Spin1Report {
        let commutator_residual_sigma = commutator_table(&self.sigma).expect("3x3 operators");
        let commutator_residual_sigma_prime =
            commutator_table(&self.sigma_prime).expect("3x3 operators");
        let commutator_residual_s = commutator_table(&self.s).expect("3x3 operators");

        let mut similarity_residual: f64 = 0.0;
        for (sk, spk) in self.s.iter().zip(&self.sigma_prime) {
            let transformed = self
                .b_inverse
                .matmul(spk)
                .and_then(|m| m.matmul(&self.b_matrix))
                .expect("3x3 operators");
            similarity_residual =
                similarity_residual.max(transformed.sub(sk).expect("3x3").max_abs());
        }
        let product = self
            .b_matrix
            .matmul(&self.b_inverse)
            .expect("3x3 operators");
        let inverse_residual = product
            .sub(&ComplexMatrix::identity(3))
            .expect("3x3")
            .max_abs();
        let printed_inverse_consistent = inverse_residual <= SPIN1_TOL;

        let sigma_hermitian_imaginary = self
            .sigma
            .iter()
            .all(|m| m.is_hermitian(SPIN1_TOL) && m.is_purely_imaginary());
        let s_hermitian = self.s.iter().all(|m| m.is_hermitian(SPIN1_TOL));

        let passed = commutator_residual_sigma <= SPIN1_TOL
            && commutator_residual_sigma_prime <= SPIN1_TOL
            && commutator_residual_s <= SPIN1_TOL
            && similarity_residual <= SPIN1_TOL
            && printed_inverse_consistent
            && sigma_hermitian_imaginary
            && s_hermitian;
        Spin1Report {
            commutator_residual_sigma,
            commutator_residual_sigma_prime,
            commutator_residual_s,
            similarity_residual,
            inverse_residual,
            printed_inverse_consistent,
            sigma_hermitian_imaginary,
            s_hermitian,
            passed,
        }
    }
}

fn levi_civita(l: usize, m: usize, n: usize) -> f64 {
    match (l, m, n) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// `max_{l,m} ‖[O_l, O_m] − i ε_{lmn} O_n‖_F` for an operator triple.
pub fn commutator_table(ops: &[ComplexMatrix; 3]) -> Result<f64> {
    let d = ops[0].rows();
    if ops.iter().any(|o| o.rows() != d || o.cols() != d) {
        return Err(Error::InvalidArgument(
            "operators must be square and of equal size".into(),
        ));
    }
    let mut worst: f64 = 0.0;
    for l in 0..3 {
        for m in 0..3 {
            let mut rhs = ComplexMatrix::zeros(d, d);
            for (n, op) in ops.iter().enumerate() {
                let eps = levi_civita(l, m, n);
                if eps != 0.0 {
                    rhs = ComplexMatrix::from_row_major(
                        d,
                        d,
                        rhs.as_slice()
                            .iter()
                            .zip(op.as_slice())
                            .map(|(r, o)| r + I * eps * o)
                            .collect(),
                    )?;
                }
            }
            let residual = ops[l].commutator(&ops[m])?.sub(&rhs)?.frobenius_norm();
            worst = worst.max(residual);
        }
    }
    Ok(worst)
}

/// `ψ^T O ψ` for a real state, evaluated in complex arithmetic.
pub fn real_expectation(op: &ComplexMatrix, psi: &RealVector) -> Result<Complex64> {
    if op.rows() != psi.dim() || op.cols() != psi.dim() {
        return Err(Error::DimensionMismatch {
            expected: op.rows(),
            actual: psi.dim(),
        });
    }
    let x = psi.as_slice();
    let mut acc = ZERO;
    for (i, xi) in x.iter().enumerate() {
        for (j, xj) in x.iter().enumerate() {
            acc += op[(i, j)] * (xi * xj);
        }
    }
    Ok(acc)
}

/// Propagator of a real three-dimensional system with one oscillator pair
/// of frequency `ω` and the third axis static.
pub fn three_dim_propagator(omega: f64, tau: f64) -> OrthogonalPropagator {
    let (sin, cos) = (omega * tau).sin_cos();
    let matrix = RealMatrix::from_rows(&[[cos, sin, 0.0], [-sin, cos, 0.0], [0.0, 0.0, 1.0]]);
    OrthogonalPropagator { matrix, tau }
}
