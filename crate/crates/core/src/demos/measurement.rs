//! Premeasurement of a two-state system by an apparatus.
//!
//! Unitary evolution
//!
//! ```text
//! |↓⟩|A_0⟩ → |↓⟩|A_↓⟩,    |↑⟩|A_0⟩ → |↑⟩|A_↑⟩
//! ```
//!
//! must conserve the overlap of the two inputs, which forces
//! `⟨↑|↓⟩ ⟨A_0|A_0⟩ = ⟨↑|↓⟩ ⟨A_↑|A_↓⟩`. Either the system states are
//! orthogonal, or the pointer states coincide and the apparatus learns
//! nothing.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, ComplexVector};

/// Tolerance for overlap identities.
pub const OVERLAP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    /// `⟨↑|↓⟩ = 0`: any pointer overlap is consistent with unitarity.
    FeasibleDistinguishing,
    /// `⟨A_↑|A_↓⟩ = 1`: consistent, but the pointer states are identical.
    FeasibleUseless,
    /// `⟨↑|↓⟩ (1 − ⟨A_↑|A_↓⟩) ≠ 0`: no unitary realizes the maps.
    Infeasible,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::FeasibleDistinguishing => "FEASIBLE_DISTINGUISHING",
            Verdict::FeasibleUseless => "FEASIBLE_USELESS",
            Verdict::Infeasible => "INFEASIBLE",
        };
        f.write_str(s)
    }
}

/// Classifies a premeasurement by the conservation identity
/// `s · (‖A_0‖² − a) = 0`, with `s = ⟨↑|↓⟩` and `a = ⟨A_↑|A_↓⟩`.
pub fn measurement_feasibility(
    s_overlap: Complex64,
    a0_norm: f64,
    a_overlap: Complex64,
) -> Result<Verdict> {
    if s_overlap.norm() > 1.0 + OVERLAP_TOL || a_overlap.norm() > 1.0 + OVERLAP_TOL {
        return Err(Error::InvalidArgument(format!(
            "overlaps must have modulus <= 1, got |s| = {}, |a| = {}",
            s_overlap.norm(),
            a_overlap.norm()
        )));
    }
    if (a0_norm - 1.0).abs() > OVERLAP_TOL {
        return Err(Error::InvalidArgument(format!(
            "ready state must be normalized, got norm {a0_norm}"
        )));
    }
    let defect = s_overlap * (Complex64::new(a0_norm * a0_norm, 0.0) - a_overlap);
    Ok(if defect.norm() > OVERLAP_TOL {
        Verdict::Infeasible
    } else if s_overlap.norm() <= OVERLAP_TOL {
        Verdict::FeasibleDistinguishing
    } else {
        Verdict::FeasibleUseless
    })
}

/// A normalized vector in `H_S ⊗ H_A`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeState {
    pub vector: ComplexVector,
    pub dims: (usize, usize),
}

impl CompositeState {
    pub fn new(vector: ComplexVector, dims: (usize, usize), norm_tol: f64) -> Result<Self> {
        if vector.dim() != dims.0 * dims.1 {
            return Err(Error::DimensionMismatch {
                expected: dims.0 * dims.1,
                actual: vector.dim(),
            });
        }
        if (vector.norm() - 1.0).abs() > norm_tol {
            return Err(Error::InvalidArgument(format!(
                "composite state has norm {}",
                vector.norm()
            )));
        }
        Ok(Self { vector, dims })
    }

    /// `|system⟩ ⊗ |apparatus⟩`.
    pub fn product(system: &ComplexVector, apparatus: &ComplexVector) -> Result<Self> {
        Self::new(
            system.kron(apparatus),
            (system.dim(), apparatus.dim()),
            OVERLAP_TOL,
        )
    }
}

/// Extends orthonormal `vectors` in `C^d` to a full orthonormal basis.
///
/// Candidates are the standard basis vectors; at each step the one with the
/// largest component outside the current span is taken (lowest index on
/// ties), orthogonalized twice and normalized. The result is deterministic.
pub fn orthonormal_completion(vectors: &[ComplexVector], dim: usize) -> Result<Vec<ComplexVector>> {
    if vectors.iter().any(|v| v.dim() != dim) {
        return Err(Error::InvalidArgument(
            "all vectors must share the ambient dimension".into(),
        ));
    }
    if vectors.len() > dim {
        return Err(Error::InvalidArgument(format!(
            "{} vectors exceed dimension {dim}",
            vectors.len()
        )));
    }
    let mut basis: Vec<Vec<Complex64>> = vectors.iter().map(|v| v.as_slice().to_vec()).collect();
    let mut used = vec![false; dim];
    while basis.len() < dim {
        let mut best: Option<(usize, Vec<Complex64>, f64)> = None;
        for k in (0..dim).filter(|&k| !used[k]) {
            let mut cand = vec![Complex64::new(0.0, 0.0); dim];
            cand[k] = Complex64::new(1.0, 0.0);
            project_out(&mut cand, &basis);
            project_out(&mut cand, &basis);
            let norm = cand.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if best.as_ref().is_none_or(|b| norm > b.2) {
                best = Some((k, cand, norm));
            }
        }
        let (k, mut cand, norm) = best.expect("fewer basis vectors than dimension");
        if norm < 1e-8 {
            return Err(Error::InvalidArgument(
                "input vectors are not linearly independent".into(),
            ));
        }
        used[k] = true;
        cand.iter_mut().for_each(|z| *z /= norm);
        basis.push(cand);
    }
    basis.into_iter().map(ComplexVector::new).collect()
}

fn project_out(v: &mut [Complex64], basis: &[Vec<Complex64>]) {
    for b in basis {
        let c: Complex64 = b.iter().zip(v.iter()).map(|(x, y)| x.conj() * y).sum();
        for (vi, bi) in v.iter_mut().zip(b) {
            *vi -= c * bi;
        }
    }
}

/// Unitary `U` on `H_S ⊗ H_A` with `U |↓⟩|A_0⟩ = |↓⟩|A_↓⟩` and
/// `U |↑⟩|A_0⟩ = |↑⟩|A_↑⟩`.
///
/// Both the input pair and the output pair are completed to orthonormal
/// bases with [`orthonormal_completion`]; `U` maps one basis onto the other.
/// Non-orthogonal system states are refused since the two maps cannot both
/// be realized unitarily unless the apparatus records nothing.
pub fn build_measurement_unitary(
    up: &ComplexVector,
    down: &ComplexVector,
    a0: &ComplexVector,
    a_up: &ComplexVector,
    a_down: &ComplexVector,
) -> Result<ComplexMatrix> {
    let ds = up.dim();
    let da = a0.dim();
    if down.dim() != ds {
        return Err(Error::DimensionMismatch {
            expected: ds,
            actual: down.dim(),
        });
    }
    for v in [a_up, a_down] {
        if v.dim() != da {
            return Err(Error::DimensionMismatch {
                expected: da,
                actual: v.dim(),
            });
        }
    }
    for v in [up, down, a0, a_up, a_down] {
        if (v.norm() - 1.0).abs() > OVERLAP_TOL {
            return Err(Error::InvalidArgument(format!(
                "input state has norm {}",
                v.norm()
            )));
        }
    }
    let s_overlap = up.inner(down)?;
    if s_overlap.norm() > OVERLAP_TOL {
        let verdict = measurement_feasibility(s_overlap, a0.norm(), a_up.inner(a_down)?)?;
        return Err(Error::NonOrthogonalStates {
            verdict: verdict.to_string(),
            overlap: s_overlap.norm(),
        });
    }

    let inputs = [down.kron(a0), up.kron(a0)];
    let outputs = [down.kron(a_down), up.kron(a_up)];
    let d = ds * da;
    let x = ComplexMatrix::from_columns(&orthonormal_completion(&inputs, d)?);
    let y = ComplexMatrix::from_columns(&orthonormal_completion(&outputs, d)?);
    y.matmul(&x.adjoint())
}

/// Checks on a constructed premeasurement unitary.
#[derive(Debug, Clone, Serialize)]
pub struct MeasurementReport {
    pub verdict: Verdict,
    pub dims: (usize, usize),
    /// `‖U^†U − I‖_F`.
    pub unitarity_defect: f64,
    /// Largest distance between `U(input)` and the prescribed image.
    pub map_residual: f64,
    /// Largest change in any entry of the 2×2 Gram matrix of the inputs.
    pub gram_defect: f64,
}

impl MeasurementReport {
    pub fn check(
        u: &ComplexMatrix,
        up: &ComplexVector,
        down: &ComplexVector,
        a0: &ComplexVector,
        a_up: &ComplexVector,
        a_down: &ComplexVector,
    ) -> Result<Self> {
        let verdict = measurement_feasibility(up.inner(down)?, a0.norm(), a_up.inner(a_down)?)?;
        let inputs = [down.kron(a0), up.kron(a0)];
        let targets = [down.kron(a_down), up.kron(a_up)];
        let images = inputs
            .iter()
            .map(|x| u.matvec(x))
            .collect::<Result<Vec<_>>>()?;
        let mut map_residual: f64 = 0.0;
        for (img, t) in images.iter().zip(&targets) {
            map_residual = map_residual.max(img.distance(t)?);
        }
        let mut gram_defect: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let before = inputs[i].inner(&inputs[j])?;
                let after = images[i].inner(&images[j])?;
                gram_defect = gram_defect.max((before - after).norm());
            }
        }
        Ok(Self {
            verdict,
            dims: (up.dim(), a0.dim()),
            unitarity_defect: u.unitarity_defect()?,
            map_residual,
            gram_defect,
        })
    }
}
