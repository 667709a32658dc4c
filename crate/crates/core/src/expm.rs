//! General-purpose matrix exponential by scaling and squaring with a
//! fixed-order Taylor polynomial.
//!
//! This routine knows nothing about skew symmetry or canonical forms; it is
//! kept as an independent cross-check for the closed-form propagator.

use crate::error::Result;
use crate::matrix::RealMatrix;

/// Degree of the Taylor polynomial.
pub const TAYLOR_ORDER: usize = 18;

/// The scaled matrix satisfies `‖A / 2^s‖_1 ≤ SCALED_NORM_BOUND`.
pub const SCALED_NORM_BOUND: f64 = 0.5;

/// `exp(A)` for a square real matrix.
pub fn expm_taylor(a: &RealMatrix) -> Result<RealMatrix> {
    let n = a.require_square()?;
    let norm = a.norm_one();
    let mut squarings = 0u32;
    if norm > SCALED_NORM_BOUND {
        squarings = (norm / SCALED_NORM_BOUND).log2().ceil() as u32;
    }
    let scaled = a.scale(0.5_f64.powi(squarings as i32));

    // Horner: I + X(I + X/2(I + X/3(…)))
    let identity = RealMatrix::identity(n);
    let mut acc = identity.clone();
    for k in (1..=TAYLOR_ORDER).rev() {
        acc = identity.add(&scaled.matmul(&acc)?.scale(1.0 / k as f64))?;
    }
    for _ in 0..squarings {
        acc = acc.matmul(&acc)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_gives_identity() {
        assert_eq!(
            expm_taylor(&RealMatrix::zeros(3, 3)).unwrap(),
            RealMatrix::identity(3)
        );
    }

    #[test]
    fn diagonal_matches_scalar_exp() {
        let m = RealMatrix::from_rows(&[[1.0, 0.0], [0.0, -2.5]]);
        let e = expm_taylor(&m).unwrap();
        assert!((e[(0, 0)] - 1f64.exp()).abs() < 1e-14);
        assert!((e[(1, 1)] - (-2.5f64).exp()).abs() < 1e-15);
        assert_eq!(e[(0, 1)], 0.0);
    }

    #[test]
    fn nilpotent_is_exact() {
        let m = RealMatrix::from_rows(&[[0.0, 3.0], [0.0, 0.0]]);
        let e = expm_taylor(&m).unwrap();
        assert!((e[(0, 1)] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn plane_rotation() {
        let t = 7.3_f64;
        let m = RealMatrix::from_rows(&[[0.0, t], [-t, 0.0]]);
        let e = expm_taylor(&m).unwrap();
        let want = RealMatrix::from_rows(&[[t.cos(), t.sin()], [-t.sin(), t.cos()]]);
        assert!(e.sub(&want).unwrap().frobenius_norm() < 1e-13);
    }
}
