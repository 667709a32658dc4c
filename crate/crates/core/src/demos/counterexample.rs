//! A real 2×2 matrix with real spectrum `{1, -1}` that is not hermitian.

use serde::Serialize;

use crate::matrix::RealMatrix;

#[derive(Debug, Clone, Serialize)]
pub struct NonHermitianReport {
    pub matrix: RealMatrix,
    /// Larger eigenvalue first.
    pub eigenvalues: [f64; 2],
    /// Eigenvectors scaled to unit first component, matching `eigenvalues`.
    pub eigenvectors: [[f64; 2]; 2],
    /// `max ‖M v − λ v‖_∞` over both pairs.
    pub eigen_residual: f64,
    /// `max |M − M^T|`.
    pub asymmetry: f64,
    pub hermitian: bool,
    pub passed: bool,
}

pub fn nonhermitian_counterexample() -> NonHermitianReport {
    let m = RealMatrix::from_rows(&[[0.0, 2.0], [0.5, 0.0]]);
    let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);

    // characteristic polynomial λ² − tr λ + det
    let half_trace = 0.5 * (a + d);
    let det = a * d - b * c;
    let disc = half_trace * half_trace - det;
    let root = disc.max(0.0).sqrt();
    let eigenvalues = [half_trace + root, half_trace - root];

    let eigenvectors = eigenvalues.map(|lambda| [1.0, (lambda - a) / b]);
    let mut eigen_residual: f64 = 0.0;
    for (lambda, v) in eigenvalues.iter().zip(&eigenvectors) {
        let mv = m.matvec(v).expect("2x2");
        for k in 0..2 {
            eigen_residual = eigen_residual.max((mv[k] - lambda * v[k]).abs());
        }
    }
    let asymmetry = m.sub(&m.transpose()).expect("square").max_abs();
    let hermitian = asymmetry == 0.0;

    let passed = disc >= 0.0
        && (eigenvalues[0] - 1.0).abs() <= 1e-14
        && (eigenvalues[1] + 1.0).abs() <= 1e-14
        && (eigenvectors[0][1] - 0.5).abs() <= 1e-14
        && (eigenvectors[1][1] + 0.5).abs() <= 1e-14
        && eigen_residual <= 1e-14
        && !hermitian;
    NonHermitianReport {
        matrix: m,
        eigenvalues,
        eigenvectors,
        eigen_residual,
        asymmetry,
        hermitian,
        passed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_spectrum_without_hermiticity() {
        let report = nonhermitian_counterexample();
        assert_eq!(report.eigenvalues, [1.0, -1.0]);
        assert_eq!(report.eigenvectors, [[1.0, 0.5], [1.0, -0.5]]);
        assert_eq!(report.eigen_residual, 0.0);
        assert!(!report.hermitian);
        assert_eq!(report.asymmetry, 1.5);
        assert!(report.passed);
    }
}
