//! Special-orthogonal block diagonalization of skew-symmetric generators.
//!
//! For a real skew-symmetric `A` there is `S ∈ SO(n)` with
//!
//! ```text
//! S^T A S = A' = diag([[0, ω_1], [-ω_1, 0]], …, [[0, ω_r], [-ω_r, 0]], 0, …, 0)
//! ```
//!
//! [`decompose`] finds `S` from the symmetric positive-semidefinite matrix
//! `A^T A = -A²`, whose eigenvalues are the squared frequencies, each
//! appearing once per vector of the invariant plane. Each plane is spanned by
//! `u` and `v = -A u / ‖A u‖`, which realizes the `[[0, ω], [-ω, 0]]` sign
//! convention; the frequency itself is read back as `u^T A v` rather than as
//! the square root of an eigenvalue, so small frequencies keep full absolute
//! accuracy.

use nalgebra::linalg::Schur;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{
    dot, is_skew_symmetric, is_special_orthogonal, ComplexMatrix, RealMatrix, Tolerances,
};
use crate::symeig::SymmetricEigen;

/// A square real matrix that passed the skew-symmetry predicate.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewGenerator(RealMatrix);

impl SkewGenerator {
    pub fn new(matrix: RealMatrix, tol: &Tolerances) -> Result<Self> {
        let residual = matrix.skew_residual()?;
        if !is_skew_symmetric(&matrix, tol)? {
            return Err(Error::NotSkewSymmetric {
                max_asymmetry: residual,
            });
        }
        Ok(Self(matrix))
    }

    pub fn zeros(n: usize) -> Self {
        Self(RealMatrix::zeros(n, n))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> RealMatrix {
        self.0
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.frobenius_norm()
    }
}

/// Result of [`decompose`].
///
/// `frequencies` are positive and nonincreasing. When `orientation_flip` is
/// set, the last (smallest-frequency) block of `A'` is `[[0, -ω_r], [ω_r, 0]]`;
/// this only happens when there are no zero modes whose sign could be used to
/// make `det S = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CanonicalFormRepr", into = "CanonicalFormRepr")]
pub struct CanonicalForm {
    dim: usize,
    rotation: RealMatrix,
    frequencies: Vec<f64>,
    zero_modes: usize,
    orientation_flip: bool,
}

#[derive(Serialize, Deserialize)]
struct CanonicalFormRepr {
    n: usize,
    frequencies: Vec<f64>,
    zero_modes: usize,
    rotation: RealMatrix,
    orientation_flip: bool,
}

impl TryFrom<CanonicalFormRepr> for CanonicalForm {
    type Error = Error;
    fn try_from(r: CanonicalFormRepr) -> Result<Self> {
        if r.rotation.rows() != r.n {
            return Err(Error::Format(format!(
                "rotation is {}x{} but n = {}",
                r.rotation.rows(),
                r.rotation.cols(),
                r.n
            )));
        }
        CanonicalForm::from_parts(
            r.rotation,
            r.frequencies,
            r.orientation_flip,
            &Tolerances::default(),
        )
        .and_then(|cf| {
            if cf.zero_modes != r.zero_modes {
                Err(Error::Format(format!(
                    "zero_modes = {} inconsistent with n and {} frequencies",
                    r.zero_modes,
                    cf.frequencies.len()
                )))
            } else {
                Ok(cf)
            }
        })
    }
}

impl From<CanonicalForm> for CanonicalFormRepr {
    fn from(cf: CanonicalForm) -> Self {
        Self {
            n: cf.dim,
            frequencies: cf.frequencies,
            zero_modes: cf.zero_modes,
            rotation: cf.rotation,
            orientation_flip: cf.orientation_flip,
        }
    }
}

impl CanonicalForm {
    /// Assembles a canonical form from its parts, checking every invariant.
    /// The zero-mode count is implied by the rotation size.
    pub fn from_parts(
        rotation: RealMatrix,
        frequencies: Vec<f64>,
        orientation_flip: bool,
        tol: &Tolerances,
    ) -> Result<Self> {
        let n = rotation.require_square()?;
        if 2 * frequencies.len() > n {
            return Err(Error::InvalidArgument(format!(
                "{} frequencies do not fit in dimension {n}",
                frequencies.len()
            )));
        }
        if !is_special_orthogonal(&rotation, tol)? {
            return Err(Error::InvalidArgument(
                "rotation is not special orthogonal".into(),
            ));
        }
        let generator_norm = (2.0 * frequencies.iter().map(|w| w * w).sum::<f64>()).sqrt();
        let floor = tol.zero_freq_tol * generator_norm;
        if frequencies.iter().any(|w| !w.is_finite() || *w <= floor) {
            return Err(Error::InvalidArgument(format!(
                "frequencies must be finite and exceed {floor:e}"
            )));
        }
        if frequencies.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(
                "frequencies must be nonincreasing".into(),
            ));
        }
        let zero_modes = n - 2 * frequencies.len();
        if orientation_flip && (zero_modes > 0 || frequencies.is_empty()) {
            return Err(Error::InvalidArgument(
                "orientation_flip requires an even-dimensional form without zero modes".into(),
            ));
        }
        Ok(Self {
            dim: n,
            rotation,
            frequencies,
            zero_modes,
            orientation_flip,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rotation(&self) -> &RealMatrix {
        &self.rotation
    }

    /// Positive frequencies, largest first.
    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    /// Number of oscillator pairs `r`.
    pub fn pairs(&self) -> usize {
        self.frequencies.len()
    }

    pub fn zero_modes(&self) -> usize {
        self.zero_modes
    }

    pub fn orientation_flip(&self) -> bool {
        self.orientation_flip
    }

    /// The signed frequency of each block as it appears in `A'` at position
    /// `(2j, 2j+1)`. Equal to [`Self::frequencies`] except for a flipped
    /// last block.
    pub fn block_frequencies(&self) -> Vec<f64> {
        let mut w = self.frequencies.clone();
        if self.orientation_flip {
            if let Some(last) = w.last_mut() {
                *last = -*last;
            }
        }
        w
    }

    /// The block-diagonal generator `A'`.
    pub fn block_generator(&self) -> RealMatrix {
        let mut a = RealMatrix::zeros(self.dim, self.dim);
        for (j, w) in self.block_frequencies().into_iter().enumerate() {
            a[(2 * j, 2 * j + 1)] = w;
            a[(2 * j + 1, 2 * j)] = -w;
        }
        a
    }

    /// `S A' S^T`.
    pub fn reconstruct(&self) -> RealMatrix {
        let sa = self
            .rotation
            .matmul(&self.block_generator())
            .expect("square factors of equal size");
        sa.matmul(&self.rotation.transpose())
            .expect("square factors of equal size")
    }
}

/// Reconstructs the generator `S A' S^T` of a canonical form.
pub fn reconstruct(cf: &CanonicalForm) -> RealMatrix {
    cf.reconstruct()
}

/// Block-diagonalizes a skew-symmetric generator.
pub fn decompose(a: &SkewGenerator, tol: &Tolerances) -> Result<CanonicalForm> {
    tol.validate()?;
    let n = a.dim();
    let am = a.matrix();
    let zero_threshold = tol.zero_freq_tol * am.frobenius_norm();

    let mut gram = am.transpose().matmul(am)?;
    for i in 0..n {
        for j in 0..i {
            let s = 0.5 * (gram[(i, j)] + gram[(j, i)]);
            gram[(i, j)] = s;
            gram[(j, i)] = s;
        }
    }
    let eig = SymmetricEigen::new(&gram)?;

    // Eigenvectors by descending eigenvalue; ties keep the solver's order.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| eig.values[y].total_cmp(&eig.values[x]));
    let mut pool: Vec<Vec<f64>> = order.iter().map(|&j| eig.vectors.column(j)).collect();

    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut blocks: Vec<(f64, usize)> = Vec::new();
    let mut statics: Vec<usize> = Vec::new();

    while basis.len() < n && !pool.is_empty() {
        // Pool vectors are kept orthogonal to the basis, so their norms are
        // the residuals. Take the first one within a factor two of the best.
        let norms: Vec<f64> = pool.iter().map(|q| dot(q, q).sqrt()).collect();
        let best = norms.iter().cloned().fold(0.0, f64::max);
        if best < 1e-8 {
            return Err(Error::NoConvergence {
                what: "invariant-plane extraction",
                iterations: n,
            });
        }
        let pick = norms.iter().position(|&x| x >= 0.5 * best).unwrap_or(0);
        let mut u = pool.remove(pick);
        orthonormalize(&mut u, &basis);

        let au = am.matvec(&u)?;
        let amplitude = dot(&au, &au).sqrt();
        let mut added = vec![basis.len()];
        let mut paired = false;
        if amplitude > zero_threshold && basis.len() + 2 <= n {
            let mut v: Vec<f64> = au.iter().map(|x| -x / amplitude).collect();
            let before = dot(&v, &v).sqrt();
            let mut against = basis.clone();
            against.push(u.clone());
            project_out(&mut v, &against);
            project_out(&mut v, &against);
            if dot(&v, &v).sqrt() > 0.5 * before {
                normalize(&mut v);
                let av = am.matvec(&v)?;
                let omega = dot(&u, &av);
                if omega > zero_threshold {
                    blocks.push((omega, basis.len()));
                    basis.push(u.clone());
                    basis.push(v);
                    added.push(basis.len() - 1);
                    paired = true;
                }
            }
        }
        if !paired {
            statics.push(basis.len());
            basis.push(u);
        }
        for q in pool.iter_mut() {
            for &k in &added {
                let c = dot(q, &basis[k]);
                for (qi, bi) in q.iter_mut().zip(&basis[k]) {
                    *qi -= c * bi;
                }
            }
        }
    }

    blocks.sort_by(|x, y| y.0.total_cmp(&x.0));
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(n);
    for &(_, k) in &blocks {
        columns.push(basis[k].clone());
        columns.push(basis[k + 1].clone());
    }
    for &k in &statics {
        columns.push(basis[k].clone());
    }
    let mut rotation = RealMatrix::from_columns(&columns);
    let frequencies: Vec<f64> = blocks.iter().map(|b| b.0).collect();

    let mut orientation_flip = false;
    if rotation.determinant()? < 0.0 {
        if statics.is_empty() {
            let r = frequencies.len();
            rotation.swap_columns(2 * r - 2, 2 * r - 1);
            orientation_flip = true;
        } else {
            let last: Vec<f64> = rotation.column(n - 1).iter().map(|x| -x).collect();
            rotation.set_column(n - 1, &last);
        }
    }

    let zero_modes = n - 2 * frequencies.len();
    Ok(CanonicalForm {
        dim: n,
        rotation,
        frequencies,
        zero_modes,
        orientation_flip,
    })
}

fn project_out(v: &mut [f64], basis: &[Vec<f64>]) {
    for b in basis {
        let c = dot(v, b);
        for (vi, bi) in v.iter_mut().zip(b) {
            *vi -= c * bi;
        }
    }
}

fn normalize(v: &mut [f64]) {
    let n = dot(v, v).sqrt();
    for x in v.iter_mut() {
        *x /= n;
    }
}

fn orthonormalize(v: &mut [f64], basis: &[Vec<f64>]) {
    project_out(v, basis);
    project_out(v, basis);
    normalize(v);
}

/// Outcome of [`spectrum_pairing_check`].
#[derive(Debug, Clone, Serialize)]
pub struct PairingReport {
    pub paired: bool,
    /// Eigenvalues of `A` from a general (non-symmetric) eigensolver.
    pub eigenvalues: Vec<Complex64>,
    /// Positive imaginary parts, largest first.
    pub positive_frequencies: Vec<f64>,
    pub zero_count: usize,
    pub max_real_part: f64,
    pub max_pairing_defect: f64,
    pub tolerance: f64,
}

/// Complex eigenvalues of a real square matrix via nalgebra's real Schur form.
pub fn complex_eigenvalues(m: &RealMatrix) -> Result<Vec<Complex64>> {
    m.require_square()?;
    const MAX_ITER: usize = 10_000;
    let schur =
        Schur::try_new(m.to_nalgebra(), f64::EPSILON, MAX_ITER).ok_or(Error::NoConvergence {
            what: "real Schur eigensolver",
            iterations: MAX_ITER,
        })?;
    Ok(schur.complex_eigenvalues().iter().cloned().collect())
}

/// Verifies that the spectrum of `A` is `{±iω_j} ∪ {0, …}`.
pub fn spectrum_pairing_check(a: &SkewGenerator) -> Result<PairingReport> {
    let eigenvalues = complex_eigenvalues(a.matrix())?;
    let tolerance = 1e-10 * a.frobenius_norm();
    let max_real_part = eigenvalues.iter().fold(0.0_f64, |m, z| m.max(z.re.abs()));

    let mut positive: Vec<f64> = eigenvalues
        .iter()
        .filter(|z| z.im > tolerance)
        .map(|z| z.im)
        .collect();
    let mut negative: Vec<f64> = eigenvalues
        .iter()
        .filter(|z| z.im < -tolerance)
        .map(|z| -z.im)
        .collect();
    let zero_count = eigenvalues.len() - positive.len() - negative.len();
    positive.sort_by(|x, y| y.total_cmp(x));
    negative.sort_by(|x, y| y.total_cmp(x));

    let mut max_pairing_defect = 0.0_f64;
    let counts_match = positive.len() == negative.len();
    if counts_match {
        for (p, q) in positive.iter().zip(&negative) {
            max_pairing_defect = max_pairing_defect.max((p - q).abs());
        }
    } else {
        max_pairing_defect = f64::INFINITY;
    }
    let paired = counts_match && max_real_part <= tolerance && max_pairing_defect <= tolerance;
    Ok(PairingReport {
        paired,
        eigenvalues,
        positive_frequencies: positive,
        zero_count,
        max_real_part,
        max_pairing_defect,
        tolerance,
    })
}

/// The hermitian, purely imaginary operator `H = iA`.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoHamiltonian {
    pub matrix: ComplexMatrix,
}

pub fn pseudo_hamiltonian(a: &SkewGenerator) -> PseudoHamiltonian {
    let m = a.matrix();
    let n = a.dim();
    let mut h = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            h[(i, j)] = Complex64::new(0.0, m[(i, j)]);
        }
    }
    PseudoHamiltonian { matrix: h }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::random_skew;

    fn skew(rows: &[[f64; 3]]) -> SkewGenerator {
        SkewGenerator::new(RealMatrix::from_rows(rows), &Tolerances::default()).unwrap()
    }

    fn recon_error(a: &SkewGenerator, cf: &CanonicalForm) -> f64 {
        cf.reconstruct().sub(a.matrix()).unwrap().frobenius_norm()
    }

    #[test]
    fn already_canonical_two_by_two() {
        let a = SkewGenerator::new(
            RealMatrix::from_rows(&[[0.0, 2.0], [-2.0, 0.0]]),
            &Tolerances::default(),
        )
        .unwrap();
        let cf = decompose(&a, &Tolerances::default()).unwrap();
        assert_eq!(cf.frequencies(), &[2.0]);
        assert_eq!(cf.zero_modes(), 0);
        assert!(!cf.orientation_flip());
        assert!(recon_error(&a, &cf) < 1e-15);
        assert!(is_special_orthogonal(cf.rotation(), &Tolerances::default()).unwrap());
    }

    #[test]
    fn rotation_generator_around_third_axis() {
        let a = skew(&[[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 0.0]]);
        let cf = decompose(&a, &Tolerances::default()).unwrap();
        assert_eq!(cf.frequencies().len(), 1);
        assert!((cf.frequencies()[0] - 1.0).abs() < 1e-15);
        assert_eq!(cf.zero_modes(), 1);
        assert!(recon_error(&a, &cf) < 1e-15);
    }

    #[test]
    fn zero_generator_is_all_static() {
        let a = SkewGenerator::zeros(4);
        let cf = decompose(&a, &Tolerances::default()).unwrap();
        assert!(cf.frequencies().is_empty());
        assert_eq!(cf.zero_modes(), 4);
        assert_eq!(cf.reconstruct(), RealMatrix::zeros(4, 4));
    }

    #[test]
    fn rejects_non_skew() {
        let m = RealMatrix::from_rows(&[[0.0, 2.0], [0.5, 0.0]]);
        match SkewGenerator::new(m, &Tolerances::default()) {
            Err(Error::NotSkewSymmetric { max_asymmetry }) => assert_eq!(max_asymmetry, 2.5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn reflected_embedding_stays_special_orthogonal() {
        let p = RealMatrix::from_rows(&[
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 1.0, 0.0],
        ]);
        let canonical = RealMatrix::from_rows(&[
            [0.0, 3.0, 0.0, 0.0],
            [-3.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, -1.0, 0.0],
        ]);
        let a = p
            .matmul(&canonical)
            .unwrap()
            .matmul(&p.transpose())
            .unwrap();
        let a = SkewGenerator::new(a, &Tolerances::default()).unwrap();
        let cf = decompose(&a, &Tolerances::default()).unwrap();
        assert!(recon_error(&a, &cf) < 1e-14);
        assert!(is_special_orthogonal(cf.rotation(), &Tolerances::default()).unwrap());
        assert_eq!(cf.frequencies(), &[3.0, 1.0]);
        assert!(cf.block_frequencies().iter().all(|w| w.abs() > 0.0));
    }

    #[test]
    fn orientation_flip_keeps_reconstruction_exact() {
        let tol = Tolerances::default();
        let mut flipped = 0;
        for seed in 0..40 {
            let a = SkewGenerator::new(random_skew(6, seed), &tol).unwrap();
            let cf = decompose(&a, &tol).unwrap();
            assert!(is_special_orthogonal(cf.rotation(), &tol).unwrap());
            assert!(recon_error(&a, &cf) < 1e-13);
            if cf.orientation_flip() {
                flipped += 1;
                let w = cf.block_frequencies();
                assert!(w[w.len() - 1] < 0.0);
                assert!(cf.frequencies().iter().all(|&x| x > 0.0));
            }
        }
        assert!(flipped > 0, "no seed exercised the flip");
    }

    #[test]
    fn random_frequencies_match_eigenvalues() {
        let a = SkewGenerator::new(random_skew(6, 11), &Tolerances::default()).unwrap();
        let cf = decompose(&a, &Tolerances::default()).unwrap();
        let report = spectrum_pairing_check(&a).unwrap();
        assert!(report.paired);
        assert_eq!(cf.frequencies().len(), report.positive_frequencies.len());
        for (w, p) in cf.frequencies().iter().zip(&report.positive_frequencies) {
            assert!((w - p).abs() < 1e-12, "{w} vs {p}");
        }
    }

    #[test]
    fn pairing_small_examples() {
        let a = SkewGenerator::new(
            RealMatrix::from_rows(&[[0.0, 2.0], [-2.0, 0.0]]),
            &Tolerances::default(),
        )
        .unwrap();
        let report = spectrum_pairing_check(&a).unwrap();
        assert!(report.paired);
        assert_eq!(report.zero_count, 0);
        assert!((report.positive_frequencies[0] - 2.0).abs() < 1e-14);

        let a = skew(&[[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 0.0]]);
        let report = spectrum_pairing_check(&a).unwrap();
        assert!(report.paired);
        assert_eq!(report.zero_count, 1);
        assert!((report.positive_frequencies[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn pseudo_hamiltonian_examples() {
        let a = SkewGenerator::new(
            RealMatrix::from_rows(&[[0.0, 1.0], [-1.0, 0.0]]),
            &Tolerances::default(),
        )
        .unwrap();
        let h = pseudo_hamiltonian(&a).matrix;
        assert_eq!(h[(0, 1)], Complex64::new(0.0, 1.0));
        assert_eq!(h[(1, 0)], Complex64::new(0.0, -1.0));
        assert_eq!(h[(0, 0)], Complex64::new(0.0, 0.0));
        assert!(h.is_hermitian(1e-14));
        assert!(h.is_purely_imaginary());

        let z = pseudo_hamiltonian(&SkewGenerator::zeros(3)).matrix;
        assert_eq!(z, ComplexMatrix::zeros(3, 3));
    }

    #[test]
    fn json_shape_and_validation() {
        let a = skew(&[[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 0.0]]);
        let cf = decompose(&a, &Tolerances::default()).unwrap();
        let value = serde_json::to_value(&cf).unwrap();
        for key in [
            "n",
            "frequencies",
            "zero_modes",
            "rotation",
            "orientation_flip",
        ] {
            assert!(value.get(key).is_some(), "missing {key}");
        }
        let back: CanonicalForm = serde_json::from_value(value.clone()).unwrap();
        assert_eq!(back, cf);

        let mut bad = value;
        bad["zero_modes"] = serde_json::json!(3);
        assert!(serde_json::from_value::<CanonicalForm>(bad).is_err());
    }

    #[test]
    fn from_parts_rejects_broken_invariants() {
        let tol = Tolerances::default();
        let id = RealMatrix::identity(4);
        assert!(CanonicalForm::from_parts(id.clone(), vec![1.0, 2.0], false, &tol).is_err());
        assert!(CanonicalForm::from_parts(id.clone(), vec![1.0, 1.0, 1.0], false, &tol).is_err());
        assert!(CanonicalForm::from_parts(id.clone(), vec![-1.0], false, &tol).is_err());
        assert!(CanonicalForm::from_parts(id.clone(), vec![1.0], true, &tol).is_err());
        let reflect = RealMatrix::from_rows(&[[1.0, 0.0], [0.0, -1.0]]);
        assert!(CanonicalForm::from_parts(reflect, vec![1.0], false, &tol).is_err());
        assert!(CanonicalForm::from_parts(id, vec![2.0, 1.0], true, &tol).is_ok());
    }
}
