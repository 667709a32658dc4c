//! The complex picture of the oscillating sector.
//!
//! In the block basis `ψ' = S^T ψ`, each oscillator pair `(ψ'_{j,1}, ψ'_{j,2})`
//! is packed into one amplitude `z_j = ψ'_{j,1} + i ψ'_{j,2}`. The real pair
//! rotation by `ω_j τ` is then exactly multiplication by `e^{-iω_jτ}`, so the
//! `2r` real oscillating dimensions behave as an `r`-dimensional unitary
//! system with diagonal Hamiltonian `diag(ω_j)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::canonical::{decompose, CanonicalForm, SkewGenerator};
use crate::dynamics::propagate_with;
use crate::error::{Error, Result};
use crate::matrix::{RealMatrix, RealVector, Tolerances};

/// Frequencies and complex amplitudes of `r` decoupled phase oscillators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "UnitarySystemRepr", into = "UnitarySystemRepr")]
pub struct UnitarySystem {
    frequencies: Vec<f64>,
    amplitudes: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct AmplitudeRepr {
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct UnitarySystemRepr {
    frequencies: Vec<f64>,
    amplitudes: Vec<AmplitudeRepr>,
}

impl TryFrom<UnitarySystemRepr> for UnitarySystem {
    type Error = Error;
    fn try_from(r: UnitarySystemRepr) -> Result<Self> {
        UnitarySystem::new(
            r.frequencies,
            r.amplitudes
                .into_iter()
                .map(|a| Complex64::new(a.re, a.im))
                .collect(),
        )
    }
}

impl From<UnitarySystem> for UnitarySystemRepr {
    fn from(u: UnitarySystem) -> Self {
        Self {
            frequencies: u.frequencies,
            amplitudes: u
                .amplitudes
                .into_iter()
                .map(|z| AmplitudeRepr { re: z.re, im: z.im })
                .collect(),
        }
    }
}

impl UnitarySystem {
    pub fn new(frequencies: Vec<f64>, amplitudes: Vec<Complex64>) -> Result<Self> {
        if frequencies.len() != amplitudes.len() {
            return Err(Error::DimensionMismatch {
                expected: frequencies.len(),
                actual: amplitudes.len(),
            });
        }
        let finite = frequencies.iter().all(|w| w.is_finite())
            && amplitudes
                .iter()
                .all(|z| z.re.is_finite() && z.im.is_finite());
        if !finite {
            return Err(Error::NonFinite("unitary system"));
        }
        Ok(Self {
            frequencies,
            amplitudes,
        })
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }

    /// `Σ |z_j|²`.
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Output of [`complexify`]: the oscillating sector as complex amplitudes
/// and the static sector as plain real coordinates (in the block basis).
#[derive(Debug, Clone, PartialEq)]
pub struct Complexified {
    pub system: UnitarySystem,
    pub static_part: Vec<f64>,
}

impl Complexified {
    /// `Σ|z_j|² + ‖static‖²`, equal to `‖ψ‖²`.
    pub fn norm_sqr(&self) -> f64 {
        self.system.norm_sqr() + self.static_part.iter().map(|x| x * x).sum::<f64>()
    }
}

/// Splits `ψ` into complex amplitudes `z_j = ψ'_{2j-1} + iψ'_{2j}` and the
/// static remainder, where `ψ' = S^T ψ`.
///
/// The frequency attached to each amplitude is the signed block frequency,
/// so a block stored with flipped orientation evolves with `e^{+i|ω|τ}`.
pub fn complexify(cf: &CanonicalForm, psi: &RealVector) -> Result<Complexified> {
    if psi.dim() != cf.dim() {
        return Err(Error::DimensionMismatch {
            expected: cf.dim(),
            actual: psi.dim(),
        });
    }
    let coords = cf.rotation().tr_matvec(psi.as_slice())?;
    let r = cf.pairs();
    let amplitudes = (0..r)
        .map(|j| Complex64::new(coords[2 * j], coords[2 * j + 1]))
        .collect();
    let system = UnitarySystem {
        frequencies: cf.block_frequencies(),
        amplitudes,
    };
    Ok(Complexified {
        system,
        static_part: coords[2 * r..].to_vec(),
    })
}

/// Inverse of [`complexify`].
pub fn decomplexify(cf: &CanonicalForm, parts: &Complexified) -> Result<RealVector> {
    let r = cf.pairs();
    if parts.system.len() != r || parts.static_part.len() != cf.zero_modes() {
        return Err(Error::DimensionMismatch {
            expected: cf.dim(),
            actual: 2 * parts.system.len() + parts.static_part.len(),
        });
    }
    let mut coords = Vec::with_capacity(cf.dim());
    for z in parts.system.amplitudes() {
        coords.push(z.re);
        coords.push(z.im);
    }
    coords.extend_from_slice(&parts.static_part);
    RealVector::new(cf.rotation().matvec(&coords)?)
}

/// `z_j(τ) = e^{-iω_jτ} z_j(0)`.
pub fn evolve_complex(u: &UnitarySystem, tau: f64) -> UnitarySystem {
    let amplitudes = u
        .frequencies
        .iter()
        .zip(&u.amplitudes)
        .map(|(w, z)| {
            let (sin, cos) = (w * tau).sin_cos();
            z * Complex64::new(cos, -sin)
        })
        .collect();
    UnitarySystem {
        frequencies: u.frequencies.clone(),
        amplitudes,
    }
}

/// Builds the block-diagonal real system equivalent to `u`: blocks
/// `[[0, ω_j], [-ω_j, 0]]` and `ψ = (Re z_1, Im z_1, Re z_2, …)`.
pub fn realify(u: &UnitarySystem) -> Result<(SkewGenerator, RealVector)> {
    if u.is_empty() {
        return Err(Error::InvalidArgument(
            "realify needs at least one amplitude".into(),
        ));
    }
    let n = 2 * u.len();
    let mut a = RealMatrix::zeros(n, n);
    let mut psi = Vec::with_capacity(n);
    for (j, (w, z)) in u.frequencies.iter().zip(&u.amplitudes).enumerate() {
        a[(2 * j, 2 * j + 1)] = *w;
        a[(2 * j + 1, 2 * j)] = -*w;
        psi.push(z.re);
        psi.push(z.im);
    }
    let generator = SkewGenerator::new(a, &Tolerances::default())?;
    Ok((generator, RealVector::new(psi)?))
}

/// `ψ(τ)` computed in the complex picture: complexify, apply the phases,
/// map back.
pub fn complex_path(cf: &CanonicalForm, psi0: &RealVector, tau: f64) -> Result<RealVector> {
    let parts = complexify(cf, psi0)?;
    let evolved = Complexified {
        system: evolve_complex(&parts.system, tau),
        static_part: parts.static_part,
    };
    decomplexify(cf, &evolved)
}

/// Largest Euclidean distance between the real propagation and the complex
/// path over `taus`, using an existing decomposition.
pub fn equivalence_check_with(
    cf: &CanonicalForm,
    psi0: &RealVector,
    taus: &[f64],
    tol: &Tolerances,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &tau in taus {
        let real = propagate_with(cf, psi0, tau, tol)?;
        let complex = complex_path(cf, psi0, tau)?;
        worst = worst.max(real.distance(&complex)?);
    }
    Ok(worst)
}

/// Decomposes `A` once and compares the real and complex evolutions.
pub fn equivalence_check(
    a: &SkewGenerator,
    psi0: &RealVector,
    taus: &[f64],
    tol: &Tolerances,
) -> Result<f64> {
    if psi0.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            actual: psi0.dim(),
        });
    }
    let cf = decompose(a, tol)?;
    equivalence_check_with(&cf, psi0, taus, tol)
}

/// A real matrix acting as multiplication by `i` on the oscillating sector.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexStructure {
    /// `J = S · blockdiag([[0,1],[-1,0]]^r, 0) · S^T`, zero on the static sector.
    pub matrix: RealMatrix,
    /// Orthonormal basis of the oscillating sector (the first `2r` columns of `S`).
    pub sector_basis: RealMatrix,
}

impl ComplexStructure {
    /// Orthogonal projector onto the oscillating sector.
    pub fn sector_projector(&self) -> RealMatrix {
        self.sector_basis
            .matmul(&self.sector_basis.transpose())
            .expect("conforming factors")
    }

    /// `J` expressed in the sector basis, a `2r × 2r` matrix.
    pub fn restricted(&self) -> RealMatrix {
        self.sector_basis
            .transpose()
            .matmul(&self.matrix)
            .and_then(|m| m.matmul(&self.sector_basis))
            .expect("conforming factors")
    }
}

pub fn complex_structure(cf: &CanonicalForm) -> Result<ComplexStructure> {
    let r = cf.pairs();
    if r == 0 {
        return Err(Error::NoOscillatingSector { dim: cf.dim() });
    }
    let s = cf.rotation();
    let n = cf.dim();
    let columns: Vec<Vec<f64>> = (0..2 * r).map(|k| s.column(k)).collect();
    let sector_basis = RealMatrix::from_columns(&columns);

    // S_r K S_r^T with K = blockdiag([[0,1],[-1,0]]); column 2j of S_r K is
    // -s_{2j+1}, column 2j+1 is s_{2j}.
    let mut sk = RealMatrix::zeros(n, 2 * r);
    for j in 0..r {
        for i in 0..n {
            sk[(i, 2 * j)] = -sector_basis[(i, 2 * j + 1)];
            sk[(i, 2 * j + 1)] = sector_basis[(i, 2 * j)];
        }
    }
    let matrix = sk.matmul(&sector_basis.transpose())?;
    Ok(ComplexStructure {
        matrix,
        sector_basis,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, PI};

    use super::*;

    fn identity_form(n: usize, frequencies: Vec<f64>) -> CanonicalForm {
        CanonicalForm::from_parts(
            RealMatrix::identity(n),
            frequencies,
            false,
            &Tolerances::default(),
        )
        .unwrap()
    }

    fn vector(xs: &[f64]) -> RealVector {
        RealVector::new(xs.to_vec()).unwrap()
    }

    #[test]
    fn complexify_examples() {
        let parts = complexify(&identity_form(2, vec![1.0]), &vector(&[1.0, 0.0])).unwrap();
        assert_eq!(parts.system.amplitudes(), &[Complex64::new(1.0, 0.0)]);
        assert!(parts.static_part.is_empty());

        let parts = complexify(&identity_form(3, vec![1.0]), &vector(&[0.0, 0.0, 1.0])).unwrap();
        assert_eq!(parts.system.amplitudes(), &[Complex64::new(0.0, 0.0)]);
        assert_eq!(parts.static_part, vec![1.0]);

        assert!(complexify(&identity_form(3, vec![1.0]), &vector(&[1.0, 0.0])).is_err());
    }

    #[test]
    fn evolve_complex_examples() {
        let u = UnitarySystem::new(vec![1.0], vec![Complex64::new(1.0, 0.0)]).unwrap();
        let z = evolve_complex(&u, FRAC_PI_2).amplitudes()[0];
        assert!((z - Complex64::new(0.0, -1.0)).norm() < 1e-16);

        let u = UnitarySystem::new(vec![0.0], vec![Complex64::new(0.3, 0.4)]).unwrap();
        assert_eq!(evolve_complex(&u, 17.0), u);
    }

    #[test]
    fn realify_examples() {
        let u = UnitarySystem::new(vec![1.0], vec![Complex64::new(1.0, 0.0)]).unwrap();
        let (a, psi) = realify(&u).unwrap();
        assert_eq!(
            a.matrix(),
            &RealMatrix::from_rows(&[[0.0, 1.0], [-1.0, 0.0]])
        );
        assert_eq!(psi.as_slice(), &[1.0, 0.0]);

        let u = UnitarySystem::new(
            vec![2.0, 1.0],
            vec![Complex64::new(0.0, 1.0), Complex64::new(1.0, 0.0)],
        )
        .unwrap();
        let (a, psi) = realify(&u).unwrap();
        assert_eq!(psi.as_slice(), &[0.0, 1.0, 1.0, 0.0]);
        assert_eq!(a.matrix()[(0, 1)], 2.0);
        assert_eq!(a.matrix()[(3, 2)], -1.0);

        assert!(realify(&UnitarySystem::new(vec![], vec![]).unwrap()).is_err());
    }

    #[test]
    fn equivalence_small_cases() {
        let tol = Tolerances::default();
        let psi = vector(&[0.6, 0.8, 0.0]);
        assert_eq!(
            equivalence_check(&SkewGenerator::zeros(3), &psi, &[0.0, 1.0, 50.0], &tol).unwrap(),
            0.0
        );

        let a =
            SkewGenerator::new(RealMatrix::from_rows(&[[0.0, 1.0], [-1.0, 0.0]]), &tol).unwrap();
        let psi = vector(&[1.0, 0.0]);
        let dev = equivalence_check(&a, &psi, &[FRAC_PI_2, PI, 2.0 * PI], &tol).unwrap();
        assert!(dev <= 1e-12, "{dev}");
        let cf = decompose(&a, &tol).unwrap();
        for (tau, want) in [
            (FRAC_PI_2, [0.0, -1.0]),
            (PI, [-1.0, 0.0]),
            (2.0 * PI, [1.0, 0.0]),
        ] {
            let got = complex_path(&cf, &psi, tau).unwrap();
            assert!(got.distance(&vector(&want)).unwrap() < 1e-12);
        }
    }

    #[test]
    fn complex_structure_of_plane() {
        let a = SkewGenerator::new(
            RealMatrix::from_rows(&[[0.0, 2.5], [-2.5, 0.0]]),
            &Tolerances::default(),
        )
        .unwrap();
        let cf = decompose(&a, &Tolerances::default()).unwrap();
        let j = complex_structure(&cf).unwrap();
        let want = RealMatrix::from_rows(&[[0.0, 1.0], [-1.0, 0.0]]);
        assert!(j.matrix.sub(&want).unwrap().max_abs() < 1e-15);
        assert!(j.restricted().sub(&want).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn complex_structure_needs_oscillators() {
        let cf = decompose(&SkewGenerator::zeros(3), &Tolerances::default()).unwrap();
        assert!(matches!(
            complex_structure(&cf),
            Err(Error::NoOscillatingSector { dim: 3 })
        ));
    }

    #[test]
    fn unitary_system_json() {
        let u = UnitarySystem::new(vec![2.0], vec![Complex64::new(0.5, -0.25)]).unwrap();
        let s = serde_json::to_string(&u).unwrap();
        assert_eq!(
            s,
            r#"{"frequencies":[2.0],"amplitudes":[{"re":0.5,"im":-0.25}]}"#
        );
        assert_eq!(serde_json::from_str::<UnitarySystem>(&s).unwrap(), u);
        assert!(
            serde_json::from_str::<UnitarySystem>(r#"{"frequencies":[1.0],"amplitudes":[]}"#)
                .is_err()
        );
    }
}
