//! Time evolution `ψ(τ) = e^{Aτ} ψ(0)` through the canonical form.
//!
//! Everything here evaluates `S e^{A'τ} S^T` in closed form; no step is
//! chained onto a previous one, so errors do not accumulate along a grid.

use std::fmt;

use serde::Serialize;

use crate::canonical::{decompose, CanonicalForm, SkewGenerator};
use crate::error::{Error, Result};
use crate::matrix::{RealMatrix, RealVector, Tolerances};

/// `R(τ) = e^{Aτ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalPropagator {
    pub matrix: RealMatrix,
    pub tau: f64,
}

impl OrthogonalPropagator {
    pub fn apply(&self, psi: &RealVector) -> Result<RealVector> {
        self.matrix.apply(psi)
    }
}

/// Closed-form propagator `S e^{A'τ} S^T`.
pub fn propagator(cf: &CanonicalForm, tau: f64) -> OrthogonalPropagator {
    let s = cf.rotation();
    let n = cf.dim();
    let mut se = s.clone();
    for (j, w) in cf.block_frequencies().into_iter().enumerate() {
        let (sin, cos) = (w * tau).sin_cos();
        for i in 0..n {
            let x = s[(i, 2 * j)];
            let y = s[(i, 2 * j + 1)];
            se[(i, 2 * j)] = cos * x - sin * y;
            se[(i, 2 * j + 1)] = sin * x + cos * y;
        }
    }
    let matrix = se
        .matmul(&s.transpose())
        .expect("square factors of equal size");
    OrthogonalPropagator { matrix, tau }
}

/// Rotates each oscillator pair of a block-basis vector by `τ` in place.
///
/// `coords` holds `ψ' = S^T ψ`; entries past the oscillating sector are
/// left untouched.
pub fn rotate_blocks(block_frequencies: &[f64], coords: &mut [f64], tau: f64) {
    for (j, w) in block_frequencies.iter().enumerate() {
        let p = pair_evolve(
            PairState {
                omega: *w,
                a: coords[2 * j],
                b: coords[2 * j + 1],
            },
            tau,
        );
        coords[2 * j] = p.a;
        coords[2 * j + 1] = p.b;
    }
}

/// Evolves `ψ0` by `τ` using an existing decomposition; `O(n²)`.
pub fn propagate_with(
    cf: &CanonicalForm,
    psi0: &RealVector,
    tau: f64,
    tol: &Tolerances,
) -> Result<RealVector> {
    check_state(cf.dim(), psi0, tol)?;
    let s = cf.rotation();
    let mut coords = s.tr_matvec(psi0.as_slice())?;
    rotate_blocks(&cf.block_frequencies(), &mut coords, tau);
    RealVector::new(s.matvec(&coords)?)
}

/// `ψ(τ) = e^{Aτ} ψ0`.
///
/// A state that is not normalized is still propagated (only the ray is
/// physical) but a warning is logged.
pub fn propagate(
    a: &SkewGenerator,
    psi0: &RealVector,
    tau: f64,
    tol: &Tolerances,
) -> Result<RealVector> {
    check_state(a.dim(), psi0, tol)?;
    let cf = decompose(a, tol)?;
    propagate_with(&cf, psi0, tau, tol)
}

fn check_state(dim: usize, psi: &RealVector, tol: &Tolerances) -> Result<()> {
    if psi.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: psi.dim(),
        });
    }
    if !psi.is_normalized(tol) {
        log::warn!("propagating a non-normalized state (norm {})", psi.norm());
    }
    Ok(())
}

/// Coordinates of one oscillator pair in the block basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairState {
    pub omega: f64,
    pub a: f64,
    pub b: f64,
}

/// Solution of `d/dτ (a, b) = [[0, ω], [-ω, 0]] (a, b)`.
pub fn pair_evolve(p: PairState, tau: f64) -> PairState {
    let (sin, cos) = (p.omega * tau).sin_cos();
    PairState {
        omega: p.omega,
        a: p.a * cos + p.b * sin,
        b: -p.a * sin + p.b * cos,
    }
}

/// Mode structure of a canonical form: oscillator pairs and static states.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeReport {
    pub dim: usize,
    pub oscillator_frequencies: Vec<f64>,
    pub static_states: usize,
}

pub fn classify(cf: &CanonicalForm) -> ModeReport {
    ModeReport {
        dim: cf.dim(),
        oscillator_frequencies: cf.frequencies().to_vec(),
        static_states: cf.zero_modes(),
    }
}

impl fmt::Display for ModeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.oscillator_frequencies.len();
        let list = self
            .oscillator_frequencies
            .iter()
            .map(|w| format!("ω={w}"))
            .collect::<Vec<_>>()
            .join(", ");
        let pairs = if r == 1 { "pair" } else { "pairs" };
        let statics = if self.static_states == 1 {
            "state"
        } else {
            "states"
        };
        if r == 0 {
            write!(
                f,
                "0 oscillator pairs, {} static {statics}",
                self.static_states
            )
        } else {
            write!(
                f,
                "{r} oscillator {pairs} ({list}), {} static {statics}",
                self.static_states
            )
        }
    }
}

/// States sampled on a uniform time grid.
#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<RealVector>,
    pub generator: String,
}

impl Trajectory {
    /// CSV with header `tau,psi_1,…,psi_n`, 17 significant digits per value.
    pub fn to_csv(&self) -> String {
        let n = self.states.first().map_or(0, RealVector::dim);
        let mut out = String::from("tau");
        for k in 1..=n {
            out.push_str(&format!(",psi_{k}"));
        }
        out.push('\n');
        for (t, psi) in self.times.iter().zip(&self.states) {
            out.push_str(&format_sig17(*t));
            for x in psi.as_slice() {
                out.push(',');
                out.push_str(&format_sig17(*x));
            }
            out.push('\n');
        }
        out
    }
}

/// Scientific notation with 17 significant digits.
pub fn format_sig17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Uniform grid of `steps` points from `t_start` to `t_end` inclusive.
pub fn time_grid(t_start: f64, t_end: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 || !(t_start < t_end) || !t_start.is_finite() || !t_end.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "invalid grid: need steps >= 2 and t_start < t_end, got {steps} on [{t_start}, {t_end}]"
        )));
    }
    let h = (t_end - t_start) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|k| {
            if k + 1 == steps {
                t_end
            } else {
                t_start + h * k as f64
            }
        })
        .collect())
}

/// Samples `ψ(τ)` on a uniform grid, each sample from the closed form.
pub fn trajectory_with(
    cf: &CanonicalForm,
    psi0: &RealVector,
    t_start: f64,
    t_end: f64,
    steps: usize,
    tol: &Tolerances,
) -> Result<Trajectory> {
    let times = time_grid(t_start, t_end, steps)?;
    let states = times
        .iter()
        .map(|&t| propagate_with(cf, psi0, t, tol))
        .collect::<Result<Vec<_>>>()?;
    let generator = format!(
        "skew generator n={} with {} oscillator pairs and {} static states",
        cf.dim(),
        cf.pairs(),
        cf.zero_modes()
    );
    Ok(Trajectory {
        times,
        states,
        generator,
    })
}

pub fn trajectory(
    a: &SkewGenerator,
    psi0: &RealVector,
    t_start: f64,
    t_end: f64,
    steps: usize,
    tol: &Tolerances,
) -> Result<Trajectory> {
    time_grid(t_start, t_end, steps)?;
    check_state(a.dim(), psi0, tol)?;
    let cf = decompose(a, tol)?;
    trajectory_with(&cf, psi0, t_start, t_end, steps, tol)
}
