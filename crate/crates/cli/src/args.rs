use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use realqm_core::Tolerances;

#[derive(Debug, Parser)]
#[command(
    name = "rqm",
    version,
    about = "Real-Hilbert-space quantum dynamics toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub tolerances: ToleranceArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a seeded random skew-symmetric generator.
    Gen {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Block-diagonalize a generator and write its canonical form.
    Decompose {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sample the trajectory of a state on a uniform time grid.
    Evolve {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        psi: PathBuf,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        t0: f64,
        #[arg(long, allow_negative_numbers = true)]
        t1: f64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        steps: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Compare real and complex propagation on random times.
    Equiv {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        psi: PathBuf,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Perturb the real path by this amount (negative control).
        #[arg(long, hide = true, default_value_t = 0.0)]
        corrupt: f64,
    },
    /// Run one of the worked models and print its report as JSON.
    Demo {
        #[arg(value_enum)]
        which: DemoKind,
        /// Real overlap ⟨up|down⟩ for the measurement model.
        #[arg(long, default_value_t = 0.0)]
        s_overlap: f64,
        /// Real overlap ⟨A_up|A_down⟩ for the measurement model.
        #[arg(long, default_value_t = 0.3)]
        a_overlap: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        omega: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        tau: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Time the real orthogonal path against the complex phase path.
    Bench {
        /// Even dimensions to benchmark, comma separated.
        #[arg(long = "n", value_delimiter = ',', value_parser = parse_even_dim, default_values_t = [2usize, 64, 256])]
        n: Vec<usize>,
        /// Evolution times, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_values_t = [0.1, 1.0, 10.0])]
        taus: Vec<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
        repeats: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long, hide = true, default_value_t = 0.0)]
        corrupt: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DemoKind {
    Spin1,
    Measure,
    Nonhermitian,
    N3,
}

fn parse_even_dim(s: &str) -> Result<usize, String> {
    let n: usize = s.trim().parse().map_err(|e| format!("{e}"))?;
    if n < 2 || !n.is_multiple_of(2) {
        return Err(format!("dimension must be even and >= 2, got {n}"));
    }
    Ok(n)
}

#[derive(Debug, Args)]
pub struct ToleranceArgs {
    #[arg(long, global = true)]
    pub tol_skew: Option<f64>,
    #[arg(long, global = true)]
    pub tol_orth: Option<f64>,
    #[arg(long, global = true)]
    pub tol_norm: Option<f64>,
    /// Relative to the Frobenius norm of the generator.
    #[arg(long, global = true)]
    pub tol_zero_freq: Option<f64>,
    #[arg(long, global = true)]
    pub tol_recon: Option<f64>,
}

impl ToleranceArgs {
    pub fn resolve(&self) -> Tolerances {
        let d = Tolerances::default();
        Tolerances {
            skew_tol: self.tol_skew.unwrap_or(d.skew_tol),
            orth_tol: self.tol_orth.unwrap_or(d.orth_tol),
            norm_tol: self.tol_norm.unwrap_or(d.norm_tol),
            zero_freq_tol: self.tol_zero_freq.unwrap_or(d.zero_freq_tol),
            recon_tol: self.tol_recon.unwrap_or(d.recon_tol),
        }
    }
}
