use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    /// Σ 1/p against log log x + B1
    Sum,
    /// ∏ (1 − 1/p)⁻¹ against e^γ log x
    Euler,
    /// ∏ (1 + 1/p) against 6e^γ/π² log x
    Psi,
}

#[derive(Debug, Parser)]
#[command(name = "psix", version)]
#[command(about = "Dedekind psi extremes, squarefree counts and Mertens sums at desk scale")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write records here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Worker threads for range scans; output does not depend on it.
    #[arg(long, global = true, env = "PSIX_THREADS", default_value_t = 1,
          value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
    pub threads: usize,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Prime count and θ(limit) for a sieve table.
    SieveInfo {
        #[arg(long)]
        limit: u64,
    },
    /// ψ(N_k)/N_k against 6e^γ/π² log log N_k for every primorial with p_k ≤ plimit.
    VerifyPsi {
        #[arg(long)]
        plimit: u64,
    },
    /// Squarefree count Q(x) against 6x/π².
    Squarefree {
        #[arg(long)]
        x: u64,
        /// Emit a grid step, 2·step, … up to x.
        #[arg(long)]
        step: Option<u64>,
    },
    /// Squarefree harmonic sum against 6/π² log x.
    Harmonic {
        #[arg(long)]
        x: u64,
        #[arg(long)]
        step: Option<u64>,
    },
    /// Prime harmonic sum or Mertens products.
    Mertens {
        #[arg(long)]
        x: u64,
        #[arg(long)]
        step: Option<u64>,
        #[arg(long, value_enum, default_value_t = Quantity::Sum)]
        quantity: Quantity,
    },
    /// Σ 1/p over primes p ≡ a (mod q).
    Progression {
        #[arg(long)]
        x: u64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        a: u64,
        #[arg(long)]
        step: Option<u64>,
    },
    /// √x (∏ (1 − 1/p)⁻¹ − e^γ log x).
    Oscillation {
        #[arg(long)]
        x: u64,
        #[arg(long)]
        step: Option<u64>,
    },
    /// Mertens constant B1 from γ and a truncated prime sum.
    B1 {
        #[arg(long)]
        plimit: u64,
    },
    /// Explicit error bound for Σ 1/p at each x.
    Dusart {
        #[arg(long, num_args = 1.., value_delimiter = ',', required = true)]
        x: Vec<u64>,
    },
    /// Jumps of ψ(N_k)/N_k between consecutive primorials.
    Jumps {
        #[arg(long)]
        kmax: u64,
    },
    /// Brute-force max and min of ψ(n)/n over [2, x].
    Extremes {
        #[arg(long)]
        x: u64,
    },
    /// Count n in [2, x] above/below the threshold.
    Classify {
        #[arg(long)]
        x: u64,
        #[arg(long)]
        step: Option<u64>,
        /// Emit one record per n instead of counts.
        #[arg(long)]
        records: bool,
    },
    /// Fraction of n in [2, x] with ψ(n)/n > t.
    DistTail {
        #[arg(long)]
        x: u64,
        #[arg(long, num_args = 1.., value_delimiter = ',', required = true)]
        t: Vec<f64>,
    },
    /// log log p_k − log log log N_k for k = 2..=kmax.
    LoglogGap {
        #[arg(long)]
        kmax: u64,
    },
    /// Prime gaps against p_k^0.526.
    GapCheck {
        #[arg(long)]
        plimit: u64,
    },
    /// Exact Σ 1/d over divisors d > x of the primorial P_x.
    TailSum {
        #[arg(long)]
        x: u64,
    },
    /// Constant registry with independent recomputation residuals.
    Constants,
}
