//! Registry of mathematical constants kept as decimal strings.
//!
//! Strings are parsed once on first access. [`crosscheck_constants`]
//! recomputes the number-theoretic ones from the sieve.

use std::sync::OnceLock;

use crate::numeric::NeumaierSum;
use crate::{Error, Result, SieveTables};

#[derive(Debug, Clone, PartialEq)]
pub struct PrecisionConstant {
    pub name: &'static str,
    pub decimal: &'static str,
    pub value: f64,
}

const DECIMALS: &[(&str, &str)] = &[
    // Euler-Mascheroni constant.
    ("gamma", "0.5772156649015328606065120900824024310422"),
    // Meissel-Mertens constant.
    ("B1", "0.2614972128476427837554268386086958590516"),
    ("six_over_pi_sq", "0.6079271018540266286632767792583658334262"),
    ("e_gamma", "1.7810724179901979852365041031071795491696"),
    // 6 e^gamma / pi^2
    ("threshold", "1.0827621932609245801221880381909265701840"),
    ("zeta2", "1.6449340668482264364724151666460251892189"),
    ("kappa", "1.7810724179901979852365041031071795491696"),
    ("pi", "3.1415926535897932384626433832795028841972"),
    // Prime-gap exponent bound: p_{k+1} - p_k < p_k^alpha for large k.
    ("gap_alpha", "0.526000000000000000000000000000"),
];

fn registry() -> &'static [PrecisionConstant] {
    static REGISTRY: OnceLock<Vec<PrecisionConstant>> = OnceLock::new();
    REGISTRY.get_or_init(|| {
        DECIMALS
            .iter()
            .map(|&(name, decimal)| PrecisionConstant {
                name,
                decimal,
                value: decimal
                    .parse()
                    .unwrap_or_else(|e| panic!("constant {name} does not parse: {e}")),
            })
            .collect()
    })
}

pub fn all() -> &'static [PrecisionConstant] {
    registry()
}

pub fn get_constant(name: &str) -> Result<&'static PrecisionConstant> {
    registry()
        .iter()
        .find(|c| c.name == name)
        .ok_or_else(|| Error::UnknownConstant(name.to_owned()))
}

fn value_of(name: &str) -> f64 {
    get_constant(name).expect("registered constant").value
}

pub fn gamma() -> f64 {
    value_of("gamma")
}

pub fn b1() -> f64 {
    value_of("B1")
}

pub fn six_over_pi_sq() -> f64 {
    value_of("six_over_pi_sq")
}

pub fn e_gamma() -> f64 {
    value_of("e_gamma")
}

/// 6e^γ/π², the coefficient of log log N in the primorial threshold.
pub fn threshold() -> f64 {
    value_of("threshold")
}

pub fn zeta2() -> f64 {
    value_of("zeta2")
}

pub fn gap_alpha() -> f64 {
    value_of("gap_alpha")
}

/// Count of significant digits in a plain decimal string.
pub fn significant_digits(decimal: &str) -> usize {
    let digits: String = decimal.chars().filter(char::is_ascii_digit).collect();
    digits.trim_start_matches('0').len()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Crosscheck {
    pub name: &'static str,
    pub recomputed: f64,
    pub residual: f64,
}

/// Point at which γ is recomputed from H_n − log n − 1/(2n).
pub const GAMMA_CHECK_N: u64 = 100_000_000;

/// γ ≈ H_n − log n − 1/(2n); the remaining error is about 1/(12n²).
pub fn gamma_from_harmonic(n: u64) -> f64 {
    // Descending order adds the small terms first.
    let h: NeumaierSum = (1..=n).rev().map(|k| 1.0 / k as f64).collect();
    h.value() - (n as f64).ln() - 1.0 / (2.0 * n as f64)
}

/// Recompute B₁, 6/π² and γ independently of the registry and report the
/// residual against each registered value.
pub fn crosscheck_constants(tables: &SieveTables) -> Result<Vec<Crosscheck>> {
    const MIN_LIMIT: u64 = 1_000_000;
    if tables.limit() < MIN_LIMIT {
        return Err(Error::InsufficientSieve {
            needed: MIN_LIMIT,
            limit: tables.limit(),
        });
    }
    let mut out = Vec::new();

    let (b1_value, _) = crate::mertens::compute_b1(tables.limit(), tables)?;
    out.push(Crosscheck {
        name: "B1",
        recomputed: b1_value,
        residual: (b1_value - b1()).abs(),
    });

    // ∏_{p≤L}(1 − 1/p²) overshoots 6/π² by a factor exp(Σ_{p>L} 1/p²);
    // that tail is about 1/(L log L).
    let limit = tables.limit() as f64;
    let log_sum: NeumaierSum = tables
        .primes()
        .iter()
        .map(|&p| (-1.0 / (p as f64 * p as f64)).ln_1p())
        .collect();
    let tail = 1.0 / (limit * limit.ln());
    let euler = (log_sum.value() - tail).exp();
    out.push(Crosscheck {
        name: "six_over_pi_sq",
        recomputed: euler,
        residual: (euler - six_over_pi_sq()).abs(),
    });

    let product = e_gamma() * six_over_pi_sq();
    out.push(Crosscheck {
        name: "threshold",
        recomputed: product,
        residual: (product - threshold()).abs(),
    });

    let g = gamma_from_harmonic(GAMMA_CHECK_N);
    out.push(Crosscheck {
        name: "gamma",
        recomputed: g,
        residual: (g - gamma()).abs(),
    });

    Ok(out)
}
