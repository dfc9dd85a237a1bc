//! Prime harmonic sums, Mertens products, B₁ and the explicit error bound.
//!
//! Products over primes are evaluated as exp of a compensated sum of
//! logarithms; a running float product would drift over millions of factors.

use crate::constants;
use crate::numeric::NeumaierSum;
use crate::squarefree::ResidualSample;
use crate::{Error, Result, SieveTables};

/// Smallest x at which [`dusart_bound_check`] treats the explicit bound as
/// applicable.
pub const DUSART_VALIDITY: u64 = 2_278_383;

fn primes_upto(x: f64, tables: &SieveTables) -> Result<&[u64]> {
    if !(x >= 2.0) {
        return Err(Error::domain(format!("x = {x} must be >= 2")));
    }
    let n = tables.cutoff(x)?;
    Ok(&tables.primes()[..tables.prime_pi(n)])
}

fn log_sum(primes: &[u64], term: impl Fn(f64) -> f64) -> f64 {
    primes
        .iter()
        .map(|&p| term(p as f64))
        .collect::<NeumaierSum>()
        .value()
}

/// Σ_{p ≤ x} 1/p.
pub fn prime_reciprocal_sum(x: f64, tables: &SieveTables) -> Result<f64> {
    Ok(log_sum(primes_upto(x, tables)?, |p| 1.0 / p))
}

/// Σ_{p ≤ x} 1/p against log log x + B₁.
pub fn prime_harmonic(x: f64, tables: &SieveTables) -> Result<ResidualSample> {
    let value = prime_reciprocal_sum(x, tables)?;
    Ok(ResidualSample::new(
        x,
        value,
        x.ln().ln() + constants::b1(),
        0.0,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProgressionSum {
    pub q: u64,
    pub a: u64,
    pub x: f64,
    pub sum: f64,
    /// sum − log log x / φ(q), the running estimate of B_{a,q}.
    pub b_estimate: f64,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn totient(mut q: u64) -> u64 {
    let mut result = q;
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            while q.is_multiple_of(p) {
                q /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if q > 1 {
        result -= result / q;
    }
    result
}

/// Σ_{p ≤ x, p ≡ a (mod q)} 1/p.
pub fn prime_harmonic_progression(
    x: f64,
    q: u64,
    a: u64,
    tables: &SieveTables,
) -> Result<ProgressionSum> {
    if q < 2 || a == 0 || a >= q {
        return Err(Error::domain(format!("need 1 <= a < q, got a={a}, q={q}")));
    }
    if gcd(a, q) != 1 {
        return Err(Error::domain(format!("gcd({a}, {q}) != 1")));
    }
    let sum: NeumaierSum = primes_upto(x, tables)?
        .iter()
        .filter(|&&p| p % q == a)
        .map(|&p| 1.0 / p as f64)
        .collect();
    let sum = sum.value();
    Ok(ProgressionSum {
        q,
        a,
        x,
        sum,
        b_estimate: sum - x.ln().ln() / totient(q) as f64,
    })
}

/// ∏_{p ≤ x}(1 − 1/p)⁻¹ against e^γ log x.
pub fn euler_product_inv(x: f64, tables: &SieveTables) -> Result<ResidualSample> {
    let s = log_sum(primes_upto(x, tables)?, |p| -(-1.0 / p).ln_1p());
    Ok(ResidualSample::new(
        x,
        s.exp(),
        constants::e_gamma() * x.ln(),
        0.0,
    ))
}

/// ∏_{p ≤ x}(1 + 1/p) against (6e^γ/π²) log x.
pub fn psi_product(x: f64, tables: &SieveTables) -> Result<ResidualSample> {
    let s = log_sum(primes_upto(x, tables)?, |p| (1.0 / p).ln_1p());
    Ok(ResidualSample::new(
        x,
        s.exp(),
        constants::threshold() * x.ln(),
        0.0,
    ))
}

/// ∏_{p ≤ x}(1 − 1/p²).
pub fn zeta2_partial_product(x: f64, tables: &SieveTables) -> Result<f64> {
    Ok(log_sum(primes_upto(x, tables)?, |p| (-1.0 / (p * p)).ln_1p()).exp())
}

/// Relative gap between ∏(1+1/p)·∏(1−1/p) and ∏(1−1/p²) over p ≤ x, each
/// side evaluated separately.
pub fn product_factorization_residual(x: f64, tables: &SieveTables) -> Result<f64> {
    let primes = primes_upto(x, tables)?;
    let plus = log_sum(primes, |p| (1.0 / p).ln_1p()).exp();
    let minus = log_sum(primes, |p| (-1.0 / p).ln_1p()).exp();
    let both = zeta2_partial_product(x, tables)?;
    Ok((plus * minus - both).abs() / both)
}

/// √x·(∏_{p ≤ x}(1 − 1/p)⁻¹ − e^γ log x).
pub fn oscillation_g(x: f64, tables: &SieveTables) -> Result<f64> {
    let r = euler_product_inv(x, tables)?;
    Ok(x.sqrt() * r.residual)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub x: f64,
    /// Σ_{p ≤ x} 1/p
    pub reciprocal_sum: f64,
    /// ∏_{p ≤ x}(1 − 1/p)⁻¹
    pub euler_product_inv: f64,
    /// ∏_{p ≤ x}(1 + 1/p)
    pub psi_product: f64,
}

impl SweepPoint {
    pub fn prime_harmonic(&self) -> ResidualSample {
        ResidualSample::new(self.x, self.reciprocal_sum, self.x.ln().ln() + constants::b1(), 0.0)
    }

    pub fn euler(&self) -> ResidualSample {
        ResidualSample::new(self.x, self.euler_product_inv, constants::e_gamma() * self.x.ln(), 0.0)
    }

    pub fn psi(&self) -> ResidualSample {
        ResidualSample::new(self.x, self.psi_product, constants::threshold() * self.x.ln(), 0.0)
    }

    pub fn oscillation_g(&self) -> f64 {
        self.x.sqrt() * self.euler().residual
    }
}

/// Evaluate the prime sum and both products at every point of an ascending
/// grid in one pass over the primes.
pub fn sweep(grid: &[f64], tables: &SieveTables) -> Result<Vec<SweepPoint>> {
    if grid.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::domain("sweep grid must be ascending"));
    }
    let Some(&last) = grid.last() else {
        return Ok(Vec::new());
    };
    let primes = primes_upto(last, tables)?;
    primes_upto(grid[0], tables)?;
    let (mut recip, mut euler, mut psi) = (NeumaierSum::new(), NeumaierSum::new(), NeumaierSum::new());
    let mut i = 0;
    let mut out = Vec::with_capacity(grid.len());
    for &x in grid {
        let cutoff = x.floor() as u64;
        while i < primes.len() && primes[i] <= cutoff {
            let p = primes[i] as f64;
            recip.add(1.0 / p);
            euler.add(-(-1.0 / p).ln_1p());
            psi.add((1.0 / p).ln_1p());
            i += 1;
        }
        out.push(SweepPoint {
            x,
            reciprocal_sum: recip.value(),
            euler_product_inv: euler.value().exp(),
            psi_product: psi.value().exp(),
        });
    }
    Ok(out)
}

/// B₁ = γ − Σ_p (−log(1 − 1/p) − 1/p), truncated at `prime_limit`.
///
/// Returns the truncated value and a bound on the omitted tail:
/// each term is below 1/(p(p−1)) and Σ_{n > m} 1/(n(n−1)) = 1/m.
pub fn compute_b1(prime_limit: u64, tables: &SieveTables) -> Result<(f64, f64)> {
    if prime_limit > tables.limit() {
        return Err(Error::InsufficientSieve {
            needed: prime_limit,
            limit: tables.limit(),
        });
    }
    let primes = &tables.primes()[..tables.prime_pi(prime_limit)];
    let s = log_sum(primes, |p| -(-1.0 / p).ln_1p() - 1.0 / p);
    let tail_bound = 1.0 / prime_limit.max(1) as f64;
    Ok((constants::gamma() - s, tail_bound))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DusartStatus {
    Holds,
    Fails,
    /// x is below [`DUSART_VALIDITY`]; the numbers are informational.
    BelowValidity,
}

impl DusartStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            DusartStatus::Holds => "holds",
            DusartStatus::Fails => "fails",
            DusartStatus::BelowValidity => "below-validity",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DusartCheck {
    pub x: f64,
    pub status: DusartStatus,
    /// R(x) = Σ_{p≤x} 1/p − log log x − B₁
    pub residual: f64,
    /// 1/(10 log²x) + 4/(15 log³x)
    pub bound: f64,
    pub slack: f64,
    /// (3 log x + 4)/(8π√x); conditional on RH, reported only.
    pub rh_bound: f64,
}

impl DusartCheck {
    pub fn holds(&self) -> bool {
        self.status == DusartStatus::Holds
    }
}

pub fn dusart_bound_check(x: f64, tables: &SieveTables) -> Result<DusartCheck> {
    let sample = prime_harmonic(x, tables)?;
    let l = x.ln();
    let bound = 1.0 / (10.0 * l * l) + 4.0 / (15.0 * l * l * l);
    let slack = bound - sample.residual.abs();
    let status = if x < DUSART_VALIDITY as f64 {
        DusartStatus::BelowValidity
    } else if slack >= 0.0 {
        DusartStatus::Holds
    } else {
        DusartStatus::Fails
    };
    let pi = constants::get_constant("pi")?.value;
    Ok(DusartCheck {
        x,
        status,
        residual: sample.residual,
        bound,
        slack,
        rh_bound: (3.0 * l + 4.0) / (8.0 * pi * x.sqrt()),
    })
}
