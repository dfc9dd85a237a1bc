//! Factorizations and the multiplicative functions μ, ω, Ω, φ, σ, ψ.
//!
//! φ, σ and ψ are exact `u128` values; reals appear only in the ratio
//! helpers.

use crate::{Error, Result, SieveTables};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub n: u64,
    /// (prime, exponent), primes strictly increasing.
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    pub fn big_omega(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn mobius(&self) -> i8 {
        match (self.is_squarefree(), self.factors.len() % 2) {
            (false, _) => 0,
            (true, 0) => 1,
            (true, _) => -1,
        }
    }

    pub fn phi(&self) -> u128 {
        self.factors
            .iter()
            .map(|&(p, e)| {
                let p = u128::from(p);
                (p - 1) * p.pow(e - 1)
            })
            .product()
    }

    pub fn sigma(&self) -> u128 {
        self.factors
            .iter()
            .map(|&(p, e)| {
                let p = u128::from(p);
                (p.pow(e + 1) - 1) / (p - 1)
            })
            .product()
    }

    /// ψ(n) = n ∏_{p|n} (1 + 1/p) = ∏ p^{e−1}(p + 1).
    pub fn psi(&self) -> u128 {
        self.factors
            .iter()
            .map(|&(p, e)| {
                let p = u128::from(p);
                (p + 1) * p.pow(e - 1)
            })
            .product()
    }

    /// Product of the distinct primes.
    pub fn radical(&self) -> u128 {
        self.factors.iter().map(|&(p, _)| u128::from(p)).product()
    }
}

pub fn factor(n: u64, tables: &SieveTables) -> Result<Factorization> {
    if n == 0 || n > tables.limit() {
        return Err(Error::domain(format!(
            "cannot factor {n} with tables up to {}",
            tables.limit()
        )));
    }
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut m = n;
    while m > 1 {
        let p = tables.spf_unchecked(m);
        let mut e = 0;
        while m.is_multiple_of(p) {
            m /= p;
            e += 1;
        }
        factors.push((p, e));
    }
    Ok(Factorization { n, factors })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArithProfile {
    pub n: u64,
    pub mu: i8,
    pub omega: u32,
    pub big_omega: u32,
    pub phi: u128,
    pub sigma: u128,
    pub psi: u128,
}

impl ArithProfile {
    /// ψ(n)/n as a real.
    pub fn psi_ratio(&self) -> f64 {
        self.psi as f64 / self.n as f64
    }
}

pub fn profile(n: u64, tables: &SieveTables) -> Result<ArithProfile> {
    let f = factor(n, tables)?;
    Ok(ArithProfile {
        n,
        mu: f.mobius(),
        omega: f.omega(),
        big_omega: f.big_omega(),
        phi: f.phi(),
        sigma: f.sigma(),
        psi: f.psi(),
    })
}

/// ψ(n)/n without building a full profile.
pub fn psi_ratio(n: u64, tables: &SieveTables) -> Result<f64> {
    let f = factor(n, tables)?;
    Ok(f.psi() as f64 / n as f64)
}

/// |ψ(n)φ(n)/n² − ∏_{p|n}(1 − 1/p²)|.
pub fn psi_phi_identity_residual(n: u64, tables: &SieveTables) -> Result<f64> {
    let f = factor(n, tables)?;
    let nn = u128::from(n) * u128::from(n);
    let lhs = (f.psi() * f.phi()) as f64 / nn as f64;
    let rhs: f64 = f
        .factors
        .iter()
        .map(|&(p, _)| 1.0 - 1.0 / (p as f64 * p as f64))
        .product();
    Ok((lhs - rhs).abs())
}

/// The unique `(a, b)` with `n = a·b²` and `a` squarefree.
pub fn sqf_decompose(n: u64, tables: &SieveTables) -> Result<(u64, u64)> {
    let f = factor(n, tables)?;
    let (mut a, mut b) = (1u64, 1u64);
    for &(p, e) in &f.factors {
        if e % 2 == 1 {
            a *= p;
        }
        b *= p.pow(e / 2);
    }
    Ok((a, b))
}
