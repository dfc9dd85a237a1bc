//! Squarefree counting Q(x), the squarefree harmonic sum, and exact
//! primorial divisor tails.

use std::cmp::Ordering;
use std::fmt;

use rayon::prelude::*;

use crate::constants;
use crate::numeric::NeumaierSum;
use crate::{Error, Result, SieveTables};

/// A computed quantity next to its asymptotic main term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualSample {
    pub x: f64,
    pub value: f64,
    pub main_term: f64,
    pub residual: f64,
    pub scale_exponent: f64,
    /// `residual / x^scale_exponent`
    pub scaled_residual: f64,
}

impl ResidualSample {
    pub fn new(x: f64, value: f64, main_term: f64, scale_exponent: f64) -> Self {
        let residual = value - main_term;
        ResidualSample {
            x,
            value,
            main_term,
            residual,
            scale_exponent,
            scaled_residual: residual / x.powf(scale_exponent),
        }
    }

    pub fn with_scale(&self, scale_exponent: f64) -> Self {
        Self::new(self.x, self.value, self.main_term, scale_exponent)
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Reduced fraction over `i128`, denominator positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExactRational {
    num: i128,
    den: i128,
}

fn overflow(op: &str) -> Error {
    Error::Overflow(format!("rational {op} exceeds 128 bits"))
}

impl ExactRational {
    pub const ZERO: ExactRational = ExactRational { num: 0, den: 1 };
    pub const ONE: ExactRational = ExactRational { num: 1, den: 1 };

    pub fn new(num: i128, den: i128) -> Result<Self> {
        if den == 0 {
            return Err(Error::domain("zero denominator"));
        }
        if num == i128::MIN || den == i128::MIN {
            return Err(overflow("normalization"));
        }
        let g = gcd_u128(num.unsigned_abs(), den.unsigned_abs()).max(1) as i128;
        let sign = den.signum();
        Ok(ExactRational {
            num: sign * num / g,
            den: sign * den / g,
        })
    }

    pub fn from_int(n: i128) -> Self {
        ExactRational { num: n, den: 1 }
    }

    pub fn num(&self) -> i128 {
        self.num
    }

    pub fn den(&self) -> i128 {
        self.den
    }

    pub fn checked_add(self, rhs: Self) -> Result<Self> {
        let g = gcd_u128(self.den as u128, rhs.den as u128) as i128;
        let l = self.num.checked_mul(rhs.den / g).ok_or_else(|| overflow("add"))?;
        let r = rhs.num.checked_mul(self.den / g).ok_or_else(|| overflow("add"))?;
        let den = (self.den / g)
            .checked_mul(rhs.den)
            .ok_or_else(|| overflow("add"))?;
        Self::new(l.checked_add(r).ok_or_else(|| overflow("add"))?, den)
    }

    pub fn checked_sub(self, rhs: Self) -> Result<Self> {
        self.checked_add(ExactRational {
            num: -rhs.num,
            den: rhs.den,
        })
    }

    pub fn checked_mul(self, rhs: Self) -> Result<Self> {
        let g1 = gcd_u128(self.num.unsigned_abs(), rhs.den as u128).max(1) as i128;
        let g2 = gcd_u128(rhs.num.unsigned_abs(), self.den as u128).max(1) as i128;
        let num = (self.num / g1)
            .checked_mul(rhs.num / g2)
            .ok_or_else(|| overflow("mul"))?;
        let den = (self.den / g2)
            .checked_mul(rhs.den / g1)
            .ok_or_else(|| overflow("mul"))?;
        Self::new(num, den)
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialOrd for ExactRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactRational {
    fn cmp(&self, other: &Self) -> Ordering {
        // Widening is not available past i128; differences of comparable
        // magnitude are enough for the values this crate produces.
        match (
            self.num.checked_mul(other.den),
            other.num.checked_mul(self.den),
        ) {
            (Some(a), Some(b)) => a.cmp(&b),
            _ => self.to_f64().total_cmp(&other.to_f64()),
        }
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Q(x) = #{n ≤ x : μ(n) ≠ 0}, counted directly from the table.
pub fn count_squarefree_exact(x: u64, tables: &SieveTables) -> Result<u64> {
    if x == 0 || x > tables.limit() {
        return Err(Error::domain(format!(
            "Q({x}) needs 1 <= x <= {}",
            tables.limit()
        )));
    }
    Ok(tables.mobius_slice()[1..=x as usize]
        .iter()
        .filter(|&&m| m != 0)
        .count() as u64)
}

/// Σ_{d ≤ √x} μ(d)·⌊x/d²⌋, which equals Q(x) exactly.
pub fn count_squarefree_formula(x: u64, tables: &SieveTables) -> Result<u64> {
    if x == 0 {
        return Err(Error::domain("Q(0) undefined"));
    }
    let root = x.isqrt();
    if root > tables.limit() {
        return Err(Error::InsufficientSieve {
            needed: root,
            limit: tables.limit(),
        });
    }
    let mu = tables.mobius_slice();
    let total: i64 = (1..=root)
        .filter(|&d| mu[d as usize] != 0)
        .map(|d| i64::from(mu[d as usize]) * (x / (d * d)) as i64)
        .sum();
    Ok(total as u64)
}

/// First `x ≤ max_x` where the Möbius formula disagrees with the direct
/// count, or `None` when the identity holds throughout.
pub fn first_count_mismatch(max_x: u64, tables: &SieveTables) -> Result<Option<u64>> {
    if max_x == 0 || max_x > tables.limit() {
        return Err(Error::domain(format!(
            "identity range [1, {max_x}] must lie in [1, {}]",
            tables.limit()
        )));
    }
    let mu = tables.mobius_slice();
    let mut prefix = Vec::with_capacity(max_x as usize + 1);
    let mut q = 0u64;
    prefix.push(0);
    for &m in &mu[1..=max_x as usize] {
        q += u64::from(m != 0);
        prefix.push(q);
    }
    let terms: Vec<(u64, i64)> = (1..=max_x.isqrt())
        .filter(|&d| mu[d as usize] != 0)
        .map(|d| (d * d, i64::from(mu[d as usize])))
        .collect();

    Ok((1..=max_x).into_par_iter().find_first(|&x| {
        let formula: i64 = terms
            .iter()
            .take_while(|&&(sq, _)| sq <= x)
            .map(|&(sq, m)| m * (x / sq) as i64)
            .sum();
        formula != prefix[x as usize] as i64
    }))
}

/// Q(x) against (6/π²)x, scaled by √x. Use [`ResidualSample::with_scale`]
/// for the x^{1/4} view.
pub fn squarefree_residual(x: u64, tables: &SieveTables) -> Result<ResidualSample> {
    let q = count_squarefree_formula(x, tables)?;
    let xf = x as f64;
    Ok(ResidualSample::new(
        xf,
        q as f64,
        constants::six_over_pi_sq() * xf,
        0.5,
    ))
}

/// Σ_{n ≤ x} μ²(n)/n against (6/π²) log x. The residual tends to a
/// constant (≈ 1.0439), so it is reported unscaled.
pub fn squarefree_harmonic(x: u64, tables: &SieveTables) -> Result<ResidualSample> {
    if x == 0 || x > tables.limit() {
        return Err(Error::domain(format!(
            "harmonic sum to {x} needs 1 <= x <= {}",
            tables.limit()
        )));
    }
    let sum: NeumaierSum = tables.mobius_slice()[1..=x as usize]
        .iter()
        .enumerate()
        .filter(|(_, &m)| m != 0)
        .map(|(i, _)| 1.0 / (i + 1) as f64)
        .collect();
    let xf = x as f64;
    Ok(ResidualSample::new(
        xf,
        sum.value(),
        constants::six_over_pi_sq() * xf.ln(),
        0.0,
    ))
}

/// [`squarefree_harmonic`] at every point of an ascending grid, in one pass.
pub fn harmonic_sweep(grid: &[u64], tables: &SieveTables) -> Result<Vec<ResidualSample>> {
    if grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::domain("sweep grid must be ascending"));
    }
    let Some(&last) = grid.last() else {
        return Ok(Vec::new());
    };
    if grid[0] == 0 || last > tables.limit() {
        return Err(Error::domain(format!(
            "harmonic sweep needs 1 <= x <= {}",
            tables.limit()
        )));
    }
    let mu = tables.mobius_slice();
    let mut sum = NeumaierSum::new();
    let mut n = 0u64;
    let c = constants::six_over_pi_sq();
    Ok(grid
        .iter()
        .map(|&x| {
            while n < x {
                n += 1;
                if mu[n as usize] != 0 {
                    sum.add(1.0 / n as f64);
                }
            }
            ResidualSample::new(x as f64, sum.value(), c * (x as f64).ln(), 0.0)
        })
        .collect())
}

/// Largest x for which P_x and the tail numerators fit in 128 bits.
pub const MAX_TAIL_X: u64 = 52;

fn primorial_primes(x: u64, tables: &SieveTables) -> Result<(Vec<u64>, i128)> {
    if !(2..=MAX_TAIL_X).contains(&x) {
        return Err(Error::Overflow(format!(
            "primorial tail needs 2 <= x <= {MAX_TAIL_X}, got {x}"
        )));
    }
    if x > tables.limit() {
        return Err(Error::InsufficientSieve {
            needed: x,
            limit: tables.limit(),
        });
    }
    let primes = tables.primes()[..tables.prime_pi(x)].to_vec();
    let p_x = primes.iter().map(|&p| i128::from(p)).product();
    Ok((primes, p_x))
}

/// Σ_{d | P_x, d > x} 1/d exactly, with P_x = ∏_{p ≤ x} p.
///
/// Divisors are visited in Gray-code order, so each step multiplies or
/// divides the current divisor by a single prime.
pub fn primorial_divisor_tail(x: u64, tables: &SieveTables) -> Result<ExactRational> {
    let (primes, p_x) = primorial_primes(x, tables)?;
    let x = i128::from(x);
    let mut d: i128 = 1;
    let mut numerator: i128 = 0;
    for i in 1u64..(1 << primes.len()) {
        let bit = i.trailing_zeros();
        let p = i128::from(primes[bit as usize]);
        if (i ^ (i >> 1)) & (1 << bit) != 0 {
            d *= p;
        } else {
            d /= p;
        }
        if d > x {
            numerator += p_x / d;
        }
    }
    ExactRational::new(numerator, p_x)
}

/// σ(P_x)/P_x = ∏_{p ≤ x}(1 + 1/p) as an exact fraction.
pub fn primorial_psi_ratio_exact(x: u64, tables: &SieveTables) -> Result<ExactRational> {
    let (primes, p_x) = primorial_primes(x, tables)?;
    let sigma: i128 = primes.iter().map(|&p| i128::from(p) + 1).product();
    ExactRational::new(sigma, p_x)
}

/// Σ_{n ≤ x} μ²(n)/n as an exact fraction over the common denominator P_x.
pub fn squarefree_harmonic_exact(x: u64, tables: &SieveTables) -> Result<ExactRational> {
    let (_, p_x) = primorial_primes(x, tables)?;
    let mu = tables.mobius_slice();
    let numerator: i128 = (1..=x)
        .filter(|&n| mu[n as usize] != 0)
        .map(|n| p_x / i128::from(n))
        .sum();
    ExactRational::new(numerator, p_x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t() -> SieveTables {
        SieveTables::build(1_000).unwrap()
    }

    #[test]
    fn rational_basics() {
        let a = ExactRational::new(6, -30).unwrap();
        assert_eq!((a.num(), a.den()), (-1, 5));
        assert_eq!(ExactRational::new(0, 7).unwrap(), ExactRational::ZERO);
        assert!(ExactRational::new(1, 0).is_err());
        let s = ExactRational::new(1, 6)
            .unwrap()
            .checked_add(ExactRational::new(1, 3).unwrap())
            .unwrap();
        assert_eq!(s, ExactRational::new(1, 2).unwrap());
        assert_eq!(s.to_string(), "1/2");
        assert!(ExactRational::from_int(i128::MAX)
            .checked_add(ExactRational::ONE)
            .is_err());
    }

    proptest! {
        #[test]
        fn rational_field_laws(a in -1000i128..1000, b in 1i128..1000, c in -1000i128..1000, d in 1i128..1000) {
            let x = ExactRational::new(a, b).unwrap();
            let y = ExactRational::new(c, d).unwrap();
            prop_assert_eq!(x.checked_add(y).unwrap().checked_sub(y).unwrap(), x);
            prop_assert_eq!(x.checked_mul(y).unwrap(), ExactRational::new(a * c, b * d).unwrap());
            prop_assert_eq!(x < y, a * d < c * b);
        }
    }

    #[test]
    fn exact_count_examples() {
        let t = t();
        assert_eq!(count_squarefree_exact(1, &t).unwrap(), 1);
        assert_eq!(count_squarefree_exact(10, &t).unwrap(), 7);
        assert_eq!(count_squarefree_exact(100, &t).unwrap(), 61);
        assert!(count_squarefree_exact(0, &t).is_err());
        assert!(count_squarefree_exact(1_001, &t).is_err());
    }

    #[test]
    fn formula_examples() {
        let t = t();
        assert_eq!(count_squarefree_formula(10, &t).unwrap(), 10 - 2 - 1);
        assert_eq!(count_squarefree_formula(1, &t).unwrap(), 1);
        assert_eq!(count_squarefree_formula(100, &t).unwrap(), 61);
        // Only √x needs to be in the table.
        assert_eq!(count_squarefree_formula(1_000_000, &t).unwrap(), 607_926);
        assert!(matches!(
            count_squarefree_formula(1_002_001, &t),
            Err(Error::InsufficientSieve { .. })
        ));
    }

    #[test]
    fn formula_equals_count_to_1e5() {
        let t = SieveTables::build(100_000).unwrap();
        assert_eq!(first_count_mismatch(100_000, &t).unwrap(), None);
    }

    #[test]
    fn residual_examples() {
        let t = t();
        let r = squarefree_residual(10, &t).unwrap();
        assert_eq!(r.value, 7.0);
        assert!((r.residual - 0.920729).abs() < 1e-6);
        assert!((r.scaled_residual - 0.920729 / 10f64.sqrt()).abs() < 1e-6);
        let r = squarefree_residual(1, &t).unwrap();
        assert!((r.residual - 0.392073).abs() < 1e-6);
        let r = squarefree_residual(100, &t).unwrap();
        assert!((r.residual - 0.20729).abs() < 1e-5);
        let q = r.with_scale(0.25);
        assert!((q.scaled_residual * 100f64.powf(0.25) - q.residual).abs() < 1e-15);
    }

    #[test]
    fn harmonic_examples() {
        let t = t();
        assert_eq!(squarefree_harmonic(1, &t).unwrap().value, 1.0);
        let r = squarefree_harmonic(10, &t).unwrap();
        let direct = 1.0 + 0.5 + 1.0 / 3.0 + 0.2 + 1.0 / 6.0 + 1.0 / 7.0 + 0.1;
        assert!((r.value - direct).abs() < 1e-15);
        assert!((r.value - 2.442857).abs() < 1e-6);
        // 2.442857 − (6/π²)·log 10 = 2.442857 − 1.399804
        assert!((r.residual - 1.043053).abs() < 1e-6);
    }

    #[test]
    fn harmonic_sweep_matches_pointwise() {
        let t = t();
        let grid = [1, 2, 10, 10, 333, 1_000];
        for s in harmonic_sweep(&grid, &t).unwrap() {
            assert_eq!(s, squarefree_harmonic(s.x as u64, &t).unwrap());
        }
        assert!(harmonic_sweep(&[5, 4], &t).is_err());
        assert!(harmonic_sweep(&[0, 4], &t).is_err());
    }

    #[test]
    fn tail_examples() {
        let t = t();
        assert_eq!(primorial_divisor_tail(2, &t).unwrap(), ExactRational::ZERO);
        assert_eq!(
            primorial_divisor_tail(6, &t).unwrap(),
            ExactRational::new(1, 5).unwrap()
        );
        assert_eq!(
            primorial_divisor_tail(10, &t).unwrap(),
            ExactRational::new(3, 10).unwrap()
        );
        assert!(matches!(primorial_divisor_tail(53, &t), Err(Error::Overflow(_))));
        assert!(primorial_divisor_tail(1, &t).is_err());
        assert!(primorial_divisor_tail(MAX_TAIL_X, &t).is_ok());
    }

    // Plain subset enumeration, no Gray code.
    fn tail_by_subsets(x: u64, t: &SieveTables) -> ExactRational {
        let primes = &t.primes()[..t.prime_pi(x)];
        let mut acc = ExactRational::ZERO;
        for mask in 0u32..(1 << primes.len()) {
            let d: i128 = (0..primes.len())
                .filter(|b| mask & (1 << b) != 0)
                .map(|b| primes[b] as i128)
                .product();
            if d > x as i128 {
                acc = acc.checked_add(ExactRational::new(1, d).unwrap()).unwrap();
            }
        }
        acc
    }

    #[test]
    fn gray_code_tail_matches_subset_enumeration() {
        let t = t();
        for x in 2..=30 {
            assert_eq!(primorial_divisor_tail(x, &t).unwrap(), tail_by_subsets(x, &t));
        }
    }

    #[test]
    fn harmonic_is_product_minus_tail_exactly() {
        let t = t();
        for x in 2..=MAX_TAIL_X {
            let lhs = squarefree_harmonic_exact(x, &t).unwrap();
            let rhs = primorial_psi_ratio_exact(x, &t)
                .unwrap()
                .checked_sub(primorial_divisor_tail(x, &t).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs, "x = {x}");
        }
        assert_eq!(
            primorial_psi_ratio_exact(6, &t).unwrap(),
            ExactRational::new(12, 5).unwrap()
        );
        assert_eq!(
            squarefree_harmonic_exact(6, &t).unwrap(),
            ExactRational::new(11, 5).unwrap()
        );
    }
}
