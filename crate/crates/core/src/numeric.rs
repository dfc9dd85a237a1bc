//! Floating-point accumulation helpers.

use std::ops::{Add, Mul};

/// Neumaier's variant of Kahan summation.
///
/// Unlike plain Kahan, the compensation stays correct when an addend is
/// larger in magnitude than the running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }

    /// Uncollapsed (sum, compensation) pair.
    pub fn parts(&self) -> (f64, f64) {
        (self.sum, self.compensation)
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = NeumaierSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`, roughly 106 bits of
/// significand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const ONE: DoubleDouble = DoubleDouble { hi: 1.0, lo: 0.0 };

    pub fn from_f64(v: f64) -> Self {
        DoubleDouble { hi: v, lo: 0.0 }
    }

    /// `num / den` for integers exactly representable in an f64.
    pub fn ratio(num: f64, den: f64) -> Self {
        let q1 = num / den;
        let (p, e) = two_prod(q1, den);
        let r = (num - p) - e;
        let q2 = r / den;
        let (hi, lo) = quick_two_sum(q1, q2);
        DoubleDouble { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn sub(self, other: DoubleDouble) -> DoubleDouble {
        self + DoubleDouble {
            hi: -other.hi,
            lo: -other.lo,
        }
    }
}

impl Add for DoubleDouble {
    type Output = DoubleDouble;

    fn add(self, rhs: DoubleDouble) -> DoubleDouble {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let (t, f) = two_sum(self.lo, rhs.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        DoubleDouble { hi, lo }
    }
}

impl Mul for DoubleDouble {
    type Output = DoubleDouble;

    fn mul(self, rhs: DoubleDouble) -> DoubleDouble {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (hi, lo) = quick_two_sum(p, e);
        DoubleDouble { hi, lo }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neumaier_recovers_cancelled_terms() {
        let s: NeumaierSum = [1.0, 1e100, 1.0, -1e100].into_iter().collect();
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn neumaier_beats_naive_on_many_small_terms() {
        let mut acc = NeumaierSum::new();
        let mut naive = 0.0f64;
        for _ in 0..10_000_000 {
            acc.add(0.1);
            naive += 0.1;
        }
        assert!((acc.value() - 1_000_000.0).abs() < 1e-9);
        assert!((naive - 1_000_000.0).abs() > 1e-6);
    }

    #[test]
    fn double_double_ratio_is_exact_to_106_bits() {
        // 1/3 * 3 should reconstruct 1 far below f64 resolution.
        let third = DoubleDouble::ratio(1.0, 3.0);
        let back = third * DoubleDouble::from_f64(3.0);
        assert!((back.sub(DoubleDouble::ONE)).to_f64().abs() < 1e-30);
    }

    #[test]
    fn double_double_difference_keeps_small_increments() {
        let a = DoubleDouble::ratio(7.0, 3.0);
        let b = a * DoubleDouble::ratio(1_000_004.0, 1_000_003.0);
        let diff = b.sub(a).to_f64();
        let expect = (7.0 / 3.0) / 1_000_003.0;
        assert!(((diff - expect) / expect).abs() < 1e-14);
    }
}
