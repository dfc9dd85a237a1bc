//! Primorial engine and extreme values of ψ(n)/n.
//!
//! N_k = 2·3···p_k overflows every fixed-width integer near k = 16, so the
//! stream works in the log domain: log N_k = θ(p_k) comes from the sieve's
//! prefix table and the ratios are exponentials of compensated log sums.

use rayon::prelude::*;

use crate::constants;
use crate::numeric::{DoubleDouble, NeumaierSum};
use crate::{Error, Result, SieveTables};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimorialRecord {
    pub k: u64,
    pub p_k: u64,
    /// log N_k = θ(p_k)
    pub log_n: f64,
    /// ψ(N_k)/N_k = ∏_{p ≤ p_k}(1 + 1/p)
    pub psi_ratio: f64,
    /// N_k/φ(N_k) = ∏_{p ≤ p_k}(1 − 1/p)⁻¹
    pub inv_phi_ratio: f64,
    pub loglog_n: f64,
    /// (6e^γ/π²)·log log N_k
    pub threshold: f64,
    pub margin: f64,
}

/// Iterator over [`PrimorialRecord`]s for k = 1, 2, … up to a prime bound.
pub struct PrimorialStream<'a> {
    primes: &'a [u64],
    theta: &'a [f64],
    next: usize,
    coefficient: f64,
    psi_log: NeumaierSum,
    inv_phi_log: NeumaierSum,
    zeta2_log: NeumaierSum,
}

impl PrimorialStream<'_> {
    /// Relative gap between psi_ratio/inv_phi_ratio and ∏(1 − 1/p²) at the
    /// last yielded record.
    pub fn factorization_residual(&self) -> f64 {
        let lhs = (self.psi_log.value() - self.inv_phi_log.value()).exp();
        let rhs = self.zeta2_log.value().exp();
        (lhs - rhs).abs() / rhs
    }
}

impl Iterator for PrimorialStream<'_> {
    type Item = PrimorialRecord;

    fn next(&mut self) -> Option<PrimorialRecord> {
        let i = self.next;
        let &p = self.primes.get(i)?;
        self.next += 1;
        let pf = p as f64;
        self.psi_log.add((1.0 / pf).ln_1p());
        self.inv_phi_log.add(-(-1.0 / pf).ln_1p());
        self.zeta2_log.add((-1.0 / (pf * pf)).ln_1p());

        let log_n = self.theta[i];
        let loglog_n = log_n.ln();
        let psi_ratio = self.psi_log.value().exp();
        let threshold = self.coefficient * loglog_n;
        Some(PrimorialRecord {
            k: i as u64 + 1,
            p_k: p,
            log_n,
            psi_ratio,
            inv_phi_ratio: self.inv_phi_log.value().exp(),
            loglog_n,
            threshold,
            margin: psi_ratio - threshold,
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.primes.len() - self.next;
        (left, Some(left))
    }
}

pub fn primorial_stream(p_limit: u64, tables: &SieveTables) -> Result<PrimorialStream<'_>> {
    if p_limit > tables.limit() {
        return Err(Error::InsufficientSieve {
            needed: p_limit,
            limit: tables.limit(),
        });
    }
    let count = tables.prime_pi(p_limit);
    Ok(PrimorialStream {
        primes: &tables.primes()[..count],
        theta: &tables.theta_prefix()[..count],
        next: 0,
        coefficient: constants::threshold(),
        psi_log: NeumaierSum::new(),
        inv_phi_log: NeumaierSum::new(),
        zeta2_log: NeumaierSum::new(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem1Report {
    pub all_positive: bool,
    pub min_margin: f64,
    pub argmin_k: u64,
    pub argmin_p: u64,
    pub primes_scanned: u64,
}

/// Check ψ(N_k)/N_k > (6e^γ/π²) log log N_k for every primorial with
/// p_k ≤ p_limit.
pub fn verify_theorem1(p_limit: u64, tables: &SieveTables) -> Result<Theorem1Report> {
    if p_limit < 2 {
        return Err(Error::domain("p_limit must be >= 2"));
    }
    let mut report = Theorem1Report {
        all_positive: true,
        min_margin: f64::INFINITY,
        argmin_k: 0,
        argmin_p: 0,
        primes_scanned: 0,
    };
    for r in primorial_stream(p_limit, tables)? {
        report.primes_scanned += 1;
        if r.margin <= 0.0 {
            report.all_positive = false;
        }
        if r.margin < report.min_margin {
            report.min_margin = r.margin;
            report.argmin_k = r.k;
            report.argmin_p = r.p_k;
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpDelta {
    pub k: u64,
    pub p_k: u64,
    pub p_next: u64,
    /// ψ(N_{k+1})/N_{k+1} − ψ(N_k)/N_k
    pub difference: f64,
    /// (ψ(N_k)/N_k)/p_{k+1}
    pub ratio: f64,
}

impl JumpDelta {
    pub fn relative_gap(&self) -> f64 {
        (self.difference - self.ratio).abs() / self.ratio
    }
}

/// Jumps Δ_k for k = 1..=kmax.
///
/// The difference form subtracts two double-double running products; in
/// plain f64 the cancellation would cost about log10(p_{k+1}) digits. The
/// ratio form divides the log-domain ψ(N_k)/N_k by p_{k+1}.
pub fn jump_deltas(kmax: u64, tables: &SieveTables) -> Result<Vec<JumpDelta>> {
    let primes = tables.primes();
    if kmax == 0 {
        return Err(Error::domain("k must be >= 1"));
    }
    if kmax as usize >= primes.len() {
        return Err(Error::InsufficientSieve {
            needed: tables.limit() + 1,
            limit: tables.limit(),
        });
    }
    let mut stream = primorial_stream(tables.limit(), tables)?;
    let mut out = Vec::with_capacity(kmax as usize);
    // ψ(N_1)/N_1 = 3/2
    let mut exact = DoubleDouble::ratio(3.0, 2.0);
    for k in 1..=kmax {
        let record = stream.next().expect("kmax below prime count");
        let p_next = primes[k as usize];
        let following =
            exact * DoubleDouble::ratio(p_next as f64 + 1.0, p_next as f64);
        out.push(JumpDelta {
            k,
            p_k: record.p_k,
            p_next,
            difference: following.sub(exact).to_f64(),
            ratio: record.psi_ratio / p_next as f64,
        });
        exact = following;
    }
    Ok(out)
}

pub fn jump_delta(k: u64, tables: &SieveTables) -> Result<JumpDelta> {
    Ok(*jump_deltas(k, tables)?.last().expect("k >= 1"))
}

/// ψ(n) from the table's smallest-prime-factor chain.
fn psi_of(n: u64, tables: &SieveTables) -> u128 {
    let mut m = n;
    let mut psi: u128 = 1;
    while m > 1 {
        let p = tables.spf_unchecked(m);
        m /= p;
        let mut part = u128::from(p) + 1;
        while m.is_multiple_of(p) {
            m /= p;
            part *= u128::from(p);
        }
        psi *= part;
    }
    psi
}

fn check_range(x: u64, tables: &SieveTables) -> Result<()> {
    if x < 2 {
        return Err(Error::domain(format!("x = {x} must be >= 2")));
    }
    if x > tables.limit() {
        return Err(Error::InsufficientSieve {
            needed: x,
            limit: tables.limit(),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremes {
    pub max_n: u64,
    pub max_ratio: f64,
    pub min_n: u64,
    pub min_ratio: f64,
}

/// Brute-force max and min of ψ(n)/n over 2 ≤ n ≤ x; ties go to the
/// smallest n. Comparisons are exact (ψ(a)·b against ψ(b)·a).
pub fn psi_ratio_extremes(x: u64, tables: &SieveTables) -> Result<Extremes> {
    check_range(x, tables)?;
    type Best = ((u64, u128), (u64, u128));
    let pick = |a: Best, b: Best| -> Best {
        let ((an, ap), (bn, bp)) = (a.0, b.0);
        let max = match (ap * u128::from(bn)).cmp(&(bp * u128::from(an))) {
            std::cmp::Ordering::Greater => a.0,
            std::cmp::Ordering::Less => b.0,
            std::cmp::Ordering::Equal => if an <= bn { a.0 } else { b.0 },
        };
        let ((an, ap), (bn, bp)) = (a.1, b.1);
        let min = match (ap * u128::from(bn)).cmp(&(bp * u128::from(an))) {
            std::cmp::Ordering::Less => a.1,
            std::cmp::Ordering::Greater => b.1,
            std::cmp::Ordering::Equal => if an <= bn { a.1 } else { b.1 },
        };
        (max, min)
    };
    let ((max_n, max_psi), (min_n, min_psi)) = (2..=x)
        .into_par_iter()
        .map(|n| {
            let entry = (n, psi_of(n, tables));
            (entry, entry)
        })
        .reduce_with(pick)
        .expect("nonempty range");
    Ok(Extremes {
        max_n,
        max_ratio: max_psi as f64 / max_n as f64,
        min_n,
        min_ratio: min_psi as f64 / min_n as f64,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassLabel {
    Above,
    Below,
}

impl ClassLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            ClassLabel::Above => "ABOVE",
            ClassLabel::Below => "BELOW",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassRecord {
    pub n: u64,
    pub psi_over_n: f64,
    /// (6e^γ/π²)·log log n
    pub threshold: f64,
    pub label: ClassLabel,
}

fn classify_with(n: u64, coefficient: f64, tables: &SieveTables) -> ClassRecord {
    let psi_over_n = psi_of(n, tables) as f64 / n as f64;
    let threshold = coefficient * (n as f64).ln().ln();
    ClassRecord {
        n,
        psi_over_n,
        threshold,
        label: if psi_over_n > threshold {
            ClassLabel::Above
        } else {
            ClassLabel::Below
        },
    }
}

pub fn classify(n: u64, tables: &SieveTables) -> Result<ClassRecord> {
    check_range(n, tables)?;
    Ok(classify_with(n, constants::threshold(), tables))
}

/// Per-n classification over [2, x], in order.
pub fn class_records(
    x: u64,
    tables: &SieveTables,
) -> Result<impl Iterator<Item = ClassRecord> + '_> {
    check_range(x, tables)?;
    let coefficient = constants::threshold();
    Ok((2..=x).map(move |n| classify_with(n, coefficient, tables)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassCounts {
    pub x: u64,
    pub above: u64,
    pub below: u64,
    /// x/log x, the comparison scale for the above-count.
    pub x_over_logx: f64,
}

impl ClassCounts {
    pub fn above_ratio(&self) -> f64 {
        self.above as f64 / self.x_over_logx
    }
}

pub fn classify_range(x: u64, tables: &SieveTables) -> Result<ClassCounts> {
    check_range(x, tables)?;
    let coefficient = constants::threshold();
    let above = (2..=x)
        .into_par_iter()
        .filter(|&n| classify_with(n, coefficient, tables).label == ClassLabel::Above)
        .count() as u64;
    let xf = x as f64;
    Ok(ClassCounts {
        x,
        above,
        below: x - 1 - above,
        x_over_logx: xf / xf.ln(),
    })
}

/// log log p_k − log log log N_k, with log N_k = θ(p_k).
pub fn loglog_gap(k: u64, tables: &SieveTables) -> Result<f64> {
    if k < 2 {
        return Err(Error::domain(
            "log log log N_1 is undefined (log log 2 < 0)",
        ));
    }
    let i = (k - 1) as usize;
    let (Some(&p), Some(&log_n)) = (tables.primes().get(i), tables.theta_prefix().get(i)) else {
        return Err(Error::InsufficientSieve {
            needed: tables.limit() + 1,
            limit: tables.limit(),
        });
    };
    Ok((p as f64).ln().ln() - log_n.ln().ln())
}

/// Fraction of n in [2, x] with ψ(n)/n > t, for each t.
pub fn distribution_tail(x: u64, t_grid: &[f64], tables: &SieveTables) -> Result<Vec<(f64, f64)>> {
    check_range(x, tables)?;
    if t_grid.is_empty() {
        return Err(Error::domain("empty t grid"));
    }
    if t_grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::domain("t grid must be finite"));
    }
    let counts = (2..=x)
        .into_par_iter()
        .fold(
            || vec![0u64; t_grid.len()],
            |mut acc, n| {
                let r = psi_of(n, tables) as f64 / n as f64;
                for (c, &t) in acc.iter_mut().zip(t_grid) {
                    *c += u64::from(r > t);
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; t_grid.len()],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let total = (x - 1) as f64;
    Ok(t_grid
        .iter()
        .zip(counts)
        .map(|(&t, c)| (t, c as f64 / total))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapCheck {
    /// p_{k+1} < p_k + p_k^α for every consecutive pair in range.
    pub holds_everywhere: bool,
    pub violations: u64,
    /// Index of p_k in the pair maximizing (p_{k+1} − p_k)/p_k^α.
    pub worst_k: u64,
    pub worst_p: u64,
    pub worst_next: u64,
    pub worst_ratio: f64,
}

/// Consecutive-prime gaps against p_k^α with α from the constant registry.
pub fn gap_exponent_check(p_limit: u64, tables: &SieveTables) -> Result<GapCheck> {
    if p_limit > tables.limit() {
        return Err(Error::InsufficientSieve {
            needed: p_limit,
            limit: tables.limit(),
        });
    }
    let primes = &tables.primes()[..tables.prime_pi(p_limit)];
    if primes.len() < 2 {
        return Err(Error::domain("need at least two primes"));
    }
    let alpha = constants::gap_alpha();
    let mut check = GapCheck {
        holds_everywhere: true,
        violations: 0,
        worst_k: 0,
        worst_p: 0,
        worst_next: 0,
        worst_ratio: f64::NEG_INFINITY,
    };
    for (i, w) in primes.windows(2).enumerate() {
        let (p, q) = (w[0], w[1]);
        let allowance = (p as f64).powf(alpha);
        if !((q as f64) < p as f64 + allowance) {
            check.holds_everywhere = false;
            check.violations += 1;
        }
        let ratio = (q - p) as f64 / allowance;
        if ratio > check.worst_ratio {
            check.worst_ratio = ratio;
            check.worst_k = i as u64 + 1;
            check.worst_p = p;
            check.worst_next = q;
        }
    }
    Ok(check)
}
