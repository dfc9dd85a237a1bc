//! Base sieve tables and segmented range scans.
//!
//! The base table is a linear sieve: every composite is written exactly once,
//! by its smallest prime factor, so Möbius falls out of the same pass.
//! Ranges above the table are handled by [`SegmentScan`] using the table's
//! primes up to √hi.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::numeric::NeumaierSum;
use crate::{Error, Result};

pub const MAX_LIMIT: u64 = 1 << 40;

/// Integers per segment in [`SegmentScan`].
pub const SEGMENT_SIZE: u64 = 1 << 20;

const DUMP_MAGIC: &[u8; 4] = b"PSX1";

/// Immutable sieve data over `[1, limit]`.
///
/// `spf` stores 0 for primes (and for 0, 1); composites up to 2^40 have a
/// smallest prime factor below 2^20, so `u32` always suffices.
#[derive(Clone, PartialEq)]
pub struct SieveTables {
    limit: u64,
    spf: Vec<u32>,
    mobius: Vec<i8>,
    primes: Vec<u64>,
    theta_prefix: Vec<f64>,
}

impl std::fmt::Debug for SieveTables {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SieveTables")
            .field("limit", &self.limit)
            .field("prime_count", &self.primes.len())
            .finish()
    }
}

fn zeroed<T: Clone + Default>(len: usize) -> Result<Vec<T>> {
    let mut v = Vec::new();
    v.try_reserve_exact(len)
        .map_err(|_| Error::Allocation(len * std::mem::size_of::<T>()))?;
    v.resize(len, T::default());
    Ok(v)
}

fn theta_prefix_of(primes: &[u64]) -> Vec<f64> {
    let mut acc = NeumaierSum::new();
    primes
        .iter()
        .map(|&p| {
            acc.add((p as f64).ln());
            acc.value()
        })
        .collect()
}

impl SieveTables {
    pub fn build(limit: u64) -> Result<Self> {
        if !(2..=MAX_LIMIT).contains(&limit) {
            return Err(Error::domain(format!(
                "sieve limit {limit} outside [2, 2^40]"
            )));
        }
        let len = usize::try_from(limit + 1)
            .map_err(|_| Error::domain("sieve limit exceeds address space"))?;
        let mut spf: Vec<u32> = zeroed(len)?;
        let mut mobius: Vec<i8> = zeroed(len)?;
        mobius[1] = 1;

        // π(x) < 1.26 x / ln x for x > 1.
        let estimate = (1.26 * limit as f64 / (limit as f64).ln()) as usize + 16;
        let mut primes: Vec<u64> = Vec::new();
        primes
            .try_reserve_exact(estimate)
            .map_err(|_| Error::Allocation(estimate * 8))?;

        for i in 2..len {
            let smallest = if spf[i] == 0 {
                primes.push(i as u64);
                mobius[i] = -1;
                i as u64
            } else {
                u64::from(spf[i])
            };
            let mu_i = mobius[i];
            for &p in &primes {
                if p > smallest {
                    break;
                }
                let m = i as u64 * p;
                if m > limit {
                    break;
                }
                let m = m as usize;
                spf[m] = p as u32;
                mobius[m] = if p == smallest { 0 } else { -mu_i };
            }
        }
        primes.shrink_to_fit();
        let theta_prefix = theta_prefix_of(&primes);

        Ok(SieveTables {
            limit,
            spf,
            mobius,
            primes,
            theta_prefix,
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// `theta_prefix()[i]` is θ(primes()[i]).
    pub fn theta_prefix(&self) -> &[f64] {
        &self.theta_prefix
    }

    fn check(&self, n: u64) -> Result<usize> {
        if n == 0 || n > self.limit {
            return Err(Error::domain(format!(
                "{n} outside table range [1, {}]",
                self.limit
            )));
        }
        Ok(n as usize)
    }

    /// Smallest prime factor of `n` in `[2, limit]`.
    pub fn spf(&self, n: u64) -> Result<u64> {
        let i = self.check(n)?;
        if n < 2 {
            return Err(Error::domain("spf undefined for 1"));
        }
        Ok(match self.spf[i] {
            0 => n,
            p => u64::from(p),
        })
    }

    /// μ(n) for `n` in `[1, limit]`.
    pub fn mobius(&self, n: u64) -> Result<i8> {
        Ok(self.mobius[self.check(n)?])
    }

    /// Unchecked Möbius slice indexed by n (index 0 is unused and holds 0).
    pub fn mobius_slice(&self) -> &[i8] {
        &self.mobius
    }

    pub(crate) fn spf_unchecked(&self, n: u64) -> u64 {
        match self.spf[n as usize] {
            0 => n,
            p => u64::from(p),
        }
    }

    pub fn is_prime(&self, n: u64) -> Result<bool> {
        let i = self.check(n)?;
        Ok(n >= 2 && self.spf[i] == 0)
    }

    /// π(n) for n ≤ limit; saturates at the table's prime count above it.
    pub fn prime_pi(&self, n: u64) -> usize {
        self.primes.partition_point(|&p| p <= n)
    }

    /// Largest integer cutoff ⌊x⌋ for a real argument, checked against the table.
    pub(crate) fn cutoff(&self, x: f64) -> Result<u64> {
        if !(x >= 0.0) {
            return Err(Error::domain(format!("argument {x} must be >= 0")));
        }
        if x > self.limit as f64 {
            return Err(Error::InsufficientSieve {
                needed: x.floor() as u64,
                limit: self.limit,
            });
        }
        Ok(x.floor() as u64)
    }

    /// θ(x) = Σ_{p ≤ x} log p.
    pub fn theta(&self, x: f64) -> Result<f64> {
        let n = self.cutoff(x)?;
        Ok(match self.prime_pi(n) {
            0 => 0.0,
            k => self.theta_prefix[k - 1],
        })
    }

    /// Scan `[lo, hi]` in segments, yielding smallest prime factor and μ.
    pub fn segment_scan(&self, lo: u64, hi: u64) -> Result<SegmentScan<'_>> {
        if lo < 2 || lo > hi {
            return Err(Error::domain(format!("bad scan range [{lo}, {hi}]")));
        }
        if hi > MAX_LIMIT {
            return Err(Error::domain(format!("scan bound {hi} exceeds 2^40")));
        }
        let root = hi.isqrt();
        if root > self.limit {
            return Err(Error::InsufficientSieve {
                needed: root,
                limit: self.limit,
            });
        }
        Ok(SegmentScan {
            primes: &self.primes[..self.prime_pi(root)],
            next_lo: lo,
            hi,
            spf: Vec::new(),
            mobius: Vec::new(),
            seg_lo: lo,
            pos: 0,
        })
    }

    /// Write the tables in the `PSX1` format: magic, limit (u64 LE),
    /// SHA-256 of the payload, then spf (u32 LE) and μ (i8) arrays.
    pub fn dump(&self, path: &Path) -> Result<()> {
        let mut hasher = Sha256::new();
        for s in &self.spf {
            hasher.update(s.to_le_bytes());
        }
        hasher.update(self.mobius.iter().map(|&m| m as u8).collect::<Vec<_>>());
        let digest = hasher.finalize();

        let mut w = BufWriter::new(File::create(path)?);
        w.write_all(DUMP_MAGIC)?;
        w.write_all(&self.limit.to_le_bytes())?;
        w.write_all(&digest)?;
        for s in &self.spf {
            w.write_all(&s.to_le_bytes())?;
        }
        w.write_all(&self.mobius.iter().map(|&m| m as u8).collect::<Vec<_>>())?;
        w.flush()?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let mut r = BufReader::new(File::open(path)?);
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != DUMP_MAGIC {
            return Err(Error::CorruptDump("bad magic".into()));
        }
        let mut word = [0u8; 8];
        r.read_exact(&mut word)?;
        let limit = u64::from_le_bytes(word);
        if !(2..=MAX_LIMIT).contains(&limit) {
            return Err(Error::CorruptDump(format!("limit {limit} out of range")));
        }
        let mut digest = [0u8; 32];
        r.read_exact(&mut digest)?;

        let len = (limit + 1) as usize;
        let mut raw = zeroed::<u8>(len * 4)?;
        r.read_exact(&mut raw)?;
        let mut hasher = Sha256::new();
        hasher.update(&raw);
        let spf: Vec<u32> = raw
            .chunks_exact(4)
            .map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]]))
            .collect();
        drop(raw);
        let mut mu_raw = zeroed::<u8>(len)?;
        r.read_exact(&mut mu_raw)?;
        hasher.update(&mu_raw);
        if hasher.finalize().as_slice() != digest {
            return Err(Error::CorruptDump("checksum mismatch".into()));
        }
        let mobius: Vec<i8> = mu_raw.into_iter().map(|b| b as i8).collect();

        let primes: Vec<u64> = (2..=limit).filter(|&n| spf[n as usize] == 0).collect();
        let theta_prefix = theta_prefix_of(&primes);
        Ok(SieveTables {
            limit,
            spf,
            mobius,
            primes,
            theta_prefix,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanEntry {
    pub n: u64,
    pub spf: u64,
    pub mobius: i8,
}

/// Iterator produced by [`SieveTables::segment_scan`].
pub struct SegmentScan<'a> {
    primes: &'a [u64],
    next_lo: u64,
    hi: u64,
    spf: Vec<u64>,
    mobius: Vec<i8>,
    seg_lo: u64,
    pos: usize,
}

impl SegmentScan<'_> {
    fn fill(&mut self) {
        let lo = self.next_lo;
        let hi = (lo + SEGMENT_SIZE - 1).min(self.hi);
        let len = (hi - lo + 1) as usize;
        self.spf.clear();
        self.spf.resize(len, 0);
        self.mobius.clear();
        self.mobius.resize(len, 1);
        // Product of distinct small primes dividing each n.
        let mut radical = vec![1u64; len];

        for &p in self.primes {
            if p * p > hi {
                break;
            }
            let mut m = lo.div_ceil(p) * p;
            while m <= hi {
                let i = (m - lo) as usize;
                if self.spf[i] == 0 {
                    self.spf[i] = p;
                }
                self.mobius[i] = -self.mobius[i];
                radical[i] *= p;
                m += p;
            }
            let sq = p * p;
            let mut m = lo.div_ceil(sq) * sq;
            while m <= hi {
                self.mobius[(m - lo) as usize] = 0;
                m += sq;
            }
        }
        for (i, rad) in radical.into_iter().enumerate() {
            let n = lo + i as u64;
            if self.spf[i] == 0 {
                self.spf[i] = n;
            }
            // A squarefree n whose small primes don't multiply to n has one
            // more prime factor above √hi.
            if self.mobius[i] != 0 && rad != n {
                self.mobius[i] = -self.mobius[i];
            }
        }
        self.seg_lo = lo;
        self.pos = 0;
        self.next_lo = hi + 1;
    }
}

impl Iterator for SegmentScan<'_> {
    type Item = ScanEntry;

    fn next(&mut self) -> Option<ScanEntry> {
        if self.pos >= self.spf.len() {
            if self.next_lo > self.hi {
                return None;
            }
            self.fill();
        }
        let i = self.pos;
        self.pos += 1;
        Some(ScanEntry {
            n: self.seg_lo + i as u64,
            spf: self.spf[i],
            mobius: self.mobius[i],
        })
    }
}
