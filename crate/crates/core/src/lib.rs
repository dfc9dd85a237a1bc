//! Sieve tables and verification routines for the Dedekind psi function,
//! squarefree densities and Mertens-type prime sums and products.
//!
//! Everything hangs off an immutable [`SieveTables`] built once for a limit
//! and then shared by reference:
//!
//! - [`sieve`]: linear smallest-prime-factor sieve, Möbius, primes, θ prefix,
//!   and a segmented scanner for ranges above the base table.
//! - [`arith`]: factorizations and exact φ, σ, ψ.
//! - [`squarefree`]: Q(x), the Möbius counting identity, squarefree harmonic
//!   sums and exact primorial divisor tails.
//! - [`mertens`]: prime harmonic sums, Euler products, B₁ and explicit bounds.
//! - [`extrema`]: the primorial engine, the ψ(N_k)/N_k threshold margin,
//!   jumps, range extremes and the above/below classification.
//! - [`constants`]: the decimal constant registry.

pub mod arith;
pub mod constants;
mod error;
pub mod extrema;
pub mod mertens;
pub mod numeric;
pub mod sieve;
pub mod squarefree;

pub use error::{Error, Result};
pub use sieve::SieveTables;
