//! Linear division-based recursions `G(N) = α·F(⌊N/m⌋) + β·G(⌊N/m⌋)` and
//! three natural-density families they govern: integers oddly divisible by
//! `m`, square-free multiples of a square-free `t`, and `Σ φ(n)/n` over
//! multiples of `m`.
//!
//! Every identity is checked in exact rational arithmetic against direct
//! counts; the asymptotic densities are compared against sieve-backed
//! counts in [`analysis`].

pub mod analysis;
pub mod applications;
pub mod error;
pub mod rational;
pub mod recursion;
pub mod scan;
pub mod sieve;
pub mod summation;
pub mod verify;

pub use error::{Error, Result};
pub use rational::Rational;
pub use recursion::{CountingFunction, RecurrenceSpec};
pub use scan::ScanConfig;
