//! Exact arithmetic over real cyclotomic rings and the machinery built on it:
//! descent witnesses over Q(i), Frey curves with local reduction data,
//! explicit exponent bounds, and a Hecke-eigenvalue elimination sieve.
//!
//! Everything numeric in this crate is exact: ring elements carry big-rational
//! coordinates in the power basis of `theta = zeta_p + zeta_p^{-1}`, norms and
//! valuations are computed by resultants and exact division, and reports only
//! ever format floating point for log10 summaries.

pub mod arith;
pub mod bounds;
pub mod dataio;
pub mod descent;
pub mod error;
pub mod fq;
pub mod frey;
pub mod local2;
pub mod polys;
pub mod ring;
pub mod sieve;

/// Exact integer used throughout the crate.
pub type Int = num_bigint::BigInt;
/// Exact rational used for field elements and non-integral invariants.
pub type Rat = num_rational::BigRational;

pub use error::{Error, Result};
pub use ring::{CyclotomicField, PrimeIdealData, ResidueElement, RingElement};
