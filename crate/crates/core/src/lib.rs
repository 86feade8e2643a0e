//! Relative class numbers of prime cyclotomic fields and their
//! Euler-Kronecker constants.
//!
//! For an odd prime q let h1(q) denote the first factor of the class
//! number of Q(zeta_q) and let
//!
//! ```text
//!     G(q) = 2q * (q / (4 pi^2))^((q-1)/4)
//! ```
//!
//! be its asymptotic normalizer. This crate computes the Kummer ratio
//! r(q) = h1(q) / G(q) by three routes of increasing speed, all built on
//! the identity r(q) = prod_{chi odd} L(1, chi), and the difference
//! of Euler-Kronecker constants of Q(zeta_q) and its maximal real
//! subfield, which needs the logarithmic derivatives L'(1, chi)/L(1, chi)
//! instead.
//!
//! The expensive objects throughout are sums of the form
//! sum_a chi(a) f(a/q) over all odd Dirichlet characters mod q. Written
//! in the ordering a_k = g^k mod q for a primitive root g they become a
//! single discrete Fourier transform of length q - 1, and after one
//! decimation step only the odd-frequency half of length (q-1)/2
//! survives. The modules follow that pipeline:
//!
//! * [`arith`]: primality, factorization, primitive roots, power table.
//! * [`specfun`]: cot(pi x), digamma, log-gamma.
//! * [`sum`]: compensated accumulation for the long real sums.
//! * [`transform`]: DFTs of arbitrary length and the folded character sums.
//! * [`ratio`]: the three Kummer ratio engines and the size normalizer.
//! * [`ek`]: the Euler-Kronecker difference.

pub mod arith;
pub mod ek;
pub mod ratio;
pub mod specfun;
pub mod sum;
pub mod transform;

/// Everything that can go wrong below the command line layer.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("q must be an odd prime, got {0}")]
    NotOddPrime(u64),

    #[error("power table for q = {q} needs {needed} entries, budget allows {budget}")]
    TableBudget { q: u64, needed: u64, budget: u64 },

    #[error("q = {q} exceeds the oracle cap {cap}; use the digamma or bernoulli engine")]
    OracleCap { q: u64, cap: u64 },

    #[error("character sum {index} has magnitude {magnitude:e}, below the vanishing guard; transform output is inconsistent")]
    VanishingCharacterSum { index: usize, magnitude: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

/// Resource bounds threaded through the engines.
///
/// `oracle_cap` bounds the q accepted by the quadratic-time oracle engine;
/// `table_entries` bounds the length q - 1 of the power table (the largest
/// allocation any engine makes scales with it).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub oracle_cap: u64,
    pub table_entries: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            oracle_cap: 10_000,
            table_entries: 1 << 31,
        }
    }
}
