//! Ranking moduli by their supply of auxiliary primes.
//!
//! Computing the class number factor h1(q) exactly (rather than its size)
//! works modulo auxiliary primes p = b q + 1 and reassembles the result;
//! moduli for which many small multipliers b already give primes are the
//! cheap ones. This ranks a range of candidate q by that count.

use kummer_core::arith::is_prime;
use rayon::prelude::*;

use crate::sieve::odd_primes_between;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Candidate {
    pub q: u64,
    /// How many b in 1..=b_limit make b q + 1 prime.
    pub score: u32,
}

/// How many b in 1..=b_limit make b q + 1 prime. Products past u64 can
/// never contribute.
pub fn auxiliary_score(q: u64, b_limit: u64) -> u32 {
    (1..=b_limit)
        .filter(|&b| {
            b.checked_mul(q)
                .and_then(|x| x.checked_add(1))
                .is_some_and(is_prime)
        })
        .count() as u32
}

/// Best `count` odd primes in [start, end] by auxiliary-prime count,
/// highest score first, ties broken by smaller q.
pub fn rank_candidates(start: u64, end: u64, b_limit: u64, count: usize) -> Vec<Candidate> {
    let mut ranked: Vec<Candidate> = odd_primes_between(start, end)
        .into_par_iter()
        .map(|q| Candidate {
            q,
            score: auxiliary_score(q, b_limit),
        })
        .collect();
    ranked.sort_by(|a, b| b.score.cmp(&a.score).then(a.q.cmp(&b.q)));
    ranked.truncate(count);
    ranked
}
