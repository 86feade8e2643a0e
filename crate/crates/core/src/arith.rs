//! 64-bit modular arithmetic, primality, factorization, primitive roots,
//! and the power table that drives the character-sum machinery.
//!
//! For an odd prime q the group (Z/qZ)* is cyclic of order q - 1. Fixing
//! the smallest primitive root g, the table a_k = g^k mod q for
//! k = 0..q-2 enumerates every nonzero residue exactly once, and since
//! g^((q-1)/2) = -1 mod q it satisfies the reflection
//!
//! ```text
//!     a_{k+m} = q - a_k,      m = (q - 1) / 2.
//! ```
//!
//! Character sums over the residues mod q become plain DFTs of length
//! q - 1 once rewritten in this ordering, which is what the transform
//! layer exploits. Everything here is deterministic: primality is
//! Miller-Rabin with a witness set proven complete for 64-bit inputs, and
//! factorization is trial division up to 10^6 followed by Brent's variant
//! of Pollard rho with a fixed parameter schedule.

use crate::{Error, Result};

/// Default cap on power-table entries (2^31 entries = 16 GiB of u64).
pub const DEFAULT_TABLE_ENTRIES: u64 = 1 << 31;

/// (a * b) mod n without overflow.
#[inline]
pub fn mod_mul(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

/// (base ^ exp) mod n by binary exponentiation.
pub fn mod_pow(mut base: u64, mut exp: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base, n);
        }
        base = mod_mul(base, base, n);
        exp >>= 1;
    }
    acc
}

/// Witnesses proving Miller-Rabin correct for every n < 3.3 * 10^24,
/// in particular for all of u64.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic primality test for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_WITNESSES {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let s = d.trailing_zeros();
    d >>= s;
    'witness: for &a in &MR_WITNESSES {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mod_mul(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Largest divisor probed by trial division before handing off to rho.
const TRIAL_LIMIT: u64 = 1_000_000;

/// Odd primes below TRIAL_LIMIT, sieved once on first use. Dividing only by
/// primes is exact: by the time the walk reaches a composite d, every prime
/// factor of d has already been stripped from the cofactor.
fn trial_primes() -> &'static [u32] {
    static TABLE: std::sync::OnceLock<Vec<u32>> = std::sync::OnceLock::new();
    TABLE.get_or_init(|| {
        let limit = TRIAL_LIMIT as usize;
        let mut composite = vec![false; limit];
        let mut primes = Vec::new();
        for d in (3..limit).step_by(2) {
            if composite[d] {
                continue;
            }
            primes.push(d as u32);
            for k in (d * d..limit).step_by(2 * d) {
                composite[k] = true;
            }
        }
        primes
    })
}

/// Prime factorization with multiplicity, ascending.
pub fn factorize(n: u64) -> Vec<u64> {
    assert!(n >= 2, "factorize needs n >= 2, got {n}");
    let mut out = Vec::new();
    let mut n = n;
    while n.is_multiple_of(2) {
        out.push(2);
        n /= 2;
    }
    // Once the remaining cofactor is prime, further trial division is dead
    // work; one Miller-Rabin call is far cheaper than grinding the rest of
    // the trial range, so probe after every change to n.
    if !(n >= TRIAL_LIMIT && is_prime(n)) {
        for &p in trial_primes() {
            let d = p as u64;
            if d * d > n {
                break;
            }
            if n.is_multiple_of(d) {
                while n.is_multiple_of(d) {
                    out.push(d);
                    n /= d;
                }
                if n >= TRIAL_LIMIT && is_prime(n) {
                    break;
                }
            }
        }
    }
    if n > 1 {
        split(n, &mut out);
        out.sort_unstable();
    }
    out
}

/// Recursively splits n (odd, no factor below TRIAL_LIMIT) into primes.
fn split(n: u64, out: &mut Vec<u64>) {
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(n);
    split(d, out);
    split(n / d, out);
}

/// Brent-cycle Pollard rho. Expects n odd, composite, with no prime factor
/// below TRIAL_LIMIT; walks a fixed schedule of polynomial offsets, so the
/// result is deterministic.
fn pollard_brent(n: u64) -> u64 {
    for c in 1..64 {
        if let Some(d) = pollard_brent_once(n, c) {
            return d;
        }
    }
    unreachable!("rho exhausted its offset schedule for n = {n}");
}

fn pollard_brent_once(n: u64, c: u64) -> Option<u64> {
    let f = |x: u64| {
        let t = mod_mul(x, x, n);
        if t + c >= n {
            t + c - n
        } else {
            t + c
        }
    };
    let mut y = 2u64;
    let mut r = 1u64;
    let mut q = 1u64;
    let (mut x, mut ys) = (0, 0);
    let mut d = 1;
    const BATCH: u64 = 128;
    while d == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && d == 1 {
            ys = y;
            for _ in 0..BATCH.min(r - k) {
                y = f(y);
                q = mod_mul(q, x.abs_diff(y), n);
            }
            d = gcd(q, n);
            k += BATCH;
        }
        r <<= 1;
    }
    if d == n {
        // Batched gcd overshot; replay one step at a time.
        loop {
            ys = f(ys);
            d = gcd(x.abs_diff(ys), n);
            if d > 1 {
                break;
            }
        }
    }
    (d != n).then_some(d)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Smallest primitive root mod the odd prime q.
///
/// g generates (Z/qZ)* iff g^((q-1)/p) != 1 for every prime p | q - 1.
pub fn find_primitive_root(q: u64) -> u64 {
    debug_assert!(q >= 3 && is_prime(q));
    let mut prime_divisors = factorize(q - 1);
    prime_divisors.dedup();
    'candidate: for g in 2..q {
        for &p in &prime_divisors {
            if mod_pow(g, (q - 1) / p, q) == 1 {
                continue 'candidate;
            }
        }
        return g;
    }
    unreachable!("no primitive root below q = {q}");
}

/// The multiplicative structure of (Z/qZ)* in power-of-g order.
#[derive(Debug, Clone)]
pub struct PrimeContext {
    /// The odd prime modulus.
    pub q: u64,
    /// Smallest primitive root mod q.
    pub g: u64,
    /// Half the group order, (q - 1) / 2.
    pub m: usize,
    /// powers[k] = g^k mod q for k = 0..q-2; a permutation of 1..q-1
    /// with powers[k + m] = q - powers[k].
    pub powers: Vec<u64>,
}

/// Builds the context with the default table budget.
pub fn build_context(q: u64) -> Result<PrimeContext> {
    build_context_with_budget(q, DEFAULT_TABLE_ENTRIES)
}

/// Builds the context, rejecting q whose table would exceed `max_entries`.
pub fn build_context_with_budget(q: u64, max_entries: u64) -> Result<PrimeContext> {
    if q < 3 || q.is_multiple_of(2) || !is_prime(q) {
        return Err(Error::NotOddPrime(q));
    }
    let needed = q - 1;
    if needed > max_entries {
        return Err(Error::TableBudget {
            q,
            needed,
            budget: max_entries,
        });
    }
    let g = find_primitive_root(q);
    let mut powers = Vec::with_capacity(needed as usize);
    let mut x = 1u64;
    for _ in 0..needed {
        powers.push(x);
        x = mod_mul(x, g, q);
    }
    Ok(PrimeContext {
        q,
        g,
        m: (needed / 2) as usize,
        powers,
    })
}
