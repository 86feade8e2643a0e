//! Segmented sieve for the scan ranges.

/// Upper end of the supported sieve range; big enough for any scan that
/// could finish, small enough that p^2 arithmetic below cannot wrap.
pub const SIEVE_LIMIT: u64 = 1 << 44;

/// Odd primes in [lo, hi], ascending. 2 is never returned: every consumer
/// here wants odd prime moduli.
pub fn odd_primes_between(lo: u64, hi: u64) -> Vec<u64> {
    assert!(hi <= SIEVE_LIMIT, "sieve range ends beyond {SIEVE_LIMIT}");
    if hi < 3 || hi < lo {
        return Vec::new();
    }
    let lo = lo.max(3);
    let root = (hi as f64).sqrt() as u64 + 2;
    let base = small_primes(root);
    let mut out = Vec::new();
    const SEGMENT: u64 = 1 << 20;
    let mut seg_lo = lo;
    let mut composite = vec![false; SEGMENT as usize];
    while seg_lo <= hi {
        let seg_hi = hi.min(seg_lo + SEGMENT - 1);
        let len = (seg_hi - seg_lo + 1) as usize;
        composite[..len].fill(false);
        for &p in &base {
            if p * p > seg_hi {
                break;
            }
            // first multiple of p in the segment, at least p^2
            let mut from = seg_lo.div_ceil(p) * p;
            if from < p * p {
                from = p * p;
            }
            let mut at = from;
            while at <= seg_hi {
                composite[(at - seg_lo) as usize] = true;
                at += p;
            }
        }
        let mut v = seg_lo + seg_lo.is_multiple_of(2) as u64; // first odd in segment
        while v <= seg_hi {
            if !composite[(v - seg_lo) as usize] {
                out.push(v);
            }
            v += 2;
        }
        seg_lo = seg_hi + 1;
    }
    out
}

/// Primes up to and including `limit`, the classic bit-per-integer way.
fn small_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for p in 2..=n {
        if composite[p] {
            continue;
        }
        out.push(p as u64);
        let mut at = p * p;
        while at <= n {
            composite[at] = true;
            at += p;
        }
    }
    out
}
