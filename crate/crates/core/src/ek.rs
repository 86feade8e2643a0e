//! Euler-Kronecker constants: the difference between the constant of the
//! q-th cyclotomic field and that of its maximal real subfield.
//!
//! The difference is a sum of logarithmic derivatives over the odd
//! characters mod q,
//!
//! ```text
//!     diff(q) = sum_{chi odd} L'(1, chi) / L(1, chi),
//! ```
//!
//! and for odd primitive chi the logarithmic derivative has the closed
//! form
//!
//! ```text
//!     L'(1, chi) / L(1, chi)
//!         = gamma + ln 2 pi + S_lg(chibar) / S_id(chibar),
//! ```
//!
//! with S_lg(chi) = sum_a chi(a) ln Gamma(a/q) and S_id(chi) the
//! generalized Bernoulli number B_{1,chi}. Both families of sums come out
//! of one fold and one fast transform each (see [`crate::transform`]), so
//! the whole difference costs two transforms of length (q-1)/2.
//!
//! Summed over all odd characters the conjugation inside the closed form
//! is invisible: chi -> chibar permutes the odd characters, so the total
//! is the same whether the sums are taken at chi or chibar, as long as
//! numerator and denominator stay paired at the same character. The
//! pairing is what matters, and what the tests pin down.
//!
//! The total is real; `residual_imag` reports the numerically accumulated
//! imaginary part as a health measure, and `normalized` scales the
//! difference by ln q, the natural unit for its growth.

use crate::arith::build_context_with_budget;
use crate::specfun::{EULER_GAMMA, LN_TWO_PI};
use crate::sum::NeumaierSum;
use crate::transform::{odd_character_sums, FoldKind, Sign};
use crate::{Limits, Result};

/// One evaluated Euler-Kronecker difference.
#[derive(Debug, Clone, Copy)]
pub struct EkResult {
    pub q: u64,
    /// The difference itself.
    pub diff: f64,
    /// diff / ln q.
    pub normalized: f64,
    /// Imaginary part left over by the term-by-term sum; should be ~0.
    pub residual_imag: f64,
}

pub fn ek_difference(q: u64) -> Result<EkResult> {
    ek_difference_with(q, &Limits::default())
}

pub fn ek_difference_with(q: u64, limits: &Limits) -> Result<EkResult> {
    let ctx = build_context_with_budget(q, limits.table_entries)?;
    let num = odd_character_sums(&ctx, FoldKind::LogGamma, Sign::Minus)?;
    let den = odd_character_sums(&ctx, FoldKind::Identity, Sign::Minus)?;
    let mut re = NeumaierSum::new();
    let mut im = NeumaierSum::new();
    for (n, d) in num.iter().zip(&den) {
        let ratio = n / d;
        re.add(ratio.re);
        im.add(ratio.im);
    }
    let m = ctx.m as f64;
    let diff = m * (EULER_GAMMA + LN_TWO_PI) + re.value();
    Ok(EkResult {
        q,
        diff,
        normalized: diff / (q as f64).ln(),
        residual_imag: im.value(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{build_context, is_prime};
    use crate::specfun::log_gamma;
    use crate::Error;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    #[test]
    fn q3_matches_closed_form() {
        // One odd character: diff = gamma + ln 2 pi + (lnG(1/3) - lnG(2/3)) / (-1/3).
        let want = EULER_GAMMA + LN_TWO_PI - 3.0 * (log_gamma(1.0 / 3.0) - log_gamma(2.0 / 3.0));
        let got = ek_difference(3).unwrap();
        assert!(
            (got.diff - want).abs() < 1e-12,
            "diff = {}, want {want}",
            got.diff
        );
        assert!((got.normalized - want / 3f64.ln()).abs() < 1e-12);
        assert!(got.residual_imag.abs() < 1e-15);
    }

    /// L'(1, chi) for the quadratic character mod 3, by direct
    /// Euler-Maclaurin summation of -sum chi(n) ln(n)/n. Nothing from the
    /// transform pipeline is involved.
    fn l_prime_chi3_oracle() -> f64 {
        let u = |x: f64| x.ln() / x;
        let k_max: u64 = 1 << 20;
        let mut partial = NeumaierSum::new();
        for k in 0..k_max {
            let x = (3 * k + 1) as f64;
            partial.add(u(x) - u(x + 1.0));
        }
        // Tail: integral (ln^2 x / 6 across one period) plus half the
        // boundary term; the next correction is ~1e-19 here.
        let lo = (3 * k_max + 1) as f64;
        let hi = (3 * k_max + 2) as f64;
        let tail = (hi.ln().powi(2) - lo.ln().powi(2)) / 6.0 + (u(lo) - u(hi)) / 2.0;
        -(partial.value() + tail)
    }

    #[test]
    fn q3_matches_dirichlet_series_oracle() {
        let l1 = PI / 27f64.sqrt();
        let want = l_prime_chi3_oracle() / l1;
        let got = ek_difference(3).unwrap().diff;
        assert!((got - want).abs() < 1e-9, "diff = {got}, oracle {want}");
    }

    #[test]
    fn matches_explicit_character_enumeration() {
        // Same formula, but with every character sum accumulated term by
        // term from explicit root powers instead of fold + transform.
        for q in (3..=100u64).filter(|&q| is_prime(q)) {
            let ctx = build_context(q).unwrap();
            let n = (q - 1) as usize;
            let mut total = Complex64::new(0.0, 0.0);
            for t in 0..ctx.m {
                let j = (2 * t + 1) as f64;
                let mut num = Complex64::new(0.0, 0.0);
                let mut den = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    let x = ctx.powers[k] as f64 / q as f64;
                    let w = Complex64::cis(-2.0 * PI * j * k as f64 / n as f64);
                    num += w * log_gamma(x);
                    den += w * x;
                }
                total += num / den;
            }
            let want = ctx.m as f64 * (EULER_GAMMA + LN_TWO_PI) + total.re;
            let got = ek_difference(q).unwrap();
            assert!(
                (got.diff - want).abs() <= 1e-9 * (1.0 + want.abs()),
                "q = {q}: diff = {}, brute force {want}",
                got.diff
            );
        }
    }

    #[test]
    fn totals_stay_real() {
        for q in (3..=10_000u64).filter(|&q| is_prime(q)) {
            let r = ek_difference(q).unwrap();
            assert!(
                r.residual_imag.abs() <= 1e-6 * (1.0 + r.diff.abs()),
                "q = {q}: residual imaginary part {:e}",
                r.residual_imag
            );
            assert!(r.diff.is_finite() && r.normalized.is_finite());
            assert!(
                (r.normalized * (q as f64).ln() - r.diff).abs()
                    <= 1e-12 * (1.0 + r.diff.abs()),
                "q = {q}: normalization drifted"
            );
        }
    }

    #[test]
    fn pairing_numerator_and_denominator_is_load_bearing() {
        // Taking the numerator sums at chi but the denominators at chibar
        // breaks the per-character pairing; the result must move. This
        // guards against the two folds silently disagreeing on kernel
        // orientation.
        for q in [5u64, 13, 101] {
            let ctx = build_context(q).unwrap();
            let num = odd_character_sums(&ctx, FoldKind::LogGamma, Sign::Plus).unwrap();
            let den = odd_character_sums(&ctx, FoldKind::Identity, Sign::Minus).unwrap();
            let mixed: f64 = num
                .iter()
                .zip(&den)
                .map(|(n, d)| (n / d).re)
                .sum::<f64>()
                + ctx.m as f64 * (EULER_GAMMA + LN_TWO_PI);
            let correct = ek_difference(q).unwrap().diff;
            assert!(
                (mixed - correct).abs() > 1e-6,
                "q = {q}: mismatched pairing went unnoticed ({mixed} vs {correct})"
            );
        }
    }

    #[test]
    fn consistent_conjugation_is_a_symmetry() {
        // Flipping both sums to the conjugate characters together must
        // leave the total untouched: conjugation permutes the odd
        // characters.
        for q in [5u64, 13, 101, 199] {
            let ctx = build_context(q).unwrap();
            let num = odd_character_sums(&ctx, FoldKind::LogGamma, Sign::Plus).unwrap();
            let den = odd_character_sums(&ctx, FoldKind::Identity, Sign::Plus).unwrap();
            let flipped: f64 = num.iter().zip(&den).map(|(n, d)| (n / d).re).sum::<f64>()
                + ctx.m as f64 * (EULER_GAMMA + LN_TWO_PI);
            let correct = ek_difference(q).unwrap().diff;
            assert!(
                (flipped - correct).abs() <= 1e-9 * (1.0 + correct.abs()),
                "q = {q}: {flipped} vs {correct}"
            );
        }
    }

    #[test]
    fn rejects_bad_moduli() {
        for q in [1u64, 2, 15] {
            match ek_difference(q) {
                Err(Error::NotOddPrime(bad)) => assert_eq!(bad, q),
                other => panic!("q = {q}: expected rejection, got {other:?}"),
            }
        }
    }
}
