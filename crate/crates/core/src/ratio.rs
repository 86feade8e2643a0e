//! The relative class number ratio r(q) = h1(q) / G(q).
//!
//! For an odd prime q, h1(q) is the first factor of the class number of
//! the q-th cyclotomic field and G(q) = 2q (q / 4 pi^2)^((q-1)/4) is its
//! classical size estimate. The ratio factors over the odd Dirichlet
//! characters mod q,
//!
//! ```text
//!     r(q) = prod_{chi odd} L(1, chi),
//! ```
//!
//! and every engine here evaluates that product through the character
//! sums of [`crate::transform`]:
//!
//! * `Bernoulli`: L(1, chi) has magnitude pi |B_{1,chi}| / sqrt(q) where
//!   B_{1,chi} = sum_a chi(a) a/q is the identity-fold sum. Best
//!   conditioned, since every fold entry has magnitude at most one.
//! * `Digamma`: L(1, chi) = -(1/q) sum_a chi(a) psi(a/q), with the psi
//!   differences collapsed to a cotangent by the reflection formula, so
//!   the whole engine is one fold and one fast transform.
//! * `Oracle`: the same psi sums evaluated term by term against an
//!   explicit root table, no fold and no fast transform. Quadratic in q
//!   and capped by [`Limits::oracle_cap`]; it exists to check the others.
//!
//! Since r(q) is real and positive, the arguments of the character sums
//! must cancel: sum_t arg S[t] + pi m = 0 (mod 2 pi). Each result carries
//! the wrapped defect of that identity as a cheap full-pipeline
//! certificate; it holds regardless of method.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::arith::build_context_with_budget;
use crate::specfun::{digamma, LN_PI};
use crate::sum::NeumaierSum;
use crate::transform::{odd_character_sums, FoldKind, Sign};
use crate::{Error, Limits, Result};

/// Evaluation strategy for the product of L-values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Oracle,
    Digamma,
    Bernoulli,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Oracle, Method::Digamma, Method::Bernoulli];

    pub fn name(self) -> &'static str {
        match self {
            Method::Oracle => "oracle",
            Method::Digamma => "digamma",
            Method::Bernoulli => "bernoulli",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "oracle" => Ok(Method::Oracle),
            "digamma" => Ok(Method::Digamma),
            "bernoulli" => Ok(Method::Bernoulli),
            other => Err(format!(
                "unknown method '{other}' (expected oracle, digamma, or bernoulli)"
            )),
        }
    }
}

/// One evaluated ratio.
#[derive(Debug, Clone, Copy)]
pub struct KummerResult {
    pub q: u64,
    /// Natural log of the ratio; the primary output, exact to f64 effort.
    pub log_r: f64,
    /// exp(log_r), for reading.
    pub r: f64,
    pub method: Method,
    /// Wrapped defect of the argument identity; should be ~0.
    pub arg_defect: f64,
    pub elapsed_ns: u64,
}

/// log10 of G(q) = 2q (q / 4 pi^2)^((q-1)/4), the ratio's denominator.
/// Kept in log10 because G overflows f64 beyond q ~ 1400.
pub fn log10_g(q: u64) -> f64 {
    let qf = q as f64;
    (2.0 * qf).log10() + (qf - 1.0) / 4.0 * (qf / (4.0 * PI * PI)).log10()
}

pub fn kummer_ratio(q: u64, method: Method) -> Result<KummerResult> {
    kummer_ratio_with(q, method, &Limits::default())
}

pub fn kummer_ratio_with(q: u64, method: Method, limits: &Limits) -> Result<KummerResult> {
    let start = Instant::now();
    let (log_r, arg_defect) = match method {
        Method::Oracle => log_r_oracle(q, limits)?,
        Method::Digamma => log_r_digamma(q, limits)?,
        Method::Bernoulli => log_r_bernoulli(q, limits)?,
    };
    Ok(KummerResult {
        q,
        log_r,
        r: log_r.exp(),
        method,
        arg_defect,
        elapsed_ns: start.elapsed().as_nanos() as u64,
    })
}

/// Folds per-sum magnitudes (with a constant per-term offset, so each
/// accumulated term stays O(1)) and the argument certificate.
fn accumulate(sums: &[Complex64], per_term_offset: f64) -> (f64, f64) {
    let mut log_mag = NeumaierSum::new();
    let mut arg = NeumaierSum::new();
    for z in sums {
        log_mag.add(z.norm().ln() + per_term_offset);
        arg.add(z.im.atan2(z.re));
    }
    let defect = wrap_to_pi(arg.value() + PI * sums.len() as f64);
    (log_mag.value(), defect)
}

/// Reduce to (-pi, pi].
pub fn wrap_to_pi(x: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let r = x % two_pi;
    if r > PI {
        r - two_pi
    } else if r <= -PI {
        r + two_pi
    } else {
        r
    }
}

fn log_r_oracle(q: u64, limits: &Limits) -> Result<(f64, f64)> {
    if q > limits.oracle_cap {
        return Err(Error::OracleCap {
            q,
            cap: limits.oracle_cap,
        });
    }
    let ctx = build_context_with_budget(q, limits.table_entries)?;
    let n = (q - 1) as usize;
    let psi: Vec<f64> = ctx
        .powers
        .iter()
        .map(|&a| digamma(a as f64 / q as f64))
        .collect();
    let roots: Vec<Complex64> = (0..n)
        .map(|k| Complex64::cis(2.0 * PI * k as f64 / n as f64))
        .collect();
    let mut sums = Vec::with_capacity(ctx.m);
    for t in 0..ctx.m {
        // chi^j(a_k) = e(j k / (q-1)); walk the root index instead of
        // recomputing angles.
        let j = 2 * t + 1;
        let mut acc = Complex64::new(0.0, 0.0);
        let mut idx = 0usize;
        for &p in &psi {
            acc += roots[idx] * p;
            idx += j;
            if idx >= n {
                idx -= n;
            }
        }
        sums.push(acc);
    }
    // L(1, chi) = -S/q, so each |S| carries a 1/q and the sign joins the
    // argument identity.
    Ok(accumulate(&sums, -(q as f64).ln()))
}

fn log_r_digamma(q: u64, limits: &Limits) -> Result<(f64, f64)> {
    let ctx = build_context_with_budget(q, limits.table_entries)?;
    let sums = odd_character_sums(&ctx, FoldKind::Cotangent, Sign::Plus)?;
    Ok(accumulate(&sums, -(q as f64).ln()))
}

fn log_r_bernoulli(q: u64, limits: &Limits) -> Result<(f64, f64)> {
    let ctx = build_context_with_budget(q, limits.table_entries)?;
    let sums = odd_character_sums(&ctx, FoldKind::Identity, Sign::Plus)?;
    // |L(1, chi)| = pi |B_{1,chi}| / sqrt(q)
    Ok(accumulate(&sums, LN_PI - 0.5 * (q as f64).ln()))
}
