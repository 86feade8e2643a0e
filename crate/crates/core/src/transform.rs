//! Discrete Fourier transforms of arbitrary length and the folded
//! character sums built on them.
//!
//! In the ordering a_k = g^k mod q, the sum of chi(a) f(a/q) over the
//! nonzero residues a is the length-(q-1) DFT of f(a_k/q) evaluated at the
//! character's index: chi_1^j(a_k) = e(jk/(q-1)) with e(x) = exp(2 pi i x).
//! Odd characters sit at odd j. One decimation-in-frequency step splits
//! the transform into halves of length m = (q-1)/2,
//!
//! ```text
//!     full[2t]     = DFT_m(b)[t],   b_k = f_k + f_{k+m}
//!     full[2t + 1] = DFT_m(c)[t],   c_k = e(k/(q-1)) (f_k - f_{k+m})
//! ```
//!
//! and only the c half is ever needed. Since a_{k+m} = q - a_k, the
//! difference f_k - f_{k+m} collapses through a reflection identity for
//! every f of interest, so the fold touches just the first m table
//! entries. The remaining work is one length-m DFT, done by a planned
//! mixed-radix decomposition with direct kernels for prime radixes up to
//! 61 and the Bluestein chirp transform for larger prime lengths, so any
//! m runs in O(m log m) without external transform libraries.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::arith::PrimeContext;
use crate::specfun::{cot_pi, log_gamma, LN_PI};
use crate::{Error, Result};

/// Exponent sign of the kernel e^(sign 2 pi i t k / n): `Plus` matches
/// sums over chi, `Minus` the sums over the conjugate characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    #[inline]
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Relative magnitude floor under which a character sum is treated as a
/// numerical inconsistency: the L-values behind them never vanish.
pub const VANISHING_GUARD: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Reference transform: out[t] = sum_k input[k] e(sign 2 pi i t k / n),
/// O(n^2), every term's angle reduced exactly in integer arithmetic. This
/// is the oracle the planned path is checked against; it shares no code
/// with it.
pub fn dft_naive(input: &[Complex64], sign: Sign) -> Vec<Complex64> {
    let n = input.len();
    let s = sign.factor();
    (0..n)
        .map(|t| {
            let mut acc = ZERO;
            for (k, &x) in input.iter().enumerate() {
                let angle = s * 2.0 * PI * ((t * k) % n) as f64 / n as f64;
                acc += Complex64::cis(angle) * x;
            }
            acc
        })
        .collect()
}

/// Planned transform, any length, same contract as [`dft_naive`].
pub fn dft_fast(input: &[Complex64], sign: Sign) -> Vec<Complex64> {
    if input.len() <= 1 {
        return input.to_vec();
    }
    Plan::new(input.len(), sign).execute(input)
}

/// Largest prime length evaluated by a direct kernel; larger prime
/// lengths go through the chirp transform.
const SMALL_PRIME_MAX: usize = 61;

/// e(sign j / n) for j = 0..count-1.
fn root_table(n: usize, count: usize, sign: Sign) -> Vec<Complex64> {
    let s = sign.factor();
    (0..count)
        .map(|j| Complex64::cis(s * 2.0 * PI * j as f64 / n as f64))
        .collect()
}

fn smallest_prime_factor(n: usize) -> usize {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return d;
        }
        d += 2;
    }
    n
}

struct Plan {
    n: usize,
    algo: Algo,
}

enum Algo {
    /// Iterative radix-2 over a shared root table.
    Pow2(Pow2Kernel),
    /// Direct O(n^2) kernel, prime n <= SMALL_PRIME_MAX.
    Direct { table: Vec<Complex64> },
    /// n = p * rest: inner transforms on the p strided subsequences, then
    /// twiddled p-point transforms across them. The p-point step is a
    /// table-driven loop for small p and a sub-plan (chirp) for large p.
    CooleyTukey {
        p: usize,
        inner: Box<Plan>,
        table: Vec<Complex64>,
        butterfly: Option<Box<Plan>>,
    },
    /// Bluestein chirp transform, prime n > SMALL_PRIME_MAX: rewrite
    /// t k = (t^2 + k^2 - (t-k)^2) / 2 and convolve against the chirp in a
    /// padded power-of-two transform.
    Bluestein {
        chirp: Vec<Complex64>,
        spectrum: Vec<Complex64>,
        pad: Pow2Kernel,
    },
}

impl Plan {
    fn new(n: usize, sign: Sign) -> Plan {
        debug_assert!(n >= 2);
        if n.is_power_of_two() {
            return Plan {
                n,
                algo: Algo::Pow2(Pow2Kernel::new(n, sign)),
            };
        }
        let p = smallest_prime_factor(n);
        if p == n {
            if n <= SMALL_PRIME_MAX {
                Plan {
                    n,
                    algo: Algo::Direct {
                        table: root_table(n, n, sign),
                    },
                }
            } else {
                Plan {
                    n,
                    algo: bluestein(n, sign),
                }
            }
        } else {
            Plan {
                n,
                algo: Algo::CooleyTukey {
                    p,
                    inner: Box::new(Plan::new(n / p, sign)),
                    table: root_table(n, n, sign),
                    butterfly: (p > SMALL_PRIME_MAX).then(|| Box::new(Plan::new(p, sign))),
                },
            }
        }
    }

    fn execute(&self, input: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(input.len(), self.n);
        match &self.algo {
            Algo::Pow2(kernel) => {
                let mut buf = input.to_vec();
                kernel.run(&mut buf);
                buf
            }
            Algo::Direct { table } => {
                let n = self.n;
                (0..n)
                    .map(|t| {
                        let mut acc = ZERO;
                        let mut idx = 0;
                        for &x in input {
                            acc += table[idx] * x;
                            idx += t;
                            if idx >= n {
                                idx -= n;
                            }
                        }
                        acc
                    })
                    .collect()
            }
            Algo::CooleyTukey {
                p,
                inner,
                table,
                butterfly,
            } => {
                let (p, n) = (*p, self.n);
                let rest = n / p;
                let mut sub = vec![ZERO; rest];
                let ys: Vec<Vec<Complex64>> = (0..p)
                    .map(|r| {
                        for (j, v) in sub.iter_mut().enumerate() {
                            *v = input[p * j + r];
                        }
                        inner.execute(&sub)
                    })
                    .collect();
                let mut out = vec![ZERO; n];
                let mut col = vec![ZERO; p];
                for k0 in 0..rest {
                    for (r, v) in col.iter_mut().enumerate() {
                        *v = table[r * k0] * ys[r][k0];
                    }
                    match butterfly {
                        Some(plan) => {
                            for (k1, v) in plan.execute(&col).into_iter().enumerate() {
                                out[k1 * rest + k0] = v;
                            }
                        }
                        None => {
                            for k1 in 0..p {
                                // e(sign r k1 / p) = table[r k1 rest mod n]
                                let step = k1 * rest;
                                let mut acc = col[0];
                                let mut idx = 0;
                                for &t in &col[1..] {
                                    idx += step;
                                    if idx >= n {
                                        idx -= n;
                                    }
                                    acc += table[idx] * t;
                                }
                                out[k1 * rest + k0] = acc;
                            }
                        }
                    }
                }
                out
            }
            Algo::Bluestein {
                chirp,
                spectrum,
                pad,
            } => {
                let n = self.n;
                let padn = pad.n;
                let mut buf = vec![ZERO; padn];
                for (v, (&x, &c)) in buf.iter_mut().zip(input.iter().zip(chirp)) {
                    *v = x * c;
                }
                pad.run(&mut buf);
                for (v, &h) in buf.iter_mut().zip(spectrum) {
                    *v *= h;
                }
                // Inverse padded transform via conjugation.
                for v in buf.iter_mut() {
                    *v = v.conj();
                }
                pad.run(&mut buf);
                let scale = 1.0 / padn as f64;
                (0..n).map(|t| buf[t].conj() * scale * chirp[t]).collect()
            }
        }
    }
}

fn bluestein(n: usize, sign: Sign) -> Algo {
    let padn = (2 * n - 1).next_power_of_two();
    let two_n = 2 * n as u128;
    let s = sign.factor();
    // chirp[k] = e(sign k^2 / 2n); k^2 is reduced mod 2n as an integer
    // first, otherwise the angle loses precision once k^2 outgrows the
    // 53-bit mantissa.
    let chirp: Vec<Complex64> = (0..n)
        .map(|k| {
            let sq = ((k as u128 * k as u128) % two_n) as f64;
            Complex64::cis(s * PI * sq / n as f64)
        })
        .collect();
    let pad = Pow2Kernel::new(padn, sign);
    let mut kernel = vec![ZERO; padn];
    kernel[0] = chirp[0].conj();
    for j in 1..n {
        let c = chirp[j].conj();
        kernel[j] = c;
        kernel[padn - j] = c;
    }
    pad.run(&mut kernel);
    Algo::Bluestein {
        chirp,
        spectrum: kernel,
        pad,
    }
}

/// Iterative radix-2 transform over a precomputed half table.
struct Pow2Kernel {
    n: usize,
    half_table: Vec<Complex64>,
}

impl Pow2Kernel {
    fn new(n: usize, sign: Sign) -> Self {
        debug_assert!(n.is_power_of_two());
        Pow2Kernel {
            n,
            half_table: root_table(n, n / 2, sign),
        }
    }

    fn run(&self, buf: &mut [Complex64]) {
        let n = self.n;
        debug_assert_eq!(buf.len(), n);
        let mut j = 0usize;
        for i in 1..n {
            let mut bit = n >> 1;
            while j & bit != 0 {
                j ^= bit;
                bit >>= 1;
            }
            j |= bit;
            if i < j {
                buf.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let half = len >> 1;
            let stride = n / len;
            let mut base = 0;
            while base < n {
                for k in 0..half {
                    let w = self.half_table[k * stride];
                    let a = buf[base + k];
                    let b = buf[base + half + k] * w;
                    buf[base + k] = a + b;
                    buf[base + half + k] = a - b;
                }
                base += len;
            }
            len <<= 1;
        }
    }
}

/// One decimation-in-frequency step in the primitive-root ordering.
///
/// For real f of length q - 1 with f[k] standing for f(a_k/q), returns
/// (b, c) of length m: the even-index half of the full transform is the
/// m-DFT of b, the odd-index half the m-DFT of c (see the module notes).
pub fn dif_fold(f: &[f64], ctx: &PrimeContext, sign: Sign) -> (Vec<Complex64>, Vec<Complex64>) {
    let n = (ctx.q - 1) as usize;
    assert_eq!(f.len(), n, "fold input must have length q - 1");
    let m = ctx.m;
    let s = sign.factor();
    let mut b = Vec::with_capacity(m);
    let mut c = Vec::with_capacity(m);
    for k in 0..m {
        b.push(Complex64::new(f[k] + f[k + m], 0.0));
        let tw = Complex64::cis(s * 2.0 * PI * k as f64 / n as f64);
        c.push(tw * (f[k] - f[k + m]));
    }
    (b, c)
}

/// Which f(a/q) the folded character sums use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FoldKind {
    /// f(x) = x; S[t] is the generalized Bernoulli number B_{1,chi}.
    Identity,
    /// f(x) = psi(x); the fold is -pi cot(pi a_k/q) by the psi reflection.
    Cotangent,
    /// f(x) = log Gamma(x); the fold closes via the sine reflection.
    LogGamma,
}

/// All odd-character sums S[t] = sum_a chi^{2t+1}(a) f(a/q) for
/// t = 0..m-1 (sign `Plus`), or the sums over the conjugate characters
/// chibar^{2t+1} (sign `Minus`, which flips both the fold twiddle and the
/// transform kernel together).
///
/// The identity and cotangent outputs are guarded: they are nonzero
/// multiples of L(1, chi) != 0, so a vanishing entry is reported as an
/// inconsistency rather than returned.
pub fn odd_character_sums(
    ctx: &PrimeContext,
    kind: FoldKind,
    sign: Sign,
) -> Result<Vec<Complex64>> {
    let c = fold_values(ctx, kind, sign);
    let sums = dft_fast(&c, sign);
    if matches!(kind, FoldKind::Identity | FoldKind::Cotangent) {
        check_not_vanishing(&sums)?;
    }
    Ok(sums)
}

/// The twisted fold c_k for the given kind, collapsed through the
/// reflection identity of its f.
fn fold_values(ctx: &PrimeContext, kind: FoldKind, sign: Sign) -> Vec<Complex64> {
    let q = ctx.q as f64;
    let n = (ctx.q - 1) as usize;
    let s = sign.factor();
    (0..ctx.m)
        .map(|k| {
            let x = ctx.powers[k] as f64 / q;
            let diff = match kind {
                FoldKind::Identity => 2.0 * x - 1.0,
                FoldKind::Cotangent => -PI * cot_pi(x),
                FoldKind::LogGamma => 2.0 * log_gamma(x) + (PI * x).sin().ln() - LN_PI,
            };
            Complex64::cis(s * 2.0 * PI * k as f64 / n as f64) * diff
        })
        .collect()
}

fn check_not_vanishing(sums: &[Complex64]) -> Result<()> {
    let max = sums.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return Err(Error::VanishingCharacterSum {
            index: 0,
            magnitude: 0.0,
        });
    }
    for (index, z) in sums.iter().enumerate() {
        let magnitude = z.norm();
        if magnitude < VANISHING_GUARD * max {
            return Err(Error::VanishingCharacterSum { index, magnitude });
        }
    }
    Ok(())
}
