//! Real special functions on the unit interval: pi-scaled cotangent,
//! digamma, and log-gamma.
//!
//! The folds in the transform layer never need these outside (0, 1), but
//! they need them to near machine precision there, including relative
//! accuracy close to the zero of log Gamma at 1. Three standard identities
//! do the heavy lifting:
//!
//! ```text
//!     psi(1 - x) - psi(x)       = pi cot(pi x)
//!     log Gamma(x) + log Gamma(1 - x) = log pi - log sin(pi x)
//!     psi(x + 1)                = psi(x) + 1/x
//! ```
//!
//! digamma uses upward recurrence into x >= 10 followed by the asymptotic
//! series with Bernoulli coefficients through B_14 (the next term is below
//! 1 ulp there). log-gamma uses the zeta series of log Gamma(1 + z) on
//! [-1/2, 1/2], which stays accurate in the relative sense as z -> 0, and
//! the Stirling series with the same Bernoulli tail beyond 2.5.

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// log(pi).
pub const LN_PI: f64 = 1.144_729_885_849_400_2;

/// log(2 pi).
pub const LN_TWO_PI: f64 = 1.837_877_066_409_345_5;

use std::f64::consts::PI;

/// cot(pi x) for 0 < x < 1.
///
/// Exactly zero at x = 1/2 and exactly antisymmetric about it: the
/// reflection 1 - x is lossless in binary64 on [1/2, 1], so the two
/// halves evaluate the same magnitudes with opposite signs.
pub fn cot_pi(x: f64) -> f64 {
    assert!(x > 0.0 && x < 1.0, "cot_pi needs 0 < x < 1, got {x}");
    if x == 0.5 {
        return 0.0;
    }
    if x > 0.5 {
        return -cot_pi(1.0 - x);
    }
    let (s, c) = (PI * x).sin_cos();
    c / s
}

/// Where the asymptotic series take over.
const ASYMPTOTIC_CUT: f64 = 10.0;

/// digamma(x) = Gamma'(x)/Gamma(x) for x > 0.
pub fn digamma(x: f64) -> f64 {
    assert!(x > 0.0, "digamma needs x > 0, got {x}");
    let mut x = x;
    let mut acc = 0.0;
    while x < ASYMPTOTIC_CUT {
        acc -= 1.0 / x;
        x += 1.0;
    }
    // psi(x) ~ ln x - 1/(2x) - sum_{n>=1} B_{2n} / (2n x^{2n})
    let w = 1.0 / (x * x);
    let series = w * (1.0 / 12.0
        + w * (-1.0 / 120.0
            + w * (1.0 / 252.0
                + w * (-1.0 / 240.0
                    + w * (1.0 / 132.0
                        + w * (-691.0 / 32760.0 + w * (1.0 / 12.0)))))));
    acc + x.ln() - 0.5 / x - series
}

/// log Gamma(x) for x > 0.
pub fn log_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "log_gamma needs x > 0, got {x}");
    if x < 0.5 {
        ln_gamma_1p(x) - x.ln()
    } else if x <= 1.5 {
        ln_gamma_1p(x - 1.0)
    } else if x <= 2.5 {
        ln_gamma_1p(x - 2.0) + (x - 1.0).ln()
    } else {
        let mut logs = 0.0;
        let mut x = x;
        while x < ASYMPTOTIC_CUT {
            logs += x.ln();
            x += 1.0;
        }
        stirling(x) - logs
    }
}

/// Stirling series for x >= 10, Bernoulli tail through B_14.
fn stirling(x: f64) -> f64 {
    let w = 1.0 / (x * x);
    let tail = (1.0 / 12.0
        + w * (-1.0 / 360.0
            + w * (1.0 / 1260.0
                + w * (-1.0 / 1680.0
                    + w * (1.0 / 1188.0
                        + w * (-691.0 / 360_360.0 + w * (1.0 / 156.0)))))))
        / x;
    (x - 0.5) * x.ln() - x + 0.5 * LN_TWO_PI + tail
}

/// (zeta(k) - 1) for k = 2, 3, ... used by the unit-interval series.
const ZETA_M1: [f64; 31] = [
    6.449_340_668_482_264e-1,
    2.020_569_031_595_943e-1,
    8.232_323_371_113_819e-2,
    3.692_775_514_336_993e-2,
    1.734_306_198_444_914e-2,
    8.349_277_381_922_827e-3,
    4.077_356_197_944_34e-3,
    2.008_392_826_082_214_3e-3,
    9.945_751_278_180_853e-4,
    4.941_886_041_194_645e-4,
    2.460_865_533_080_483e-4,
    1.227_133_475_784_891_4e-4,
    6.124_813_505_870_483e-5,
    3.058_823_630_702_049e-5,
    1.528_225_940_865_187e-5,
    7.637_197_637_899_762e-6,
    3.817_293_264_999_84e-6,
    1.908_212_716_553_939e-6,
    9.539_620_338_727_962e-7,
    4.769_329_867_878_064e-7,
    2.384_505_027_277_33e-7,
    1.192_199_259_653_110_6e-7,
    5.960_818_905_125_948e-8,
    2.980_350_351_465_228e-8,
    1.490_155_482_836_504_3e-8,
    7.450_711_789_835_43e-9,
    3.725_334_024_788_457e-9,
    1.862_659_723_513_049e-9,
    9.313_274_324_196_682e-10,
    4.656_629_065_033_784e-10,
    2.328_311_833_676_505_3e-10,
];

/// log Gamma(1 + z) on [-1/2, 1/2] via
/// -log(1+z) + z (1 - gamma) + sum_{k>=2} (-1)^k (zeta(k)-1) z^k / k.
///
/// All terms are O(z) as z -> 0, so the result keeps full relative
/// precision near the zero of log Gamma at 1 (needed where a/q -> 1).
fn ln_gamma_1p(z: f64) -> f64 {
    debug_assert!((-0.5..=0.5).contains(&z));
    let mut tail = 0.0;
    // Horner, highest term first; |terms| decay like (z/2)^k.
    for (i, zm1) in ZETA_M1.iter().enumerate().rev() {
        let k = (i + 2) as f64;
        let signed = if i % 2 == 0 { zm1 / k } else { -zm1 / k };
        tail = tail * z + signed;
    }
    tail = tail * z * z;
    -(z.ln_1p()) + z * (1.0 - EULER_GAMMA) + tail
}
