//! Scalar special functions: gamma, digamma, Pochhammer symbols, binomials.
//!
//! Integer-argument quantities are exact (`BigInt` / `BigRational`); the
//! real-argument ones are `f64`.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Digamma ψ(n) at a positive integer: −γ + Σ_{j=1}^{n−1} 1/j.
pub fn digamma(n: u32) -> Result<f64> {
    if n == 0 {
        return invalid("digamma is undefined at nonpositive integers (n = 0)");
    }
    // summed smallest-first
    let harmonic: f64 = (1..n).rev().map(|j| 1.0 / f64::from(j)).sum();
    Ok(harmonic - EULER_GAMMA)
}

/// Rising factorial (a)_m = a (a+1) ⋯ (a+m−1), exact.
pub fn pochhammer(a: &BigRational, m: u32) -> BigRational {
    let mut acc = BigRational::one();
    let mut term = a.clone();
    for _ in 0..m {
        if term.is_zero() {
            return BigRational::zero();
        }
        acc *= &term;
        term += BigRational::one();
    }
    acc
}

/// Integer rising factorial (a)_m.
pub fn pochhammer_int(a: i64, m: u32) -> BigInt {
    (0..i64::from(m)).fold(BigInt::one(), |acc, j| acc * BigInt::from(a + j))
}

pub fn factorial(n: u32) -> BigInt {
    (2..=u64::from(n)).fold(BigInt::one(), |acc, j| acc * j)
}

/// Binomial coefficient C(n, k); zero when k > n.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// ln Γ(x) for x > 0 (Lanczos, g = 7; reflection below 1/2).
pub fn log_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return invalid(format!("log_gamma requires a finite positive argument, got {x}"));
    }
    Ok(ln_gamma_positive(x))
}

fn ln_gamma_positive(x: f64) -> f64 {
    use std::f64::consts::PI;
    if x < 0.5 {
        // Γ(x)Γ(1−x) = π / sin(πx)
        return (PI / (PI * x).sin()).ln() - ln_gamma_positive(1.0 - x);
    }
    let x = x - 1.0;
    let t = x + LANCZOS_G + 0.5;
    let series =
        LANCZOS_COEFFS.iter().enumerate().skip(1).fold(LANCZOS_COEFFS[0], |acc, (i, c)| acc + c / (x + i as f64));
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + series.ln()
}

/// Natural log of |b| for an arbitrarily large integer; `-inf` at zero.
pub fn ln_bigint(b: &BigInt) -> f64 {
    if b.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = b.bits();
    if bits <= 1000 {
        return b.abs().to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top: BigInt = b.abs() >> shift;
    top.to_f64().unwrap_or(f64::INFINITY).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of a positive rational, without overflowing on huge parts.
pub fn ln_rational(r: &BigRational) -> Result<f64> {
    if r.numer().sign() != Sign::Plus {
        return invalid("logarithm of a nonpositive rational");
    }
    Ok(ln_bigint(r.numer()) - ln_bigint(r.denom()))
}

/// Rational to nearest-ish f64, finite whenever the magnitude fits.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() && (v != 0.0 || r.is_zero()) {
            return v;
        }
    }
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    sign * (ln_bigint(r.numer()) - ln_bigint(r.denom())).exp()
}
