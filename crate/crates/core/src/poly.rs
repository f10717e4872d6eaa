//! Dense univariate polynomials with exact rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Result};
use crate::special::rational_to_f64;

/// Polynomial over Q stored as integer numerators over one positive common
/// denominator, ascending degree.
///
/// Canonical form: `gcd(numer..., denom) == 1`, `denom > 0`, and the leading
/// numerator is nonzero unless the polynomial is identically zero, in which
/// case it is stored as the single coefficient `0` (degree 0).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalPoly {
    numer: Vec<BigInt>,
    denom: BigInt,
}

impl RationalPoly {
    pub fn zero() -> Self {
        Self { numer: vec![BigInt::zero()], denom: BigInt::one() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The monomial `c t^k`.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        if coeffs.is_empty() {
            return Self::zero();
        }
        let denom = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let numer = coeffs.iter().map(|c| c.numer() * (&denom / c.denom())).collect();
        Self::from_parts(numer, denom)
    }

    /// Integer-coefficient polynomial.
    pub fn from_integers(numer: Vec<BigInt>) -> Self {
        Self::from_parts(numer, BigInt::one())
    }

    pub(crate) fn from_parts(numer: Vec<BigInt>, denom: BigInt) -> Self {
        let mut p = Self { numer, denom };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        assert!(!self.denom.is_zero(), "zero denominator");
        while self.numer.len() > 1 && self.numer.last().is_some_and(Zero::is_zero) {
            self.numer.pop();
        }
        if self.numer.is_empty() || self.numer.iter().all(Zero::is_zero) {
            *self = Self { numer: vec![BigInt::zero()], denom: BigInt::one() };
            return;
        }
        if self.denom.is_negative() {
            self.denom = -&self.denom;
            for c in &mut self.numer {
                *c = -&*c;
            }
        }
        let mut g = self.denom.clone();
        for c in &self.numer {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if !g.is_one() {
            for c in &mut self.numer {
                *c /= &g;
            }
            self.denom /= &g;
        }
    }

    pub fn degree(&self) -> usize {
        self.numer.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.numer.len() == 1 && self.numer[0].is_zero()
    }

    /// Coefficient of `t^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> BigRational {
        match self.numer.get(k) {
            Some(c) => BigRational::new(c.clone(), self.denom.clone()),
            None => BigRational::zero(),
        }
    }

    /// Coefficients in ascending degree order; `len == degree + 1`.
    pub fn coeffs(&self) -> Vec<BigRational> {
        (0..self.numer.len()).map(|k| self.coeff(k)).collect()
    }

    /// Integer numerators over [`Self::denominator`].
    pub fn numerators(&self) -> &[BigInt] {
        &self.numer
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denom
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.coeff(self.degree())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let numer = self.numer.iter().map(|a| a * c.numer()).collect();
        Self::from_parts(numer, &self.denom * c.denom())
    }

    /// `t ↦ p(c t)`.
    pub fn compose_scale(&self, c: &BigRational) -> Self {
        let mut num_pow = BigInt::one();
        let mut den_pow = BigInt::one();
        let deg = self.degree();
        // coefficient k gets c^k = num^k / den^k; bring to common denominator den^deg
        let mut den_powers = Vec::with_capacity(deg + 1);
        for _ in 0..=deg {
            den_powers.push(den_pow.clone());
            den_pow *= c.denom();
        }
        let numer = self
            .numer
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let v = a * &num_pow * &den_powers[deg - k];
                num_pow *= c.numer();
                v
            })
            .collect();
        Self::from_parts(numer, &self.denom * &den_powers[deg])
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut numer = vec![BigInt::zero(); k];
        numer.extend(self.numer.iter().cloned());
        Self { numer, denom: self.denom.clone() }
    }

    pub fn derivative(&self) -> Self {
        if self.degree() == 0 {
            return Self::zero();
        }
        let numer = self.numer.iter().enumerate().skip(1).map(|(k, a)| a * k).collect();
        Self::from_parts(numer, self.denom.clone())
    }

    /// Exact evaluation.
    pub fn eval(&self, t: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.numer.iter().rev() {
            acc = acc * t + BigRational::from_integer(c.clone());
        }
        acc / BigRational::from_integer(self.denom.clone())
    }

    /// Horner evaluation on `f64` coefficients. Cancels badly for
    /// high-degree alternating polynomials; see [`crate::laguerre::laguerre_f64`].
    pub fn eval_f64(&self, t: f64) -> f64 {
        let d = self.denom.to_f64().unwrap_or(f64::INFINITY);
        self.numer
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * t + rational_to_f64(&BigRational::new(c.clone(), BigInt::one())))
            / d
    }

    fn convolve(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    /// Exact m-th power by repeated squaring; `m ≥ 1`.
    pub fn pow(&self, m: u32) -> Result<Self> {
        poly_pow(self, m)
    }
}

/// Exact `m`-th power of `p` (`m ≥ 1`); degree is `m · deg(p)`.
pub fn poly_pow(p: &RationalPoly, m: u32) -> Result<RationalPoly> {
    if m == 0 {
        return invalid("poly_pow requires m >= 1");
    }
    let mut base = p.numer.clone();
    let mut acc: Option<Vec<BigInt>> = None;
    let mut e = m;
    loop {
        if e & 1 == 1 {
            acc = Some(match acc {
                None => base.clone(),
                Some(a) => RationalPoly::convolve(&a, &base),
            });
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        base = RationalPoly::convolve(&base, &base);
    }
    Ok(RationalPoly::from_parts(acc.expect("m >= 1"), num_traits::pow(p.denom.clone(), m as usize)))
}

/// Exact ∫₀^∞ t^j p(t) e^{−s t} dt = Σ_m c_m (j+m)! / s^{j+m+1}, for rational `s > 0`.
pub fn integrate_poly_exp(p: &RationalPoly, s: &BigRational, j: u32) -> Result<BigRational> {
    if !s.is_positive() {
        return invalid(format!("integrate_poly_exp requires s > 0, got {s}"));
    }
    let (a, b) = (s.numer(), s.denom());
    let deg = p.degree();
    let j = j as usize;
    // Σ_m num_m (j+m)! b^{j+m+1} a^{deg-m}  /  (denom · a^{j+deg+1})
    let mut a_pows = Vec::with_capacity(deg + 1);
    let mut ap = BigInt::one();
    for _ in 0..=deg {
        a_pows.push(ap.clone());
        ap *= a;
    }
    let mut fact = crate::special::factorial(j as u32);
    let mut b_pow = num_traits::pow(b.clone(), j + 1);
    let mut total = BigInt::zero();
    for (m, c) in p.numer.iter().enumerate() {
        if m > 0 {
            fact *= j + m;
            b_pow *= b;
        }
        if !c.is_zero() {
            total += c * &fact * &b_pow * &a_pows[deg - m];
        }
    }
    let denom = &p.denom * num_traits::pow(a.clone(), j + deg + 1);
    Ok(BigRational::new(total, denom))
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Add for &RationalPoly {
    type Output = RationalPoly;
    fn add(self, rhs: &RationalPoly) -> RationalPoly {
        let len = self.numer.len().max(rhs.numer.len());
        let numer = (0..len)
            .map(|k| {
                let a = self.numer.get(k).map_or_else(BigInt::zero, |c| c * &rhs.denom);
                let b = rhs.numer.get(k).map_or_else(BigInt::zero, |c| c * &self.denom);
                a + b
            })
            .collect();
        RationalPoly::from_parts(numer, &self.denom * &rhs.denom)
    }
}

impl Neg for &RationalPoly {
    type Output = RationalPoly;
    fn neg(self) -> RationalPoly {
        RationalPoly::from_parts(self.numer.iter().map(|c| -c).collect(), self.denom.clone())
    }
}

impl Sub for &RationalPoly {
    type Output = RationalPoly;
    fn sub(self, rhs: &RationalPoly) -> RationalPoly {
        self + &(-rhs)
    }
}

impl Mul for &RationalPoly {
    type Output = RationalPoly;
    fn mul(self, rhs: &RationalPoly) -> RationalPoly {
        RationalPoly::from_parts(RationalPoly::convolve(&self.numer, &rhs.numer), &self.denom * &rhs.denom)
    }
}

impl fmt::Debug for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalPoly({self})")
    }
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            first = false;
            let mag = c.abs();
            match k {
                0 => write!(f, "{mag}")?,
                1 => write!(f, "{mag}·t")?,
                _ => write!(f, "{mag}·t^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn poly(cs: &[(i64, i64)]) -> RationalPoly {
        RationalPoly::from_coeffs(cs.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    #[test]
    fn canonical_form() {
        let p = poly(&[(1, 2), (0, 1), (0, 1)]);
        assert_eq!(p.degree(), 0);
        assert_eq!(p.coeffs(), vec![rat(1, 2)]);
        assert!(poly(&[(0, 1), (0, 3)]).is_zero());
        assert_eq!(RationalPoly::zero().degree(), 0);
        assert_eq!(poly(&[(2, 4), (-3, 6)]), poly(&[(1, 2), (-1, 2)]));
    }

    #[test]
    fn powers() {
        assert_eq!(RationalPoly::one().pow(5).unwrap(), RationalPoly::one());
        assert_eq!(poly(&[(2, 1), (-1, 1)]).pow(2).unwrap(), poly(&[(4, 1), (-4, 1), (1, 1)]));
        // (3 − 3t + t²/2)² by schoolbook convolution
        assert_eq!(
            poly(&[(3, 1), (-3, 1), (1, 2)]).pow(2).unwrap(),
            poly(&[(9, 1), (-18, 1), (12, 1), (-3, 1), (1, 4)])
        );
        assert!(poly_pow(&RationalPoly::one(), 0).is_err());
    }

    #[test]
    fn exponential_moments() {
        let one = RationalPoly::one();
        assert_eq!(integrate_poly_exp(&one, &rat(1, 1), 0).unwrap(), rat(1, 1));
        // Γ(2q+1)/q^{2q+1} at q = 2
        assert_eq!(integrate_poly_exp(&one, &rat(2, 1), 4).unwrap(), rat(3, 4));
        let sq = poly(&[(2, 1), (-1, 1)]).pow(2).unwrap();
        assert_eq!(integrate_poly_exp(&sq, &rat(1, 1), 1).unwrap(), rat(2, 1));
        // rational rate: ∫ t e^{-t/2} = 4
        assert_eq!(integrate_poly_exp(&RationalPoly::monomial(rat(1, 1), 1), &rat(1, 2), 0).unwrap(), rat(4, 1));
        assert!(integrate_poly_exp(&one, &rat(0, 1), 0).is_err());
        assert!(integrate_poly_exp(&one, &rat(-1, 3), 0).is_err());
    }

    #[test]
    fn compose_and_derivative() {
        let p = poly(&[(1, 1), (2, 1), (3, 1)]);
        assert_eq!(p.compose_scale(&rat(1, 2)), poly(&[(1, 1), (1, 1), (3, 4)]));
        assert_eq!(p.derivative(), poly(&[(2, 1), (6, 1)]));
        assert_eq!(p.shift(2), poly(&[(0, 1), (0, 1), (1, 1), (2, 1), (3, 1)]));
        assert_eq!(format!("{}", poly(&[(3, 1), (-3, 1), (1, 2)])), "3 - 3·t + 1/2·t^2");
    }

    fn arb_poly() -> impl Strategy<Value = RationalPoly> {
        prop::collection::vec((-20i64..20, 1i64..6), 1..6)
            .prop_map(|cs| RationalPoly::from_coeffs(cs.into_iter().map(|(n, d)| rat(n, d)).collect()))
    }

    proptest! {
        #[test]
        fn product_evaluates_pointwise(a in arb_poly(), b in arb_poly(), x in -7i64..7, y in 1i64..5) {
            let t = rat(x, y);
            prop_assert_eq!((&a * &b).eval(&t), a.eval(&t) * b.eval(&t));
            prop_assert_eq!((&a + &b).eval(&t), a.eval(&t) + b.eval(&t));
            prop_assert_eq!(&a - &a, RationalPoly::zero());
        }

        #[test]
        fn power_degree_and_value(a in arb_poly(), m in 1u32..5) {
            let p = a.pow(m).unwrap();
            if !a.is_zero() {
                prop_assert_eq!(p.degree(), a.degree() * m as usize);
            }
            let t = rat(3, 2);
            prop_assert_eq!(p.eval(&t), num_traits::pow(a.eval(&t), m as usize));
        }
    }
}
