//! Generalized Laguerre polynomials L_n^(α): exact coefficients, the degree
//! recurrence, and overflow-safe floating evaluation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::poly::RationalPoly;
use crate::special::{binomial, factorial};

/// Degree and (integer) parameter of L_n^(α).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LaguerreParams {
    pub n: u32,
    pub alpha: u32,
}

impl LaguerreParams {
    pub const fn new(n: u32, alpha: u32) -> Self {
        Self { n, alpha }
    }
}

/// L_n^(α) from the explicit series Σ_k (−1)^k C(n+α, n−k) t^k / k!.
pub fn laguerre_poly(params: LaguerreParams) -> RationalPoly {
    let LaguerreParams { n, alpha } = params;
    let top = u64::from(n) + u64::from(alpha);
    // common denominator n!: coefficient k is (−1)^k C(n+α, n−k) n!/k!
    let n_fact = factorial(n);
    let mut k_fact = BigInt::one();
    let numer = (0..=n)
        .map(|k| {
            if k > 0 {
                k_fact *= k;
            }
            let c = binomial(top, u64::from(n - k)) * (&n_fact / &k_fact);
            if k % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect();
    RationalPoly::from_parts(numer, n_fact)
}

/// L_n^(α) built from (k+1) L_{k+1} = (2k+1+α−t) L_k − (k+α) L_{k−1}.
pub fn laguerre_poly_by_recurrence(params: LaguerreParams) -> RationalPoly {
    let alpha = BigRational::from_integer(params.alpha.into());
    let mut prev = RationalPoly::one();
    if params.n == 0 {
        return prev;
    }
    let t = RationalPoly::monomial(BigRational::one(), 1);
    let mut cur = &RationalPoly::constant(&alpha + BigRational::one()) - &t;
    for k in 1..params.n {
        let kk = BigRational::from_integer(k.into());
        let lin = &RationalPoly::constant(BigRational::from_integer((2 * k + 1).into()) + &alpha) - &t;
        let next = &(&lin * &cur) - &prev.scale(&(&kk + &alpha));
        let next = next.scale(&(BigRational::one() / (kk + BigRational::one())));
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// Coefficients `(a, b, c)` of t·L_{2k}^(2) = a·L_{2k}^(2) + b·L_{2k+1}^(2) + c·L_{2k−1}^(2).
pub fn recurrence_step(k: u32) -> (i64, i64, i64) {
    let k = i64::from(k);
    (4 * k + 3, -(2 * k + 1), -(2 * k + 2))
}

const RESCALE_LIMIT: f64 = 1e150;
const RESCALE_EXP2: i32 = 498; // 2^498 ≈ 1e150

/// `L_m^(α)(t)` and `L_{m−1}^(α)(t)` sharing a power-of-two scale:
/// the true values are `current · 2^exp2` and `previous · 2^exp2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledLaguerre {
    pub current: f64,
    pub previous: f64,
    pub exp2: i32,
}

impl ScaledLaguerre {
    /// ln |L_m^(α)(t)|; `-inf` at a zero.
    pub fn ln_abs(&self) -> f64 {
        self.current.abs().ln() + f64::from(self.exp2) * std::f64::consts::LN_2
    }

    pub fn value(&self) -> f64 {
        self.current * 2f64.powi(self.exp2)
    }
}

/// Forward three-term recurrence in `t`, rescaling to avoid overflow.
/// `previous` is 0 when `m == 0`.
pub fn laguerre_scaled(m: u32, alpha: u32, t: f64) -> ScaledLaguerre {
    let a = f64::from(alpha);
    let mut prev = 0.0;
    let mut cur = 1.0;
    let mut exp2 = 0;
    for k in 0..m {
        let kf = f64::from(k);
        let next = ((2.0 * kf + 1.0 + a - t) * cur - (kf + a) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_LIMIT {
            let s = 2f64.powi(-RESCALE_EXP2);
            cur *= s;
            prev *= s;
            exp2 += RESCALE_EXP2;
        }
    }
    ScaledLaguerre { current: cur, previous: prev, exp2 }
}

/// L_m^(α)(t) in floating point via the degree recurrence (stable where the
/// coefficient form cancels catastrophically). Overflows to ±inf only when
/// the true value does.
pub fn laguerre_f64(m: u32, alpha: u32, t: f64) -> f64 {
    laguerre_scaled(m, alpha, t).value()
}

/// Σ_k θ_k L_k^(0)(z) as an exact polynomial in z.
pub fn laguerre_series(coeffs: &[BigRational]) -> RationalPoly {
    coeffs.iter().enumerate().fold(RationalPoly::zero(), |acc, (k, c)| {
        if c.is_zero() {
            acc
        } else {
            &acc + &laguerre_poly(LaguerreParams::new(k as u32, 0)).scale(c)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::integrate_poly_exp;
    use num_traits::ToPrimitive;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// Brute-force oracle: Σ_k (−1)^k C(n+α, n−k) t^k / k! with plain rationals.
    fn series_oracle(n: u32, alpha: u32) -> Vec<BigRational> {
        (0..=n)
            .map(|k| {
                let c = BigRational::new(binomial(u64::from(n + alpha), u64::from(n - k)), factorial(k));
                if k % 2 == 1 {
                    -c
                } else {
                    c
                }
            })
            .collect()
    }

    #[test]
    fn low_degree_polynomials() {
        assert_eq!(laguerre_poly(LaguerreParams::new(0, 1)), RationalPoly::one());
        assert_eq!(laguerre_poly(LaguerreParams::new(1, 1)).coeffs(), vec![rat(2, 1), rat(-1, 1)]);
        assert_eq!(laguerre_poly(LaguerreParams::new(2, 1)).coeffs(), vec![rat(3, 1), rat(-3, 1), rat(1, 2)]);
        for (n, alpha) in [(5, 0), (7, 1), (9, 2)] {
            assert_eq!(laguerre_poly(LaguerreParams::new(n, alpha)).coeffs(), series_oracle(n, alpha));
        }
    }

    #[test]
    fn orthogonality_is_exact() {
        let one = rat(1, 1);
        for alpha in 0..=2u32 {
            let polys: Vec<_> = (0..=12).map(|n| laguerre_poly(LaguerreParams::new(n, alpha))).collect();
            for (n, pn) in polys.iter().enumerate() {
                for (m, pm) in polys.iter().enumerate() {
                    let got = integrate_poly_exp(&(pn * pm), &one, alpha).unwrap();
                    let want = if n == m {
                        BigRational::new(factorial(n as u32 + alpha), factorial(n as u32))
                    } else {
                        BigRational::zero()
                    };
                    assert_eq!(got, want, "alpha={alpha} n={n} m={m}");
                }
            }
        }
    }

    #[test]
    fn series_matches_recurrence() {
        for alpha in 0..=2 {
            for n in 0..=30 {
                let p = LaguerreParams::new(n, alpha);
                assert_eq!(laguerre_poly(p), laguerre_poly_by_recurrence(p), "n={n} alpha={alpha}");
            }
        }
    }

    #[test]
    fn recurrence_triples() {
        assert_eq!(recurrence_step(0), (3, -1, -2));
        assert_eq!(recurrence_step(1), (7, -3, -4));
        assert_eq!(recurrence_step(2), (11, -5, -6));
        // the identity itself, exactly, for k ≤ 6 (L_{-1} ≡ 0)
        let t = RationalPoly::monomial(rat(1, 1), 1);
        for k in 0..=6u32 {
            let (a, b, c) = recurrence_step(k);
            let l = |m: i64| {
                if m < 0 {
                    RationalPoly::zero()
                } else {
                    laguerre_poly(LaguerreParams::new(m as u32, 2))
                }
            };
            let m = 2 * i64::from(k);
            let rhs = &(&l(m).scale(&rat(a, 1)) + &l(m + 1).scale(&rat(b, 1))) + &l(m - 1).scale(&rat(c, 1));
            assert_eq!(&t * &l(m), rhs, "k={k}");
        }
    }

    #[test]
    fn floating_recurrence_matches_exact_values() {
        // Error is measured against the local magnitude max(|L_{n−1}|, |L_n|, |L_{n+1}|):
        // neighbouring degrees interlace, so the scale never vanishes at a root of L_n.
        for n in [1u32, 5, 12, 25, 40, 50] {
            let polys: Vec<_> = (n - 1..=n + 1).map(|m| laguerre_poly(LaguerreParams::new(m, 1))).collect();
            let mut worst: f64 = 0.0;
            for i in 0..200 {
                let t = 0.013 + 0.37 * f64::from(i) * (f64::from(n) + 2.0) / 40.0;
                let tq = BigRational::from_float(t).unwrap();
                let vals: Vec<f64> = polys.iter().map(|p| p.eval(&tq).to_f64().unwrap()).collect();
                let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                let got = laguerre_f64(n, 1, t);
                worst = worst.max(((got - vals[1]) / scale).abs());
            }
            assert!(worst < 1e-13, "n={n}: worst relative error {worst:e}");
        }
    }

    #[test]
    fn scaled_evaluation_survives_overflow() {
        let n = 299;
        let p = laguerre_poly(LaguerreParams::new(n, 1));
        let exact = p.eval(&rat(2000, 1));
        let s = laguerre_scaled(n, 1, 2000.0);
        assert!(s.exp2 > 0);
        assert!(s.value().is_infinite());
        let want = crate::special::ln_rational(&num_traits::Signed::abs(&exact)).unwrap();
        assert!((s.ln_abs() - want).abs() < 1e-11 * want, "{} vs {want}", s.ln_abs());
        assert_eq!(laguerre_f64(0, 1, 3.0), 1.0);
        assert!((laguerre_f64(1, 1, 0.5) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn series_of_laguerre_basis() {
        let s = laguerre_series(&[rat(1, 1), rat(2, 1)]);
        assert_eq!(s.coeffs(), vec![rat(3, 1), rat(-2, 1)]);
    }
}
