//! Entropic functionals of Laguerre polynomials.
//!
//! `I_q[L_{n−1}^(1)] = ∫₀^∞ t^{2q} e^{−qt} [L_{n−1}^(1)(t)]^{2q} dt` by three
//! independent exact routes (polynomial expansion, the terminating
//! Lauricella multi-sum, and the n = 1, 2 closed forms) plus quadrature for
//! real `q`; the linearization coefficients θ_k; and the logarithmic
//! functional `E₁[L_{n−1}^(1)] = ∫ t² e^{−t} L² ln L² dt`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{invalid, Error, Result, Size};
use crate::laguerre::{laguerre_poly, laguerre_scaled, LaguerreParams};
use crate::poly::{integrate_poly_exp, RationalPoly};
use crate::quadrature::{integrate_semiinfinite, CompositePlan, Estimate, Tolerance};
use crate::special::{binomial, factorial, pochhammer_int, rational_to_f64};

/// Largest `n` accepted by [`e1_log_functional`].
pub const E1_MAX_N: u32 = 150;

/// Size caps for the exact routes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum degree `2q(n−1)` of the expanded power.
    pub degree_cap: usize,
    /// Maximum number of multi-sum terms `n^{2q}`.
    pub term_cap: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Self { degree_cap: 4000, term_cap: 10_000_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MomentMethod {
    LauricellaSum,
    PolyExpansion,
    Quadrature,
    ClosedFormN1,
    ClosedFormN2,
}

impl MomentMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            MomentMethod::LauricellaSum => "lauricella_sum",
            MomentMethod::PolyExpansion => "poly_expansion",
            MomentMethod::Quadrature => "quadrature",
            MomentMethod::ClosedFormN1 => "closed_form_n1",
            MomentMethod::ClosedFormN2 => "closed_form_n2",
        }
    }
}

/// A moment-type value with its exact form (when available) and the route
/// that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentResult {
    pub exact: Option<BigRational>,
    pub approx: f64,
    pub method: MomentMethod,
    pub n: u32,
    pub q: f64,
}

impl MomentResult {
    pub(crate) fn from_exact(exact: BigRational, method: MomentMethod, n: u32, q: u32) -> Self {
        let approx = rational_to_f64(&exact);
        Self { exact: Some(exact), approx, method, n, q: f64::from(q) }
    }

    /// `true` if this and `other` carry identical exact values.
    pub fn exact_eq(&self, other: &MomentResult) -> bool {
        matches!((&self.exact, &other.exact), (Some(a), Some(b)) if a == b)
    }
}

/// One linearization coefficient θ_k of `(qt)^{2q} [L_{n−1}^(1)(t)]^{2q} = Σ_k θ_k L_k(qt)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaCoefficient {
    pub k: u32,
    pub value: BigRational,
    pub q: u32,
    pub n: u32,
}

fn check_nq(n: u32, q: u32) -> Result<()> {
    if n == 0 {
        return invalid("state index n must be >= 1");
    }
    if q == 0 {
        return invalid("entropic order q must be >= 1 for the exact routes");
    }
    Ok(())
}

fn int(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

/// (2q)! / q^{2q+1}
fn ground_state_value(q: u32) -> BigRational {
    BigRational::new(factorial(2 * q), num_traits::pow(BigInt::from(q), 2 * q as usize + 1))
}

fn memo() -> &'static Mutex<HashMap<(u32, u32), BigRational>> {
    static MEMO: OnceLock<Mutex<HashMap<(u32, u32), BigRational>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The production route: expand `[L_{n−1}^(1)]^{2q}` exactly and integrate
/// termwise against `t^{2q} e^{−qt}`.
pub fn iq_poly_expansion(n: u32, q: u32) -> Result<MomentResult> {
    iq_poly_expansion_with(n, q, &Limits::default())
}

pub fn iq_poly_expansion_with(n: u32, q: u32, limits: &Limits) -> Result<MomentResult> {
    check_nq(n, q)?;
    let degree = 2 * u128::from(q) * u128::from(n - 1);
    if degree > limits.degree_cap as u128 {
        return Err(Error::Capacity {
            route: "iq_poly_expansion (degree cap)",
            needed: Size::Exactly(degree),
            cap: limits.degree_cap as u128,
        });
    }
    let cached = memo().lock().expect("memo poisoned").get(&(n, q)).cloned();
    let value = match cached {
        Some(v) => v,
        None => {
            let base = laguerre_poly(LaguerreParams::new(n - 1, 1));
            let power = base.pow(2 * q)?;
            let v = integrate_poly_exp(&power, &int(q), 2 * q)?;
            memo().lock().expect("memo poisoned").insert((n, q), v.clone());
            v
        }
    };
    Ok(MomentResult::from_exact(value, MomentMethod::PolyExpansion, n, q))
}

/// Bucketed multi-sum: `C_M = Σ_{m_1+…+m_{2q}=M} Π_i a_{m_i}` with
/// `a_m = (−n+1)_m / ((2)_m m! q^m)`, enumerating every index tuple.
/// Returns integer buckets and the common denominator they are over.
fn lauricella_buckets(n: u32, q: u32, limits: &Limits) -> Result<(Vec<BigInt>, BigInt)> {
    let depth = 2 * q as usize;
    let terms = u128::from(n).checked_pow(2 * q);
    match terms {
        Some(t) if t <= limits.term_cap => {}
        _ => {
            return Err(Error::Capacity {
                route: "iq_lauricella (term cap)",
                needed: terms.map_or(Size::Overflow, Size::Exactly),
                cap: limits.term_cap,
            })
        }
    }
    let width = n as usize;
    // a_m · scale is an integer for scale = n! (n−1)! q^{n−1}
    let scale = factorial(n) * factorial(n - 1) * num_traits::pow(BigInt::from(q), width - 1);
    let scaled: Vec<BigInt> = (0..n)
        .map(|m| {
            let num = pochhammer_int(1 - i64::from(n), m);
            let den = factorial(m + 1) * factorial(m) * num_traits::pow(BigInt::from(q), m as usize);
            num * &scale / den
        })
        .collect();
    let mut buckets = vec![BigInt::zero(); depth * (width - 1) + 1];
    let mut index = vec![0usize; depth];
    // prefix[d] = Π_{i<d} scaled[index[i]]
    let mut prefix: Vec<BigInt> = vec![BigInt::one(); depth + 1];
    for d in 0..depth {
        prefix[d + 1] = &prefix[d] * &scaled[0];
    }
    loop {
        let total: usize = index.iter().sum();
        buckets[total] += &prefix[depth];
        // odometer increment from the last digit
        let mut d = depth;
        loop {
            if d == 0 {
                let denom = num_traits::pow(scale, depth);
                return Ok((buckets, denom));
            }
            d -= 1;
            index[d] += 1;
            if index[d] < width {
                break;
            }
            index[d] = 0;
        }
        for e in d..depth {
            prefix[e + 1] = &prefix[e] * &scaled[index[e]];
        }
    }
}

/// The terminating Lauricella multi-sum:
/// `I_q = (2q)! n^{2q} / q^{2q+1} Σ_{m} (2q+1)_{Σm} Π (−n+1)_{m_i} / ((2)_{m_i} m_i! q^{m_i})`.
/// Exponential in `q` (`n^{2q}` terms); capped by [`Limits::term_cap`].
pub fn iq_lauricella(n: u32, q: u32) -> Result<MomentResult> {
    iq_lauricella_with(n, q, &Limits::default())
}

pub fn iq_lauricella_with(n: u32, q: u32, limits: &Limits) -> Result<MomentResult> {
    check_nq(n, q)?;
    let (buckets, denom) = lauricella_buckets(n, q, limits)?;
    let a = i64::from(2 * q + 1);
    let mut poch = BigInt::one();
    let mut sum = BigInt::zero();
    for (m, c) in buckets.iter().enumerate() {
        if m > 0 {
            poch *= a + m as i64 - 1;
        }
        sum += c * &poch;
    }
    let prefactor = BigRational::new(
        factorial(2 * q) * num_traits::pow(BigInt::from(n), 2 * q as usize),
        num_traits::pow(BigInt::from(q), 2 * q as usize + 1),
    );
    let value = prefactor * BigRational::new(sum, denom);
    Ok(MomentResult::from_exact(value, MomentMethod::LauricellaSum, n, q))
}

/// Ground state: `I_q[L_0^(1)] = Γ(2q+1)/q^{2q+1}`.
pub fn iq_closed_n1(q: u32) -> Result<MomentResult> {
    check_nq(1, q)?;
    Ok(MomentResult::from_exact(ground_state_value(q), MomentMethod::ClosedFormN1, 1, q))
}

/// First excited state, finite form:
/// `(2q)! 2^{2q}/q^{2q+1} Σ_{j=0}^{2q} C(2q,j) (2q+1)_j (−1)^j / (2^j q^j)`.
pub fn iq_closed_n2(q: u32) -> Result<MomentResult> {
    check_nq(2, q)?;
    let two_q = 2 * q;
    let mut sum = BigRational::zero();
    for j in 0..=two_q {
        let term = BigRational::new(
            binomial(u64::from(two_q), u64::from(j)) * pochhammer_int(i64::from(two_q + 1), j),
            num_traits::pow(BigInt::from(2 * q), j as usize),
        );
        if j % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
    }
    let prefactor = ground_state_value(q) * int(num_traits::pow(BigInt::from(2), two_q as usize));
    Ok(MomentResult::from_exact(prefactor * sum, MomentMethod::ClosedFormN2, 2, q))
}

/// Linearization coefficients θ_0..θ_{k_max} of
/// `(qt)^{2q} [L_{n−1}^(1)(t)]^{2q} = Σ_k θ_k L_k^(0)(qt)`:
/// `θ_k = (2q)! n^{2q} Σ_m Σ_{j≤k} (2q+1)_{Σm+j} Π a_{m_i} (−k)_j/(j!)²`.
/// θ_k vanishes for `k > 2qn`.
pub fn theta_coefficients(n: u32, q: u32, k_max: u32) -> Result<Vec<ThetaCoefficient>> {
    theta_coefficients_with(n, q, k_max, &Limits::default())
}

pub fn theta_coefficients_with(n: u32, q: u32, k_max: u32, limits: &Limits) -> Result<Vec<ThetaCoefficient>> {
    check_nq(n, q)?;
    let (buckets, denom) = lauricella_buckets(n, q, limits)?;
    let a = i64::from(2 * q + 1);
    let prefactor = BigRational::new(factorial(2 * q) * num_traits::pow(BigInt::from(n), 2 * q as usize), denom);
    let max_index = buckets.len() - 1 + k_max as usize;
    // (2q+1)_s for s = 0..=max_index
    let mut poch = Vec::with_capacity(max_index + 1);
    let mut acc = BigInt::one();
    for s in 0..=max_index {
        if s > 0 {
            acc *= a + s as i64 - 1;
        }
        poch.push(acc.clone());
    }
    (0..=k_max)
        .map(|k| {
            let mut total = BigRational::zero();
            for j in 0..=k {
                // (−k)_j / (j!)² = (−1)^j C(k,j) / j!
                let weight = BigRational::new(binomial(u64::from(k), u64::from(j)), factorial(j));
                let inner: BigInt = buckets.iter().enumerate().map(|(m, c)| c * &poch[m + j as usize]).sum();
                let term = weight * int(inner);
                if j % 2 == 1 {
                    total -= term;
                } else {
                    total += term;
                }
            }
            Ok(ThetaCoefficient { k, value: &prefactor * total, q, n })
        })
        .collect()
}

/// `(qt)^{2q} [L_{n−1}^(1)(t)]^{2q}` rewritten as an exact polynomial in `z = qt`.
pub fn linearization_target(n: u32, q: u32) -> Result<RationalPoly> {
    check_nq(n, q)?;
    let base = laguerre_poly(LaguerreParams::new(n - 1, 1)).compose_scale(&BigRational::new(1.into(), q.into()));
    let power = base.pow(2 * q)?;
    Ok(power.shift(2 * q as usize))
}

/// `I_q` for real `q > 0` by composite quadrature split at the zeros of
/// `L_{n−1}^(1)`.
pub fn iq_quadrature(n: u32, q: f64, tol: Tolerance) -> Result<MomentResult> {
    if n == 0 {
        return invalid("state index n must be >= 1");
    }
    if !q.is_finite() || q <= 0.0 {
        return invalid(format!("entropic order q must be positive, got {q}"));
    }
    let plan = CompositePlan::for_state(n, q)?;
    let m = n - 1;
    let est = integrate_semiinfinite(
        |t| {
            if t <= 0.0 {
                return 0.0;
            }
            let s = laguerre_scaled(m, 1, t);
            if s.current == 0.0 {
                return 0.0;
            }
            (2.0 * q * t.ln() - q * t + 2.0 * q * s.ln_abs()).exp()
        },
        &plan,
        tol,
    )?;
    Ok(MomentResult { exact: None, approx: est.value, method: MomentMethod::Quadrature, n, q })
}

fn e1_memo() -> &'static Mutex<HashMap<u32, Estimate>> {
    static MEMO: OnceLock<Mutex<HashMap<u32, Estimate>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Default accuracy target for [`e1_log_functional`].
pub fn e1_tolerance() -> Tolerance {
    Tolerance { rel: 1e-9, abs: 1e-12 }
}

/// `E₁[L_{n−1}^(1)] = ∫₀^∞ t² e^{−t} L² ln L² dt` for `1 ≤ n ≤ 150`.
pub fn e1_log_functional(n: u32) -> Result<Estimate> {
    if let Some(e) = e1_memo().lock().expect("memo poisoned").get(&n) {
        return Ok(*e);
    }
    let e = e1_log_functional_with(n, e1_tolerance())?;
    e1_memo().lock().expect("memo poisoned").insert(n, e);
    Ok(e)
}

pub fn e1_log_functional_with(n: u32, tol: Tolerance) -> Result<Estimate> {
    if n == 0 || n > E1_MAX_N {
        return invalid(format!("E1 is supported for 1 <= n <= {E1_MAX_N}, got n = {n}"));
    }
    let plan = CompositePlan::for_state(n, 1.0)?;
    let m = n - 1;
    integrate_semiinfinite(
        |t| {
            if t <= 0.0 {
                return 0.0;
            }
            let s = laguerre_scaled(m, 1, t);
            if s.current == 0.0 {
                // L² ln L² → 0 at a zero
                return 0.0;
            }
            let ln_abs = s.ln_abs();
            (2.0 * t.ln() - t + 2.0 * ln_abs).exp() * 2.0 * ln_abs
        },
        &plan,
        tol,
    )
}

/// Rydberg asymptote `2n²(3n − ln n − ln 2π)`.
pub fn e1_rydberg_asymptotic(n: u32) -> f64 {
    let nf = f64::from(n);
    2.0 * nf * nf * (3.0 * nf - nf.ln() - (2.0 * std::f64::consts::PI).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laguerre::laguerre_series;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn ground_state_values() {
        assert_eq!(iq_poly_expansion(1, 2).unwrap().exact.unwrap(), rat(3, 4));
        assert_eq!(iq_poly_expansion(1, 1).unwrap().exact.unwrap(), rat(2, 1));
        assert_eq!(iq_lauricella(1, 3).unwrap().exact.unwrap(), rat(80, 243));
        for q in 1..=10 {
            let want = ground_state_value(q);
            assert_eq!(iq_poly_expansion(1, q).unwrap().exact.unwrap(), want);
            assert_eq!(iq_closed_n1(q).unwrap().exact.unwrap(), want);
        }
    }

    #[test]
    fn first_excited_state_normalization() {
        // I_1 = 2n² forces W_1 = 1
        let r = iq_poly_expansion(2, 1).unwrap();
        assert_eq!(r.exact.clone().unwrap(), rat(8, 1));
        assert_eq!(r.method, MomentMethod::PolyExpansion);
        assert!((r.approx - 8.0).abs() < 1e-15);
    }

    #[test]
    fn routes_agree_exactly() {
        for n in 1..=5 {
            for q in 1..=3 {
                let a = iq_poly_expansion(n, q).unwrap();
                let b = iq_lauricella(n, q).unwrap();
                assert!(a.exact_eq(&b), "n={n} q={q}: {:?} vs {:?}", a.exact, b.exact);
            }
        }
        for q in 1..=8 {
            assert!(iq_poly_expansion(2, q).unwrap().exact_eq(&iq_closed_n2(q).unwrap()), "q={q}");
        }
    }

    #[test]
    fn normalization_anchor() {
        for n in 1..=100u32 {
            let v = iq_poly_expansion(n, 1).unwrap().exact.unwrap();
            assert_eq!(v, int(2 * n * n), "n={n}");
        }
    }

    #[test]
    fn capacity_errors_name_the_cap() {
        let tight = Limits { degree_cap: 10, term_cap: 100 };
        let err = iq_poly_expansion_with(7, 1, &tight).unwrap_err();
        assert!(err.to_string().contains("cap is 10"), "{err}");
        let err = iq_lauricella_with(4, 2, &tight).unwrap_err();
        assert!(matches!(err, Error::Capacity { needed: Size::Exactly(256), cap: 100, .. }));
        let err = iq_lauricella_with(1000, 40, &Limits::default()).unwrap_err();
        assert!(matches!(err, Error::Capacity { needed: Size::Overflow, .. }));
        assert!(iq_poly_expansion(0, 1).is_err());
        assert!(iq_lauricella(2, 0).is_err());
    }

    #[test]
    fn theta_zero_inverts_to_the_functional() {
        for q in 1..=4u32 {
            let theta = theta_coefficients(1, q, 0).unwrap();
            assert_eq!(theta[0].value, int(factorial(2 * q)), "θ_0 at n=1 is (2q)!");
        }
        for (n, q) in [(2u32, 1u32), (3, 2), (4, 1)] {
            let theta0 = theta_coefficients(n, q, 0).unwrap()[0].value.clone();
            let iq = iq_poly_expansion(n, q).unwrap().exact.unwrap();
            let qpow = int(num_traits::pow(BigInt::from(q), 2 * q as usize + 1));
            assert_eq!(theta0, iq * qpow, "n={n} q={q}");
        }
        assert_eq!(theta_coefficients(2, 1, 0).unwrap()[0].value, rat(8, 1));
    }

    #[test]
    fn theta_reconstructs_the_weighted_power() {
        for n in 1..=3u32 {
            for q in 1..=2u32 {
                let k_max = 2 * q * n;
                let theta = theta_coefficients(n, q, k_max + 2).unwrap();
                for t in &theta[(k_max + 1) as usize..] {
                    assert!(t.value.is_zero(), "θ_{} should vanish (n={n}, q={q})", t.k);
                }
                let coeffs: Vec<_> = theta.iter().map(|t| t.value.clone()).collect();
                let lhs = linearization_target(n, q).unwrap();
                assert_eq!(laguerre_series(&coeffs), lhs, "n={n} q={q}");
                assert!(!theta[k_max as usize].value.is_zero());
            }
        }
    }

    #[test]
    fn bessel_form_matches_the_finite_sum() {
        use num_complex::Complex64;
        // i K_{m+1/2}(z) at z = −q via the half-integer closed form
        // K_{m+1/2}(z) = √(π/(2z)) e^{−z} Σ_j (m+j)!/(j!(m−j)!(2z)^j), principal sqrt.
        // z = −q sits on the branch cut: the upper side reproduces the finite
        // sum, the lower side its negative.
        let bessel_line = |q: u32, side: f64| {
            let m = 2 * q;
            let z = Complex64::new(-f64::from(q), side * 0.0);
            let mut sum = Complex64::new(0.0, 0.0);
            for j in 0..=m {
                let c = rational_to_f64(&BigRational::new(factorial(m + j), factorial(j) * factorial(m - j)));
                sum += c / (2.0 * z).powu(j);
            }
            let k = (std::f64::consts::PI / 2.0).sqrt() / z.sqrt() * (-z).exp() * sum;
            let qf = f64::from(q);
            let prefactor =
                rational_to_f64(&(ground_state_value(q) * int(num_traits::pow(BigInt::from(2), m as usize))));
            prefactor * (2.0 * qf / std::f64::consts::PI).sqrt() * (-qf).exp() * Complex64::i() * k
        };
        for q in 1..=2u32 {
            let finite = iq_closed_n2(q).unwrap().approx;
            let lower = bessel_line(q, -1.0);
            let upper = bessel_line(q, 1.0);
            assert!(lower.im.abs() < 1e-12 * finite && upper.im.abs() < 1e-12 * finite);
            assert!(((upper.re - finite) / finite).abs() < 1e-12, "q={q}: {upper} vs {finite}");
            assert!(((lower.re + finite) / finite).abs() < 1e-12, "q={q}: {lower} vs {finite}");
        }
    }

    #[test]
    fn quadrature_matches_exact_small() {
        let tol = Tolerance::default();
        for (n, q) in [(1u32, 1u32), (2, 2), (4, 3)] {
            let exact = iq_poly_expansion(n, q).unwrap().approx;
            let quad = iq_quadrature(n, f64::from(q), tol).unwrap();
            assert_eq!(quad.method, MomentMethod::Quadrature);
            assert!(((quad.approx - exact) / exact).abs() < 1e-10, "n={n} q={q}");
        }
        assert!(iq_quadrature(2, 0.0, tol).is_err());
    }

    #[test]
    fn e1_values() {
        assert_eq!(e1_log_functional(1).unwrap().value, 0.0);
        let e2 = e1_log_functional(2).unwrap();
        let coarse = e1_log_functional_with(2, Tolerance { rel: 1e-9, abs: 1e-12 }).unwrap();
        assert!(((e2.value - coarse.value) / e2.value).abs() < 1e-9);
        assert!(e2.abs_error <= 1e-9 * e2.value.abs());
        assert!(e1_log_functional(0).is_err());
        assert!(e1_log_functional(151).is_err());
    }

    #[test]
    fn rydberg_asymptote_values() {
        let two_pi_ln = (2.0 * std::f64::consts::PI).ln();
        assert!((e1_rydberg_asymptotic(1) - 2.0 * (3.0 - two_pi_ln)).abs() < 1e-14);
        assert!((e1_rydberg_asymptotic(1) - 2.3242).abs() < 1e-4);
        assert!((e1_rydberg_asymptotic(10) - 5171.9076).abs() < 1e-3);
    }
}
