//! Position-space information measures of the state `(n, Z)`.
//!
//! Quantities that scale as a fixed power of `Z` carry their exact
//! `Z`-stripped coefficient, so `3/8` is available for `⟨ρ₁⟩ = 3Z/8` at any
//! charge.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::bounds::{optimal_k, OptimalBounds, DEFAULT_K_MAX};
use crate::error::{invalid, Result};
use crate::functionals::{e1_log_functional, iq_poly_expansion, iq_quadrature, MomentMethod, MomentResult};
use crate::laguerre::laguerre_scaled;
use crate::quadrature::{Estimate, Tolerance};
use crate::special::{binomial, digamma, factorial, ln_rational, rational_to_f64};

/// A stationary state: principal quantum number `n ≥ 1` and charge `Z > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    n: u32,
    z: f64,
    z_exact: Option<BigRational>,
}

impl QuantumState {
    /// Integral charges are also kept exactly.
    pub fn new(n: u32, z: f64) -> Result<Self> {
        check_n(n)?;
        if !z.is_finite() || z <= 0.0 {
            return invalid(format!("charge Z must be a positive finite number, got {z}"));
        }
        let z_exact =
            if z.fract() == 0.0 && z < 9.0e15 { Some(BigRational::from_integer(BigInt::from(z as u64))) } else { None };
        Ok(Self { n, z, z_exact })
    }

    pub fn with_exact_z(n: u32, z: BigRational) -> Result<Self> {
        check_n(n)?;
        if !z.is_positive() {
            return invalid(format!("charge Z must be positive, got {z}"));
        }
        let zf = rational_to_f64(&z);
        if !zf.is_finite() || zf <= 0.0 {
            return invalid(format!("charge Z = {z} is not representable as a positive double"));
        }
        Ok(Self { n, z: zf, z_exact: Some(z) })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn z_exact(&self) -> Option<&BigRational> {
        self.z_exact.as_ref()
    }

    fn nf(&self) -> f64 {
        f64::from(self.n)
    }

    /// `t = 2Zx/n`
    pub fn t_of_x(&self, x: f64) -> f64 {
        2.0 * self.z * x / self.nf()
    }

    pub fn x_of_t(&self, t: f64) -> f64 {
        self.nf() * t / (2.0 * self.z)
    }
}

fn check_n(n: u32) -> Result<()> {
    if n == 0 {
        return invalid("principal quantum number n must be >= 1");
    }
    Ok(())
}

/// `coefficient · Z^z_power`, exact when the charge is.
#[derive(Debug, Clone, PartialEq)]
pub struct ZScaled {
    pub coefficient: BigRational,
    pub z_power: i32,
    pub exact: Option<BigRational>,
    pub approx: f64,
}

impl ZScaled {
    fn new(coefficient: BigRational, z_power: i32, state: &QuantumState) -> Self {
        let exact = state.z_exact().map(|z| &coefficient * pow_rational(z, z_power));
        let approx = match &exact {
            Some(e) => rational_to_f64(e),
            None => {
                let direct = rational_to_f64(&coefficient) * state.z.powi(z_power);
                if direct.is_normal() {
                    direct
                } else {
                    (ln_rational(&coefficient).unwrap_or(f64::NEG_INFINITY) + f64::from(z_power) * state.z.ln()).exp()
                }
            }
        };
        Self { coefficient, z_power, exact, approx }
    }
}

fn pow_rational(z: &BigRational, p: i32) -> BigRational {
    let base = num_traits::pow(z.clone(), p.unsigned_abs() as usize);
    if p < 0 {
        base.recip()
    } else {
        base
    }
}

fn ln_density(state: &QuantumState, t: f64) -> f64 {
    if t <= 0.0 {
        return f64::NEG_INFINITY;
    }
    let s = laguerre_scaled(state.n - 1, 1, t);
    if s.current == 0.0 {
        return f64::NEG_INFINITY;
    }
    state.z.ln() - 3.0 * state.nf().ln() + 2.0 * t.ln() - t + 2.0 * s.ln_abs()
}

/// `ln ρ_n(x)`; `−∞` at the nodes.
pub fn log_density(state: &QuantumState, x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return invalid(format!("density is defined for x > 0, got {x}"));
    }
    Ok(ln_density(state, state.t_of_x(x)))
}

/// `ρ_n(x) = (Z/n³) t² e^{−t} [L_{n−1}^(1)(t)]²`, `t = 2Zx/n`.
pub fn density(state: &QuantumState, x: f64) -> Result<f64> {
    log_density(state, x).map(f64::exp)
}

/// `W_q = Z^{q−1}/(2n^{3q−1}) · I_q` for integer `q ≥ 1`.
///
/// `exact` holds the coefficient of `Z^{q−1}`; `approx` includes the charge.
pub fn entropic_moment(state: &QuantumState, q: u32) -> Result<MomentResult> {
    let iq = iq_poly_expansion(state.n, q)?;
    let coefficient =
        iq.exact.expect("exact route") / (BigRational::from_integer(2.into()) * n_pow(state.n, 3 * q - 1));
    let approx = ZScaled::new(coefficient.clone(), q as i32 - 1, state).approx;
    Ok(MomentResult {
        exact: Some(coefficient),
        approx,
        method: MomentMethod::PolyExpansion,
        n: state.n,
        q: f64::from(q),
    })
}

/// `W_q` for real `q > 0` by quadrature.
pub fn entropic_moment_quadrature(state: &QuantumState, q: f64, tol: Tolerance) -> Result<MomentResult> {
    let iq = iq_quadrature(state.n, q, tol)?;
    let ln_w = ln_moment_from_iq(state, q, iq.approx.ln());
    Ok(MomentResult { exact: None, approx: ln_w.exp(), ..iq })
}

fn n_pow(n: u32, p: u32) -> BigRational {
    BigRational::from_integer(num_traits::pow(BigInt::from(n), p as usize))
}

fn ln_moment_from_iq(state: &QuantumState, q: f64, ln_iq: f64) -> f64 {
    (q - 1.0) * state.z.ln() - std::f64::consts::LN_2 - (3.0 * q - 1.0) * state.nf().ln() + ln_iq
}

fn integer_order(q: f64) -> Option<u32> {
    (q >= 1.0 && q.fract() == 0.0 && q <= f64::from(u32::MAX)).then_some(q as u32)
}

fn check_order(q: f64, what: &str) -> Result<()> {
    if !q.is_finite() || q <= 0.0 {
        return invalid(format!("{what} order q must be positive, got {q}"));
    }
    if q == 1.0 {
        return invalid(format!("{what} entropy is singular at q = 1; use shannon_entropy"));
    }
    Ok(())
}

/// `ln W_q`: exact route for integer `q`, quadrature otherwise.
pub fn ln_entropic_moment(state: &QuantumState, q: f64) -> Result<f64> {
    match integer_order(q) {
        Some(qi) => {
            let w = entropic_moment(state, qi)?;
            Ok(ln_rational(w.exact.as_ref().expect("exact route"))? + (q - 1.0) * state.z.ln())
        }
        None => {
            let iq = iq_quadrature(state.n, q, Tolerance::default())?;
            Ok(ln_moment_from_iq(state, q, iq.approx.ln()))
        }
    }
}

/// `R_q = ln W_q / (1 − q)`
pub fn renyi_entropy(state: &QuantumState, q: f64) -> Result<f64> {
    check_order(q, "Renyi")?;
    Ok(ln_entropic_moment(state, q)? / (1.0 - q))
}

/// `T_q = (1 − W_q)/(q − 1)`
pub fn tsallis_entropy(state: &QuantumState, q: f64) -> Result<f64> {
    check_order(q, "Tsallis")?;
    Ok(-ln_entropic_moment(state, q)?.exp_m1() / (q - 1.0))
}

/// `D(n)` with `⟨ρ_n⟩ = Z·D(n)`.
pub fn disequilibrium_coefficient(n: u32) -> Result<BigRational> {
    check_n(n)?;
    let n64 = u64::from(n);
    let mut total = BigRational::zero();
    for k in 0..n64 {
        let a = binomial(2 * n64 - 2 * k - 2, n64 - k - 1);
        let b = binomial(2 * k, k);
        let (ki, ni) = (k as i64, n64 as i64);
        let poly = 3 * ni - 4 * ki * (2 * ki - 2 * ni + 1);
        let numer = &a * &a * &b * &b * BigInt::from((2 * ki + 1) * poly);
        total += BigRational::new(numer, BigInt::from(ni - ki));
    }
    let denom = num_traits::pow(BigInt::from(2), 4 * n as usize - 1) * num_traits::pow(BigInt::from(n), 3);
    Ok(total / BigRational::from_integer(denom))
}

/// `⟨ρ_n⟩ = Z·D(n)`
pub fn disequilibrium(state: &QuantumState) -> Result<ZScaled> {
    Ok(ZScaled::new(disequilibrium_coefficient(state.n)?, 1, state))
}

/// `1 − ⟨ρ_n⟩`
pub fn linear_entropy(state: &QuantumState) -> Result<f64> {
    Ok(1.0 - disequilibrium(state)?.approx)
}

/// `S = 3n + 3 ln n − 2ψ(n) − 1/n − E₁/(2n²) − 2 − ln Z`, with its
/// quadrature error.
pub fn shannon_entropy_estimate(state: &QuantumState) -> Result<Estimate> {
    let e1 = e1_log_functional(state.n)?;
    let n = state.nf();
    let value =
        3.0 * n + 3.0 * n.ln() - 2.0 * digamma(state.n)? - 1.0 / n - e1.value / (2.0 * n * n) - 2.0 - state.z.ln();
    Ok(Estimate { value, abs_error: e1.abs_error / (2.0 * n * n) })
}

pub fn shannon_entropy(state: &QuantumState) -> Result<f64> {
    shannon_entropy_estimate(state).map(|e| e.value)
}

/// LMC complexity `C = ⟨ρ⟩ e^S`.
pub fn shape_complexity(state: &QuantumState) -> Result<f64> {
    let d = disequilibrium(state)?;
    Ok(d.approx * shannon_entropy(state)?.exp())
}

/// `B_k(n)` with `⟨x^k⟩_n = B_k(n)/Z^k`.
pub fn power_moment_coefficient(n: u32, k: u32) -> Result<BigRational> {
    check_n(n)?;
    if k == 0 {
        return invalid("power moment order k must be >= 1");
    }
    let mut sum = BigInt::zero();
    for i in 0..n {
        let j = n - i - 1;
        if j > k + 1 {
            continue;
        }
        let b = binomial(u64::from(k + 1), u64::from(j));
        sum += &b * &b * factorial(k + i + 2) / factorial(i);
    }
    let scale = if k >= 2 { n_pow(n, k - 2) } else { n_pow(n, 2 - k).recip() };
    let two = BigRational::from_integer(num_traits::pow(BigInt::from(2), k as usize + 1));
    Ok(BigRational::from_integer(sum) * scale / two)
}

/// `⟨x^k⟩_n`
pub fn power_moment(state: &QuantumState, k: u32) -> Result<ZScaled> {
    Ok(ZScaled::new(power_moment_coefficient(state.n, k)?, -(k as i32), state))
}

/// `⟨x²⟩ − ⟨x⟩²`, exactly.
pub fn variance(state: &QuantumState) -> Result<ZScaled> {
    let b1 = power_moment_coefficient(state.n, 1)?;
    let b2 = power_moment_coefficient(state.n, 2)?;
    Ok(ZScaled::new(b2 - &b1 * &b1, -2, state))
}

/// Standard deviation `Δx = √(⟨x²⟩ − ⟨x⟩²)`.
pub fn standard_deviation(state: &QuantumState) -> Result<f64> {
    let v = variance(state)?;
    Ok(rational_to_f64(&v.coefficient).sqrt() / state.z)
}

/// Rényi length `exp(R_q) = W_q^{−1/(q−1)}`.
pub fn renyi_length(state: &QuantumState, q: f64) -> Result<f64> {
    renyi_entropy(state, q).map(f64::exp)
}

/// Rényi length from `I_q` directly:
/// `(n^{(3q−1)/(q−1)}/Z) (2/I_q)^{1/(q−1)}`.
pub fn renyi_length_from_functional(state: &QuantumState, q: f64) -> Result<f64> {
    check_order(q, "Renyi")?;
    let ln_iq = match integer_order(q) {
        Some(qi) => ln_rational(iq_poly_expansion(state.n, qi)?.exact.as_ref().expect("exact route"))?,
        None => iq_quadrature(state.n, q, Tolerance::default())?.approx.ln(),
    };
    let e = 1.0 / (q - 1.0);
    Ok(((3.0 * q - 1.0) * e * state.nf().ln() - state.z.ln() + e * (std::f64::consts::LN_2 - ln_iq)).exp())
}

/// Shannon length `e^S`.
pub fn shannon_length(state: &QuantumState) -> Result<f64> {
    shannon_entropy(state).map(f64::exp)
}

/// Fisher length `1/√F = n/(2Z)`.
pub fn fisher_length(state: &QuantumState) -> f64 {
    state.nf() / (2.0 * state.z)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lengths {
    pub renyi: Vec<(f64, f64)>,
    pub shannon: f64,
    pub fisher: f64,
    pub stddev: f64,
}

pub fn lengths(state: &QuantumState, q_list: &[f64]) -> Result<Lengths> {
    let renyi = q_list.iter().map(|&q| Ok((q, renyi_length(state, q)?))).collect::<Result<_>>()?;
    Ok(Lengths {
        renyi,
        shannon: shannon_length(state)?,
        fisher: fisher_length(state),
        stddev: standard_deviation(state)?,
    })
}

/// What a [`StateReport`] should contain.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportConfig {
    pub q_list: Vec<f64>,
    pub power_orders: Vec<u32>,
    pub k_max: u32,
}

impl Default for ReportConfig {
    fn default() -> Self {
        Self { q_list: vec![2.0, 3.0, 5.0], power_orders: vec![1, 2], k_max: DEFAULT_K_MAX }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateReport {
    pub state: QuantumState,
    pub moments: Vec<(f64, MomentResult)>,
    pub renyi: Vec<(f64, f64)>,
    pub tsallis: Vec<(f64, f64)>,
    pub disequilibrium: ZScaled,
    pub linear_entropy: f64,
    pub shannon: Estimate,
    pub complexity: f64,
    pub lengths: Lengths,
    pub power_moments: BTreeMap<u32, ZScaled>,
    pub bounds: OptimalBounds,
}

impl StateReport {
    pub fn build(state: &QuantumState, config: &ReportConfig) -> Result<Self> {
        let mut moments = Vec::with_capacity(config.q_list.len() + 1);
        let mut renyi = Vec::new();
        let mut tsallis = Vec::new();
        for &q in &config.q_list {
            if !q.is_finite() || q <= 0.0 {
                return invalid(format!("entropic order q must be positive, got {q}"));
            }
            let w = match integer_order(q) {
                Some(qi) => entropic_moment(state, qi)?,
                None => entropic_moment_quadrature(state, q, Tolerance::default())?,
            };
            moments.push((q, w));
            if q != 1.0 {
                renyi.push((q, renyi_entropy(state, q)?));
                tsallis.push((q, tsallis_entropy(state, q)?));
            }
        }
        let disequilibrium = disequilibrium(state)?;
        let shannon = shannon_entropy_estimate(state)?;
        let complexity = disequilibrium.approx * shannon.value.exp();
        let renyi_lengths = renyi.iter().map(|&(q, r)| (q, r.exp())).collect();
        let lengths = Lengths {
            renyi: renyi_lengths,
            shannon: shannon.value.exp(),
            fisher: fisher_length(state),
            stddev: standard_deviation(state)?,
        };
        let power_moments =
            config.power_orders.iter().map(|&k| Ok((k, power_moment(state, k)?))).collect::<Result<_>>()?;
        Ok(Self {
            state: state.clone(),
            moments,
            renyi,
            tsallis,
            linear_entropy: 1.0 - disequilibrium.approx,
            disequilibrium,
            shannon,
            complexity,
            lengths,
            power_moments,
            bounds: optimal_k(state, config.k_max)?,
        })
    }

    /// Reports for `n` in `ns`, in order, built in parallel.
    pub fn build_range(ns: &[u32], z: &QuantumState, config: &ReportConfig) -> Result<Vec<Self>> {
        ns.par_iter()
            .map(|&n| {
                let state = QuantumState { n, ..z.clone() };
                check_n(n)?;
                Self::build(&state, config)
            })
            .collect()
    }

    pub fn w1_is_normalized(&self) -> bool {
        entropic_moment(&self.state, 1).map(|w| w.exact == Some(BigRational::one())).unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::iq_quadrature;
    use crate::laguerre::laguerre_f64;
    use crate::quadrature::{integrate_semiinfinite, CompositePlan};
    use crate::special::EULER_GAMMA;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn st(n: u32, z: f64) -> QuantumState {
        QuantumState::new(n, z).unwrap()
    }

    fn in_t<F: Fn(f64) -> f64>(state: &QuantumState, f: F) -> f64 {
        let plan = CompositePlan::for_state(state.n(), 1.0).unwrap();
        let jac = state.x_of_t(1.0);
        integrate_semiinfinite(|t| f(t) * jac, &plan, Tolerance::default()).unwrap().value
    }

    #[test]
    fn state_validation() {
        assert!(QuantumState::new(0, 1.0).is_err());
        assert!(QuantumState::new(1, 0.0).is_err());
        assert!(QuantumState::new(1, -2.0).is_err());
        assert!(QuantumState::new(1, f64::NAN).is_err());
        assert!(QuantumState::with_exact_z(1, rat(-1, 2)).is_err());
        assert_eq!(st(1, 3.0).z_exact(), Some(&rat(3, 1)));
        assert_eq!(st(1, 0.5).z_exact(), None);
    }

    #[test]
    fn density_values() {
        let s1 = st(1, 1.0);
        assert!(density(&s1, 1e-12).unwrap() < 1e-20);
        assert!(density(&s1, 0.0).is_err());
        assert!(density(&s1, -1.0).is_err());
        // L_1^(1) = 2 − t vanishes at t = 2, x = n t/(2Z) = 2
        assert_eq!(density(&st(2, 1.0), 2.0).unwrap(), 0.0);
        for n in [1u32, 2, 5, 13] {
            for z in [0.5, 1.0, 3.0] {
                let s = st(n, z);
                let norm = in_t(&s, |t| density(&s, s.x_of_t(t)).unwrap_or(0.0));
                assert!((norm - 1.0).abs() < 1e-12, "n={n} z={z}: {norm}");
            }
        }
    }

    #[test]
    fn ground_state_moment_law() {
        for q in 1..=10u32 {
            let w = entropic_moment(&st(1, 1.0), q).unwrap();
            let expected = BigRational::new(factorial(2 * q), 2 * num_traits::pow(BigInt::from(q), 2 * q as usize + 1));
            assert_eq!(w.exact.unwrap(), expected);
        }
        let w2 = entropic_moment(&st(1, 1.0), 2).unwrap();
        assert_eq!(w2.exact.unwrap(), rat(3, 8));
    }

    #[test]
    fn moments_normalized() {
        for n in 1..=100 {
            assert_eq!(entropic_moment(&st(n, 2.5), 1).unwrap().exact, Some(BigRational::one()));
        }
    }

    #[test]
    fn disequilibrium_values() {
        assert_eq!(disequilibrium_coefficient(1).unwrap(), rat(3, 8));
        assert_eq!(disequilibrium_coefficient(2).unwrap(), rat(33, 256));
        assert_eq!(disequilibrium_coefficient(3).unwrap(), rat(17, 256));
        let d = disequilibrium(&QuantumState::with_exact_z(2, rat(7, 3)).unwrap()).unwrap();
        assert_eq!(d.exact.unwrap(), rat(77, 256));
        assert_eq!(disequilibrium(&st(2, 0.5)).unwrap().exact, None);
        assert!((disequilibrium(&st(2, 0.5)).unwrap().approx - 33.0 / 512.0).abs() < 1e-16);
    }

    #[test]
    fn disequilibrium_three_routes() {
        for n in 1..=12 {
            let w2 = entropic_moment(&st(n, 1.0), 2).unwrap();
            assert_eq!(w2.exact.unwrap(), disequilibrium_coefficient(n).unwrap(), "n={n}");
        }
        for n in 1..=30 {
            let s = st(n, 1.0);
            let quad = entropic_moment_quadrature(&s, 2.0, Tolerance::default()).unwrap().approx;
            let d = disequilibrium(&s).unwrap().approx;
            assert!(((quad - d) / d).abs() < 1e-9, "n={n}");
        }
    }

    #[test]
    fn linear_entropy_values() {
        assert!((linear_entropy(&st(1, 1.0)).unwrap() - 0.625).abs() < 1e-16);
        assert!((linear_entropy(&st(2, 1.0)).unwrap() - 223.0 / 256.0).abs() < 1e-16);
        let mut prev = 0.0;
        for n in 1..=50 {
            let l = linear_entropy(&st(n, 1.0)).unwrap();
            assert!(l > prev && l < 1.0);
            prev = l;
        }
    }

    #[test]
    fn renyi_and_tsallis() {
        let s = st(1, 1.0);
        assert!((renyi_entropy(&s, 2.0).unwrap() + (0.375f64).ln()).abs() < 1e-15);
        assert!((tsallis_entropy(&s, 2.0).unwrap() - 0.625).abs() < 1e-15);
        assert!(renyi_entropy(&s, 1.0).is_err());
        assert!(tsallis_entropy(&s, 1.0).is_err());
        assert!(renyi_entropy(&s, 0.0).is_err());
        assert!(renyi_entropy(&s, -2.0).is_err());
        let r1 = renyi_entropy(&s, 1.01).unwrap();
        let r2 = renyi_entropy(&s, 1.001).unwrap();
        let target = 2.0 * EULER_GAMMA;
        assert!((r2 - target).abs() < (r1 - target).abs());
        assert!((r2 - target).abs() < 1e-2);
    }

    #[test]
    fn real_order_matches_integer_order() {
        for n in [1u32, 4, 9] {
            let s = st(n, 1.7);
            for q in [2u32, 3] {
                let exact = entropic_moment(&s, q).unwrap().approx;
                let quad = entropic_moment_quadrature(&s, f64::from(q), Tolerance::default()).unwrap().approx;
                assert!(((quad - exact) / exact).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn shannon_values() {
        let s = shannon_entropy(&st(1, 1.0)).unwrap();
        assert!((s - 2.0 * EULER_GAMMA).abs() < 1e-12);
        assert!((s - 1.1544).abs() < 1e-4);
        let se = shannon_entropy(&st(1, std::f64::consts::E)).unwrap();
        assert!((se - (2.0 * EULER_GAMMA - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn shannon_matches_direct_integral() {
        for n in [2u32, 3, 5, 8] {
            for z in [1.0, 3.0] {
                let s = st(n, z);
                let direct = -in_t(&s, |t| {
                    let l = ln_density(&s, t);
                    if l == f64::NEG_INFINITY {
                        0.0
                    } else {
                        l.exp() * l
                    }
                });
                let formula = shannon_entropy(&s).unwrap();
                assert!((direct - formula).abs() < 1e-9, "n={n} z={z}: {direct} vs {formula}");
            }
        }
    }

    #[test]
    fn rydberg_shannon_approach() {
        let dev = |n: u32| {
            let nf = f64::from(n);
            (shannon_entropy(&st(n, 1.0)).unwrap() - (2.0 * std::f64::consts::PI * nf * nf).ln() + 2.0).abs()
        };
        assert!(dev(100) < dev(50));
    }

    #[test]
    fn complexity_values() {
        let c1 = shape_complexity(&st(1, 1.0)).unwrap();
        assert!((c1 - 0.375 * (2.0 * EULER_GAMMA).exp()).abs() < 1e-12);
        assert!((c1 - 1.1896).abs() < 1e-4);
        for n in 1..=20 {
            let a = shape_complexity(&st(n, 1.0)).unwrap();
            let b = shape_complexity(&st(n, 7.0)).unwrap();
            assert!(((a - b) / a).abs() < 1e-10, "n={n}");
        }
        for n in 1..=50 {
            assert!(shape_complexity(&st(n, 1.0)).unwrap() >= 1.0);
        }
        let rydberg_gap = |n: u32| {
            let nf = f64::from(n);
            let c = shape_complexity(&st(n, 1.0)).unwrap();
            let d = rational_to_f64(&disequilibrium_coefficient(n).unwrap());
            (c / (2.0 * std::f64::consts::PI * nf * nf * (-2.0f64).exp() * d)).ln().abs()
        };
        assert!(rydberg_gap(150) < rydberg_gap(100) && rydberg_gap(100) < rydberg_gap(50));
    }

    #[test]
    fn power_moment_closed_forms() {
        assert_eq!(power_moment_coefficient(1, 1).unwrap(), rat(3, 2));
        for n in 1..=50u32 {
            let ni = i64::from(n);
            assert_eq!(power_moment_coefficient(n, 1).unwrap(), rat(3 * ni * ni, 2));
            assert_eq!(power_moment_coefficient(n, 2).unwrap(), rat(ni * ni * (5 * ni * ni + 1), 2));
            assert_eq!(variance(&st(n, 1.0)).unwrap().coefficient, rat(ni * ni * (ni * ni + 2), 4));
        }
        assert!(power_moment_coefficient(1, 0).is_err());
        let m = power_moment(&QuantumState::with_exact_z(3, rat(3, 2)).unwrap(), 1).unwrap();
        assert_eq!(m.exact.unwrap(), rat(9, 1));
    }

    #[test]
    fn power_moments_match_quadrature() {
        for n in [1u32, 3, 6] {
            for k in [1u32, 3, 7] {
                let s = st(n, 1.0);
                let quad = in_t(&s, |t| s.x_of_t(t).powi(k as i32) * ln_density(&s, t).exp());
                let exact = power_moment(&s, k).unwrap().approx;
                assert!(((quad - exact) / exact).abs() < 1e-11, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn fisher_length_matches_gradient_integral() {
        for n in 1..=8u32 {
            for z in [0.5, 2.0] {
                let s = st(n, z);
                let nf = f64::from(n);
                // ψ ∝ t e^{−t/2} L_{n−1}^(1)(t); d/dt L_{n−1}^(1) = −L_{n−2}^(2)
                let amp = (z / (nf * nf * nf)).sqrt();
                let fisher = 4.0
                    * in_t(&s, |t| {
                        let l = laguerre_f64(n - 1, 1, t);
                        let dl = if n >= 2 { -laguerre_f64(n - 2, 2, t) } else { 0.0 };
                        let dpsi_dt = amp * (-t / 2.0).exp() * ((1.0 - t / 2.0) * l + t * dl);
                        let dpsi_dx = dpsi_dt * 2.0 * z / nf;
                        dpsi_dx * dpsi_dx
                    });
                let length = 1.0 / fisher.sqrt();
                assert!(((length - fisher_length(&s)) / length).abs() < 1e-10, "n={n} z={z}");
            }
        }
    }

    #[test]
    fn renyi_length_routes_agree() {
        let s = st(1, 1.0);
        assert!((renyi_length(&s, 2.0).unwrap() - 8.0 / 3.0).abs() < 1e-14);
        assert!((renyi_length_from_functional(&s, 2.0).unwrap() - 8.0 / 3.0).abs() < 1e-14);
        for n in [2u32, 7, 30] {
            for q in [1.5, 2.0, 5.0] {
                let s = st(n, 1.3);
                let a = renyi_length(&s, q).unwrap();
                let b = renyi_length_from_functional(&s, q).unwrap();
                assert!(((a - b) / a).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn ground_state_lengths() {
        let l = lengths(&st(1, 1.0), &[2.0]).unwrap();
        assert!((l.shannon - (2.0 * EULER_GAMMA).exp()).abs() < 1e-12);
        assert!((l.shannon - 3.1722).abs() < 1e-4);
        assert_eq!(l.fisher, 0.5);
        assert!((l.stddev - 3f64.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn z_scaling_laws() {
        for n in [1u32, 2, 5, 9] {
            let base = st(n, 1.0);
            for z in [0.5, 3.0] {
                let s = st(n, z);
                let close = |a: f64, b: f64| ((a - b) / b).abs() < 1e-10;
                for q in [2u32, 3] {
                    let w = entropic_moment(&s, q).unwrap().approx;
                    let w1 = entropic_moment(&base, q).unwrap().approx;
                    assert!(close(w, z.powi(q as i32 - 1) * w1));
                }
                assert!((shannon_entropy(&s).unwrap() - (shannon_entropy(&base).unwrap() - z.ln())).abs() < 1e-10);
                assert!(close(shape_complexity(&s).unwrap(), shape_complexity(&base).unwrap()));
                let l = lengths(&s, &[2.0, 1.5]).unwrap();
                let l1 = lengths(&base, &[2.0, 1.5]).unwrap();
                for (a, b) in l.renyi.iter().zip(&l1.renyi) {
                    assert!(close(a.1, b.1 / z));
                }
                assert!(close(l.shannon, l1.shannon / z));
                assert!(close(l.fisher, l1.fisher / z));
                assert!(close(l.stddev, l1.stddev / z));
            }
        }
    }

    #[test]
    fn renyi_length_monotone() {
        for n in [1u32, 2, 3, 5, 7] {
            let s = st(n, 1.0);
            let ls: Vec<f64> = [1.5, 2.0, 3.0, 5.0, 8.0].iter().map(|&q| renyi_length(&s, q).unwrap()).collect();
            assert!(ls.windows(2).all(|w| w[1] < w[0]), "n={n}: {ls:?}");
        }
        for q in [2.0, 5.0] {
            let ls: Vec<f64> = (1..=100).map(|n| renyi_length(&st(n, 1.0), q).unwrap()).collect();
            assert!(ls.windows(2).all(|w| w[1] > w[0]));
        }
    }

    #[test]
    fn report_assembly() {
        let cfg = ReportConfig { q_list: vec![1.0, 2.0, 2.5], ..ReportConfig::default() };
        let r = StateReport::build(&st(2, 1.0), &cfg).unwrap();
        assert!(r.w1_is_normalized());
        assert_eq!(r.moments.len(), 3);
        assert_eq!(r.renyi.len(), 2);
        assert_eq!(r.disequilibrium.exact, Some(rat(33, 256)));
        assert!(r.complexity >= 0.0);
        assert!(r.lengths.renyi.iter().all(|l| l.1 > 0.0));
        let ns: Vec<u32> = (1..=6).collect();
        let all = StateReport::build_range(&ns, &st(1, 1.0), &ReportConfig::default()).unwrap();
        assert_eq!(all.iter().map(|r| r.state.n()).collect::<Vec<_>>(), ns);
        assert_eq!(all[1].shannon, StateReport::build(&st(2, 1.0), &ReportConfig::default()).unwrap().shannon);
        assert!(StateReport::build_range(&[0], &st(1, 1.0), &cfg).is_err());
        assert!(StateReport::build(&st(151, 1.0), &cfg).is_err());
    }

    #[test]
    fn quadrature_iq_is_consistent_with_moment() {
        let s = st(3, 1.0);
        let iq = iq_quadrature(3, 2.5, Tolerance::default()).unwrap().approx;
        let w = entropic_moment_quadrature(&s, 2.5, Tolerance::default()).unwrap().approx;
        assert!((w - iq / (2.0 * 3f64.powf(6.5))).abs() < 1e-15);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn tsallis_and_renyi_share_w(n in 1u32..20, q in 2u32..6, z in 0.2f64..5.0) {
            let s = st(n, z);
            let w = entropic_moment(&s, q).unwrap().approx;
            let qf = f64::from(q);
            let r = renyi_entropy(&s, qf).unwrap();
            let t = tsallis_entropy(&s, qf).unwrap();
            prop_assert!(((r - w.ln() / (1.0 - qf)) / r.abs().max(1.0)).abs() < 1e-12);
            prop_assert!(((t - (1.0 - w) / (qf - 1.0)) / t.abs().max(1.0)).abs() < 1e-12);
        }

        #[test]
        fn variance_is_positive(n in 1u32..200) {
            let v = variance(&st(n, 1.0)).unwrap();
            prop_assert!(v.coefficient.is_positive());
        }
    }
}
