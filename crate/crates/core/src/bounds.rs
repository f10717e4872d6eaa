//! Upper bounds on the Shannon entropy and the LMC complexity from the
//! power moments `⟨x^k⟩`:
//!
//! `b(k,n) = ln[(A_k/Z) B_k(n)^{1/k}]`, `c(k,n) = A_k D(n) B_k(n)^{1/k}`,
//! `A_k = (ek)^{1/k} Γ(1/k)/k`.

use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::measures::{disequilibrium, power_moment_coefficient, QuantumState};
use crate::quadrature::{integrate_semiinfinite, CompositePlan, Estimate, Tolerance};
use crate::special::{ln_rational, log_gamma};

pub const DEFAULT_K_MAX: u32 = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundResult {
    pub n: u32,
    pub k: u32,
    pub shannon_bound: f64,
    pub complexity_bound: f64,
    pub a_k: f64,
    pub is_optimal: bool,
    /// The minimizer sits at the end of the scanned window.
    pub at_window_edge: bool,
}

/// Separate minimizers of `b(·,n)` and `c(·,n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalBounds {
    pub shannon: BoundResult,
    pub complexity: BoundResult,
    pub k_max: u32,
}

fn check_k(k: u32) -> Result<()> {
    if k == 0 {
        return invalid("bound order k must be >= 1");
    }
    Ok(())
}

pub fn ln_a_constant(k: u32) -> Result<f64> {
    check_k(k)?;
    let kf = f64::from(k);
    Ok((1.0 + kf.ln()) / kf + log_gamma(1.0 / kf)? - kf.ln())
}

/// `A_k = (ek)^{1/k} Γ(1/k)/k`
pub fn a_constant(k: u32) -> Result<f64> {
    ln_a_constant(k).map(f64::exp)
}

/// `b(k,n)`
pub fn shannon_bound(state: &QuantumState, k: u32) -> Result<f64> {
    let ln_b = ln_rational(&power_moment_coefficient(state.n(), k)?)?;
    Ok(ln_a_constant(k)? + ln_b / f64::from(k) - state.z().ln())
}

/// `c(k,n)`, computed with the charge on both factors.
pub fn complexity_bound(state: &QuantumState, k: u32) -> Result<f64> {
    let d = disequilibrium(state)?.approx;
    let ln_moment = ln_rational(&power_moment_coefficient(state.n(), k)?)? - f64::from(k) * state.z().ln();
    Ok(d * (ln_a_constant(k)? + ln_moment / f64::from(k)).exp())
}

pub fn bound_at(state: &QuantumState, k: u32) -> Result<BoundResult> {
    Ok(BoundResult {
        n: state.n(),
        k,
        shannon_bound: shannon_bound(state, k)?,
        complexity_bound: complexity_bound(state, k)?,
        a_k: a_constant(k)?,
        is_optimal: false,
        at_window_edge: false,
    })
}

/// `b(k,n)` and `c(k,n)` for `k = 1..=k_max`.
pub fn bound_scan(state: &QuantumState, k_max: u32) -> Result<Vec<BoundResult>> {
    check_k(k_max)?;
    (1..=k_max).into_par_iter().map(|k| bound_at(state, k)).collect()
}

fn argmin(values: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::INFINITY);
    for (i, v) in values.enumerate() {
        if v < best.1 {
            best = (i, v);
        }
    }
    best.0
}

/// Exhaustive search over `k ∈ [1, k_max]`; ties go to the smaller `k`.
pub fn optimal_k(state: &QuantumState, k_max: u32) -> Result<OptimalBounds> {
    let scan = bound_scan(state, k_max)?;
    let pick = |i: usize| BoundResult { is_optimal: true, at_window_edge: scan[i].k == k_max, ..scan[i] };
    let shannon = pick(argmin(scan.iter().map(|b| b.shannon_bound)));
    let complexity = pick(argmin(scan.iter().map(|b| b.complexity_bound)));
    Ok(OptimalBounds { shannon, complexity, k_max })
}

/// `∫₀^∞ k a^{1/k}/Γ(1/k) e^{−a x^k} dx`, which should be 1; evaluated
/// after scaling `x` by `a^{−1/k}`.
pub fn prior_normalization(k: u32) -> Result<Estimate> {
    check_k(k)?;
    let kf = f64::from(k);
    let ln_c = kf.ln() - log_gamma(1.0 / kf)?;
    let w = 1.0 / kf;
    let plan = CompositePlan::new(vec![0.0, 1.0, 1.0 + 2.0 * w, 1.0 + 4.0 * w, 1.0 + 8.0 * w], 1.0 + 16.0 * w, 64)?
        .with_tail_rate(kf);
    integrate_semiinfinite(|u| (ln_c - u.powf(kf)).exp(), &plan, Tolerance::default())
}
