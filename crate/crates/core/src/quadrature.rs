//! Gauss rules from the Jacobi-matrix eigenproblem and composite
//! integration over `[0, ∞)` for integrands with kinks at known points.
//!
//! Nodes come from the eigenvalues of the symmetric tridiagonal Jacobi
//! matrix (implicit QL), polished by Newton on the orthogonal polynomial.
//! Gauss–Laguerre weights come from the Christoffel sum, accumulated in log
//! space so the tiny weights of high-order rules keep full relative accuracy.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{invalid, Error, Result};
use crate::laguerre::laguerre_scaled;

pub const MAX_LAGUERRE_ORDER: usize = 400;
pub const MAX_LEGENDRE_ORDER: usize = 2048;
pub const DEFAULT_PANEL_ORDER: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RuleKind {
    /// Weight `t^α e^{−t}` on `[0, ∞)`.
    GaussLaguerre { alpha: u32 },
    /// Unit weight on `[a, b]`.
    GaussLegendre { a: f64, b: f64 },
}

/// Immutable node/weight table.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    kind: RuleKind,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    log_weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// May underflow to `0.0` for high-order Gauss–Laguerre rules.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn log_weights(&self) -> &[f64] {
        &self.log_weights
    }

    /// Σ w_i f(x_i): the integral of `f` against the rule's weight function.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Build a Gauss rule of the given order.
pub fn build_rule(kind: RuleKind, order: usize) -> Result<QuadratureRule> {
    if order == 0 {
        return invalid("quadrature order must be at least 1");
    }
    match kind {
        RuleKind::GaussLaguerre { alpha } => {
            if order > MAX_LAGUERRE_ORDER {
                return invalid(format!(
                    "Gauss-Laguerre order {order} exceeds the supported maximum {MAX_LAGUERRE_ORDER}"
                ));
            }
            gauss_laguerre(alpha, order)
        }
        RuleKind::GaussLegendre { a, b } => {
            if !(a.is_finite() && b.is_finite() && a < b) {
                return invalid(format!("Gauss-Legendre interval must satisfy a < b, got [{a}, {b}]"));
            }
            if order > MAX_LEGENDRE_ORDER {
                return invalid(format!(
                    "Gauss-Legendre order {order} exceeds the supported maximum {MAX_LEGENDRE_ORDER}"
                ));
            }
            let unit = gauss_legendre_unit(order)?;
            Ok(map_legendre(&unit, a, b))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum CacheKey {
    Laguerre(u32, usize),
    Legendre(usize),
}

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<QuadratureRule>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<QuadratureRule>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached(key: CacheKey, build: impl FnOnce() -> Result<QuadratureRule>) -> Result<Arc<QuadratureRule>> {
    if let Some(rule) = cache().lock().expect("rule cache poisoned").get(&key) {
        return Ok(Arc::clone(rule));
    }
    let rule = Arc::new(build()?);
    cache().lock().expect("rule cache poisoned").entry(key).or_insert_with(|| Arc::clone(&rule));
    Ok(rule)
}

/// Memoized Gauss–Laguerre rule.
pub fn laguerre_rule(alpha: u32, order: usize) -> Result<Arc<QuadratureRule>> {
    cached(CacheKey::Laguerre(alpha, order), || build_rule(RuleKind::GaussLaguerre { alpha }, order))
}

/// Memoized Gauss–Legendre rule on `[-1, 1]`.
pub fn legendre_rule(order: usize) -> Result<Arc<QuadratureRule>> {
    cached(CacheKey::Legendre(order), || build_rule(RuleKind::GaussLegendre { a: -1.0, b: 1.0 }, order))
}

/// Zeros of L_m^(α), ascending (empty for `m = 0`).
pub fn laguerre_zeros(m: u32, alpha: u32) -> Result<Vec<f64>> {
    if m == 0 {
        return Ok(Vec::new());
    }
    Ok(laguerre_rule(alpha, m as usize)?.nodes.clone())
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonal `e` (`e[i]` couples rows i and i+1), ascending.
pub fn tridiagonal_eigenvalues(mut d: Vec<f64>, offdiag: &[f64]) -> Result<Vec<f64>> {
    let n = d.len();
    if offdiag.len() + 1 != n.max(1) {
        return invalid("off-diagonal must have length n - 1");
    }
    let mut e = offdiag.to_vec();
    e.push(0.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 100 {
                return Err(Error::Convergence { value: d[l], estimate: e[l].abs(), tolerance: f64::EPSILON });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    Ok(d)
}

fn gauss_laguerre(alpha: u32, order: usize) -> Result<QuadratureRule> {
    let a = f64::from(alpha);
    let diag: Vec<f64> = (0..order).map(|k| 2.0 * k as f64 + a + 1.0).collect();
    let off: Vec<f64> = (1..order).map(|k| (k as f64 * (k as f64 + a)).sqrt()).collect();
    let guesses = tridiagonal_eigenvalues(diag, &off)?;
    let n = order as u32;
    let nf = order as f64;
    let mut nodes = Vec::with_capacity(order);
    let mut log_weights = Vec::with_capacity(order);
    for x0 in guesses {
        let mut x = x0;
        for _ in 0..8 {
            let s = laguerre_scaled(n, alpha, x);
            // x L_n' = n L_n − (n+α) L_{n−1}
            let deriv = (nf * s.current - (nf + a) * s.previous) / x;
            let step = s.current / deriv;
            x -= step;
            if step.abs() <= 4.0 * f64::EPSILON * x.abs() {
                break;
            }
        }
        log_weights.push(-ln_christoffel_sum(order, a, x));
        nodes.push(x);
    }
    let weights = log_weights.iter().map(|lw| lw.exp()).collect();
    Ok(QuadratureRule { kind: RuleKind::GaussLaguerre { alpha }, nodes, weights, log_weights })
}

/// ln Σ_{k<n} L_k^(α)(x)² / h_k with h_k = Γ(k+α+1)/k!, the reciprocal of
/// the Gauss weight at a node `x`. Summing positive terms avoids the
/// cancellation that limits the derivative formula near the origin.
fn ln_christoffel_sum(n: usize, a: f64, x: f64) -> f64 {
    const LIMIT: f64 = 1e150;
    const SHIFT: i32 = 498;
    let mut inv_h = 1.0 / crate::special::log_gamma(a + 1.0).expect("alpha >= 0").exp();
    let (mut prev, mut cur) = (0.0, 1.0);
    let mut sum = inv_h;
    let mut exp2 = 0i32; // values carry a factor 2^exp2, the sum 2^(2·exp2)
    for k in 0..n.saturating_sub(1) {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + a - x) * cur - (kf + a) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
        inv_h *= (kf + 1.0) / (kf + 1.0 + a);
        if cur.abs() > LIMIT {
            let sc = 2f64.powi(-SHIFT);
            cur *= sc;
            prev *= sc;
            sum *= sc * sc;
            exp2 += SHIFT;
        }
        sum += cur * cur * inv_h;
    }
    sum.ln() + 2.0 * f64::from(exp2) * std::f64::consts::LN_2
}

fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

fn gauss_legendre_unit(order: usize) -> Result<QuadratureRule> {
    let off: Vec<f64> = (1..order).map(|k| k as f64 / ((4 * k * k - 1) as f64).sqrt()).collect();
    let guesses = tridiagonal_eigenvalues(vec![0.0; order], &off)?;
    let nf = order as f64;
    let mut nodes = Vec::with_capacity(order);
    let mut weights = Vec::with_capacity(order);
    for x0 in guesses {
        let mut x = x0;
        for _ in 0..8 {
            let (p, q) = legendre_pair(order, x);
            let deriv = nf * (x * p - q) / (x * x - 1.0);
            let step = p / deriv;
            x -= step;
            if step.abs() <= 4.0 * f64::EPSILON {
                break;
            }
        }
        let (_, q) = legendre_pair(order, x);
        nodes.push(x);
        weights.push(2.0 * (1.0 - x * x) / (nf * nf * q * q));
    }
    let log_weights = weights.iter().map(|w: &f64| w.ln()).collect();
    Ok(QuadratureRule { kind: RuleKind::GaussLegendre { a: -1.0, b: 1.0 }, nodes, weights, log_weights })
}

fn map_legendre(unit: &QuadratureRule, a: f64, b: f64) -> QuadratureRule {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let nodes = unit.nodes.iter().map(|x| mid + half * x).collect();
    let weights: Vec<f64> = unit.weights.iter().map(|w| half * w).collect();
    let log_weights = weights.iter().map(|w| w.ln()).collect();
    QuadratureRule { kind: RuleKind::GaussLegendre { a, b }, nodes, weights, log_weights }
}

/// Acceptance thresholds for order-doubling checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { rel: 1e-10, abs: 1e-14 }
    }
}

impl Tolerance {
    pub fn accepts(&self, value: f64, error: f64) -> bool {
        error <= (self.rel * value.abs()).max(self.abs)
    }
}

/// A numerical value with its order-doubling error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub abs_error: f64,
}

/// Panel layout for integration over `[0, ∞)`: Gauss–Legendre panels between
/// consecutive breakpoints and up to `tail_cutoff` (each panel graded toward
/// its endpoints by a quintic smoothstep substitution), then a shifted
/// Gauss–Laguerre rule on `[tail_cutoff, ∞)` assuming decay like
/// `e^{−tail_rate·t}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositePlan {
    breakpoints: Vec<f64>,
    tail_cutoff: f64,
    panel_order: usize,
    tail_rate: f64,
}

impl CompositePlan {
    pub fn new(breakpoints: Vec<f64>, tail_cutoff: f64, panel_order: usize) -> Result<Self> {
        if breakpoints.first() != Some(&0.0) {
            return invalid("breakpoints must start at 0");
        }
        if breakpoints.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)) {
            return invalid("breakpoints must be strictly increasing");
        }
        let last = *breakpoints.last().expect("nonempty");
        if !tail_cutoff.is_finite() || tail_cutoff <= last {
            return invalid(format!("tail cutoff {tail_cutoff} must exceed the last breakpoint {last}"));
        }
        if panel_order == 0 || 2 * panel_order > MAX_LAGUERRE_ORDER {
            return invalid(format!("panel order {panel_order} out of range 1..={}", MAX_LAGUERRE_ORDER / 2));
        }
        Ok(Self { breakpoints, tail_cutoff, panel_order, tail_rate: 1.0 })
    }

    /// Plan for integrands built from `L_{n−1}^(1)(t)` that decay like
    /// `e^{−rate·t}`: split at the polynomial zeros, then fill to
    /// `last zero + (40 + 8√n)/min(rate, 1)` with panels no wider than
    /// `8/min(rate, 1)`.
    pub fn for_state(n: u32, rate: f64) -> Result<Self> {
        if n == 0 {
            return invalid("state index n must be >= 1");
        }
        if !rate.is_finite() || rate <= 0.0 {
            return invalid(format!("tail decay rate must be positive, got {rate}"));
        }
        let stretch = 1.0 / rate.min(1.0);
        let mut breakpoints = vec![0.0];
        breakpoints.extend(laguerre_zeros(n - 1, 1)?);
        let last = *breakpoints.last().expect("nonempty");
        let cutoff = last + (40.0 + 8.0 * f64::from(n).sqrt()) * stretch;
        let width = 8.0 * stretch;
        let mut x = last + width;
        while x < cutoff - 0.5 * width {
            breakpoints.push(x);
            x += width;
        }
        let plan = Self::new(breakpoints, cutoff, DEFAULT_PANEL_ORDER)?;
        Ok(plan.with_tail_rate(rate))
    }

    pub fn with_tail_rate(mut self, rate: f64) -> Self {
        assert!(rate > 0.0, "tail rate must be positive");
        self.tail_rate = rate;
        self
    }

    pub fn with_panel_order(mut self, order: usize) -> Result<Self> {
        self.panel_order = order;
        Self::new(self.breakpoints, self.tail_cutoff, order).map(|p| p.with_tail_rate(self.tail_rate))
    }

    /// The same plan for the variable `x = factor · t`.
    pub fn scaled(&self, factor: f64) -> Self {
        assert!(factor > 0.0, "scale factor must be positive");
        Self {
            breakpoints: self.breakpoints.iter().map(|b| b * factor).collect(),
            tail_cutoff: self.tail_cutoff * factor,
            panel_order: self.panel_order,
            tail_rate: self.tail_rate / factor,
        }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn tail_cutoff(&self) -> f64 {
        self.tail_cutoff
    }

    pub fn panel_order(&self) -> usize {
        self.panel_order
    }

    pub fn tail_rate(&self) -> f64 {
        self.tail_rate
    }

    fn evaluate(&self, f: &impl Fn(f64) -> f64, order: usize) -> Result<f64> {
        let unit = legendre_rule(order)?;
        let mut edges = self.breakpoints.clone();
        edges.push(self.tail_cutoff);
        let mut total = 0.0;
        for w in edges.windows(2) {
            let (a, b) = (w[0], w[1]);
            let width = b - a;
            // t = a + width·φ(u), φ(u) = u³(10 − 15u + 6u²): φ' vanishes to second
            // order at both ends, so s·ln s kinks at breakpoints become u⁵·ln u
            let panel: f64 = unit
                .nodes
                .iter()
                .zip(&unit.weights)
                .map(|(x, wt)| {
                    let u = 0.5 * (x + 1.0);
                    let phi = u * u * u * (10.0 + u * (6.0 * u - 15.0));
                    let dphi = 30.0 * u * u * (1.0 - u) * (1.0 - u);
                    wt * dphi * f(a + width * phi)
                })
                .sum();
            total += 0.5 * width * panel;
        }
        let tail = laguerre_rule(0, order)?;
        let c = self.tail_cutoff;
        let s = self.tail_rate;
        let tail_sum: f64 = tail
            .nodes
            .iter()
            .zip(&tail.log_weights)
            .map(|(&u, &lw)| {
                let v = f(c + u / s);
                if v == 0.0 {
                    0.0
                } else {
                    (lw + u).exp() * v
                }
            })
            .sum();
        Ok(total + tail_sum / s)
    }
}

/// ∫₀^∞ f, with the error estimated by doubling every panel's order.
pub fn integrate_semiinfinite(f: impl Fn(f64) -> f64, plan: &CompositePlan, tol: Tolerance) -> Result<Estimate> {
    let coarse = plan.evaluate(&f, plan.panel_order)?;
    let fine = plan.evaluate(&f, 2 * plan.panel_order)?;
    let abs_error = (fine - coarse).abs();
    if !fine.is_finite() || !tol.accepts(fine, abs_error) {
        return Err(Error::Convergence {
            value: fine,
            estimate: abs_error,
            tolerance: (tol.rel * fine.abs()).max(tol.abs),
        });
    }
    Ok(Estimate { value: fine, abs_error })
}
