//! Information-theoretic measures of the stationary states of the half-line
//! Coulomb potential `V(x) = −Z/x` (x > 0).
//!
//! The state `n` has density `ρ_n(x) = (Z/n³) t² e^{−t} [L_{n−1}^(1)(t)]²`
//! with `t = 2Zx/n`. This crate computes its entropic moments exactly (three
//! independent routes), Rényi/Tsallis/Shannon entropies, disequilibrium,
//! LMC shape complexity, variational upper bounds, and spreading lengths.

pub mod bounds;
pub mod error;
pub mod functionals;
pub mod laguerre;
pub mod measures;
pub mod poly;
pub mod quadrature;
pub mod special;
pub mod validation;

pub use bounds::{optimal_k, BoundResult, OptimalBounds};
pub use error::{Error, Result};
pub use functionals::{
    e1_log_functional, e1_rydberg_asymptotic, iq_closed_n1, iq_closed_n2, iq_lauricella, iq_poly_expansion,
    iq_quadrature, theta_coefficients, Limits, MomentMethod, MomentResult, ThetaCoefficient,
};
pub use laguerre::{laguerre_poly, recurrence_step, LaguerreParams};
pub use measures::{QuantumState, ReportConfig, StateReport, ZScaled};
pub use poly::{integrate_poly_exp, poly_pow, RationalPoly};
pub use quadrature::{
    build_rule, integrate_semiinfinite, CompositePlan, Estimate, QuadratureRule, RuleKind, Tolerance,
};
