//! Self-checks over the whole library, grouped so a caller can run a subset.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;

use crate::bounds::{complexity_bound, optimal_k, prior_normalization, shannon_bound, DEFAULT_K_MAX};
use crate::error::{invalid, Result};
use crate::functionals::{
    iq_closed_n1, iq_closed_n2, iq_lauricella, iq_poly_expansion, iq_quadrature, linearization_target,
    theta_coefficients,
};
use crate::laguerre::{laguerre_poly, laguerre_poly_by_recurrence, laguerre_series, recurrence_step, LaguerreParams};
use crate::measures::{
    disequilibrium_coefficient, entropic_moment, entropic_moment_quadrature, fisher_length, power_moment_coefficient,
    renyi_length, shannon_entropy, shannon_length, shape_complexity, standard_deviation, variance, QuantumState,
};
use crate::poly::integrate_poly_exp;
use crate::quadrature::{build_rule, integrate_semiinfinite, CompositePlan, RuleKind, Tolerance};
use crate::special::{factorial, rational_to_f64, EULER_GAMMA};

pub const GROUPS: &[&str] = &[
    "laguerre",
    "quadrature",
    "functionals",
    "moments",
    "disequilibrium",
    "shannon",
    "complexity",
    "power_moments",
    "bounds",
    "lengths",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationConfig {
    /// Groups to run; empty means all.
    pub only: Vec<String>,
    /// Relative tolerance for comparisons against quadrature.
    pub quadrature_rel: f64,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        Self { only: Vec::new(), quadrature_rel: 1e-9 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub group: &'static str,
    pub name: String,
    pub passed: bool,
    /// Informational checks never fail.
    pub informational: bool,
    pub detail: String,
}

type Outcome = Result<(bool, String)>;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn state(n: u32, z: f64) -> Result<QuantumState> {
    QuantumState::new(n, z)
}

fn all_of(items: impl IntoParallelIterator<Item = Result<Option<String>>>) -> Outcome {
    let failures: Vec<String> = items.into_par_iter().collect::<Result<Vec<_>>>()?.into_iter().flatten().collect();
    Ok(match failures.first() {
        None => (true, "ok".into()),
        Some(f) => (false, format!("{} failure(s), first: {f}", failures.len())),
    })
}

fn worst_rel(pairs: impl IntoParallelIterator<Item = Result<(String, f64)>>, tol: f64) -> Outcome {
    let errs = pairs.into_par_iter().collect::<Result<Vec<_>>>()?;
    let (label, worst) =
        errs.into_iter().fold((String::new(), 0.0f64), |acc, e| if e.1 > acc.1 || acc.0.is_empty() { e } else { acc });
    Ok((worst <= tol, format!("max rel diff {worst:.3e} at {label}, tolerance {tol:.1e}")))
}

fn trend(values: &[f64], increasing: bool) -> (bool, String) {
    let ok = values.windows(2).all(|w| if increasing { w[1] > w[0] } else { w[1] < w[0] });
    let shown: Vec<String> = values.iter().map(|v| format!("{v:.6}")).collect();
    (ok, shown.join(", "))
}

type CheckFn = Box<dyn Fn() -> Outcome + Send + Sync>;

fn checks(cfg: &ValidationConfig) -> Vec<(&'static str, String, bool, CheckFn)> {
    let qtol = cfg.quadrature_rel;
    let mut v: Vec<(&'static str, String, bool, CheckFn)> = Vec::new();
    let mut add = |g, name: &str, info, f: CheckFn| v.push((g, name.to_string(), info, f));

    add(
        "laguerre",
        "orthogonality, n,m <= 12, alpha <= 2",
        false,
        Box::new(|| {
            let cases: Vec<(u32, u32, u32)> =
                (0..=2).flat_map(|a| (0..=12).flat_map(move |n| (0..=12).map(move |m| (a, n, m)))).collect();
            all_of(cases.into_par_iter().map(|(a, n, m)| {
                let p = &laguerre_poly(LaguerreParams::new(n, a)) * &laguerre_poly(LaguerreParams::new(m, a));
                let got = integrate_poly_exp(&p, &BigRational::one(), a)?;
                let want = if n == m {
                    BigRational::new(factorial(n + a), factorial(n))
                } else {
                    BigRational::from_integer(0.into())
                };
                Ok((got != want).then(|| format!("alpha={a} n={n} m={m}")))
            }))
        }),
    );
    add(
        "laguerre",
        "explicit series equals degree recurrence, n <= 30",
        false,
        Box::new(|| {
            all_of((0..=30u32).into_par_iter().flat_map(|n| (0..=2u32).into_par_iter().map(move |a| (n, a))).map(
                |(n, a)| {
                    let p = LaguerreParams::new(n, a);
                    Ok((laguerre_poly(p) != laguerre_poly_by_recurrence(p)).then(|| format!("n={n} alpha={a}")))
                },
            ))
        }),
    );
    add(
        "laguerre",
        "recurrence coefficients k = 0, 1, 2",
        false,
        Box::new(|| {
            let got = [recurrence_step(0), recurrence_step(1), recurrence_step(2)];
            Ok((got == [(3, -1, -2), (7, -3, -4), (11, -5, -6)], format!("{got:?}")))
        }),
    );

    add(
        "quadrature",
        "64-point Gauss-Laguerre integrates t^4 to 24",
        false,
        Box::new(|| {
            let r = build_rule(RuleKind::GaussLaguerre { alpha: 0 }, 64)?;
            let v = r.apply(|t| t.powi(4));
            Ok((rel(v, 24.0) < 1e-12, format!("{v:.17e}")))
        }),
    );
    add(
        "quadrature",
        "integral of t e^-t ln t equals 1 - gamma",
        false,
        Box::new(move || {
            let plan = CompositePlan::new(vec![0.0, 1.0, 4.0], 12.0, 64)?;
            let v = integrate_semiinfinite(|t| t * (-t).exp() * t.ln(), &plan, Tolerance::default())?.value;
            Ok((rel(v, 1.0 - EULER_GAMMA) <= qtol, format!("{v:.17e}")))
        }),
    );

    add(
        "functionals",
        "Lauricella sum equals polynomial expansion, n <= 5, q <= 3",
        false,
        Box::new(|| {
            all_of((1..=5u32).into_par_iter().flat_map(|n| (1..=3u32).into_par_iter().map(move |q| (n, q))).map(
                |(n, q)| {
                    Ok((!iq_lauricella(n, q)?.exact_eq(&iq_poly_expansion(n, q)?)).then(|| format!("n={n} q={q}")))
                },
            ))
        }),
    );
    add(
        "functionals",
        "n = 2 closed form equals polynomial expansion, q <= 8",
        false,
        Box::new(|| {
            all_of(
                (1..=8u32)
                    .into_par_iter()
                    .map(|q| Ok((!iq_closed_n2(q)?.exact_eq(&iq_poly_expansion(2, q)?)).then(|| format!("q={q}")))),
            )
        }),
    );
    add(
        "functionals",
        "n = 1 closed form (2q)!/q^(2q+1), q <= 10",
        false,
        Box::new(|| {
            all_of(
                (1..=10u32)
                    .into_par_iter()
                    .map(|q| Ok((!iq_closed_n1(q)?.exact_eq(&iq_poly_expansion(1, q)?)).then(|| format!("q={q}")))),
            )
        }),
    );
    add(
        "functionals",
        "I_1 = 2n^2, n <= 100",
        false,
        Box::new(|| {
            all_of((1..=100u32).into_par_iter().map(|n| {
                let want = BigRational::from_integer(BigInt::from(2 * n * n));
                Ok((iq_poly_expansion(n, 1)?.exact != Some(want)).then(|| format!("n={n}")))
            }))
        }),
    );
    add(
        "functionals",
        "linearization reconstruction, n <= 3, q <= 2",
        false,
        Box::new(|| {
            all_of((1..=3u32).into_par_iter().flat_map(|n| (1..=2u32).into_par_iter().map(move |q| (n, q))).map(
                |(n, q)| {
                    let theta: Vec<BigRational> =
                        theta_coefficients(n, q, 2 * q * n)?.into_iter().map(|t| t.value).collect();
                    Ok((laguerre_series(&theta) != linearization_target(n, q)?).then(|| format!("n={n} q={q}")))
                },
            ))
        }),
    );
    add(
        "functionals",
        "quadrature agrees with exact I_q, n <= 20, q <= 4",
        false,
        Box::new(move || {
            worst_rel(
                (1..=20u32).into_par_iter().flat_map(|n| (1..=4u32).into_par_iter().map(move |q| (n, q))).map(
                    |(n, q)| {
                        let exact = iq_poly_expansion(n, q)?.approx;
                        let quad = iq_quadrature(n, f64::from(q), Tolerance::default())?.approx;
                        Ok((format!("n={n} q={q}"), rel(quad, exact)))
                    },
                ),
                qtol,
            )
        }),
    );

    add(
        "moments",
        "W_q[rho_1] = (2q)!/(2 q^(2q+1)) at Z = 1, q <= 10",
        false,
        Box::new(|| {
            all_of((1..=10u32).into_par_iter().map(|q| {
                let want = BigRational::new(factorial(2 * q), 2 * num_traits::pow(BigInt::from(q), 2 * q as usize + 1));
                Ok((entropic_moment(&state(1, 1.0)?, q)?.exact != Some(want)).then(|| format!("q={q}")))
            }))
        }),
    );
    add(
        "moments",
        "W_1 = 1, n <= 100",
        false,
        Box::new(|| {
            all_of((1..=100u32).into_par_iter().map(|n| {
                Ok((entropic_moment(&state(n, 1.0)?, 1)?.exact != Some(BigRational::one())).then(|| format!("n={n}")))
            }))
        }),
    );
    add(
        "moments",
        "W_q(Z) = Z^(q-1) W_q(1), Z in {1/2, 3}",
        false,
        Box::new(|| {
            worst_rel(
                [(2u32, 0.5), (2, 3.0), (5, 0.5), (5, 3.0), (9, 3.0)]
                    .into_par_iter()
                    .flat_map(|(n, z)| (2..=4u32).into_par_iter().map(move |q| (n, z, q)))
                    .map(|(n, z, q)| {
                        let w = entropic_moment(&state(n, z)?, q)?.approx;
                        let w1 = entropic_moment(&state(n, 1.0)?, q)?.approx;
                        Ok((format!("n={n} Z={z} q={q}"), rel(w, z.powi(q as i32 - 1) * w1)))
                    }),
                1e-10,
            )
        }),
    );

    add(
        "disequilibrium",
        "<rho_n>/Z = 3/8, 33/256, 17/256 for n = 1, 2, 3",
        false,
        Box::new(|| {
            let got = [disequilibrium_coefficient(1)?, disequilibrium_coefficient(2)?, disequilibrium_coefficient(3)?];
            let want = [
                BigRational::new(3.into(), 8.into()),
                BigRational::new(33.into(), 256.into()),
                BigRational::new(17.into(), 256.into()),
            ];
            Ok((got == want, got.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(", ")))
        }),
    );
    add(
        "disequilibrium",
        "D(n) equals W_2 from I_2, n <= 12",
        false,
        Box::new(|| {
            all_of((1..=12u32).into_par_iter().map(|n| {
                Ok((entropic_moment(&state(n, 1.0)?, 2)?.exact != Some(disequilibrium_coefficient(n)?))
                    .then(|| format!("n={n}")))
            }))
        }),
    );
    add(
        "disequilibrium",
        "D(n) agrees with quadrature, n <= 30",
        false,
        Box::new(move || {
            worst_rel(
                (1..=30u32).into_par_iter().map(|n| {
                    let quad = entropic_moment_quadrature(&state(n, 1.0)?, 2.0, Tolerance::default())?.approx;
                    Ok((format!("n={n}"), rel(quad, rational_to_f64(&disequilibrium_coefficient(n)?))))
                }),
                qtol,
            )
        }),
    );

    add(
        "shannon",
        "S[rho_1] = 2 gamma at Z = 1",
        false,
        Box::new(|| {
            let s = shannon_entropy(&state(1, 1.0)?)?;
            Ok(((s - 2.0 * EULER_GAMMA).abs() < 1e-8, format!("{s:.17e}")))
        }),
    );
    add(
        "shannon",
        "|S - ln(2 pi n^2/e^2)| decreasing over n = 50, 100, 150",
        false,
        Box::new(|| {
            let dev = [50u32, 100, 150]
                .into_par_iter()
                .map(|n| {
                    let nf = f64::from(n);
                    Ok((shannon_entropy(&state(n, 1.0)?)? - (2.0 * std::f64::consts::PI * nf * nf).ln() + 2.0).abs())
                })
                .collect::<Result<Vec<f64>>>()?;
            Ok(trend(&dev, false))
        }),
    );
    add(
        "shannon",
        "S agrees with -integral of rho ln rho",
        false,
        Box::new(move || {
            worst_rel(
                [2u32, 3, 5, 8].into_par_iter().map(|n| {
                    let s = state(n, 1.0)?;
                    let jac = s.x_of_t(1.0);
                    let plan = CompositePlan::for_state(n, 1.0)?;
                    let direct = -integrate_semiinfinite(
                        |t| match crate::measures::log_density(&s, s.x_of_t(t)) {
                            Ok(l) if l.is_finite() => l.exp() * l * jac,
                            _ => 0.0,
                        },
                        &plan,
                        Tolerance::default(),
                    )?
                    .value;
                    Ok((format!("n={n}"), rel(direct, shannon_entropy(&s)?)))
                }),
                qtol,
            )
        }),
    );
    add(
        "shannon",
        "S(Z) = S(1) - ln Z, Z in {1/2, 3}",
        false,
        Box::new(|| {
            all_of([1u32, 4, 9].into_par_iter().flat_map(|n| [0.5, 3.0].into_par_iter().map(move |z| (n, z))).map(
                |(n, z)| {
                    let d = shannon_entropy(&state(n, z)?)? - shannon_entropy(&state(n, 1.0)?)? + z.ln();
                    Ok((d.abs() > 1e-10).then(|| format!("n={n} Z={z}: {d:e}")))
                },
            ))
        }),
    );

    add(
        "complexity",
        "C[rho_1] = (3/8) e^(2 gamma)",
        false,
        Box::new(|| {
            let c = shape_complexity(&state(1, 1.0)?)?;
            Ok(((c - 0.375 * (2.0 * EULER_GAMMA).exp()).abs() < 1e-10, format!("{c:.17e}")))
        }),
    );
    add(
        "complexity",
        "C independent of Z in {1, 7}, n <= 20",
        false,
        Box::new(|| {
            worst_rel(
                (1..=20u32).into_par_iter().map(|n| {
                    Ok((format!("n={n}"), rel(shape_complexity(&state(n, 7.0)?)?, shape_complexity(&state(n, 1.0)?)?)))
                }),
                1e-10,
            )
        }),
    );
    add(
        "complexity",
        "C >= 1, n <= 50",
        true,
        Box::new(|| {
            let low = (1..=50u32)
                .into_par_iter()
                .map(|n| Ok((n, shape_complexity(&state(n, 1.0)?)?)))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
            Ok((low.1 >= 1.0, format!("minimum {:.6} at n = {}", low.1, low.0)))
        }),
    );

    add(
        "power_moments",
        "<x> = 3n^2/(2Z), <x^2> = n^2(5n^2+1)/(2Z^2), n <= 50",
        false,
        Box::new(|| {
            all_of((1..=50u32).into_par_iter().map(|n| {
                let ni = BigInt::from(n);
                let n2 = &ni * &ni;
                let b1 = BigRational::new(3 * &n2, 2.into());
                let b2 = BigRational::new(&n2 * (5 * &n2 + 1), 2.into());
                Ok((power_moment_coefficient(n, 1)? != b1 || power_moment_coefficient(n, 2)? != b2)
                    .then(|| format!("n={n}")))
            }))
        }),
    );
    add(
        "power_moments",
        "variance = n^2(n^2+2)/(4Z^2), n <= 50",
        false,
        Box::new(|| {
            all_of((1..=50u32).into_par_iter().map(|n| {
                let ni = BigInt::from(n);
                let n2 = &ni * &ni;
                let want = BigRational::new(&n2 * (&n2 + 2), 4.into());
                Ok((variance(&state(n, 1.0)?)?.coefficient != want).then(|| format!("n={n}")))
            }))
        }),
    );

    add(
        "bounds",
        "b(k,n) >= S_n and c(k,n) >= C_n, n <= 30, k <= 50",
        false,
        Box::new(|| {
            all_of((1..=30u32).into_par_iter().map(|n| {
                let s = state(n, 1.0)?;
                let (sn, cn) = (shannon_entropy(&s)?, shape_complexity(&s)?);
                for k in 1..=50 {
                    if shannon_bound(&s, k)? < sn - 1e-9 || complexity_bound(&s, k)? < cn - 1e-9 {
                        return Ok(Some(format!("n={n} k={k}")));
                    }
                }
                Ok(None)
            }))
        }),
    );
    add(
        "bounds",
        "prior densities normalized, k in {1, 2, 5, 50, 200}",
        false,
        Box::new(|| {
            worst_rel(
                [1u32, 2, 5, 50, 200]
                    .into_par_iter()
                    .map(|k| Ok((format!("k={k}"), rel(prior_normalization(k)?.value, 1.0)))),
                1e-12,
            )
        }),
    );
    add(
        "bounds",
        "k_opt nondecreasing, n = 1..10",
        false,
        Box::new(|| {
            let ks = opt_series(1..=10)?;
            let ok = ks.windows(2).all(|w| w[1].0 >= w[0].0 && w[1].1 >= w[0].1);
            Ok((ok, format!("{ks:?}")))
        }),
    );
    add(
        "bounds",
        "Shannon-bound relative error decreasing, n = 2..10",
        false,
        Box::new(|| Ok(trend(&bound_errors(2..=10)?.0, false))),
    );
    add(
        "bounds",
        "complexity-bound relative error increasing, n = 1..10",
        false,
        Box::new(|| Ok(trend(&bound_errors(1..=10)?.1, true))),
    );

    add(
        "lengths",
        "L_2^R[rho_1] = 8/3 = 1/W_2",
        false,
        Box::new(|| {
            let s = state(1, 1.0)?;
            let l = renyi_length(&s, 2.0)?;
            let w = entropic_moment(&s, 2)?.approx;
            Ok((rel(l, 8.0 / 3.0) < 1e-12 && rel(l, 1.0 / w) < 1e-12, format!("{l:.17e}")))
        }),
    );
    add(
        "lengths",
        "L_q^R decreasing in q in {1.5, 2, 3, 5, 8}, n in {1, 2, 3, 5, 7}",
        false,
        Box::new(|| {
            all_of([1u32, 2, 3, 5, 7].into_par_iter().map(|n| {
                let s = state(n, 1.0)?;
                let ls = [1.5, 2.0, 3.0, 5.0, 8.0].iter().map(|&q| renyi_length(&s, q)).collect::<Result<Vec<_>>>()?;
                Ok((!trend(&ls, false).0).then(|| format!("n={n}")))
            }))
        }),
    );
    add(
        "lengths",
        "L_q^R increasing in n <= 100, q in {2, 5}",
        false,
        Box::new(|| {
            all_of([2.0, 5.0].into_par_iter().map(|q| {
                let ls = (1..=100u32).map(|n| renyi_length(&state(n, 1.0)?, q)).collect::<Result<Vec<_>>>()?;
                Ok((!trend(&ls, true).0).then(|| format!("q={q}")))
            }))
        }),
    );
    add(
        "lengths",
        "lengths scale as 1/Z, Z in {1/2, 3}",
        false,
        Box::new(|| {
            worst_rel(
                [2u32, 6].into_par_iter().flat_map(|n| [0.5, 3.0].into_par_iter().map(move |z| (n, z))).map(
                    |(n, z)| {
                        let (a, b) = (state(n, z)?, state(n, 1.0)?);
                        let worst = [
                            rel(renyi_length(&a, 2.0)? * z, renyi_length(&b, 2.0)?),
                            rel(shannon_length(&a)? * z, shannon_length(&b)?),
                            rel(fisher_length(&a) * z, fisher_length(&b)),
                            rel(standard_deviation(&a)? * z, standard_deviation(&b)?),
                        ]
                        .into_iter()
                        .fold(0.0, f64::max);
                        Ok((format!("n={n} Z={z}"), worst))
                    },
                ),
                1e-10,
            )
        }),
    );
    add(
        "lengths",
        "crossover of dx < L_2^R < Dx < L^S (standard deviation)",
        true,
        Box::new(|| {
            let from = ordering_crossover(standard_deviation)?;
            Ok((true, crossover_text(from)))
        }),
    );
    add(
        "lengths",
        "crossover of dx < L_2^R < Dx < L^S (Dx = (n/Z)sqrt(n^2+2))",
        true,
        Box::new(|| {
            let from = ordering_crossover(|s| {
                let n = f64::from(s.n());
                Ok(n * (n * n + 2.0).sqrt() / s.z())
            })?;
            Ok((true, crossover_text(from)))
        }),
    );
    v
}

fn opt_series(ns: std::ops::RangeInclusive<u32>) -> Result<Vec<(u32, u32)>> {
    ns.into_par_iter()
        .map(|n| {
            let o = optimal_k(&state(n, 1.0)?, DEFAULT_K_MAX)?;
            Ok((o.shannon.k, o.complexity.k))
        })
        .collect()
}

/// Relative errors of `b(k_opt,n)` and `c(k_opt,n)` at `Z = 1`.
pub fn bound_errors(ns: std::ops::RangeInclusive<u32>) -> Result<(Vec<f64>, Vec<f64>)> {
    let rows = ns
        .into_par_iter()
        .map(|n| {
            let s = state(n, 1.0)?;
            let o = optimal_k(&s, DEFAULT_K_MAX)?;
            let (sn, cn) = (shannon_entropy(&s)?, shape_complexity(&s)?);
            Ok(((o.shannon.shannon_bound - sn) / sn.abs(), (o.complexity.complexity_bound - cn) / cn))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rows.into_iter().unzip())
}

/// Smallest `n ≤ 50` from which `δx < L_2^R < Δx < L^S` holds through `n = 50` at `Z = 1`.
pub fn ordering_crossover(stddev: impl Fn(&QuantumState) -> Result<f64> + Sync) -> Result<Option<u32>> {
    let holds = (1..=50u32)
        .into_par_iter()
        .map(|n| {
            let s = state(n, 1.0)?;
            let l2 = renyi_length(&s, 2.0)?;
            let dx = stddev(&s)?;
            Ok(fisher_length(&s) < l2 && l2 < dx && dx < shannon_length(&s)?)
        })
        .collect::<Result<Vec<bool>>>()?;
    let tail = holds.iter().rev().take_while(|&&h| h).count() as u32;
    Ok((tail > 0).then(|| 51 - tail))
}

fn crossover_text(from: Option<u32>) -> String {
    match from {
        Some(n) => format!("holds for n = {n}..50"),
        None => "does not hold at n = 50".into(),
    }
}

/// Runs the selected groups; checks execute in a fixed order.
pub fn run_validation(cfg: &ValidationConfig) -> Result<Vec<Check>> {
    for g in &cfg.only {
        if !GROUPS.contains(&g.as_str()) {
            return invalid(format!("unknown check group '{g}'; expected one of {}", GROUPS.join(", ")));
        }
    }
    if cfg.quadrature_rel.is_nan() || cfg.quadrature_rel < 0.0 {
        return invalid(format!("quadrature tolerance must be nonnegative, got {}", cfg.quadrature_rel));
    }
    let selected: Vec<_> =
        checks(cfg).into_iter().filter(|c| cfg.only.is_empty() || cfg.only.iter().any(|g| g == c.0)).collect();
    Ok(selected
        .par_iter()
        .map(|(group, name, informational, f)| {
            let (passed, detail) = match f() {
                Ok(r) => r,
                Err(e) => (false, e.to_string()),
            };
            Check { group, name: name.clone(), passed: passed || *informational, informational: *informational, detail }
        })
        .collect())
}
