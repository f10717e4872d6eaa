use coulomb_infolab::validation::Check;
use coulomb_infolab::{BoundResult, StateReport, ZScaled};
use serde::Serialize;

#[derive(Serialize)]
pub struct Exact {
    pub exact: Option<String>,
    pub approx: f64,
}

impl From<&ZScaled> for Exact {
    fn from(v: &ZScaled) -> Self {
        Self { exact: v.exact.as_ref().map(|e| e.to_string()), approx: v.approx }
    }
}

#[derive(Serialize)]
struct Valued {
    q: f64,
    value: f64,
}

#[derive(Serialize)]
struct Moment {
    q: f64,
    method: &'static str,
    /// Coefficient of Z^(q-1), when q is an integer.
    coefficient: Option<String>,
    value: f64,
}

#[derive(Serialize)]
struct PowerMoment {
    k: u32,
    #[serde(flatten)]
    value: Exact,
}

#[derive(Serialize)]
struct Shannon {
    value: f64,
    abs_error: f64,
}

#[derive(Serialize)]
struct LengthsJson {
    renyi: Vec<Valued>,
    shannon: f64,
    fisher: f64,
    stddev: f64,
}

#[derive(Serialize)]
struct Bound {
    k: u32,
    shannon_bound: f64,
    complexity_bound: f64,
    a_k: f64,
    at_window_edge: bool,
}

impl From<&BoundResult> for Bound {
    fn from(b: &BoundResult) -> Self {
        Self {
            k: b.k,
            shannon_bound: b.shannon_bound,
            complexity_bound: b.complexity_bound,
            a_k: b.a_k,
            at_window_edge: b.at_window_edge,
        }
    }
}

#[derive(Serialize)]
struct Bounds {
    k_max: u32,
    shannon: Bound,
    complexity: Bound,
}

#[derive(Serialize)]
pub struct ReportJson {
    n: u32,
    #[serde(rename = "Z")]
    z: Exact,
    moments: Vec<Moment>,
    renyi: Vec<Valued>,
    tsallis: Vec<Valued>,
    disequilibrium: Exact,
    linear_entropy: f64,
    shannon: Shannon,
    complexity: f64,
    lengths: LengthsJson,
    power_moments: Vec<PowerMoment>,
    bounds: Bounds,
}

fn valued(v: &[(f64, f64)]) -> Vec<Valued> {
    v.iter().map(|&(q, value)| Valued { q, value }).collect()
}

impl From<&StateReport> for ReportJson {
    fn from(r: &StateReport) -> Self {
        let s = &r.state;
        Self {
            n: s.n(),
            z: Exact { exact: s.z_exact().map(|z| z.to_string()), approx: s.z() },
            moments: r
                .moments
                .iter()
                .map(|(q, m)| Moment {
                    q: *q,
                    method: m.method.as_str(),
                    coefficient: m.exact.as_ref().map(|e| e.to_string()),
                    value: m.approx,
                })
                .collect(),
            renyi: valued(&r.renyi),
            tsallis: valued(&r.tsallis),
            disequilibrium: (&r.disequilibrium).into(),
            linear_entropy: r.linear_entropy,
            shannon: Shannon { value: r.shannon.value, abs_error: r.shannon.abs_error },
            complexity: r.complexity,
            lengths: LengthsJson {
                renyi: valued(&r.lengths.renyi),
                shannon: r.lengths.shannon,
                fisher: r.lengths.fisher,
                stddev: r.lengths.stddev,
            },
            power_moments: r.power_moments.iter().map(|(k, v)| PowerMoment { k: *k, value: v.into() }).collect(),
            bounds: Bounds {
                k_max: r.bounds.k_max,
                shannon: (&r.bounds.shannon).into(),
                complexity: (&r.bounds.complexity).into(),
            },
        }
    }
}

/// 17 significant digits.
pub fn real(v: f64) -> String {
    format!("{v:.16e}")
}

/// CSV rows for a scan; one row per state.
pub fn scan_csv(reports: &[StateReport]) -> (Vec<String>, Vec<Vec<String>>) {
    let mut header: Vec<String> =
        ["n", "Z", "disequilibrium_exact", "disequilibrium", "linear_entropy", "S", "S_abs_error", "C"]
            .map(String::from)
            .to_vec();
    let qs: Vec<f64> = reports.first().map(|r| r.moments.iter().map(|m| m.0).collect()).unwrap_or_default();
    for q in &qs {
        header.push(format!("W_{q}"));
        if *q != 1.0 {
            header.extend([format!("R_{q}"), format!("T_{q}"), format!("L_{q}^R")]);
        }
    }
    let ks: Vec<u32> = reports.first().map(|r| r.power_moments.keys().copied().collect()).unwrap_or_default();
    header.extend(ks.iter().map(|k| format!("<x^{k}>")));
    header.extend(
        ["L^S", "Δx", "δx", "k_opt_shannon", "b(k_opt,n)", "k_opt_complexity", "c(k_opt,n)", "k_window_edge"]
            .map(String::from),
    );
    let rows = reports
        .iter()
        .map(|r| {
            let s = &r.state;
            let mut row = vec![
                s.n().to_string(),
                s.z_exact().map(|z| z.to_string()).unwrap_or_else(|| real(s.z())),
                r.disequilibrium.exact.as_ref().map(|e| e.to_string()).unwrap_or_default(),
                real(r.disequilibrium.approx),
                real(r.linear_entropy),
                real(r.shannon.value),
                real(r.shannon.abs_error),
                real(r.complexity),
            ];
            let mut renyi = r.renyi.iter();
            let mut tsallis = r.tsallis.iter();
            let mut lengths = r.lengths.renyi.iter();
            for (q, m) in &r.moments {
                row.push(real(m.approx));
                if *q != 1.0 {
                    row.push(real(renyi.next().expect("renyi per q").1));
                    row.push(real(tsallis.next().expect("tsallis per q").1));
                    row.push(real(lengths.next().expect("length per q").1));
                }
            }
            row.extend(r.power_moments.values().map(|v| real(v.approx)));
            let b = &r.bounds;
            row.extend([
                real(r.lengths.shannon),
                real(r.lengths.stddev),
                real(r.lengths.fisher),
                b.shannon.k.to_string(),
                real(b.shannon.shannon_bound),
                b.complexity.k.to_string(),
                real(b.complexity.complexity_bound),
                (b.shannon.at_window_edge || b.complexity.at_window_edge).to_string(),
            ]);
            row
        })
        .collect();
    (header, rows)
}

#[derive(Serialize)]
pub struct CheckJson<'a> {
    group: &'a str,
    name: &'a str,
    passed: bool,
    informational: bool,
    detail: &'a str,
}

#[derive(Serialize)]
pub struct ValidationJson<'a> {
    pub passed: bool,
    pub total: usize,
    pub failed: usize,
    pub checks: Vec<CheckJson<'a>>,
}

impl<'a> ValidationJson<'a> {
    pub fn new(checks: &'a [Check]) -> Self {
        let failed = checks.iter().filter(|c| !c.passed).count();
        Self {
            passed: failed == 0,
            total: checks.len(),
            failed,
            checks: checks
                .iter()
                .map(|c| CheckJson {
                    group: c.group,
                    name: &c.name,
                    passed: c.passed,
                    informational: c.informational,
                    detail: &c.detail,
                })
                .collect(),
        }
    }
}

pub fn validation_csv(checks: &[Check]) -> (Vec<String>, Vec<Vec<String>>) {
    let header = ["group", "name", "passed", "informational", "detail"].map(String::from).to_vec();
    let rows = checks
        .iter()
        .map(|c| {
            vec![
                c.group.to_string(),
                c.name.clone(),
                c.passed.to_string(),
                c.informational.to_string(),
                c.detail.clone(),
            ]
        })
        .collect();
    (header, rows)
}
