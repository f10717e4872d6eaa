use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

#[derive(Debug, Parser)]
#[command(name = "coulomb-infolab", version, about = "Information measures of the half-line Coulomb potential")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full report for one state.
    Report(ReportArgs),
    /// Reports for a range of states.
    Scan(ScanArgs),
    /// Data series behind figures 1-6.
    Figure(FigureArgs),
    /// Run the built-in check suite.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write data here instead of stdout; run metadata goes to `<output>.meta.json`.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    /// Nuclear charge: integer, decimal or p/q.
    #[arg(long = "Z", visible_alias = "z", default_value = "1", value_parser = parse_charge)]
    pub z: BigRational,
    /// Entropic orders.
    #[arg(long, value_delimiter = ',', default_value = "2,3,5", value_parser = parse_order)]
    pub q: Vec<f64>,
    /// Power-moment orders k of <x^k>.
    #[arg(long = "power-orders", value_delimiter = ',', default_value = "1,2")]
    pub power_orders: Vec<u32>,
    /// Largest k scanned by the bound search.
    #[arg(long = "k-max", default_value_t = 200)]
    pub k_max: u32,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long)]
    pub n: u32,
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Inclusive range `a..b` (or `a:b`).
    #[arg(long = "n-range", value_parser = parse_range)]
    pub n_range: (u32, u32),
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// Figure number, 1-6.
    #[arg(value_parser = clap::value_parser!(u8).range(1..=6))]
    pub id: u8,
    #[arg(long = "Z", visible_alias = "z", default_value = "1", value_parser = parse_charge)]
    pub z: BigRational,
    /// Override the default n range.
    #[arg(long = "n-range", value_parser = parse_range)]
    pub n_range: Option<(u32, u32)>,
    /// Override the default q grid (figure 4).
    #[arg(long, value_delimiter = ',', value_parser = parse_order)]
    pub q: Vec<f64>,
    #[arg(long = "k-max", default_value_t = 200)]
    pub k_max: u32,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Restrict to these check groups.
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<String>,
    /// Relative tolerance for comparisons against quadrature.
    #[arg(long = "quadrature-tol", default_value_t = 1e-9)]
    pub quadrature_tol: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

/// Integers, decimals (`0.25`, `1e-3`) and fractions (`3/2`), all exact.
pub fn parse_charge(s: &str) -> Result<BigRational, String> {
    let r = parse_rational(s.trim())?;
    if !r.is_positive() {
        return Err(format!("Z must be > 0, got {s}"));
    }
    Ok(r)
}

fn parse_rational(s: &str) -> Result<BigRational, String> {
    let bad = || format!("not a number: '{s}'");
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(format!("zero denominator in '{s}'"));
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int.is_empty() && frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!(
        "{}{frac}",
        if int.is_empty() || int == "+" || int == "-" { format!("{int}0") } else { int.to_string() }
    );
    let numer: BigInt = digits.parse().map_err(|_| bad())?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let p = num_traits::pow(ten, scale.unsigned_abs() as usize);
    Ok(if scale >= 0 { BigRational::from_integer(numer * p) } else { BigRational::new(numer, p) })
}

fn parse_order(s: &str) -> Result<f64, String> {
    let q: f64 = s.trim().parse().map_err(|_| format!("not a number: '{s}'"))?;
    if !q.is_finite() || q <= 0.0 {
        return Err(format!("q must be > 0, got {s}"));
    }
    Ok(q)
}

pub fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once("..").or_else(|| s.split_once(':')).ok_or_else(|| format!("expected a..b, got '{s}'"))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a: u32 = a.trim().parse().map_err(|_| format!("bad range start in '{s}'"))?;
    let b: u32 = b.trim().parse().map_err(|_| format!("bad range end in '{s}'"))?;
    if a == 0 {
        return Err("n must be >= 1".into());
    }
    if b < a {
        return Err(format!("empty range '{s}'"));
    }
    Ok((a, b))
}
