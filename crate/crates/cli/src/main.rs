mod args;
mod figures;
mod render;

use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use coulomb_infolab::validation::{run_validation, ValidationConfig};
use coulomb_infolab::{Error, QuantumState, ReportConfig, StateReport};

use args::{Cli, Command, Format, OutputArgs, StateArgs};
use render::{ReportJson, ValidationJson};

const THREADS_ENV: &str = "COULOMB_INFOLAB_THREADS";

enum Failure {
    Config(String),
    Core(Error),
    Validation,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation => 1,
            Failure::Config(_) | Failure::Core(Error::InvalidInput(_)) => 2,
            Failure::Core(Error::Capacity { .. }) => 3,
            Failure::Core(Error::Convergence { .. }) => 4,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|()| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Config(msg) => eprintln!("error: {msg}"),
                Failure::Core(e) => eprintln!("error: {e}"),
                Failure::Validation => {}
            }
            ExitCode::from(f.code())
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t >= 1)
        .ok_or_else(|| Failure::Config(format!("{THREADS_ENV} must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Config(format!("cannot configure worker pool: {e}")))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Report(a) => {
            let state = QuantumState::with_exact_z(a.n, a.state.z.clone())?;
            let report = StateReport::build(&state, &report_config(&a.state))?;
            let data = match a.out.format.unwrap_or(Format::Json) {
                Format::Json => json_line(&ReportJson::from(&report)),
                Format::Csv => {
                    let (h, r) = render::scan_csv(std::slice::from_ref(&report));
                    csv_text(&h, &r)?
                }
            };
            emit(&a.out, "report", &data)
        }
        Command::Scan(a) => {
            let template = QuantumState::with_exact_z(a.n_range.0, a.state.z.clone())?;
            let ns: Vec<u32> = (a.n_range.0..=a.n_range.1).collect();
            let reports = StateReport::build_range(&ns, &template, &report_config(&a.state))?;
            let data = match a.out.format.unwrap_or(Format::Json) {
                Format::Json => reports.iter().map(|r| json_line(&ReportJson::from(r))).collect(),
                Format::Csv => {
                    let (h, r) = render::scan_csv(&reports);
                    csv_text(&h, &r)?
                }
            };
            emit(&a.out, "scan", &data)
        }
        Command::Figure(a) => {
            let spec = figures::FigureSpec {
                id: a.id,
                n_range: a.n_range.unwrap_or_else(|| figures::default_range(a.id)),
                q: if a.q.is_empty() { figures::fig4_default_q() } else { a.q.clone() },
                k_max: a.k_max,
                z: a.z.clone(),
            };
            let table = figures::build(&spec)?;
            let data = match a.out.format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    let header: Vec<String> = table.columns.iter().map(|c| c.to_string()).collect();
                    let rows: Vec<Vec<String>> =
                        table.rows.iter().map(|r| r.iter().map(|c| c.csv()).collect()).collect();
                    csv_text(&header, &rows)?
                }
                Format::Json => json_line(&serde_json::json!({
                    "figure": a.id,
                    "Z": a.z.to_string(),
                    "columns": table.columns,
                    "rows": table.rows.iter().map(|r| r.iter().map(|c| c.json()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                })),
            };
            emit(&a.out, &format!("figure {}", a.id), &data)
        }
        Command::Validate(a) => {
            let cfg = ValidationConfig { only: a.only.clone(), quadrature_rel: a.quadrature_tol };
            let checks = run_validation(&cfg)?;
            let data = match a.out.format.unwrap_or(Format::Json) {
                Format::Json => json_line(&ValidationJson::new(&checks)),
                Format::Csv => {
                    let (h, r) = render::validation_csv(&checks);
                    csv_text(&h, &r)?
                }
            };
            emit(&a.out, "validate", &data)?;
            let failed = checks.iter().filter(|c| !c.passed).count();
            eprintln!("validate: {}/{} checks passed", checks.len() - failed, checks.len());
            if failed > 0 {
                return Err(Failure::Validation);
            }
            Ok(())
        }
    }
}

fn report_config(s: &StateArgs) -> ReportConfig {
    ReportConfig { q_list: s.q.clone(), power_orders: s.power_orders.clone(), k_max: s.k_max }
}

fn json_line<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string(v).expect("serializable");
    s.push('\n');
    s
}

fn csv_text(header: &[String], rows: &[Vec<String>]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io_err = |e: csv::Error| Failure::Config(format!("csv: {e}"));
    w.write_record(header).map_err(io_err)?;
    for r in rows {
        w.write_record(r).map_err(io_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Config(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("utf-8 input"))
}

fn emit(out: &OutputArgs, command: &str, data: &str) -> Result<(), Failure> {
    match &out.output {
        None => io::stdout().lock().write_all(data.as_bytes()).map_err(|e| Failure::Config(format!("stdout: {e}"))),
        Some(path) => {
            fs::write(path, data).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
            write_sidecar(path, command)
        }
    }
}

fn write_sidecar(path: &Path, command: &str) -> Result<(), Failure> {
    let mut meta_path = path.as_os_str().to_owned();
    meta_path.push(".meta.json");
    let created = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let meta = serde_json::json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "args": std::env::args().skip(1).collect::<Vec<_>>(),
        "threads": rayon::current_num_threads(),
        "data_file": path.display().to_string(),
        "created_unix": created,
    });
    let text = serde_json::to_string_pretty(&meta).expect("serializable") + "\n";
    fs::write(&meta_path, text).map_err(|e| Failure::Config(format!("{}: {e}", Path::new(&meta_path).display())))
}
