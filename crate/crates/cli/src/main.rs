//! `cotmoments`: moments of cot, exact cfn tables and identity verification.

mod config;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use cotmoments::cfn;
use cotmoments::moments::{self, MomentValue, Route};
use cotmoments::suites::{self, Suite, SuiteConfig};
use cotmoments::Error;
use serde_json::json;

use config::{Format, Overrides, RunConfig};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "cotmoments", version, about = "Moments of the cotangent function, verified several ways")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML file with defaults for digits, n, tol and format
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Working precision in decimal digits [default: 50, or $COTMOMENTS_DIGITS]
    #[arg(long, global = true)]
    digits: Option<u32>,
    /// Series cutoff [default: 100000]
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Quadrature tolerance [default: 10^-(digits-10)]
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output here instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate C(m) by one or more routes
    Moments {
        /// Moment indices: `3`, `1..4` or `1,3,5`
        #[arg(long)]
        m: String,
        /// Comma-separated routes: eta, quad, cfn, nested
        #[arg(long, default_value = "eta")]
        route: String,
    },
    /// Dump an exact table of t0, t1, h0 or h1
    Tables {
        #[arg(long, value_parser = ["t0", "t1", "h0", "h1"])]
        which: String,
        #[arg(long)]
        kmax: usize,
        #[arg(long)]
        nmax: usize,
    },
    /// Run a verification suite and write a JSON report
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Print constants such as pi, log2, eta3, zeta5
    Constants {
        #[arg(required = true, value_delimiter = ',')]
        names: Vec<String>,
    },
}

/// A failed run: usage errors exit with 2, everything else with 1.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::InvalidArgument(_)) { EXIT_USAGE } else { EXIT_FAIL };
        Self { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self { code: EXIT_FAIL, message: e.to_string() }
    }
}

fn emit(cfg: &RunConfig, text: &str) -> Result<(), Failure> {
    match &cfg.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn parse_m_range(s: &str) -> Result<Vec<u32>, Failure> {
    let bad = || Failure::usage(format!("bad moment range '{s}'"));
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        if let Some((a, b)) = part.split_once("..") {
            let a: u32 = a.parse().map_err(|_| bad())?;
            let b: u32 = b.trim_start_matches('=').parse().map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    Ok(out)
}

fn cmd_moments(cfg: &RunConfig, m: &str, route: &str) -> Result<bool, Failure> {
    let ms = parse_m_range(m)?;
    let routes = suites::parse_routes(route)?;
    for &m in &ms {
        if m == 0 || m > 40 {
            return Err(Failure::usage(format!("moment index {m} outside 1..=40")));
        }
        if m > 12 && routes.iter().any(|r| matches!(r, Route::CfnSeries | Route::NestedSeries)) {
            return Err(Failure::usage(format!("series routes take m <= 12, got {m}")));
        }
    }
    let mut rows: Vec<MomentValue> = Vec::new();
    for &m in &ms {
        for &r in &routes {
            eprintln!("moments: m={m} route={r}");
            rows.push(moments::moment(m, r, cfg.digits, cfg.n, cfg.tol)?);
        }
    }
    let mut agree = true;
    for m in &ms {
        let same: Vec<&MomentValue> = rows.iter().filter(|v| v.m == *m).collect();
        for (i, a) in same.iter().enumerate() {
            for b in &same[i + 1..] {
                let gap = (&a.value - &b.value).abs().to_f64();
                if gap > a.error_bound + b.error_bound {
                    eprintln!("disagreement at m={m}: {} vs {} differ by {gap:e}", a.route, b.route);
                    agree = false;
                }
            }
        }
    }
    let digits = cfg.digits as usize;
    let text = match cfg.format.unwrap_or(Format::Text) {
        Format::Json => {
            let v: Vec<_> = rows
                .iter()
                .map(|r| json!({"m": r.m, "route": r.route.name(), "value": r.value.to_decimal(digits), "terms": r.terms, "error_bound": format!("{:.3e}", r.error_bound)}))
                .collect();
            serde_json::to_string_pretty(&v).map_err(Error::from)? + "\n"
        }
        Format::Csv => {
            let mut s = String::from("m,route,value,terms,error_bound\n");
            for r in &rows {
                let terms = r.terms.map(|t| t.to_string()).unwrap_or_default();
                let _ = writeln!(s, "{},{},{},{},{:.3e}", r.m, r.route, r.value.to_decimal(digits), terms, r.error_bound);
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for r in &rows {
                let _ = writeln!(s, "{:>3} {:<6} {}  (err <= {:.1e})", r.m, r.route.name(), r.value.to_decimal(digits), r.error_bound);
            }
            s
        }
    };
    emit(cfg, &text)?;
    Ok(agree)
}

fn cmd_tables(cfg: &RunConfig, which: &str, kmax: usize, nmax: usize) -> Result<bool, Failure> {
    if kmax > nmax || nmax > 200 {
        return Err(Failure::usage("tables need kmax <= nmax <= 200"));
    }
    let grid = match which {
        "t0" => cfn::build_t0(kmax, nmax)?.grid,
        "t1" => cfn::build_t1(kmax, nmax)?.grid,
        "h0" => cfn::build_h0(kmax, nmax)?.grid,
        _ => cfn::build_h1(kmax, nmax)?.grid,
    };
    let text = match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => grid.to_csv(),
        Format::Json => grid.to_json() + "\n",
        Format::Text => grid.to_csv().replace(',', " "),
    };
    emit(cfg, &text)?;
    Ok(true)
}

fn cmd_verify(cfg: &RunConfig, suite: &str) -> Result<bool, Failure> {
    let suite: Suite = suite.parse()?;
    let sc = SuiteConfig::new(cfg.digits, cfg.n, Some(cfg.tol))?;
    let mut report = suites::run_with_progress(suite, &sc, |part| {
        eprintln!("verify: {} done, {} pass, {} fail", part.suite, part.summary.pass, part.summary.fail);
    })?;
    let stamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    report.metadata = Some(json!({"generated_unix": stamp, "version": env!("CARGO_PKG_VERSION")}));
    for c in report.failures() {
        eprintln!("FAIL {} [{}]: lhs {} rhs {} diff {} tol {}", c.id, c.anchor, c.lhs, c.rhs, c.diff, c.tol);
    }
    let text = match cfg.format.unwrap_or(Format::Json) {
        Format::Json => report.to_json()? + "\n",
        Format::Csv => {
            let mut s = String::from("id,anchor,diff,tol,pass\n");
            for c in &report.checks {
                let _ = writeln!(s, "{},{},{},{},{}", c.id, c.anchor, c.diff, c.tol, c.pass);
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for c in &report.checks {
                let _ = writeln!(s, "{} {} diff {} tol {}", if c.pass { "PASS" } else { "FAIL" }, c.id, c.diff, c.tol);
            }
            let _ = writeln!(s, "{} passed, {} failed", report.summary.pass, report.summary.fail);
            s
        }
    };
    emit(cfg, &text)?;
    Ok(report.all_pass())
}

fn cmd_constants(cfg: &RunConfig, names: &[String]) -> Result<bool, Failure> {
    let digits = cfg.digits as usize;
    let values: Vec<(String, String)> = names
        .iter()
        .map(|n| suites::constant(n, cfg.digits).map(|v| (n.clone(), v.to_decimal(digits))))
        .collect::<Result<_, _>>()?;
    let text = match cfg.format.unwrap_or(Format::Text) {
        Format::Json => {
            let map: serde_json::Map<String, serde_json::Value> = values.into_iter().map(|(k, v)| (k, v.into())).collect();
            serde_json::to_string_pretty(&map).map_err(Error::from)? + "\n"
        }
        Format::Csv => values.iter().map(|(k, v)| format!("{k},{v}\n")).collect(),
        Format::Text => values.iter().map(|(k, v)| format!("{k} = {v}\n")).collect(),
    };
    emit(cfg, &text)?;
    Ok(true)
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let c = cli.common;
    let cfg = config::resolve(Overrides { config: c.config, digits: c.digits, n: c.n, tol: c.tol, format: c.format, out: c.out })
        .map_err(Failure::usage)?;
    match cli.command {
        Command::Moments { m, route } => cmd_moments(&cfg, &m, &route),
        Command::Tables { which, kmax, nmax } => cmd_tables(&cfg, &which, kmax, nmax),
        Command::Verify { suite } => cmd_verify(&cfg, &suite),
        Command::Constants { names } => cmd_constants(&cfg, &names),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
