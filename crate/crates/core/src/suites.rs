//! Named verification suites, as run by `cotmoments verify`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cfn::{self, Parity};
use crate::error::{Error, Result};
use crate::exact::{parse_rational, BigRational};
use crate::hp::{self, HpReal};
use crate::moments::{self, kernels, series, Route};
use crate::report::{Check, VerificationReport};

pub const ANCHOR_TABLE_CFN: &str = "cfn-table";
pub const ANCHOR_TABLE_HARMONIC: &str = "harmonic-number-table";

/// Published arrays, `k` rows by `n = 0..=5` columns.
pub const TABLE_T0: [[&str; 6]; 6] = [
    ["1", "0", "0", "0", "0", "0"],
    ["0", "1", "1", "4", "36", "576"],
    ["0", "0", "1", "5", "49", "820"],
    ["0", "0", "0", "1", "14", "273"],
    ["0", "0", "0", "0", "1", "30"],
    ["0", "0", "0", "0", "0", "1"],
];
pub const TABLE_T1: [[&str; 6]; 6] = [
    ["1", "1/4", "9/16", "225/64", "11025/256", "893025/1024"],
    ["0", "1", "5/2", "259/16", "3229/16", "1057221/256"],
    ["0", "0", "1", "35/4", "987/8", "86405/32"],
    ["0", "0", "0", "1", "21", "4389/8"],
    ["0", "0", "0", "0", "1", "165/4"],
    ["0", "0", "0", "0", "0", "1"],
];
pub const TABLE_H0: [[&str; 6]; 4] = [
    ["1", "0", "0", "0", "0", "0"],
    ["0", "1", "1", "1", "1", "1"],
    ["0", "0", "1", "5/4", "49/36", "205/144"],
    ["0", "0", "0", "1/4", "7/18", "91/192"],
];
pub const TABLE_H1: [[&str; 6]; 4] = [
    ["1", "1", "1", "1", "1", "1"],
    ["0", "1", "10/9", "259/225", "12916/11025", "117469/99225"],
    ["0", "0", "1/9", "7/45", "94/525", "34562/178605"],
    ["0", "0", "0", "1/225", "4/525", "418/42525"],
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    All,
    Tables,
    ClosedForms,
    Consequences,
    Gf,
    Routes,
    HReduction,
}

impl Suite {
    pub const PARTS: [Suite; 6] = [Suite::Tables, Suite::Gf, Suite::ClosedForms, Suite::Consequences, Suite::Routes, Suite::HReduction];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Tables => "tables",
            Suite::ClosedForms => "closed-forms",
            Suite::Consequences => "consequences",
            Suite::Gf => "gf",
            Suite::Routes => "routes",
            Suite::HReduction => "h-reduction",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        [Suite::All]
            .into_iter()
            .chain(Suite::PARTS)
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub digits: u32,
    /// Series cutoff for the cfn, nested and tail-sum routes.
    pub n: usize,
    /// Quadrature tolerance.
    pub tol: f64,
}

impl SuiteConfig {
    pub fn new(digits: u32, n: usize, tol: Option<f64>) -> Result<Self> {
        if digits < hp::MIN_DIGITS {
            return Err(Error::InvalidArgument(format!("precision must be at least {} digits", hp::MIN_DIGITS)));
        }
        if n < 10 {
            return Err(Error::InvalidArgument("series cutoff must be at least 10".into()));
        }
        let tol = tol.unwrap_or_else(|| default_tol(digits));
        if !(tol > 0.0) {
            return Err(Error::InvalidArgument("tolerance must be positive".into()));
        }
        Ok(Self { digits, n, tol })
    }
}

/// `10^-(digits - 10)`.
pub fn default_tol(digits: u32) -> f64 {
    10f64.powi(-(digits as i32) + 10)
}

/// Tighter tolerances buy nothing for the 2-D integrals, which dominate run time.
const CONSEQUENCE_TOL_FLOOR: f64 = 1e-12;

fn rat(s: &str) -> BigRational {
    parse_rational(s).expect("table literal")
}

fn tables(_: &SuiteConfig) -> Result<VerificationReport> {
    let mut r = VerificationReport::new("tables");
    let t0 = cfn::build_t0(5, 5)?;
    let t1 = cfn::build_t1(5, 5)?;
    let h0 = cfn::build_h0(3, 5)?;
    let h1 = cfn::build_h1(3, 5)?;
    for k in 0..=5 {
        for n in 0..=5 {
            r.push(Check::exact(format!("table/t0/k{k}/n{n}"), ANCHOR_TABLE_CFN, &t0.get(k, n), &rat(TABLE_T0[k][n])));
            r.push(Check::exact(format!("table/t1/k{k}/n{n}"), ANCHOR_TABLE_CFN, &t1.get(k, n), &rat(TABLE_T1[k][n])));
            if k <= 3 {
                r.push(Check::exact(format!("table/h0/k{k}/n{n}"), ANCHOR_TABLE_HARMONIC, &h0.get(k, n), &rat(TABLE_H0[k][n])));
                r.push(Check::exact(format!("table/h1/k{k}/n{n}"), ANCHOR_TABLE_HARMONIC, &h1.get(k, n), &rat(TABLE_H1[k][n])));
            }
        }
    }
    r.extend(cfn::check_factorial_relation(12, 20)?);
    Ok(r)
}

fn gf(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut r = VerificationReport::new("gf");
    r.extend(cfn::check_generating_functions(4, 31)?);
    r.extend(moments::binomial_gf_identities(cfg.digits, &[0.0, 0.25, 0.5, 0.75, 0.9])?);
    Ok(r)
}

fn closed_forms(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let d = cfg.digits;
    let sd = d as usize;
    let tight = 10f64.powi(-(d as i32) + 8);
    let mut r = VerificationReport::new("closed-forms");
    let parities = [(Parity::Odd, "odd"), (Parity::Even, "even")];
    for k in 1..=6u32 {
        for (parity, name) in parities {
            let closed = match parity {
                Parity::Odd => series::r_odd(k, d)?,
                Parity::Even => series::r_even(k, d)?,
            };
            let part = series::r_via_partitions(k, parity, d)?;
            r.push(Check::numeric(format!("r-{name}/k{k}/cycle-index"), series::ANCHOR_R_CYCLE, &part.value, &closed.value, tight, sd));
            if k <= 3 {
                let t = series::r_truncated(k, parity, d, 10_000)?;
                r.push(Check::numeric(format!("r-{name}/k{k}/truncated"), series::ANCHOR_R_CLOSED, &t.value, &closed.value, t.error_bound, sd));
            }
        }
    }
    for k in 0..=6u32 {
        let rec = series::a_via_recurrence(k, Parity::Odd, d)?;
        r.push(Check::numeric(format!("a1/k{k}/recurrence"), series::ANCHOR_A, &rec.value, &series::a1(k, d).value, tight, sd));
        let rec = series::a_via_recurrence(k, Parity::Even, d)?;
        r.push(Check::numeric(format!("a0/k{k}/recurrence"), series::ANCHOR_A, &rec.value, &series::a0(k, d).value, tight, sd));
    }
    let zero = BigRational::from_integer(0.into());
    for k in 1..=10u32 {
        r.push(Check::exact(format!("euler-binomial/k{k:02}"), series::ANCHOR_EULER_SUM, &series::euler_binomial_sum(k)?, &zero));
    }
    let ktol = 10f64.powi(-(d as i32) + 10);
    let qtol = ktol / 10.0;
    for z in ["0.25", "0.5", "0.75"] {
        let zv = HpReal::parse(z, d).expect("literal");
        let a = kernels::kernel_k1_series(&zv, d)?.value;
        let b = kernels::kernel_k1_quadrature(&zv, d, qtol)?.value;
        r.push(Check::numeric(format!("kernel/k1/z={z}"), kernels::ANCHOR_KERNEL, &a, &b, ktol, sd));
        let a = kernels::kernel_k0_series(&zv, d)?.value;
        let b = kernels::kernel_k0_quadrature(&zv, d, qtol)?.value;
        r.push(Check::numeric(format!("kernel/k0/z={z}"), kernels::ANCHOR_KERNEL, &a, &b, ktol, sd));
    }
    let one = HpReal::one(d);
    let pi = hp::pi(d);
    let l2 = hp::log2(d);
    let k1_closed = &pi * &l2 / HpReal::from_u64(2, d);
    let k0_closed = &pi * &pi * &l2 / HpReal::from_u64(2, d) - hp::eta(3, d)?.mul_u64(7).div_u64(3);
    r.push(Check::numeric("kernel/k1/z=1", kernels::ANCHOR_KERNEL, &moments::kernel_k1(&one, d)?, &k1_closed, ktol, sd));
    r.push(Check::numeric("kernel/k0/z=1", kernels::ANCHOR_KERNEL, &moments::kernel_k0(&one, d)?, &k0_closed, ktol, sd));
    Ok(r)
}

fn consequences(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut r = VerificationReport::new("consequences");
    r.extend(moments::verify_consequences(cfg.digits, cfg.n, cfg.tol.max(CONSEQUENCE_TOL_FLOOR))?);
    r.extend(moments::verify_log_power(cfg.digits, 6, 3, 10f64.powi(-(cfg.digits as i32) + 8))?);
    Ok(r)
}

/// Quadrature against the eta route for `m = 1..=8`; cfn and nested series
/// against the eta route for `m = 1..=6`, each within its own bound.
fn routes(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let d = cfg.digits;
    let sd = d as usize;
    let mut r = VerificationReport::new("routes");
    let eta: Vec<HpReal> = (1..=8).map(|m| moments::c_eta_route(m, d).map(|v| v.value)).collect::<Result<_>>()?;
    let quad_tol = (cfg.tol * 1e5).min(1e-5);
    let quads: Vec<Result<moments::MomentValue>> = (1..=8u32).into_par_iter().map(|m| moments::c_quadrature_route(m, d, cfg.tol)).collect();
    for (m, q) in (1..=8u32).zip(quads) {
        let q = q?;
        r.push(Check::numeric(format!("route/quad/m{m}"), moments::ANCHOR_QUADRATURE, &q.value, &eta[m as usize - 1], quad_tol, sd));
    }
    let ms: Vec<u32> = (1..=6).collect();
    for v in moments::c_cfn_routes(&ms, d, cfg.n)? {
        r.push(Check::numeric(format!("route/cfn/m{}", v.m), moments::ANCHOR_CFN, &v.value, &eta[v.m as usize - 1], v.error_bound, sd));
    }
    for m in 1..=6 {
        let v = moments::c_nested_route(m, d, cfg.n)?;
        r.push(Check::numeric(format!("route/nested/m{m}"), moments::ANCHOR_NESTED, &v.value, &eta[m as usize - 1], v.error_bound, sd));
    }
    Ok(r)
}

fn h_reduction(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut r = VerificationReport::new("h-reduction");
    for k in 0..=2 {
        r.extend(moments::verify_h_integral_reduction(k, 10, cfg.n, cfg.digits)?);
    }
    Ok(r)
}

fn run_part(suite: Suite, cfg: &SuiteConfig) -> Result<VerificationReport> {
    match suite {
        Suite::Tables => tables(cfg),
        Suite::ClosedForms => closed_forms(cfg),
        Suite::Consequences => consequences(cfg),
        Suite::Gf => gf(cfg),
        Suite::Routes => routes(cfg),
        Suite::HReduction => h_reduction(cfg),
        Suite::All => unreachable!("expanded by run"),
    }
}

/// Runs a suite; `progress` is called with each finished part's name.
pub fn run_with_progress(suite: Suite, cfg: &SuiteConfig, progress: impl Fn(&VerificationReport) + Sync) -> Result<VerificationReport> {
    let parts: Vec<Suite> = if suite == Suite::All { Suite::PARTS.to_vec() } else { vec![suite] };
    let results: Vec<Result<VerificationReport>> = parts
        .par_iter()
        .map(|&p| {
            let r = run_part(p, cfg)?;
            progress(&r);
            Ok(r)
        })
        .collect();
    let mut report = VerificationReport::new(suite.name()).with_config(serde_json::to_value(cfg)?);
    for r in results {
        report.extend(r?);
    }
    Ok(report.sorted())
}

pub fn run(suite: Suite, cfg: &SuiteConfig) -> Result<VerificationReport> {
    run_with_progress(suite, cfg, |_| {})
}

/// Named constants accepted by `cotmoments constants`: `pi`, `log2`, `etaN`, `zetaN`.
pub fn constant(name: &str, digits: u32) -> Result<HpReal> {
    let bad = || Error::InvalidArgument(format!("unknown constant '{name}'"));
    match name {
        "pi" => Ok(hp::pi(digits)),
        "log2" => Ok(hp::log2(digits)),
        _ => {
            if let Some(s) = name.strip_prefix("eta") {
                let s: u32 = s.parse().map_err(|_| bad())?;
                hp::eta(s, digits)
            } else if let Some(s) = name.strip_prefix("zeta") {
                let s: u32 = s.parse().map_err(|_| bad())?;
                hp::zeta(s, digits)
            } else {
                Err(bad())
            }
        }
    }
}

/// Routes accepted on the command line, in the order given.
pub fn parse_routes(s: &str) -> Result<Vec<Route>> {
    s.split(',')
        .map(|r| Route::parse(r.trim()).ok_or_else(|| Error::InvalidArgument(format!("unknown route '{r}'"))))
        .collect()
}
