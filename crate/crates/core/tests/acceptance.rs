//! Acceptance criteria, one line each. Exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use cotmoments::cfn::{self, Parity};
use cotmoments::exact::{parse_rational, BigRational};
use cotmoments::moments::{self, series};
use cotmoments::{HpReal, VerificationReport};

const T0: [[&str; 6]; 6] = [
    ["1", "0", "0", "0", "0", "0"],
    ["0", "1", "1", "4", "36", "576"],
    ["0", "0", "1", "5", "49", "820"],
    ["0", "0", "0", "1", "14", "273"],
    ["0", "0", "0", "0", "1", "30"],
    ["0", "0", "0", "0", "0", "1"],
];
const T1: [[&str; 6]; 6] = [
    ["1", "1/4", "9/16", "225/64", "11025/256", "893025/1024"],
    ["0", "1", "5/2", "259/16", "3229/16", "1057221/256"],
    ["0", "0", "1", "35/4", "987/8", "86405/32"],
    ["0", "0", "0", "1", "21", "4389/8"],
    ["0", "0", "0", "0", "1", "165/4"],
    ["0", "0", "0", "0", "0", "1"],
];
const H0: [[&str; 6]; 4] = [
    ["1", "0", "0", "0", "0", "0"],
    ["0", "1", "1", "1", "1", "1"],
    ["0", "0", "1", "5/4", "49/36", "205/144"],
    ["0", "0", "0", "1/4", "7/18", "91/192"],
];
const H1: [[&str; 6]; 4] = [
    ["1", "1", "1", "1", "1", "1"],
    ["0", "1", "10/9", "259/225", "12916/11025", "117469/99225"],
    ["0", "0", "1/9", "7/45", "94/525", "34562/178605"],
    ["0", "0", "0", "1/225", "4/525", "418/42525"],
];

type Outcome = Result<String, String>;

fn gap(a: &HpReal, b: &HpReal) -> f64 {
    (a - b).abs().to_f64()
}

fn rat(s: &str) -> BigRational {
    parse_rational(s).unwrap()
}

fn all_pass(r: &VerificationReport) -> Outcome {
    match r.failures().next() {
        None => Ok(format!("{} checks", r.checks.len())),
        Some(c) => Err(format!("{} failed: lhs {} rhs {} diff {} tol {}", c.id, c.lhs, c.rhs, c.diff, c.tol)),
    }
}

fn exact_tables() -> Outcome {
    let t0 = cfn::build_t0(5, 5).map_err(|e| e.to_string())?;
    let t1 = cfn::build_t1(5, 5).map_err(|e| e.to_string())?;
    let h0 = cfn::build_h0(3, 5).map_err(|e| e.to_string())?;
    let h1 = cfn::build_h1(3, 5).map_err(|e| e.to_string())?;
    let mut count = 0;
    for n in 0..=5 {
        for k in 0..=5 {
            for (name, got, want) in [("t0", t0.get(k, n), T0[k][n]), ("t1", t1.get(k, n), T1[k][n])] {
                if got != rat(want) {
                    return Err(format!("{name}({k},{n}) = {got}, table has {want}"));
                }
                count += 1;
            }
        }
        for k in 0..=3 {
            for (name, got, want) in [("H0", h0.get(k, n), H0[k][n]), ("H1", h1.get(k, n), H1[k][n])] {
                if got != rat(want) {
                    return Err(format!("{name}({k},{n}) = {got}, table has {want}"));
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} entries equal"))
}

fn factorial_relations() -> Outcome {
    all_pass(&cfn::check_factorial_relation(12, 20).map_err(|e| e.to_string())?)
}

fn generating_functions() -> Outcome {
    // z^(2n+1) with n <= 15 needs order 31
    all_pass(&cfn::check_generating_functions(4, 31).map_err(|e| e.to_string())?)
}

fn four_routes() -> Outcome {
    let e = |m, d| moments::c_eta_route(m, d).map(|v| v.value).map_err(|e| e.to_string());
    let mut worst_quad = 0f64;
    for m in 1..=8 {
        let q = moments::c_quadrature_route(m, 50, 1e-40).map_err(|e| e.to_string())?;
        let g = gap(&q.value, &e(m, 50)?);
        if g >= 1e-35 {
            return Err(format!("quadrature m={m}: gap {g:e}"));
        }
        worst_quad = worst_quad.max(g);
    }
    let mut worst_cfn = 0f64;
    let ms: Vec<u32> = (1..=6).collect();
    for v in moments::c_cfn_routes(&ms, 30, 1_000_000).map_err(|e| e.to_string())? {
        let g = gap(&v.value, &e(v.m, 30)?);
        if g >= 1e-7 || g > v.error_bound || v.error_bound >= 1e-7 {
            return Err(format!("cfn m={}: gap {g:e}, bound {:e}", v.m, v.error_bound));
        }
        worst_cfn = worst_cfn.max(g);
    }
    let mut worst_nested = 0f64;
    for m in 1..=6 {
        let v = moments::c_nested_route(m, 30, 100_000).map_err(|e| e.to_string())?;
        let g = gap(&v.value, &e(m, 30)?);
        if g >= 1e-4 {
            return Err(format!("nested m={m}: gap {g:e}"));
        }
        worst_nested = worst_nested.max(g);
    }
    Ok(format!("max gaps: quad {worst_quad:.1e}, cfn {worst_cfn:.1e}, nested {worst_nested:.1e}"))
}

fn r_closed_forms() -> Outcome {
    let mut worst = 0f64;
    for k in 1..=6 {
        for parity in [Parity::Odd, Parity::Even] {
            let closed = match parity {
                Parity::Odd => series::r_odd(k, 50),
                Parity::Even => series::r_even(k, 50),
            }
            .map_err(|e| e.to_string())?;
            let part = series::r_via_partitions(k, parity, 50).map_err(|e| e.to_string())?;
            let g = gap(&closed.value, &part.value);
            if g >= 1e-40 {
                return Err(format!("cycle index k={k} {parity:?}: gap {g:e}"));
            }
            worst = worst.max(g);
            if k <= 3 {
                let t = series::r_truncated(k, parity, 30, 10_000).map_err(|e| e.to_string())?;
                let g = gap(&closed.value.with_digits(30), &t.value);
                if g > t.error_bound {
                    return Err(format!("truncated k={k} {parity:?}: gap {g:e} > bound {:e}", t.error_bound));
                }
            }
        }
    }
    Ok(format!("max cycle-index gap {worst:.1e}"))
}

fn a_series() -> Outcome {
    for k in 0..=6 {
        let r1 = series::a_via_recurrence(k, Parity::Odd, 50).map_err(|e| e.to_string())?;
        let r0 = series::a_via_recurrence(k, Parity::Even, 50).map_err(|e| e.to_string())?;
        let g1 = gap(&r1.value, &series::a1(k, 50).value);
        let g0 = gap(&r0.value, &series::a0(k, 50).value);
        if g1 >= 1e-40 || g0 >= 1e-40 {
            return Err(format!("k={k}: gaps {g1:e} / {g0:e}"));
        }
    }
    for k in 1..=10 {
        let s = series::euler_binomial_sum(k).map_err(|e| e.to_string())?;
        if s != BigRational::from_integer(0.into()) {
            return Err(format!("Euler-binomial sum k={k} is {s}"));
        }
    }
    Ok("recurrences and vanishing sums hold".into())
}

fn consequences() -> Outcome {
    let r = moments::verify_consequences(30, 100_000, 1e-12).map_err(|e| e.to_string())?;
    for c in &r.checks {
        let diff: f64 = c.diff.parse().unwrap();
        let limit = if c.id.ends_with("/quadrature") || c.id.ends_with("/moment") { 1e-12 } else { 1e-4 };
        if !c.pass || diff >= limit {
            return Err(format!("{}: diff {} tol {}", c.id, c.diff, c.tol));
        }
    }
    Ok(format!("{} checks", r.checks.len()))
}

fn h_reduction() -> Outcome {
    let mut n = 0;
    for k in 0..=2 {
        let r = moments::verify_h_integral_reduction(k, 10, 100_000, 30).map_err(|e| e.to_string())?;
        all_pass(&r)?;
        n += r.checks.len();
    }
    Ok(format!("{n} checks"))
}

fn log_power() -> Outcome {
    all_pass(&moments::verify_log_power(30, 6, 3, 1e-20).map_err(|e| e.to_string())?)
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Outcome); 9] = [
        ("1 exact tables", Duration::from_secs(1), exact_tables),
        ("2 factorial relations", Duration::from_secs(5), factorial_relations),
        ("3 generating functions", Duration::from_secs(10), generating_functions),
        ("4 four-route moments", Duration::from_secs(300), four_routes),
        ("5 R closed forms", Duration::from_secs(30), r_closed_forms),
        ("6 A series", Duration::from_secs(5), a_series),
        ("7 consequences", Duration::from_secs(120), consequences),
        ("8 H-integral reduction", Duration::from_secs(60), h_reduction),
        ("9 log-power integrals", Duration::from_secs(10), log_power),
    ];
    let mut failed = 0;
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let (verdict, detail) = match outcome {
            Ok(d) if took <= budget => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over budget")),
            Err(e) => ("FAIL", e),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!("{verdict} criterion {name} ({:.2}s / {}s): {detail}", took.as_secs_f64(), budget.as_secs());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
