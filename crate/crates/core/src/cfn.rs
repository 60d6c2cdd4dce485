//! Central factorial numbers `t0`/`t1` and the recursive harmonic numbers of
//! order two `H0`/`H1`, as exact triangular tables indexed `(k, n)`.
//!
//! Tables are filled row by row from their defining recurrences:
//!
//! * `t0(k, n) = t0(k-1, n-1) + (n-1)^2 t0(k, n-1)`, row zero `(1, 0, 0, ...)`
//! * `t1(k, n) = t1(k-1, n-1) + (n-1/2)^2 t1(k, n-1)`, row zero `((2n-1)!!)^2 / 4^n`
//! * `H0(k, n) = sum_{i=k-1}^{n-1} H0(k-1, i) / i^2` for `k >= 2`
//! * `H1(k, n) = sum_{i=k-1}^{n-1} H1(k-1, i) / (2i+1)^2` for `k >= 1`

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{binomial_int, factorial, fps_arcsin, BigRational, RationalPowerSeries};
use crate::report::{Check, VerificationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// A rectangular `(kmax+1) x (nmax+1)` array of exact rationals, zero below the diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    rows: Vec<Vec<BigRational>>,
}

impl Grid {
    fn zeros(kmax: usize, nmax: usize) -> Self {
        Self { rows: vec![vec![BigRational::zero(); nmax + 1]; kmax + 1] }
    }

    pub fn kmax(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn nmax(&self) -> usize {
        self.rows[0].len() - 1
    }

    /// Entry `(k, n)`; zero outside the computed range.
    pub fn get(&self, k: usize, n: usize) -> BigRational {
        self.rows.get(k).and_then(|r| r.get(n)).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn rows(&self) -> &[Vec<BigRational>] {
        &self.rows
    }

    /// One line per `k`, cells `p/q` separated by commas.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Array of rows, each an array of `p/q` strings.
    pub fn to_json(&self) -> String {
        let rows: Vec<Vec<String>> =
            self.rows.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
        serde_json::to_string(&rows).expect("string arrays serialize")
    }
}

/// `t0` (even) or `t1` (odd) central factorial numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct CfnTable {
    pub kind: Parity,
    pub grid: Grid,
}

/// `H0` (even) or `H1` (odd) recursive harmonic numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicTable {
    pub kind: Parity,
    pub grid: Grid,
}

impl CfnTable {
    pub fn get(&self, k: usize, n: usize) -> BigRational {
        self.grid.get(k, n)
    }
}

impl HarmonicTable {
    pub fn get(&self, k: usize, n: usize) -> BigRational {
        self.grid.get(k, n)
    }
}

fn check_bounds(kmax: usize, nmax: usize) -> Result<()> {
    if kmax > nmax {
        return Err(Error::InvalidArgument(format!("table bounds need kmax <= nmax, got {kmax} > {nmax}")));
    }
    Ok(())
}

fn int(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn build_t0(kmax: usize, nmax: usize) -> Result<CfnTable> {
    check_bounds(kmax, nmax)?;
    let mut g = Grid::zeros(kmax, nmax);
    g.rows[0][0] = BigRational::one();
    for k in 1..=kmax {
        for n in 1..=nmax {
            let sq = int(((n - 1) * (n - 1)) as u64);
            g.rows[k][n] = &g.rows[k - 1][n - 1] + sq * &g.rows[k][n - 1];
        }
    }
    Ok(CfnTable { kind: Parity::Even, grid: g })
}

pub fn build_t1(kmax: usize, nmax: usize) -> Result<CfnTable> {
    check_bounds(kmax, nmax)?;
    let mut g = Grid::zeros(kmax, nmax);
    // ((2n-1)!!)^2 / 4^n, built incrementally
    let mut boundary = BigRational::one();
    g.rows[0][0] = boundary.clone();
    for n in 1..=nmax {
        let f = BigRational::new(BigInt::from(2 * n - 1), BigInt::from(2));
        boundary = boundary * &f * &f;
        g.rows[0][n] = boundary.clone();
    }
    for k in 1..=kmax {
        for n in 1..=nmax {
            let f = BigRational::new(BigInt::from(2 * n - 1), BigInt::from(2));
            g.rows[k][n] = &g.rows[k - 1][n - 1] + &f * &f * &g.rows[k][n - 1];
        }
    }
    Ok(CfnTable { kind: Parity::Odd, grid: g })
}

pub fn build_h0(kmax: usize, nmax: usize) -> Result<HarmonicTable> {
    check_bounds(kmax, nmax)?;
    let mut g = Grid::zeros(kmax, nmax);
    g.rows[0][0] = BigRational::one();
    if kmax >= 1 {
        for n in 1..=nmax {
            g.rows[1][n] = BigRational::one();
        }
    }
    for k in 2..=kmax {
        for n in k..=nmax {
            let i = (n - 1) as u64;
            g.rows[k][n] = &g.rows[k][n - 1] + &g.rows[k - 1][n - 1] / int(i * i);
        }
    }
    Ok(HarmonicTable { kind: Parity::Even, grid: g })
}

pub fn build_h1(kmax: usize, nmax: usize) -> Result<HarmonicTable> {
    check_bounds(kmax, nmax)?;
    let mut g = Grid::zeros(kmax, nmax);
    for n in 0..=nmax {
        g.rows[0][n] = BigRational::one();
    }
    for k in 1..=kmax {
        for n in k..=nmax {
            let w = (2 * (n - 1) + 1) as u64;
            g.rows[k][n] = &g.rows[k][n - 1] + &g.rows[k - 1][n - 1] / int(w * w);
        }
    }
    Ok(HarmonicTable { kind: Parity::Odd, grid: g })
}

pub const ANCHOR_FACTORIAL: &str = "cfn-harmonic-factorial-relation";
pub const ANCHOR_GF: &str = "cfn-generating-function";

/// `t0(k,n) = (n-1)!^2 H0(k,n)` for `n >= 1` and
/// `t1(k,n) = 2^(2k) C(2n,n) (2n)! / 2^(4n) H1(k,n)` for `n >= 0`, checked exactly.
pub fn check_factorial_relation(kmax: usize, nmax: usize) -> Result<VerificationReport> {
    let t0 = build_t0(kmax, nmax)?;
    let t1 = build_t1(kmax, nmax)?;
    let h0 = build_h0(kmax, nmax)?;
    let h1 = build_h1(kmax, nmax)?;
    let mut report = VerificationReport::new("factorial-relation");
    for k in 0..=kmax {
        for n in 0..=nmax {
            if n >= 1 {
                let f = BigRational::from_integer(factorial(n - 1));
                let rhs = &f * &f * h0.get(k, n);
                report.push(Check::exact(format!("factorial/t0/{k:02}/{n:02}"), ANCHOR_FACTORIAL, &t0.get(k, n), &rhs));
            }
            let scale = BigRational::new(
                BigInt::from(4u32).pow(k as u32) * binomial_int(2 * n as u64, n as u64) * factorial(2 * n),
                BigInt::from(16u32).pow(n as u32),
            );
            let rhs = scale * h1.get(k, n);
            report.push(Check::exact(format!("factorial/t1/{k:02}/{n:02}"), ANCHOR_FACTORIAL, &t1.get(k, n), &rhs));
        }
    }
    Ok(report)
}

/// Powers of `2 arcsin(z/2)` against the tables:
/// `[2 arcsin(z/2)]^(2k) / (2k)!` has `z^(2n)` coefficient `t0(k,n) / (2n)!` and
/// `[2 arcsin(z/2)]^(2k+1) / (2k+1)!` has `z^(2n+1)` coefficient `t1(k,n) / (2n+1)!`.
pub fn check_generating_functions(kmax: usize, order: usize) -> Result<VerificationReport> {
    if order < 2 * kmax {
        return Err(Error::InvalidArgument(format!("order {order} must be at least 2 kmax = {}", 2 * kmax)));
    }
    let nmax = order / 2;
    let t0 = build_t0(kmax, nmax)?;
    let t1 = build_t1(kmax, nmax)?;
    let arcsin = fps_arcsin(2 * nmax + 1)?;
    let mut power = RationalPowerSeries::one(2 * nmax + 1);
    let mut report = VerificationReport::new("generating-functions");
    for m in 0..=(2 * kmax + 1) {
        if m > 0 {
            power = &power * &arcsin;
        }
        let scaled = power.scale(&BigRational::new(BigInt::one(), factorial(m)));
        let k = m / 2;
        let (table, tag) = if m % 2 == 0 { (&t0, "t0") } else { (&t1, "t1") };
        for n in 0..=nmax {
            let e = 2 * n + m % 2;
            let expected = table.get(k, n) / BigRational::from_integer(factorial(e));
            report.push(Check::exact(format!("gf/{tag}/{k:02}/{n:02}"), ANCHOR_GF, &scaled.coeff(e), &expected));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn t0_entries() {
        let t = build_t0(5, 5).unwrap();
        assert_eq!(t.get(2, 3), r(5, 1));
        assert_eq!(t.get(3, 4), r(14, 1));
        assert_eq!(t.get(5, 5), r(1, 1));
        assert_eq!(t.get(0, 0), r(1, 1));
        assert_eq!(t.get(0, 3), r(0, 1));
        assert!(build_t0(3, 2).is_err());
    }

    #[test]
    fn t1_entries() {
        let t = build_t1(5, 5).unwrap();
        assert_eq!(t.get(0, 2), r(9, 16));
        assert_eq!(t.get(2, 3), r(35, 4));
        assert_eq!(t.get(1, 4), r(3229, 16));
        assert_eq!(build_t1(0, 0).unwrap().grid.to_csv(), "1\n");
    }

    #[test]
    fn harmonic_entries() {
        let h0 = build_h0(3, 5).unwrap();
        let h1 = build_h1(3, 5).unwrap();
        assert_eq!(h0.get(2, 4), r(49, 36));
        assert_eq!(h1.get(2, 3), r(7, 45));
        assert_eq!(h1.get(3, 3), r(1, 225));
        assert_eq!(h1.get(1, 5), r(117469, 99225));
        for n in 1..=5 {
            assert_eq!(h0.get(1, n), r(1, 1));
            assert_eq!(h1.get(0, n), r(1, 1));
            assert_eq!(h0.get(0, n), r(0, 1));
        }
    }

    #[test]
    fn table_invariants() {
        let (t0, t1) = (build_t0(12, 20).unwrap(), build_t1(12, 20).unwrap());
        for k in 0..=12 {
            for n in 0..=20 {
                let (a, b) = (t0.get(k, n), t1.get(k, n));
                assert!(a >= r(0, 1) && b >= r(0, 1));
                assert!(a.is_integer());
                if k > n {
                    assert_eq!(a, r(0, 1));
                    assert_eq!(b, r(0, 1));
                }
                if k == n {
                    assert_eq!(a, r(1, 1));
                    assert_eq!(b, r(1, 1));
                }
                if 1 <= k && k <= n {
                    assert!(a > r(0, 1));
                }
                if k <= n {
                    assert!(b > r(0, 1));
                }
            }
        }
    }

    #[test]
    fn harmonic_rows_non_decreasing() {
        let h1 = build_h1(4, 40).unwrap();
        for k in 0..=4 {
            for n in 1..=40 {
                assert!(h1.get(k, n) >= h1.get(k, n - 1));
            }
        }
    }

    #[test]
    fn factorial_relation_examples() {
        let rep = check_factorial_relation(3, 5).unwrap();
        assert!(rep.all_pass());
        let t1_12 = rep.checks.iter().find(|c| c.id == "factorial/t1/01/02").unwrap();
        assert_eq!(t1_12.lhs, "5/2");
        let t0_23 = rep.checks.iter().find(|c| c.id == "factorial/t0/02/03").unwrap();
        assert_eq!(t0_23.rhs, "5");
    }

    #[test]
    fn generating_function_examples() {
        let rep = check_generating_functions(2, 6).unwrap();
        assert!(rep.all_pass(), "{:?}", rep.failures().collect::<Vec<_>>());
        // z^6 of [2 arcsin(z/2)]^2 / 2! is t0(1,3)/6! = 4/720
        let c = rep.checks.iter().find(|c| c.id == "gf/t0/01/03").unwrap();
        assert_eq!(c.lhs, "1/180");
        let c = rep.checks.iter().find(|c| c.id == "gf/t1/00/01").unwrap();
        assert_eq!(c.lhs, "1/24");
        assert!(check_generating_functions(3, 4).is_err());
    }

    #[test]
    fn exports() {
        let t = build_t0(5, 5).unwrap();
        let csv = t.grid.to_csv();
        assert_eq!(csv.lines().nth(2).unwrap(), "0,0,1,5,49,820");
        let h = build_h1(1, 2).unwrap();
        assert_eq!(h.grid.to_json(), r#"[["1","1","1"],["0","1","10/9"]]"#);
    }
}
