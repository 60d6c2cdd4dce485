//! `C(m)` through central factorial numbers.
//!
//! With `c_j = C(2j, j) / 4^j` the cfn series simplify to
//!
//! ```text
//! C(2k+1) = 2^(2k+1) sum_{j>=0} c_j H1(k, j) / (2j+1)^2
//! C(2k)   = 1/2 sum_{j>=1} H0(k, j) / (j^3 c_j)
//! ```
//!
//! The harmonic numbers are carried as running floating values, updated by
//! their defining recurrences, so a million terms cost a few million
//! multiply-adds instead of exact rationals with million-digit denominators.
//!
//! Tail bound: `1/sqrt(pi (j + 1/2)) <= c_j <= 1/sqrt(pi j)`, the harmonic
//! numbers are bounded by their limits `A1(k)` and `A0(k-1)`, and
//! `sum_{j>N} j^(-5/2) <= (2/3) N^(-3/2)`.

use std::f64::consts::PI;

use super::{check_m, rounding, MomentValue, Route};
use crate::error::{Error, Result};
use crate::hp::HpReal;

fn a1_f64(k: u32) -> f64 {
    (PI / 2.0).powi(2 * k as i32) / (1..=2 * k).map(f64::from).product::<f64>()
}

fn a0_f64(k: u32) -> f64 {
    PI.powi(2 * k as i32) / (1..=2 * k + 1).map(f64::from).product::<f64>()
}

fn odd_tail(k: u32, n: usize) -> f64 {
    let n = n as f64;
    2f64.powi(2 * k as i32 + 1) * a1_f64(k) / (4.0 * PI.sqrt()) * (2.0 / 3.0) * n.powf(-1.5)
}

fn even_tail(k: u32, n: usize) -> f64 {
    let n = n as f64;
    a0_f64(k - 1) * PI.sqrt() / 2.0 * (1.0 + 1.0 / (2.0 * n)).sqrt() * (2.0 / 3.0) * n.powf(-1.5)
}

/// `C(2k+1)` for `k = 0..=kmax`, summing `j = 0..=n`.
fn odd_moments(kmax: u32, w: u32, n: usize) -> Vec<HpReal> {
    let kmax = kmax as usize;
    let one = HpReal::one(w);
    let mut h = vec![HpReal::zero(w); kmax + 1];
    h[0] = one.clone();
    let mut sums = vec![HpReal::zero(w); kmax + 1];
    let mut c = one.clone();
    for j in 0..=n as u64 {
        let inv = &one / HpReal::from_u64((2 * j + 1) * (2 * j + 1), w);
        let weight = &c * &inv;
        for k in 0..=kmax {
            sums[k] = &sums[k] + &(&weight * &h[k]);
        }
        // H1(k, j+1) = H1(k, j) + H1(k-1, j) / (2j+1)^2
        for k in (1..=kmax).rev() {
            h[k] = &h[k] + &(&h[k - 1] * &inv);
        }
        c = c.mul_u64(2 * j + 1).div_u64(2 * j + 2);
    }
    sums.into_iter().enumerate().map(|(k, s)| s.mul_u64(1u64 << (2 * k + 1))).collect()
}

/// `C(2k)` for `k = 1..=kmax`, summing `j = 1..=n`.
fn even_moments(kmax: u32, w: u32, n: usize) -> Vec<HpReal> {
    let kmax = kmax as usize;
    let one = HpReal::one(w);
    // h[k] = H0(k, j); H0(1, j) = 1 and H0(k, 1) = 0 for k >= 2
    let mut h = vec![HpReal::zero(w); kmax + 1];
    h[1] = one.clone();
    let mut sums = vec![HpReal::zero(w); kmax + 1];
    let mut c = HpReal::from_u64(1, w).div_u64(2);
    for j in 1..=n as u64 {
        let inv2 = &one / HpReal::from_u64(j * j, w);
        let weight = &inv2 / (&c * HpReal::from_u64(2 * j, w));
        for k in 1..=kmax {
            sums[k] = &sums[k] + &(&weight * &h[k]);
        }
        // H0(k, j+1) = H0(k, j) + H0(k-1, j) / j^2
        for k in (2..=kmax).rev() {
            h[k] = &h[k] + &(&h[k - 1] * &inv2);
        }
        c = c.mul_u64(2 * j + 1).div_u64(2 * j + 2);
    }
    sums
}

/// `C(m)` for every `m` in `ms` from one pass per parity.
pub fn c_cfn_routes(ms: &[u32], digits: u32, n: usize) -> Result<Vec<MomentValue>> {
    for &m in ms {
        check_m(m)?;
        if n < m as usize {
            return Err(Error::InvalidArgument(format!("cfn route needs N >= m, got N = {n}, m = {m}")));
        }
    }
    let w = digits + 5;
    let kodd = ms.iter().filter(|m| *m % 2 == 1).map(|m| m / 2).max();
    let keven = ms.iter().filter(|m| *m % 2 == 0).map(|m| m / 2).max();
    let (odd, even) = rayon::join(
        || kodd.map(|k| odd_moments(k, w, n)),
        || keven.map(|k| even_moments(k, w, n)),
    );
    let round = rounding(digits) + n as f64 * 10f64.powi(-(w as i32));
    Ok(ms
        .iter()
        .map(|&m| {
            let k = m / 2;
            let (value, tail) = if m % 2 == 1 {
                (odd.as_ref().expect("odd pass ran")[k as usize].clone(), odd_tail(k, n))
            } else {
                (even.as_ref().expect("even pass ran")[k as usize].clone(), even_tail(k, n))
            };
            MomentValue {
                m,
                route: Route::CfnSeries,
                value: value.with_digits(digits),
                terms: Some(n),
                error_bound: tail + round,
            }
        })
        .collect())
}

/// `C(m)` from the cfn series cut after index `n`, with a rigorous tail bound.
pub fn c_cfn_route(m: u32, digits: u32, n: usize) -> Result<MomentValue> {
    Ok(c_cfn_routes(&[m], digits, n)?.remove(0))
}
