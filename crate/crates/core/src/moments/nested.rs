//! Weighted recursive series `S_odd(l)`, `S_even(l)` and the moment route built on them.
//!
//! ```text
//! S_odd(l)  = sum_{j0>=0} c_j0 / (2 j0 + 1)^2  sum_{j0<=j1<=...<=jl} prod 1/(2 j_i + 1)^2
//! S_even(l) = sum_{j0>=1} 1 / (2 j0^3 c_j0)    sum_{j0<=j1<=...<=jl} prod 1/j_i^2
//! ```
//!
//! Both are evaluated inside-out with suffix sums `W_d(j) = sum_{j'>=j} w(j') W_{d-1}(j')`,
//! truncated at `N`. Missing tuples have some index above `N`, so
//! `W_d - W_d^N <= T p1^(d-1)` where `T` is the weight tail past `N` and `p1` the full
//! weight sum; the kernel tail past `N` is bounded like the cfn series.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use super::{check_m, inv_factorial, rounding, Family, Method, MomentValue, Route, SeriesValue};
use crate::cfn::Parity;
use crate::error::{Error, Result};
use crate::hp::{self, HpReal};

/// Upper bounds for `pi^2/8` and `pi^2/6`.
const P1_ODD: f64 = 1.2338;
const P1_EVEN: f64 = 1.6450;

pub(crate) fn weight_sum_bound(parity: Parity) -> f64 {
    match parity {
        Parity::Odd => P1_ODD,
        Parity::Even => P1_EVEN,
    }
}

/// `sum_{j>N} w(j)`: `1/(2(2N+1)) <= 1/(4N)` for odd weights, `1/N` for even.
pub(crate) fn weight_tail(parity: Parity, n: usize) -> f64 {
    match parity {
        Parity::Odd => 1.0 / (4.0 * n as f64),
        Parity::Even => 1.0 / n as f64,
    }
}

fn kernel_tail(parity: Parity, n: usize) -> f64 {
    let n = n as f64;
    let s = (2.0 / 3.0) * n.powf(-1.5);
    match parity {
        Parity::Odd => s / (4.0 * PI.sqrt()),
        Parity::Even => s * PI.sqrt() / 2.0 * (1.0 + 1.0 / (2.0 * n)).sqrt(),
    }
}

pub(crate) fn first_index(parity: Parity) -> u64 {
    match parity {
        Parity::Odd => 0,
        Parity::Even => 1,
    }
}

/// `1/(2j+1)^2` or `1/j^2`.
pub(crate) fn weight(parity: Parity, j: u64, w: u32) -> HpReal {
    let d = match parity {
        Parity::Odd => 2 * j + 1,
        Parity::Even => j,
    };
    HpReal::one(w) / HpReal::from_u64(d * d, w)
}

#[derive(Debug)]
struct NestedTable {
    /// `S(l)` for `l = 0..values.len()`.
    values: Vec<HpReal>,
    kernel_partial: f64,
}

fn build(parity: Parity, lmax: u32, w: u32, n: usize) -> NestedTable {
    let start = first_index(parity);
    let len = n + 1 - start as usize;
    let one = HpReal::one(w);
    let mut kern = Vec::with_capacity(len);
    let mut weights = Vec::with_capacity(len);
    let mut c = match parity {
        Parity::Odd => one.clone(),
        Parity::Even => one.div_u64(2),
    };
    for j in start..=n as u64 {
        let wj = weight(parity, j, w);
        kern.push(match parity {
            Parity::Odd => &c * &wj,
            Parity::Even => &wj / (&c * HpReal::from_u64(2 * j, w)),
        });
        weights.push(wj);
        c = c.mul_u64(2 * j + 1).div_u64(2 * j + 2);
    }
    let kernel_partial = kern.iter().fold(HpReal::zero(w), |a, k| a + k).to_f64();
    let mut level = vec![one; len];
    let mut values = Vec::with_capacity(lmax as usize + 1);
    for l in 0..=lmax {
        values.push(kern.iter().zip(&level).fold(HpReal::zero(w), |a, (k, v)| a + k * v));
        if l == lmax {
            break;
        }
        let mut acc = HpReal::zero(w);
        for i in (0..len).rev() {
            acc = &acc + &(&weights[i] * &level[i]);
            level[i] = acc.clone();
        }
    }
    NestedTable { values, kernel_partial }
}

/// Suffix-sum tables are shared across moments and calls.
fn table(parity: Parity, lmax: u32, w: u32, n: usize) -> Arc<NestedTable> {
    type Cache = Mutex<HashMap<(Parity, u32, usize), Arc<NestedTable>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (parity, w, n);
    if let Some(t) = cache.lock().expect("nested cache poisoned").get(&key) {
        if t.values.len() > lmax as usize {
            return t.clone();
        }
    }
    let t = Arc::new(build(parity, lmax, w, n));
    let mut guard = cache.lock().expect("nested cache poisoned");
    let slot = guard.entry(key).or_insert_with(|| t.clone());
    if slot.values.len() < t.values.len() {
        *slot = t.clone();
    }
    slot.clone()
}

fn nested(parity: Parity, l: u32, digits: u32, n: usize) -> Result<SeriesValue> {
    if n < 1 {
        return Err(Error::InvalidArgument("nested series need N >= 1".into()));
    }
    let w = digits + 5;
    let t = table(parity, l, w, n);
    let p1 = weight_sum_bound(parity);
    let inner = if l == 0 { 0.0 } else { t.kernel_partial * weight_tail(parity, n) * p1.powi(l as i32 - 1) };
    let bound = inner + kernel_tail(parity, n) * p1.powi(l as i32) + rounding(digits);
    Ok(SeriesValue {
        family: match parity {
            Parity::Odd => Family::SOdd,
            Parity::Even => Family::SEven,
        },
        index: l,
        value: t.values[l as usize].with_digits(digits),
        method: Method::TruncatedSum,
        error_bound: bound,
    })
}

pub fn s_odd(l: u32, digits: u32, n: usize) -> Result<SeriesValue> {
    nested(Parity::Odd, l, digits, n)
}

pub fn s_even(l: u32, digits: u32, n: usize) -> Result<SeriesValue> {
    nested(Parity::Even, l, digits, n)
}

/// `C(2k+1) = sum_l (-1)^l 2^(2l+1) pi^(2k-2l)/(2k-2l)! S_odd(l)` and
/// `C(2k+2) = sum_l (-1)^l pi^(2k-2l)/(2k-2l+1)! S_even(l)`.
pub fn c_nested_route(m: u32, digits: u32, n: usize) -> Result<MomentValue> {
    check_m(m)?;
    let w = digits + 5;
    let pi = hp::pi(w);
    let (parity, k) = if m % 2 == 1 { (Parity::Odd, m / 2) } else { (Parity::Even, m / 2 - 1) };
    let mut sum = HpReal::zero(w);
    let mut bound = 0.0;
    for l in 0..=k {
        let s = nested(parity, l, digits, n)?;
        let coef = match parity {
            Parity::Odd => pi.powi(2 * (k - l)) * inv_factorial(2 * (k - l), w) * HpReal::from_u64(1u64 << (2 * l + 1), w),
            Parity::Even => pi.powi(2 * (k - l)) * inv_factorial(2 * (k - l) + 1, w),
        };
        bound += coef.to_f64() * s.error_bound;
        let term = coef * s.value;
        sum = if l % 2 == 0 { sum + term } else { sum - term };
    }
    Ok(MomentValue {
        m,
        route: Route::NestedSeries,
        value: sum.with_digits(digits),
        terms: Some(n),
        error_bound: bound + rounding(digits),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::c_eta_route;

    #[test]
    fn brute_force_double_sum() {
        let n = 40usize;
        let mut brute = 0.0f64;
        let mut c = 1.0f64;
        for j0 in 0..=n {
            let mut inner = 0.0;
            for j1 in j0..=n {
                inner += 1.0 / ((2 * j1 + 1) as f64).powi(2);
            }
            brute += c / ((2 * j0 + 1) as f64).powi(2) * inner;
            c *= (2 * j0 + 1) as f64 / (2 * j0 + 2) as f64;
        }
        let v = s_odd(1, 20, n).unwrap().value.to_f64();
        assert!((v - brute).abs() < 1e-13);
    }

    #[test]
    fn low_moments_within_bounds() {
        for m in 1..=4 {
            let v = c_nested_route(m, 25, 2000).unwrap();
            let e = c_eta_route(m, 25).unwrap();
            let gap = (&v.value - &e.value).abs().to_f64();
            assert!(gap <= v.error_bound, "m={m} gap={gap} bound={}", v.error_bound);
        }
    }

    #[test]
    fn truncated_values_increase_with_cutoff() {
        for l in 0..3 {
            let mut prev = s_even(l, 20, 10).unwrap().value;
            for n in [100, 1000] {
                let v = s_even(l, 20, n).unwrap();
                assert!(v.value > prev);
                prev = v.value;
            }
        }
    }
}
