//! Recursive harmonic series and their duals.
//!
//! `R(k)` nests with inclusive indices, so it is the complete homogeneous
//! symmetric sum `h_k` of the weights `1/(2i+1)^2` (odd) or `1/i^2` (even);
//! `A(k)` nests strictly and is the elementary symmetric sum `e_k`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::nested::{first_index, weight, weight_sum_bound, weight_tail};
use super::{inv_factorial, rounding, Family, Method, SeriesValue};
use crate::cfn::Parity;
use crate::error::{Error, Result};
use crate::exact::{bernoulli, binomial_int, cycle_count, euler_zigzag, partitions, BigRational};
use crate::hp::{self, HpReal};

pub const ANCHOR_R_CLOSED: &str = "recursive-series-closed-form";
pub const ANCHOR_R_CYCLE: &str = "recursive-series-cycle-index";
pub const ANCHOR_A: &str = "dual-series-closed-form";
pub const ANCHOR_EULER_SUM: &str = "euler-binomial-vanishing-sum";

fn r_family(parity: Parity) -> Family {
    match parity {
        Parity::Odd => Family::ROdd,
        Parity::Even => Family::REven,
    }
}

fn check_k(k: u32) -> Result<()> {
    if k == 0 {
        Err(Error::InvalidArgument("R(k) is defined for k >= 1".into()))
    } else {
        Ok(())
    }
}

fn closed(family: Family, k: u32, value: HpReal, digits: u32) -> SeriesValue {
    SeriesValue { family, index: k, value: value.with_digits(digits), method: Method::ClosedForm, error_bound: rounding(digits) }
}

/// `R_odd(k) = (pi/2)^(2k) E*_2k / (2k)!`.
pub fn r_odd(k: u32, digits: u32) -> Result<SeriesValue> {
    check_k(k)?;
    let w = digits + 5;
    let e = HpReal::from_rational(&euler_zigzag(2 * k as usize)?, w);
    let v = hp::pi(w).div_u64(2).powi(2 * k) * e * inv_factorial(2 * k, w);
    Ok(closed(Family::ROdd, k, v, digits))
}

/// `R_even(k) = 2 (2^(2k-1) - 1) |B_2k| pi^(2k) / (2k)!`.
pub fn r_even(k: u32, digits: u32) -> Result<SeriesValue> {
    check_k(k)?;
    let w = digits + 5;
    let factor = (BigInt::from(1) << (2 * k as usize - 1)) - 1;
    let b = bernoulli(2 * k as usize).abs() * BigRational::from_integer(factor * 2);
    let v = hp::pi(w).powi(2 * k) * HpReal::from_rational(&b, w) * inv_factorial(2 * k, w);
    Ok(closed(Family::REven, k, v, digits))
}

fn r_closed(k: u32, parity: Parity, digits: u32) -> Result<SeriesValue> {
    match parity {
        Parity::Odd => r_odd(k, digits),
        Parity::Even => r_even(k, digits),
    }
}

/// Power sum `p_l` of the weights: `(1 - 4^-l) zeta(2l)` or `zeta(2l)`, with zeta from eta.
fn power_sum(l: u32, parity: Parity, w: u32) -> Result<HpReal> {
    let z = hp::zeta(2 * l, w)?;
    Ok(match parity {
        Parity::Even => z,
        Parity::Odd => {
            let one = HpReal::one(w);
            let q = &one - &(&one / HpReal::from_u64(4, w).powi(l));
            z * q
        }
    })
}

/// `R(k) = 1/k! sum_pi a(pi) prod_l p_l^(pi_l)` over the partitions of `k`.
pub fn r_via_partitions(k: u32, parity: Parity, digits: u32) -> Result<SeriesValue> {
    check_k(k)?;
    let w = digits + 5;
    let p: Vec<HpReal> = (1..=k).map(|l| power_sum(l, parity, w)).collect::<Result<_>>()?;
    let mut sum = HpReal::zero(w);
    for part in partitions(k)? {
        let mut term = HpReal::from_rational(&cycle_count(&part), w);
        for (i, &mult) in part.multiplicities().iter().enumerate() {
            if mult > 0 {
                term = term * p[i].powi(mult);
            }
        }
        sum = sum + term;
    }
    let v = sum * inv_factorial(k, w);
    Ok(SeriesValue { family: r_family(parity), index: k, value: v.with_digits(digits), method: Method::ClosedForm, error_bound: rounding(digits) })
}

/// `R(k)` summed directly over indices up to `n`, with a rigorous tail bound.
///
/// `h_d` of a growing prefix is updated in place: adding weight `x` maps
/// `h_d` to `h_d + x h_{d-1}` with `h_{d-1}` already updated.
pub fn r_truncated(k: u32, parity: Parity, digits: u32, n: usize) -> Result<SeriesValue> {
    check_k(k)?;
    if n < 1 {
        return Err(Error::InvalidArgument("truncated R needs N >= 1".into()));
    }
    let w = digits + 5;
    let k = k as usize;
    let mut h = vec![HpReal::zero(w); k + 1];
    h[0] = HpReal::one(w);
    for i in first_index(parity)..=n as u64 {
        let x = weight(parity, i, w);
        for d in 1..=k {
            h[d] = &h[d] + &(&x * &h[d - 1]);
        }
    }
    // missing multisets contain an index above n
    let bound = weight_tail(parity, n) * weight_sum_bound(parity).powi(k as i32 - 1) + rounding(digits);
    Ok(SeriesValue {
        family: r_family(parity),
        index: k as u32,
        value: h[k].with_digits(digits),
        method: Method::TruncatedSum,
        error_bound: bound,
    })
}

/// `A1(k) = (pi/2)^(2k) / (2k)!`, with `A1(0) = 1`.
pub fn a1(k: u32, digits: u32) -> SeriesValue {
    let w = digits + 5;
    let v = hp::pi(w).div_u64(2).powi(2 * k) * inv_factorial(2 * k, w);
    closed(Family::A1, k, v, digits)
}

/// `A0(k) = pi^(2k) / (2k+1)!`, with `A0(0) = 1`.
pub fn a0(k: u32, digits: u32) -> SeriesValue {
    let w = digits + 5;
    let v = hp::pi(w).powi(2 * k) * inv_factorial(2 * k + 1, w);
    closed(Family::A0, k, v, digits)
}

/// `A(k) = sum_{l=1}^k (-1)^(l+1) R(l) A(k-l)` from `A(0) = 1`, using the closed forms of `R`.
pub fn a_via_recurrence(k: u32, parity: Parity, digits: u32) -> Result<SeriesValue> {
    let w = digits + 5;
    let r: Vec<HpReal> = (1..=k).map(|l| r_closed(l, parity, w).map(|s| s.value)).collect::<Result<_>>()?;
    let mut a = vec![HpReal::one(w)];
    for j in 1..=k as usize {
        let mut s = HpReal::zero(w);
        for l in 1..=j {
            let t = &r[l - 1] * &a[j - l];
            s = if l % 2 == 1 { s + t } else { s - t };
        }
        a.push(s);
    }
    let family = match parity {
        Parity::Odd => Family::A1,
        Parity::Even => Family::A0,
    };
    Ok(SeriesValue { family, index: k, value: a[k as usize].with_digits(digits), method: Method::TruncatedSum, error_bound: rounding(digits) })
}

/// `sum_{l=0}^k (-1)^(l+1) C(2k, 2l) E*_2l`, which vanishes for `k >= 1`.
pub fn euler_binomial_sum(k: u32) -> Result<BigRational> {
    let mut s = BigRational::zero();
    for l in 0..=k as u64 {
        let t = euler_zigzag(2 * l as usize)? * BigRational::from_integer(binomial_int(2 * k as u64, 2 * l));
        s = if l % 2 == 1 { s + t } else { s - t };
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &HpReal, b: &HpReal, tol: f64) -> bool {
        (a - b).abs().to_f64() < tol
    }

    #[test]
    fn closed_forms_small_k() {
        let d = 40;
        let pi = hp::pi(d);
        let pi2 = &pi * &pi;
        assert!(close(&r_odd(1, d).unwrap().value, &pi2.div_u64(8), 1e-38));
        assert!(close(&r_odd(2, d).unwrap().value, &(&pi2 * &pi2).mul_u64(5).div_u64(384), 1e-38));
        assert!(close(&r_even(1, d).unwrap().value, &pi2.div_u64(6), 1e-38));
        assert!(close(&r_even(2, d).unwrap().value, &(&pi2 * &pi2).mul_u64(7).div_u64(360), 1e-38));
        assert!(r_odd(0, d).is_err());
    }

    #[test]
    fn partitions_match_closed_forms() {
        for k in 1..=6 {
            for parity in [Parity::Odd, Parity::Even] {
                let a = r_via_partitions(k, parity, 45).unwrap().value;
                let b = r_closed(k, parity, 45).unwrap().value;
                assert!(close(&a, &b, 1e-42), "k={k} {parity:?}");
            }
        }
    }

    #[test]
    fn truncated_sums_within_bounds() {
        for k in 1..=3 {
            for parity in [Parity::Odd, Parity::Even] {
                let t = r_truncated(k, parity, 25, 2000).unwrap();
                let c = r_closed(k, parity, 25).unwrap().value;
                let gap = (&c - &t.value).to_f64();
                assert!(gap > 0.0 && gap <= t.error_bound, "k={k} {parity:?} gap={gap}");
            }
        }
    }

    #[test]
    fn dual_series_recurrence() {
        assert_eq!(a1(0, 30).value.to_decimal(5), "1.0000");
        for k in 0..=6 {
            let r1 = a_via_recurrence(k, Parity::Odd, 45).unwrap().value;
            assert!(close(&r1, &a1(k, 45).value, 1e-42));
            let r0 = a_via_recurrence(k, Parity::Even, 45).unwrap().value;
            assert!(close(&r0, &a0(k, 45).value, 1e-42));
        }
    }

    #[test]
    fn a0_one_is_zeta_two_by_double_sum() {
        let direct: f64 = (1..=20_000u64).map(|i| 1.0 / (i * i) as f64).sum();
        assert!((a0(1, 20).value.to_f64() - direct).abs() < 1e-4);
    }

    #[test]
    fn euler_binomial_sum_vanishes() {
        for k in 1..=10 {
            assert!(euler_binomial_sum(k).unwrap().is_zero());
        }
        assert_eq!(euler_binomial_sum(0).unwrap(), BigRational::from_integer((-1).into()));
    }
}
