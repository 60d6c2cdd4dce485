//! Identity checks that combine several routes into one report.

use rayon::prelude::*;

use super::nested::{weight, weight_sum_bound, weight_tail};
use super::{rounding, s_even, s_odd};
use crate::cfn::{build_h0, build_h1, Parity};
use crate::error::{Error, Result};
use crate::exact::factorial;
use crate::hp::{self, HpReal};
use crate::quadrature::{integrate_1d, integrate_2d_iterated, Integrand1D, Point};
use crate::report::{Check, VerificationReport};

pub const ANCHOR_CONSEQUENCES: &str = "moment-consequences-k0-k1";
pub const ANCHOR_LOG_POWER: &str = "log-power-integral";
pub const ANCHOR_H_REDUCTION: &str = "harmonic-number-integral-representation";
pub const ANCHOR_BINOMIAL_GF: &str = "central-binomial-generating-functions";
pub const ANCHOR_KERNEL_INTEGRAL: &str = "moment-single-integral-form";

/// `ln x`, accurate for `x` near 1 through the distance `to_one`.
fn ln_near_one(x: &HpReal, to_one: &HpReal) -> HpReal {
    if to_one.to_f64() < 0.5 {
        HpReal::ln_one_minus(to_one)
    } else {
        x.ln()
    }
}

/// `1 - x0 x1` from the distances of both coordinates to 1.
fn one_minus_product(p0: &Point, p1: &Point) -> HpReal {
    &p0.to_b + &(&p0.x * &p1.to_b)
}

/// The four identities obtained from the first odd and even moments.
struct Consequence {
    id: &'static str,
    closed: HpReal,
    series: (HpReal, f64),
}

fn closed_forms(digits: u32, n: usize) -> Result<Vec<Consequence>> {
    let w = digits + 5;
    let pi = hp::pi(w);
    let pi2 = &pi * &pi;
    let l2 = hp::log2(w);
    let e3 = hp::eta(3, w)?;
    let e5 = hp::eta(5, w)?;
    let s = |v: super::SeriesValue| (v.value, v.error_bound);
    let (s_even1, bound) = s(s_even(1, digits, n)?);
    Ok(vec![
        Consequence { id: "consequence/1", closed: &pi * &l2 / HpReal::from_u64(2, w), series: s(s_odd(0, digits, n)?) },
        Consequence {
            id: "consequence/2",
            closed: &pi2 * &pi * &l2 / HpReal::from_u64(24, w) + &pi * &e3 / HpReal::from_u64(8, w),
            series: s(s_odd(1, digits, n)?),
        },
        Consequence {
            id: "consequence/3",
            closed: &pi2 * &l2 / HpReal::from_u64(2, w) - e3.mul_u64(7).div_u64(3),
            series: s(s_even(0, digits, n)?),
        },
        Consequence {
            id: "consequence/4",
            closed: -(&pi2 * &pi2 * &l2 / HpReal::from_u64(24, w)) - &pi2 * &e3 / HpReal::from_u64(9, w)
                + e5.mul_u64(31).div_u64(15),
            series: (-s_even1, bound),
        },
    ])
}

fn consequence_integral(index: usize, digits: u32, tol: f64) -> Result<HpReal> {
    let d = digits;
    let zero = HpReal::zero(d);
    let one = HpReal::one(d);
    let two = HpReal::from_u64(2, d);
    let r = match index {
        0 => {
            let f = Integrand1D::new(|p: &Point| {
                let one_minus_sq = &p.to_b * &(&two - &p.to_b);
                -ln_near_one(&p.x, &p.to_b) / one_minus_sq.sqrt()
            })
            .singular_at_a()
            .singular_at_b();
            integrate_1d(&f, &zero, &one, d, tol)?
        }
        1 => integrate_2d_iterated(
            |p0: &Point, p1: &Point| {
                let om = one_minus_product(p0, p1);
                let op = &two - &om;
                let den = (&om * &op).sqrt() * (&p1.to_b * &(&two - &p1.to_b));
                ln_near_one(&p0.x, &p0.to_b) * ln_near_one(&p1.x, &p1.to_b) / den
            },
            d,
            tol,
        )?,
        2 => {
            let f = Integrand1D::new(|p: &Point| {
                let a = if p.to_b.to_f64() < 0.5 { HpReal::asin_sqrt_one_minus(&p.to_b) } else { p.x.sqrt().asin() };
                &a * &a / &p.x
            })
            .singular_at_b();
            integrate_1d(&f, &zero, &one, d, tol)?
        }
        _ => integrate_2d_iterated(
            |p0: &Point, p1: &Point| {
                let om = one_minus_product(p0, p1);
                let u = &p0.x * &p1.x;
                let a = if om.to_f64() < 0.5 { HpReal::asin_sqrt_one_minus(&om) } else { u.sqrt().asin() };
                &a * &a / &u * ln_near_one(&p1.x, &p1.to_b) / &p1.to_b
            },
            d,
            tol,
        )?,
    };
    Ok(r.value)
}

/// The four identities from `k = 0, 1`, each checked as nested series against
/// the closed form (within the series tail bound) and as a 1-D or 2-D
/// integral against the closed form (within `tol`). The first identity is
/// also tied back to `C(1)` through `-2 integral_0^1 log(x)/sqrt(1-x^2) dx`.
pub fn verify_consequences(digits: u32, n: usize, tol: f64) -> Result<VerificationReport> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let forms = closed_forms(digits, n)?;
    let sd = digits as usize;
    let integrals: Vec<Result<HpReal>> = (0..4).into_par_iter().map(|i| consequence_integral(i, digits, tol / 10.0)).collect();
    let mut report = VerificationReport::new("consequences");
    for (form, integral) in forms.iter().zip(integrals) {
        let integral = integral?;
        let (series, bound) = &form.series;
        report.push(Check::numeric(format!("{}/series", form.id), ANCHOR_CONSEQUENCES, series, &form.closed, *bound, sd));
        report.push(Check::numeric(format!("{}/quadrature", form.id), ANCHOR_CONSEQUENCES, &integral, &form.closed, tol, sd));
        report.push(Check::numeric(format!("{}/series-vs-quadrature", form.id), ANCHOR_CONSEQUENCES, series, &integral, bound + tol, sd));
        if form.id == "consequence/1" {
            let c1 = super::c_eta_route(1, digits)?.value;
            report.push(Check::numeric("consequence/1/moment", ANCHOR_KERNEL_INTEGRAL, &integral.mul_u64(2), &c1, 2.0 * tol, sd));
        }
    }
    Ok(report)
}

/// `integral_0^1 x^j log^l(x) dx = (-1)^l l! / (j+1)^(l+1)` for `j <= jmax`, `l <= lmax`.
pub fn verify_log_power(digits: u32, jmax: u32, lmax: u32, tol: f64) -> Result<VerificationReport> {
    let d = digits;
    let cases: Vec<(u32, u32)> = (0..=jmax).flat_map(|j| (0..=lmax).map(move |l| (j, l))).collect();
    let checks: Vec<Result<Check>> = cases
        .par_iter()
        .map(|&(j, l)| {
            let f = Integrand1D::new(|p: &Point| p.x.powi(j) * ln_near_one(&p.x, &p.to_b).powi(l)).singular_at_a();
            let r = integrate_1d(&f, &HpReal::zero(d), &HpReal::one(d), d, tol / 10.0)?;
            let mut exact = HpReal::from_bigint(&factorial(l as usize), d) / HpReal::from_u64(j as u64 + 1, d).powi(l + 1);
            if l % 2 == 1 {
                exact = -exact;
            }
            Ok(Check::numeric(format!("log-power/j{j}/l{l}"), ANCHOR_LOG_POWER, &r.value, &exact, tol, d as usize))
        })
        .collect();
    let mut report = VerificationReport::new("log-power");
    for c in checks {
        report.push(c?);
    }
    Ok(report)
}

/// `T_d(j) = sum_{i>=j} w(i) T_{d-1}(i)`, `T_0 = 1`, truncated at `n`, for `j <= jmax`.
fn tail_sums(parity: Parity, dmax: usize, jmax: usize, n: usize, w: u32) -> Vec<Vec<HpReal>> {
    let mut out = vec![vec![HpReal::zero(w); jmax + 1]; dmax + 1];
    let mut t = vec![HpReal::zero(w); dmax + 1];
    let start = if parity == Parity::Even { 1 } else { 0 };
    for i in (start..=n.max(jmax)).rev() {
        let x = weight(parity, i as u64, w);
        // T_d(i) = T_d(i+1) + w(i) T_{d-1}(i), so update d upwards from T_0 = 1
        let mut prev = HpReal::one(w);
        for td in t.iter_mut().skip(1) {
            *td = &*td + &(&x * &prev);
            prev = td.clone();
        }
        if i <= jmax {
            out[0][i] = HpReal::one(w);
            for d in 1..=dmax {
                out[d][i] = t[d].clone();
            }
        }
    }
    out
}

/// Harmonic numbers as alternating sums of closed-form duals and nested tails:
/// `H1(k, j) = sum_l (pi/2)^(2l)/(2l)! (-1)^(k-l) T_{k-l}(j)` and
/// `H0(k+1, j) = sum_l pi^(2l)/(2l+1)! (-1)^(k-l) T_{k-l}(j)`,
/// compared with the exact tables for `j <= jmax`.
pub fn verify_h_integral_reduction(k: u32, jmax: usize, n: usize, digits: u32) -> Result<VerificationReport> {
    if jmax < k as usize + 1 {
        return Err(Error::InvalidArgument("h-reduction needs jmax > k".into()));
    }
    if n < jmax {
        return Err(Error::InvalidArgument("h-reduction needs N >= jmax".into()));
    }
    let w = digits + 5;
    let ku = k as usize;
    let h1 = build_h1(ku, jmax)?;
    let h0 = build_h0(ku + 1, jmax)?;
    let mut report = VerificationReport::new("h-reduction");
    for parity in [Parity::Odd, Parity::Even] {
        let tails = tail_sums(parity, ku, jmax, n, w);
        let p1 = weight_sum_bound(parity);
        let t_err = |d: u32| if d == 0 { 0.0 } else { weight_tail(parity, n) * p1.powi(d as i32 - 1) };
        let duals: Vec<HpReal> = (0..=k)
            .map(|l| match parity {
                Parity::Odd => super::a1(l, w).value,
                Parity::Even => super::a0(l, w).value,
            })
            .collect();
        let start = if parity == Parity::Even { 1 } else { 0 };
        for j in start..=jmax {
            let mut rhs = HpReal::zero(w);
            let mut bound = rounding(digits);
            for l in 0..=k {
                let t = &duals[l as usize] * &tails[(k - l) as usize][j];
                rhs = if (k - l) % 2 == 0 { rhs + t } else { rhs - t };
                bound += duals[l as usize].to_f64() * t_err(k - l);
            }
            let (id, exact) = match parity {
                Parity::Odd => (format!("h-reduction/h1/k{k}/j{j:02}"), h1.get(ku, j)),
                Parity::Even => (format!("h-reduction/h0/k{}/j{j:02}", k + 1), h0.get(ku + 1, j)),
            };
            let lhs = HpReal::from_rational(&exact, w);
            report.push(Check::numeric(id, ANCHOR_H_REDUCTION, &lhs, &rhs, bound, digits as usize));
        }
    }
    Ok(report)
}

/// `sum C(2j,j) (x/2)^(2j) = 1/sqrt(1-x^2)` and `1/2 sum (2x)^(2j)/(j^2 C(2j,j)) = arcsin(x)^2`
/// at each sample `x` in `[0, 0.9]`, to `10^-(digits-10)`.
pub fn binomial_gf_identities(digits: u32, samples: &[f64]) -> Result<VerificationReport> {
    let w = digits + 5;
    let tol = 10f64.powi(-(digits as i32) + 10);
    let eps = 10f64.powi(-(w as i32));
    let mut report = VerificationReport::new("binomial-gf");
    for &xf in samples {
        if !(0.0..=0.9).contains(&xf) {
            return Err(Error::InvalidArgument(format!("sample {xf} outside [0, 0.9]")));
        }
        let x = HpReal::from_f64(xf, w);
        let x2 = &x * &x;
        let one = HpReal::one(w);
        // first identity, c_j = C(2j, j) / 4^j
        let mut c = one.clone();
        let mut power = one.clone();
        let mut central = HpReal::zero(w);
        for j in 0u64.. {
            let term = &c * &power;
            central = &central + &term;
            if term.to_f64() < eps {
                break;
            }
            c = c.mul_u64(2 * j + 1).div_u64(2 * j + 2);
            power = &power * &x2;
        }
        let rhs = &one / (&one - &x2).sqrt();
        report.push(Check::numeric(format!("binomial-gf/central/x={xf}"), ANCHOR_BINOMIAL_GF, &central, &rhs, tol, digits as usize));
        // second identity, terms x^(2j) / (2 j^2 c_j)
        let mut c = one.div_u64(2);
        let mut power = x2.clone();
        let mut square = HpReal::zero(w);
        if !x.is_zero() {
            for j in 1u64.. {
                let term = &power / (&c * HpReal::from_u64(2 * j * j, w));
                square = &square + &term;
                if term.to_f64() < eps {
                    break;
                }
                c = c.mul_u64(2 * j + 1).div_u64(2 * j + 2);
                power = &power * &x2;
            }
        }
        let a = x.asin();
        report.push(Check::numeric(format!("binomial-gf/arcsin-square/x={xf}"), ANCHOR_BINOMIAL_GF, &square, &(&a * &a), tol, digits as usize));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_power_small_cases() {
        let r = verify_log_power(25, 2, 2, 1e-18).unwrap();
        assert!(r.all_pass(), "{:?}", r.failures().collect::<Vec<_>>());
        assert_eq!(r.checks.len(), 9);
    }

    #[test]
    fn h_reduction_small() {
        for k in 0..=2 {
            let r = verify_h_integral_reduction(k, 6, 2000, 25).unwrap();
            assert!(r.all_pass(), "k={k} {:?}", r.failures().collect::<Vec<_>>());
        }
        assert!(verify_h_integral_reduction(3, 3, 100, 20).is_err());
    }

    #[test]
    fn h_reduction_example_k1_j1() {
        // H1(1, 1) = pi^2/8 - (pi^2/8 - 1)
        let r = verify_h_integral_reduction(1, 3, 100_000, 20).unwrap();
        let c = r.checks.iter().find(|c| c.id == "h-reduction/h1/k1/j01").unwrap();
        assert!(c.pass);
        assert!(c.lhs.starts_with('1'));
    }

    #[test]
    fn binomial_identities() {
        let r = binomial_gf_identities(30, &[0.0, 0.5, 0.9]).unwrap();
        assert!(r.all_pass(), "{:?}", r.failures().collect::<Vec<_>>());
        assert!(binomial_gf_identities(30, &[0.95]).is_err());
    }
}
