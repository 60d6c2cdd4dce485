//! Routes to the moments `C(m)` and the series families behind them.
//!
//! * [`c_eta_route`]: closed form in `pi`, `eta(2l+1)` and `zeta(m+1)`.
//! * [`c_quadrature_route`]: tanh-sinh quadrature of the defining integral.
//! * [`c_cfn_route`]: central factorial series, with running harmonic numbers.
//! * [`c_nested_route`]: weighted sums of the nested series `S_odd`, `S_even`.

mod cfn_route;
pub mod kernels;
pub mod nested;
pub mod series;
pub mod verify;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::factorial;
use crate::hp::{self, HpReal};
use crate::quadrature;

pub use cfn_route::{c_cfn_route, c_cfn_routes};
pub use kernels::{kernel_k0, kernel_k0_quadrature, kernel_k0_series, kernel_k1, kernel_k1_quadrature, kernel_k1_series};
pub use nested::{c_nested_route, s_even, s_odd};
pub use series::{a0, a1, a_via_recurrence, euler_binomial_sum, r_even, r_odd, r_truncated, r_via_partitions};
pub use verify::{binomial_gf_identities, verify_consequences, verify_h_integral_reduction, verify_log_power};

pub const ANCHOR_ETA: &str = "moment-eta-closed-form";
pub const ANCHOR_QUADRATURE: &str = "moment-integral";
pub const ANCHOR_CFN: &str = "moment-cfn-series";
pub const ANCHOR_NESTED: &str = "moment-weighted-recursive-series";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    EtaClosedForm,
    CfnSeries,
    NestedSeries,
    Quadrature,
}

impl Route {
    pub const ALL: [Route; 4] = [Route::EtaClosedForm, Route::Quadrature, Route::CfnSeries, Route::NestedSeries];

    pub fn name(self) -> &'static str {
        match self {
            Route::EtaClosedForm => "eta",
            Route::CfnSeries => "cfn",
            Route::NestedSeries => "nested",
            Route::Quadrature => "quad",
        }
    }

    pub fn parse(s: &str) -> Option<Route> {
        match s {
            "eta" => Some(Route::EtaClosedForm),
            "cfn" => Some(Route::CfnSeries),
            "nested" => Some(Route::NestedSeries),
            "quad" | "quadrature" => Some(Route::Quadrature),
            _ => None,
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `C(m)` from one route.
#[derive(Debug, Clone)]
pub struct MomentValue {
    pub m: u32,
    pub route: Route,
    pub value: HpReal,
    /// Series cutoff, for the series routes.
    pub terms: Option<usize>,
    /// Bound on `|value - C(m)|`.
    pub error_bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    ROdd,
    REven,
    A0,
    A1,
    SOdd,
    SEven,
    K0,
    K1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    TruncatedSum,
    Quadrature,
}

#[derive(Debug, Clone)]
pub struct SeriesValue {
    pub family: Family,
    pub index: u32,
    pub value: HpReal,
    pub method: Method,
    pub error_bound: f64,
}

/// Rounding allowance for a value carried at `digits` digits.
pub(crate) fn rounding(digits: u32) -> f64 {
    10f64.powi(-(digits as i32) + 2)
}

pub(crate) fn check_m(m: u32) -> Result<()> {
    if m == 0 {
        Err(Error::InvalidArgument("moment index must be >= 1".into()))
    } else {
        Ok(())
    }
}

pub(crate) fn inv_factorial(n: u32, digits: u32) -> HpReal {
    HpReal::one(digits) / HpReal::from_bigint(&factorial(n as usize), digits)
}

/// `sum_{l=0}^{floor(m/2)} (-1)^l pi^(m-2l)/(m-2l)! eta(2l+1) + [m even] (-1)^(m/2) zeta(m+1)`.
pub fn c_eta_route(m: u32, digits: u32) -> Result<MomentValue> {
    check_m(m)?;
    let w = digits + 5;
    let pi = hp::pi(w);
    let mut sum = HpReal::zero(w);
    for l in 0..=m / 2 {
        let term = pi.powi(m - 2 * l) * inv_factorial(m - 2 * l, w) * hp::eta(2 * l + 1, w)?;
        sum = if l % 2 == 0 { sum + term } else { sum - term };
    }
    if m % 2 == 0 {
        let z = hp::zeta(m + 1, w)?;
        sum = if (m / 2) % 2 == 0 { sum + z } else { sum - z };
    }
    Ok(MomentValue { m, route: Route::EtaClosedForm, value: sum.with_digits(digits), terms: None, error_bound: rounding(digits) })
}

/// `C(m)` by quadrature of the defining integral to absolute tolerance `tol`.
pub fn c_quadrature_route(m: u32, digits: u32, tol: f64) -> Result<MomentValue> {
    check_m(m)?;
    let r = quadrature::moment_quadrature(m, digits, tol)?;
    Ok(MomentValue { m, route: Route::Quadrature, value: r.value, terms: None, error_bound: r.error.max(rounding(digits)) })
}

/// Dispatches to one route. `n` is the series cutoff, `tol` the quadrature tolerance.
pub fn moment(m: u32, route: Route, digits: u32, n: usize, tol: f64) -> Result<MomentValue> {
    match route {
        Route::EtaClosedForm => c_eta_route(m, digits),
        Route::Quadrature => c_quadrature_route(m, digits, tol),
        Route::CfnSeries => c_cfn_route(m, digits, n),
        Route::NestedSeries => c_nested_route(m, digits, n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &HpReal, b: &HpReal, tol: f64) -> bool {
        (a - b).abs().to_f64() < tol
    }

    #[test]
    fn eta_route_small_moments() {
        let d = 40;
        let pi = hp::pi(d);
        let l2 = hp::log2(d);
        let c1 = c_eta_route(1, d).unwrap();
        assert!(close(&c1.value, &(&pi * &l2), 1e-38));
        assert_eq!(c1.value.to_decimal(16), "2.177586090303602");
        // pi^2/2 log2 - 7/4 zeta(3)
        let z3 = hp::zeta(3, d).unwrap();
        let c2 = &pi * &pi * &l2 / HpReal::from_u64(2, d) - z3.mul_u64(7).div_u64(4);
        assert!(close(&c_eta_route(2, d).unwrap().value, &c2, 1e-37));
        // pi^4/24 log2 - pi^2/2 eta(3) + 31/15 eta(5)
        let e3 = hp::eta(3, d).unwrap();
        let e5 = hp::eta(5, d).unwrap();
        let pi2 = &pi * &pi;
        let c4 = &pi2 * &pi2 * &l2 / HpReal::from_u64(24, d) - &pi2 * &e3 / HpReal::from_u64(2, d) + e5.mul_u64(31).div_u64(15);
        assert!(close(&c_eta_route(4, d).unwrap().value, &c4, 1e-37));
        assert!(c_eta_route(0, d).is_err());
    }

    #[test]
    fn midpoint_rule_oracle_for_first_moment() {
        // composite midpoint rule on theta/2 cot(theta/2), f64
        let n = 200_000;
        let h = std::f64::consts::PI / n as f64;
        let s: f64 = (0..n)
            .map(|i| {
                let t = (i as f64 + 0.5) * h;
                t / 2.0 / (t / 2.0).tan()
            })
            .sum::<f64>()
            * h;
        let c1 = c_eta_route(1, 30).unwrap().value.to_f64();
        assert!((s - c1).abs() < 1e-6);
    }

    #[test]
    fn quadrature_matches_eta_route() {
        for m in 1..=4 {
            let q = c_quadrature_route(m, 30, 1e-22).unwrap();
            let e = c_eta_route(m, 30).unwrap();
            assert!(close(&q.value, &e.value, 1e-20), "m={m}");
        }
    }

    #[test]
    fn route_names_round_trip() {
        for r in Route::ALL {
            assert_eq!(Route::parse(r.name()), Some(r));
        }
        assert_eq!(Route::parse("bogus"), None);
    }
}
