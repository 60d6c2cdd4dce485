//! The kernels
//!
//! ```text
//! K1(z) = sum_{j>=0} C(2j, j) (z/2)^(2j) / (2j+1)^2  = 1/z integral_0^z arcsin(y)/y dy
//! K0(z) = 1/2 sum_{j>=1} (4z)^j / (j^3 C(2j, j))     = integral_0^z arcsin(sqrt y)^2 / y dy
//! ```
//!
//! on `[0, 1]`. The series converge geometrically for `z < 1` and are used up
//! to `z = 0.75`; above that the integral forms are used.

use super::{rounding, Family, Method, SeriesValue};
use crate::error::{Error, Result};
use crate::hp::HpReal;
use crate::quadrature::{integrate_1d, Integrand1D, Point};

pub const ANCHOR_KERNEL: &str = "kernel-explicit-form";

const SERIES_LIMIT: f64 = 0.75;

fn check_z(z: &HpReal) -> Result<()> {
    if z.is_negative() || z > &HpReal::one(z.digits()) {
        Err(Error::InvalidArgument(format!("kernel argument must lie in [0, 1], got {}", z.to_decimal(12))))
    } else {
        Ok(())
    }
}

fn series_value(family: Family, z: &HpReal, digits: u32) -> Result<SeriesValue> {
    check_z(z)?;
    let w = digits + 5;
    let z = z.with_digits(w);
    let zf = z.to_f64();
    if zf >= 1.0 {
        return Err(Error::InvalidArgument("kernel series is only used for z < 1".into()));
    }
    let eps = 10f64.powi(-(w as i32));
    let (ratio, mut j, mut c, mut power, mut sum) = match family {
        // term ratios are below z^2 (K1) and z (K0)
        Family::K1 => (zf * zf, 0u64, HpReal::one(w), HpReal::one(w), HpReal::zero(w)),
        _ => (zf, 1u64, HpReal::one(w).div_u64(2), z.clone(), HpReal::zero(w)),
    };
    let z2 = &z * &z;
    let tail = loop {
        let term = match family {
            Family::K1 => &c * &power / HpReal::from_u64((2 * j + 1) * (2 * j + 1), w),
            _ => &power / (&c * HpReal::from_u64(2 * j * j * j, w)),
        };
        sum = &sum + &term;
        let t = term.to_f64();
        if t < eps {
            break t * ratio / (1.0 - ratio);
        }
        power = match family {
            Family::K1 => &power * &z2,
            _ => &power * &z,
        };
        c = c.mul_u64(2 * j + 1).div_u64(2 * j + 2);
        j += 1;
    };
    Ok(SeriesValue { family, index: 0, value: sum.with_digits(digits), method: Method::TruncatedSum, error_bound: tail + rounding(digits) })
}

pub fn kernel_k1_series(z: &HpReal, digits: u32) -> Result<SeriesValue> {
    series_value(Family::K1, z, digits)
}

pub fn kernel_k0_series(z: &HpReal, digits: u32) -> Result<SeriesValue> {
    series_value(Family::K0, z, digits)
}

/// `1/z integral_0^z arcsin(y)/y dy`.
pub fn kernel_k1_quadrature(z: &HpReal, digits: u32, tol: f64) -> Result<SeriesValue> {
    check_z(z)?;
    if z.is_zero() {
        return Ok(SeriesValue { family: Family::K1, index: 0, value: HpReal::one(digits), method: Method::ClosedForm, error_bound: 0.0 });
    }
    let z = z.with_digits(digits);
    let one_minus_z = &HpReal::one(digits) - &z;
    let half = HpReal::from_f64(0.5, digits);
    let mut f = Integrand1D::new(|p: &Point| {
        if p.x > half {
            let d = &one_minus_z + &p.to_b;
            HpReal::asin_one_minus(&d) / &p.x
        } else {
            p.x.asin() / &p.x
        }
    });
    if one_minus_z.is_zero() {
        f = f.singular_at_b();
    }
    let r = integrate_1d(&f, &HpReal::zero(digits), &z, digits, tol * z.to_f64())?;
    Ok(SeriesValue { family: Family::K1, index: 0, value: r.value / &z, method: Method::Quadrature, error_bound: r.error / z.to_f64() })
}

/// `integral_0^z arcsin(sqrt y)^2 / y dy`.
pub fn kernel_k0_quadrature(z: &HpReal, digits: u32, tol: f64) -> Result<SeriesValue> {
    check_z(z)?;
    if z.is_zero() {
        return Ok(SeriesValue { family: Family::K0, index: 0, value: HpReal::zero(digits), method: Method::ClosedForm, error_bound: 0.0 });
    }
    let z = z.with_digits(digits);
    let one_minus_z = &HpReal::one(digits) - &z;
    let half = HpReal::from_f64(0.5, digits);
    let mut f = Integrand1D::new(|p: &Point| {
        let a = if p.x > half {
            HpReal::asin_sqrt_one_minus(&(&one_minus_z + &p.to_b))
        } else {
            p.x.sqrt().asin()
        };
        &a * &a / &p.x
    });
    if one_minus_z.is_zero() {
        f = f.singular_at_b();
    }
    let r = integrate_1d(&f, &HpReal::zero(digits), &z, digits, tol)?;
    Ok(SeriesValue { family: Family::K0, index: 0, value: r.value, method: Method::Quadrature, error_bound: r.error })
}

fn default_tol(digits: u32) -> f64 {
    10f64.powi(-(digits as i32) + 10)
}

/// `K1(z)` by series for `z <= 0.75` and by quadrature above.
pub fn kernel_k1(z: &HpReal, digits: u32) -> Result<HpReal> {
    check_z(z)?;
    if z.to_f64() <= SERIES_LIMIT {
        Ok(kernel_k1_series(z, digits)?.value)
    } else {
        Ok(kernel_k1_quadrature(z, digits, default_tol(digits))?.value)
    }
}

/// `K0(z)` by series for `z <= 0.75` and by quadrature above.
pub fn kernel_k0(z: &HpReal, digits: u32) -> Result<HpReal> {
    check_z(z)?;
    if z.to_f64() <= SERIES_LIMIT {
        Ok(kernel_k0_series(z, digits)?.value)
    } else {
        Ok(kernel_k0_quadrature(z, digits, default_tol(digits))?.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hp;

    fn close(a: &HpReal, b: &HpReal, tol: f64) -> bool {
        (a - b).abs().to_f64() < tol
    }

    #[test]
    fn kernel_values_at_the_ends() {
        let d = 30;
        assert!(close(&kernel_k1(&HpReal::zero(d), d).unwrap(), &HpReal::one(d), 1e-29));
        assert!(kernel_k0(&HpReal::zero(d), d).unwrap().is_zero());
        let one = HpReal::one(d);
        let k1 = kernel_k1(&one, d).unwrap();
        assert!(close(&k1, &(hp::pi(d) * hp::log2(d) / HpReal::from_u64(2, d)), 1e-19));
        let pi = hp::pi(d);
        let k0_closed = &pi * &pi * hp::log2(d) / HpReal::from_u64(2, d) - hp::eta(3, d).unwrap().mul_u64(7).div_u64(3);
        assert!(close(&kernel_k0(&one, d).unwrap(), &k0_closed, 1e-19));
    }

    #[test]
    fn series_and_quadrature_agree() {
        let d = 30;
        for z in ["0.25", "0.5", "0.75"] {
            let z = HpReal::parse(z, d).unwrap();
            let a = kernel_k1_series(&z, d).unwrap().value;
            let b = kernel_k1_quadrature(&z, d, 1e-24).unwrap().value;
            assert!(close(&a, &b, 1e-20));
            let a = kernel_k0_series(&z, d).unwrap().value;
            let b = kernel_k0_quadrature(&z, d, 1e-24).unwrap().value;
            assert!(close(&a, &b, 1e-20));
        }
    }

    #[test]
    fn rejects_out_of_range() {
        let d = 20;
        assert!(kernel_k1(&HpReal::from_f64(1.5, d), d).is_err());
        assert!(kernel_k0(&HpReal::from_f64(-0.1, d), d).is_err());
        assert!(kernel_k0_series(&HpReal::one(d), d).is_err());
    }
}
