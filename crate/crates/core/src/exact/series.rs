use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{binomial_int, BigRational};
use crate::error::{Error, Result};

/// A power series with exact rational coefficients, truncated after `z^order`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalPowerSeries {
    coeffs: Vec<BigRational>,
}

impl RationalPowerSeries {
    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![BigRational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = BigRational::one();
        s
    }

    /// Coefficients beyond `order` are dropped; missing ones are zero.
    pub fn from_coeffs(mut coeffs: Vec<BigRational>, order: usize) -> Self {
        coeffs.resize(order + 1, BigRational::zero());
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `z^n`; zero past the truncation order.
    pub fn coeff(&self, n: usize) -> BigRational {
        self.coeffs.get(n).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn set(&mut self, n: usize, v: BigRational) {
        if n < self.coeffs.len() {
            self.coeffs[n] = v;
        }
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs(self.coeffs.clone(), order)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn pow(&self, m: u32) -> Self {
        let mut result = Self::one(self.order());
        let mut base = self.clone();
        let mut e = m;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::InvalidArgument("series inverse needs a nonzero constant term".into()));
        }
        let n = self.order();
        let inv0 = c0.recip();
        let mut out = Self::zero(n);
        out.coeffs[0] = inv0.clone();
        for k in 1..=n {
            let acc = (1..=k).fold(BigRational::zero(), |acc, j| acc + &self.coeffs[j] * &out.coeffs[k - j]);
            out.coeffs[k] = -acc * &inv0;
        }
        Ok(out)
    }

    /// `self(inner(z))`; `inner` must have a zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::InvalidArgument("composition needs an inner series without constant term".into()));
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        let mut out = Self::zero(n);
        // Horner in the outer coefficients
        for c in self.coeffs[..=n].iter().rev() {
            out = &out * &inner;
            out.coeffs[0] += c;
        }
        Ok(out)
    }
}

impl Add for &RationalPowerSeries {
    type Output = RationalPowerSeries;
    fn add(self, rhs: &RationalPowerSeries) -> RationalPowerSeries {
        let n = self.order().min(rhs.order());
        RationalPowerSeries {
            coeffs: (0..=n).map(|i| &self.coeffs[i] + &rhs.coeffs[i]).collect(),
        }
    }
}

impl Mul for &RationalPowerSeries {
    type Output = RationalPowerSeries;
    fn mul(self, rhs: &RationalPowerSeries) -> RationalPowerSeries {
        let n = self.order().min(rhs.order());
        let mut out = RationalPowerSeries::zero(n);
        for (i, a) in self.coeffs[..=n].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    out.coeffs[i + j] += a * b;
                }
            }
        }
        out
    }
}

/// `2 arcsin(z/2)` through `z^order`: the `z^(2n+1)` coefficient is
/// `C(2n, n) / (16^n (2n + 1))`.
pub fn fps_arcsin(order: usize) -> Result<RationalPowerSeries> {
    if order == 0 {
        return Err(Error::InvalidArgument("fps_arcsin needs order >= 1".into()));
    }
    let mut s = RationalPowerSeries::zero(order);
    let mut n = 0u64;
    while 2 * n as usize + 1 <= order {
        let den = BigInt::from(16u32).pow(n as u32) * BigInt::from(2 * n + 1);
        s.coeffs[2 * n as usize + 1] = BigRational::new(binomial_int(2 * n, n), den);
        n += 1;
    }
    Ok(s)
}

pub fn fps_power(s: &RationalPowerSeries, m: u32) -> Result<RationalPowerSeries> {
    if m == 0 {
        return Err(Error::InvalidArgument("fps_power needs m >= 1".into()));
    }
    Ok(s.pow(m))
}
