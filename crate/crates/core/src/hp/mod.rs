//! Precision-parameterized real arithmetic and the analytic constants of the
//! moment identities: pi, log 2, and the Dirichlet eta and Riemann zeta
//! functions at integer arguments.
//!
//! Precision is given in decimal digits. Values carry [`real::GUARD_BITS`]
//! extra binary digits internally, so the printed digits are stable.

mod real;

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::Signed;

pub use real::{bits_for, HpReal, GUARD_BITS};

use crate::error::{Error, Result};
use crate::exact::bernoulli;

/// Default working precision in decimal digits.
pub const DEFAULT_DIGITS: u32 = 50;

/// Smallest accepted working precision.
pub const MIN_DIGITS: u32 = 10;

/// Convergence ratio `3 + sqrt(8)` of the alternating-series acceleration.
const ETA_RHO: f64 = 5.828_427_124_746_19;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Key {
    Pi,
    Log2,
    Eta(u32),
}

fn cache() -> &'static Mutex<HashMap<(Key, u32), HpReal>> {
    static CACHE: OnceLock<Mutex<HashMap<(Key, u32), HpReal>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached(key: Key, digits: u32, build: impl FnOnce() -> HpReal) -> HpReal {
    if let Some(v) = cache().lock().expect("constant cache poisoned").get(&(key, digits)) {
        return v.clone();
    }
    // Built outside the lock; concurrent builders produce identical values.
    let v = build();
    cache()
        .lock()
        .expect("constant cache poisoned")
        .entry((key, digits))
        .or_insert(v)
        .clone()
}

/// A positive absolute tolerance.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Tolerance(f64);

impl Tolerance {
    pub fn new(bound: f64) -> Result<Self> {
        if bound.is_finite() && bound > 0.0 {
            Ok(Self(bound))
        } else {
            Err(Error::InvalidArgument(format!("tolerance must be positive, got {bound}")))
        }
    }

    /// `10^-(digits)`.
    pub fn digits(digits: i32) -> Self {
        Self(10f64.powi(-digits))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn admits(self, diff: &HpReal) -> bool {
        diff.abs().to_f64() <= self.0
    }
}

pub fn pi(digits: u32) -> HpReal {
    cached(Key::Pi, digits, || {
        let p = bits_for(digits);
        let v = real::with_consts(|cc| cc.pi(p, astro_float::RoundingMode::ToEven));
        HpReal::from_raw(v, digits)
    })
}

pub fn log2(digits: u32) -> HpReal {
    cached(Key::Log2, digits, || {
        let p = bits_for(digits);
        let v = real::with_consts(|cc| cc.ln_2(p, astro_float::RoundingMode::ToEven));
        HpReal::from_raw(v, digits)
    })
}

/// `arctan(1/q)` by its Taylor series in exact-reciprocal steps.
fn arctan_inv(q: u64, digits: u32) -> HpReal {
    let eps = 10f64.powi(-(digits as i32) - 8);
    let q2 = HpReal::from_u64(q * q, digits);
    let mut power = HpReal::one(digits).div_u64(q);
    let mut sum = power.clone();
    let mut n = 0u64;
    loop {
        n += 1;
        power = &power / &q2;
        let term = power.div_u64(2 * n + 1);
        if term.to_f64() < eps {
            break;
        }
        sum = if n % 2 == 1 { &sum - &term } else { &sum + &term };
    }
    sum
}

/// pi by Machin's formula. Shares no code with [`pi`].
pub fn pi_machin(digits: u32) -> HpReal {
    let w = digits + 5;
    (arctan_inv(5, w).mul_u64(16) - arctan_inv(239, w).mul_u64(4)).with_digits(digits)
}

/// log 2 as `2 atanh(1/3)`. Shares no code with [`log2`].
pub fn log2_series(digits: u32) -> HpReal {
    let w = digits + 5;
    let eps = 10f64.powi(-(w as i32) - 8);
    let nine = HpReal::from_u64(9, w);
    let mut power = HpReal::one(w).div_u64(3);
    let mut sum = power.clone();
    let mut n = 0u64;
    loop {
        n += 1;
        power = &power / &nine;
        let term = power.div_u64(2 * n + 1);
        if term.to_f64() < eps {
            break;
        }
        sum = sum + term;
    }
    sum.mul_u64(2).with_digits(digits)
}

/// Number of terms the eta acceleration needs for `digits` digits.
pub fn eta_terms(digits: u32) -> usize {
    (digits as f64 * std::f64::consts::LN_10 / ETA_RHO.ln()).ceil() as usize + 3
}

/// Dirichlet eta `sum_{n>=1} (-1)^(n+1) / n^s` for integer `s >= 1`.
///
/// Uses the Chebyshev-polynomial acceleration of alternating series with
/// exact integer weights: with `n` terms the relative error is at most
/// `2 / (3 + sqrt 8)^n`, and `n` comes from [`eta_terms`].
pub fn eta(s: u32, digits: u32) -> Result<HpReal> {
    if s == 0 {
        return Err(Error::InvalidArgument("eta is evaluated for s >= 1".into()));
    }
    if s == 1 {
        return Ok(log2(digits));
    }
    Ok(cached(Key::Eta(s), digits, || eta_accelerated(s, digits)))
}

fn eta_accelerated(s: u32, digits: u32) -> HpReal {
    let w = digits + 10;
    let n = eta_terms(w);
    // d = T_n(3)
    let (mut t_prev, mut t) = (BigInt::from(1), BigInt::from(3));
    for _ in 1..n {
        let next = &t * 6 - &t_prev;
        t_prev = t;
        t = next;
    }
    let d = t;
    let n_big = BigInt::from(n);
    let mut b = BigInt::from(-1);
    let mut c = -d.clone();
    let mut sum = HpReal::zero(w);
    for k in 0..n {
        c = &b - &c;
        let kk = BigInt::from(k);
        let term = HpReal::from_bigint(&c, w) / HpReal::from_u64(k as u64 + 1, w).powi(s);
        sum = sum + term;
        // b_{k+1} = 2 (k+n)(k-n) b_k / ((2k+1)(k+1)), exact
        b = (&b * 2 * (&kk + &n_big) * (&kk - &n_big)) / BigInt::from((2 * k + 1) * (k + 1));
    }
    debug_assert!(d.is_positive());
    (sum / HpReal::from_bigint(&d, w)).with_digits(digits)
}

/// Riemann zeta for integer `s >= 2`, as `eta(s) / (1 - 2^(1-s))`.
pub fn zeta(s: u32, digits: u32) -> Result<HpReal> {
    if s < 2 {
        return Err(Error::InvalidArgument("zeta is evaluated for s >= 2".into()));
    }
    let w = digits + 5;
    let e = eta(s, w)?;
    let one = HpReal::one(w);
    let factor = &one - &(&one / HpReal::from_u64(2, w).powi(s - 1));
    Ok((e / factor).with_digits(digits))
}

/// `zeta(2l) = (2 pi)^(2l) |B_2l| / (2 (2l)!)`.
pub fn zeta_even_bernoulli(l: u32, digits: u32) -> Result<HpReal> {
    if l == 0 {
        return Err(Error::InvalidArgument("zeta(2l) needs l >= 1".into()));
    }
    let w = digits + 5;
    let b = bernoulli(2 * l as usize);
    let b = HpReal::from_rational(&num_traits::Signed::abs(&b), w);
    let two_pi = pi(w).mul_u64(2);
    let fact = HpReal::from_bigint(&crate::exact::factorial(2 * l as usize), w);
    Ok((two_pi.powi(2 * l) * b / (fact.mul_u64(2))).with_digits(digits))
}
