use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::{BigInt, Sign as BigSign};

use crate::exact::BigRational;

const RM: RoundingMode = RoundingMode::ToEven;

/// Binary guard bits carried beyond the requested decimal precision (about 12 digits).
pub const GUARD_BITS: usize = 40;

const LOG2_10: f64 = std::f64::consts::LOG2_10;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constant cache"));
}

pub(crate) fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// Working precision in bits for `digits` decimal digits, guard bits included.
pub fn bits_for(digits: u32) -> usize {
    (digits as f64 * LOG2_10).ceil() as usize + GUARD_BITS
}

/// A real number carried at a fixed number of decimal digits of working precision.
///
/// Binary operations run at the smaller precision of their operands.
#[derive(Clone)]
pub struct HpReal {
    value: BigFloat,
    digits: u32,
}

impl HpReal {
    pub(crate) fn from_raw(value: BigFloat, digits: u32) -> Self {
        Self { value, digits }
    }

    pub fn zero(digits: u32) -> Self {
        Self::from_u64(0, digits)
    }

    pub fn one(digits: u32) -> Self {
        Self::from_u64(1, digits)
    }

    pub fn from_u64(v: u64, digits: u32) -> Self {
        Self::from_raw(BigFloat::from_u64(v, bits_for(digits)), digits)
    }

    pub fn from_i64(v: i64, digits: u32) -> Self {
        Self::from_raw(BigFloat::from_i64(v, bits_for(digits)), digits)
    }

    /// Exact for every finite `f64`; the binary value is taken as-is.
    pub fn from_f64(v: f64, digits: u32) -> Self {
        Self::from_raw(BigFloat::from_f64(v, bits_for(digits)), digits)
    }

    pub fn from_bigint(v: &BigInt, digits: u32) -> Self {
        let (sign, words) = v.to_u64_digits();
        let exact_bits = 64 * (words.len() + 1);
        let base = BigFloat::from_u128(1u128 << 64, 128);
        let mut acc = BigFloat::from_u64(0, exact_bits);
        for w in words.iter().rev() {
            acc = acc
                .mul(&base, exact_bits, RM)
                .add(&BigFloat::from_u64(*w, 64), exact_bits, RM);
        }
        let mut out = Self::from_raw(acc, digits).rounded();
        if sign == BigSign::Minus {
            out = -out;
        }
        out
    }

    pub fn from_rational(v: &BigRational, digits: u32) -> Self {
        let num = Self::from_bigint(v.numer(), digits);
        let den = Self::from_bigint(v.denom(), digits);
        &num / &den
    }

    /// Parses a decimal literal such as `"1e-35"` or `"0.5"`.
    pub fn parse(s: &str, digits: u32) -> Option<Self> {
        let v = with_consts(|cc| BigFloat::parse(s.trim(), Radix::Dec, bits_for(digits), RM, cc));
        if v.is_nan() || v.is_inf() {
            None
        } else {
            Some(Self::from_raw(v, digits))
        }
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn bits(&self) -> usize {
        bits_for(self.digits)
    }

    /// Same value rounded to a different working precision.
    pub fn with_digits(&self, digits: u32) -> Self {
        let mut v = self.value.clone();
        // Precision changes on finite values cannot fail.
        let _ = v.set_precision(bits_for(digits), RM);
        Self::from_raw(v, digits)
    }

    fn rounded(self) -> Self {
        let d = self.digits;
        self.with_digits(d)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.value.is_negative() && !self.value.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !(self.value.is_nan() || self.value.is_inf())
    }

    pub fn abs(&self) -> Self {
        Self::from_raw(self.value.abs(), self.digits)
    }

    pub fn sqrt(&self) -> Self {
        Self::from_raw(self.value.sqrt(self.bits(), RM), self.digits)
    }

    pub fn ln(&self) -> Self {
        let p = self.bits();
        Self::from_raw(with_consts(|cc| self.value.ln(p, RM, cc)), self.digits)
    }

    pub fn exp(&self) -> Self {
        let p = self.bits();
        Self::from_raw(with_consts(|cc| self.value.exp(p, RM, cc)), self.digits)
    }

    pub fn sin(&self) -> Self {
        let p = self.bits();
        Self::from_raw(with_consts(|cc| self.value.sin(p, RM, cc)), self.digits)
    }

    pub fn cos(&self) -> Self {
        let p = self.bits();
        Self::from_raw(with_consts(|cc| self.value.cos(p, RM, cc)), self.digits)
    }

    pub fn tan(&self) -> Self {
        let p = self.bits();
        Self::from_raw(with_consts(|cc| self.value.tan(p, RM, cc)), self.digits)
    }

    /// `ln(1 - t)` for `0 <= t < 1`, accurate when `t` is tiny.
    pub fn ln_one_minus(t: &Self) -> Self {
        // ln(1 - t) = -2 atanh(t / (2 - t))
        let p = t.bits();
        let q = t / &(&Self::from_u64(2, t.digits) - t);
        let a = Self::from_raw(with_consts(|cc| q.value.atanh(p, RM, cc)), t.digits);
        -(&a + &a)
    }

    pub fn atan(&self) -> Self {
        let p = self.bits();
        Self::from_raw(with_consts(|cc| self.value.atan(p, RM, cc)), self.digits)
    }

    /// arcsin on `[-1, 1]`. Arguments above 1/2 in magnitude are reduced with
    /// `asin(x) = pi/2 - 2 asin(sqrt((1 - x)/2))`, which keeps full accuracy near 1.
    pub fn asin(&self) -> Self {
        let half = Self::from_f64(0.5, self.digits);
        if self.abs() <= half {
            let p = self.bits();
            return Self::from_raw(with_consts(|cc| self.value.asin(p, RM, cc)), self.digits);
        }
        let one = Self::one(self.digits);
        let x = self.abs();
        let reduced = ((&one - &x) * &half).sqrt().asin();
        let r = &(crate::hp::pi(self.digits) * &half) - &(&reduced + &reduced);
        if self.is_negative() {
            -r
        } else {
            r
        }
    }

    /// `arcsin(sqrt(1 - d))` for `0 <= d <= 1`, accurate when `d` is tiny.
    pub fn asin_sqrt_one_minus(d: &Self) -> Self {
        // asin(sqrt(1 - d)) = pi/2 - asin(sqrt(d))
        let half_pi = crate::hp::pi(d.digits) * &Self::from_f64(0.5, d.digits);
        &half_pi - &d.sqrt().asin()
    }

    /// `arcsin(1 - d)` for `0 <= d <= 2`, accurate when `d` is tiny.
    pub fn asin_one_minus(d: &Self) -> Self {
        // asin(1 - d) = pi/2 - 2 asin(sqrt(d/2))
        let half_pi = crate::hp::pi(d.digits) * &Self::from_f64(0.5, d.digits);
        let r = d.div_u64(2).sqrt().asin();
        &half_pi - &(&r + &r)
    }

    pub fn powi(&self, n: u32) -> Self {
        Self::from_raw(self.value.powi(n as usize, self.bits(), RM), self.digits)
    }

    pub fn mul_u64(&self, k: u64) -> Self {
        self * &Self::from_u64(k, self.digits)
    }

    pub fn div_u64(&self, k: u64) -> Self {
        self / &Self::from_u64(k, self.digits)
    }

    /// Nearest `f64`; values below the `f64` range flush to zero.
    pub fn to_f64(&self) -> f64 {
        if self.value.is_zero() {
            return 0.0;
        }
        if self.value.is_nan() {
            return f64::NAN;
        }
        if self.value.is_inf() {
            return if self.value.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
        }
        let Some((words, _, sign, exp, _)) = self.value.as_raw_parts() else {
            return f64::NAN;
        };
        let top = *words.last().unwrap_or(&0) as f64 / 18446744073709551616.0;
        let mag = if exp < -1070 { 0.0 } else { top * 2f64.powi(exp) };
        if sign == Sign::Neg {
            -mag
        } else {
            mag
        }
    }

    /// Decimal string rounded to `sig` significant digits. Plain notation for
    /// moderate exponents, scientific otherwise.
    pub fn to_decimal(&self, sig: usize) -> String {
        let sig = sig.max(1);
        if self.value.is_zero() {
            return "0".to_string();
        }
        if !self.is_finite() {
            return "NaN".to_string();
        }
        let s = with_consts(|cc| self.value.format(Radix::Dec, RM, cc)).unwrap_or_default();
        let (neg, s) = match s.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, s),
        };
        let (mant, exp) = match s.split_once('e') {
            Some((m, e)) => (m.to_string(), e.parse::<i64>().unwrap_or(0)),
            None => (s.clone(), 0),
        };
        let mut digits: Vec<u8> = mant.bytes().filter(u8::is_ascii_digit).map(|b| b - b'0').collect();
        // position of the decimal point relative to the first digit of `mant`
        let int_len = mant.find('.').unwrap_or(mant.len()) as i64;
        let mut point = int_len + exp;
        while digits.len() > 1 && digits[0] == 0 {
            digits.remove(0);
            point -= 1;
        }
        let (mut digits, point) = round_digits(digits, point, sig);
        while digits.len() < sig {
            digits.push(0);
        }
        let body = if (-8..=40).contains(&point) {
            if point <= 0 {
                let mut out = String::from("0.");
                out.extend(std::iter::repeat('0').take((-point) as usize));
                out.extend(digits.iter().map(|d| (b'0' + d) as char));
                out
            } else {
                let p = point as usize;
                while digits.len() < p {
                    digits.push(0);
                }
                let mut out: String = digits[..p].iter().map(|d| (b'0' + d) as char).collect();
                if digits.len() > p {
                    out.push('.');
                    out.extend(digits[p..].iter().map(|d| (b'0' + d) as char));
                }
                out
            }
        } else {
            let mut out = String::new();
            out.push((b'0' + digits[0]) as char);
            if digits.len() > 1 {
                out.push('.');
                out.extend(digits[1..].iter().map(|d| (b'0' + d) as char));
            }
            out.push_str(&format!("e{}", point - 1));
            out
        };
        if neg {
            format!("-{body}")
        } else {
            body
        }
    }
}

fn round_digits(mut digits: Vec<u8>, mut point: i64, sig: usize) -> (Vec<u8>, i64) {
    if digits.len() <= sig {
        return (digits, point);
    }
    let round_up = digits[sig] >= 5;
    digits.truncate(sig);
    if round_up {
        let mut i = sig;
        loop {
            if i == 0 {
                digits.insert(0, 1);
                digits.truncate(sig);
                point += 1;
                break;
            }
            i -= 1;
            if digits[i] == 9 {
                digits[i] = 0;
            } else {
                digits[i] += 1;
                break;
            }
        }
    }
    (digits, point)
}

impl fmt::Display for HpReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal(self.digits as usize))
    }
}

impl fmt::Debug for HpReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HpReal({}, P={})", self.to_decimal(self.digits as usize), self.digits)
    }
}

impl PartialEq for HpReal {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for HpReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.cmp(&other.value).map(|c| c.cmp(&0))
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&HpReal> for &HpReal {
            type Output = HpReal;
            fn $method(self, rhs: &HpReal) -> HpReal {
                let digits = self.digits.min(rhs.digits);
                HpReal::from_raw(self.value.$method(&rhs.value, bits_for(digits), RM), digits)
            }
        }
        impl $tr<HpReal> for HpReal {
            type Output = HpReal;
            fn $method(self, rhs: HpReal) -> HpReal {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&HpReal> for HpReal {
            type Output = HpReal;
            fn $method(self, rhs: &HpReal) -> HpReal {
                (&self).$method(rhs)
            }
        }
        impl $tr<HpReal> for &HpReal {
            type Output = HpReal;
            fn $method(self, rhs: HpReal) -> HpReal {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for HpReal {
    type Output = HpReal;
    fn neg(self) -> HpReal {
        HpReal::from_raw(self.value.neg(), self.digits)
    }
}

impl Neg for &HpReal {
    type Output = HpReal;
    fn neg(self) -> HpReal {
        HpReal::from_raw(self.value.clone().neg(), self.digits)
    }
}

impl std::iter::Sum for HpReal {
    fn sum<I: Iterator<Item = HpReal>>(mut iter: I) -> HpReal {
        let first = iter.next().unwrap_or_else(|| HpReal::zero(crate::hp::DEFAULT_DIGITS));
        iter.fold(first, |acc, x| acc + x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn decimal_rounding_and_layout() {
        let x = HpReal::from_f64(0.5, 20);
        assert_eq!(x.to_decimal(5), "0.50000");
        let y = HpReal::from_u64(123456, 20);
        assert_eq!(y.to_decimal(3), "123000");
        let z = HpReal::from_f64(-0.000125, 20);
        assert_eq!(z.to_decimal(2), "-0.00013");
        let nine = HpReal::parse("9.9996", 20).unwrap();
        assert_eq!(nine.to_decimal(4), "10.00");
        let tiny = HpReal::parse("1.5e-30", 20).unwrap();
        assert_eq!(tiny.to_decimal(2), "1.5e-30");
    }

    #[test]
    fn bigint_conversion_matches_decimal_parse() {
        let big: BigInt = "123456789012345678901234567890123456789".parse().unwrap();
        let a = HpReal::from_bigint(&big, 50);
        let b = HpReal::parse("123456789012345678901234567890123456789", 50).unwrap();
        assert!((&a - &b).abs().to_f64() < 1e-10);
        let neg = HpReal::from_bigint(&(-big), 50);
        assert!(neg.is_negative());
    }

    #[test]
    fn to_f64_round_trips() {
        for v in [0.3, -2.5, 1e-200, 12345.678] {
            assert_eq!(HpReal::from_f64(v, 30).to_f64(), v);
        }
    }

    #[test]
    fn asin_near_one_is_accurate() {
        let d = HpReal::parse("1e-40", 40).unwrap();
        let x = &HpReal::one(40) - &d;
        let direct = x.asin();
        let reduced = HpReal::asin_one_minus(&d);
        let s1 = HpReal::asin_sqrt_one_minus(&d).sin();
        assert!((&(&s1 * &s1) - &x).abs().to_f64() < 1e-45);
        let gap = (&direct - &reduced).abs().to_f64();
        assert!(gap < 1e-35, "gap {gap}");
        let s = HpReal::parse("0.3", 40).unwrap();
        assert!((&s.asin().sin() - &s).abs().to_f64() < 1e-45);
        let small = HpReal::parse("1e-30", 40).unwrap();
        let l = HpReal::ln_one_minus(&small);
        assert!((&l + &small).abs().to_f64() < 1e-59);
        let t = HpReal::parse("0.9", 40).unwrap();
        assert!((&t.asin().sin() - &t).abs().to_f64() < 1e-45);
    }

    #[test]
    fn precision_is_the_minimum_of_operands() {
        let a = HpReal::one(30);
        let b = HpReal::one(60);
        assert_eq!((&a + &b).digits(), 30);
    }
}
