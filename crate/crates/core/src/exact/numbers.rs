use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::BigRational;
use crate::error::{Error, Result};

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// `n!!`, with `0!! = (-1)!! = 1`.
pub fn double_factorial(n: i64) -> BigInt {
    let mut acc = BigInt::one();
    let mut i = n;
    while i > 1 {
        acc *= i;
        i -= 2;
    }
    acc
}

pub fn binomial_int(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Exact `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigRational {
    BigRational::from_integer(binomial_int(n, k))
}

static BERNOULLI: RwLock<Vec<BigRational>> = RwLock::new(Vec::new());

/// Bernoulli number `B_n` with `B_1 = -1/2`.
///
/// Built from `sum_{j=0}^{n} C(n+1, j) B_j = 0`; the table grows on demand and
/// is shared between threads.
pub fn bernoulli(n: usize) -> BigRational {
    if let Some(b) = BERNOULLI.read().expect("bernoulli table poisoned").get(n) {
        return b.clone();
    }
    let mut table = BERNOULLI.write().expect("bernoulli table poisoned");
    if table.is_empty() {
        table.push(BigRational::one());
    }
    while table.len() <= n {
        let m = table.len();
        let sum = table
            .iter()
            .enumerate()
            .fold(BigRational::zero(), |acc, (j, b)| acc + b * binomial(m as u64 + 1, j as u64));
        table.push(-sum / BigRational::from_integer(BigInt::from(m + 1)));
    }
    table[n].clone()
}

/// Euler zigzag (secant) number `E*_n = n! [z^n] sec z` for even `n`.
///
/// Computed on the Seidel boustrophedon triangle of Entringer numbers.
pub fn euler_zigzag(n: usize) -> Result<BigRational> {
    if n % 2 == 1 {
        return Err(Error::InvalidArgument(format!("euler_zigzag needs an even index, got {n}")));
    }
    Ok(BigRational::from_integer(zigzag_int(n)))
}

/// Up/down number `A_n = E(n, n)` with `E(m, k) = E(m, k-1) + E(m-1, m-k)`.
pub(crate) fn zigzag_int(n: usize) -> BigInt {
    let mut row = vec![BigInt::one()];
    for m in 1..=n {
        let mut next = Vec::with_capacity(m + 1);
        next.push(BigInt::zero());
        for k in 1..=m {
            let v = &next[k - 1] + &row[m - k];
            next.push(v);
        }
        row = next;
    }
    row[n].clone()
}
