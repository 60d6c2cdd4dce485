use num_bigint::BigInt;
use num_traits::One;

use super::{factorial, BigRational};
use crate::error::{Error, Result};

/// An integer partition in multiplicity form `[1^m1, 2^m2, ..., k^mk]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    /// `multiplicities[l - 1]` is how many parts equal `l`.
    multiplicities: Vec<u32>,
}

impl Partition {
    pub fn from_multiplicities(multiplicities: Vec<u32>) -> Self {
        Self { multiplicities }
    }

    /// Builds the multiplicity vector from a list of parts.
    pub fn from_parts(parts: &[u32]) -> Self {
        let k: u32 = parts.iter().sum();
        let mut multiplicities = vec![0; k as usize];
        for &p in parts {
            multiplicities[p as usize - 1] += 1;
        }
        Self { multiplicities }
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.multiplicities
    }

    /// Multiplicity of part `l` (1-based).
    pub fn multiplicity(&self, l: usize) -> u32 {
        self.multiplicities.get(l.wrapping_sub(1)).copied().unwrap_or(0)
    }

    /// The partitioned integer `sum l * m_l`.
    pub fn total(&self) -> u32 {
        self.multiplicities.iter().enumerate().map(|(i, &m)| (i as u32 + 1) * m).sum()
    }

    /// Number of parts.
    pub fn len(&self) -> u32 {
        self.multiplicities.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Parts in non-increasing order.
    pub fn parts(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.len() as usize);
        for (i, &m) in self.multiplicities.iter().enumerate().rev() {
            out.extend(std::iter::repeat(i as u32 + 1).take(m as usize));
        }
        out
    }
}

/// All partitions of `k`, in decreasing lexicographic order of their part lists.
pub fn partitions(k: u32) -> Result<Vec<Partition>> {
    if k == 0 {
        return Err(Error::InvalidArgument("partitions needs k >= 1".into()));
    }
    let mut out = Vec::new();
    let mut parts = vec![k];
    loop {
        out.push(Partition::from_parts(&parts));
        // strip trailing ones, then decrement the last part > 1 and refill
        let mut ones = 0;
        while parts.last() == Some(&1) {
            parts.pop();
            ones += 1;
        }
        let Some(last) = parts.pop() else { break };
        let part = last - 1;
        let mut rest = ones + 1;
        parts.push(part);
        while rest > 0 {
            let p = part.min(rest);
            parts.push(p);
            rest -= p;
        }
    }
    Ok(out)
}

/// Number of permutations of `S_k` with cycle type `p`: `k! / prod(m_l! l^m_l)`.
pub fn cycle_count(p: &Partition) -> BigRational {
    let k = p.total() as usize;
    let denom = p
        .multiplicities()
        .iter()
        .enumerate()
        .fold(BigInt::one(), |acc, (i, &m)| {
            acc * factorial(m as usize) * BigInt::from(i + 1).pow(m)
        });
    BigRational::new(factorial(k), denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    /// p(n) by Euler's pentagonal number recurrence.
    fn partition_count(n: usize) -> i64 {
        let mut p = vec![0i64; n + 1];
        p[0] = 1;
        for m in 1..=n {
            let mut acc = 0i64;
            let mut j = 1i64;
            loop {
                let g1 = (j * (3 * j - 1) / 2) as usize;
                if g1 > m {
                    break;
                }
                let sign = if j % 2 == 1 { 1 } else { -1 };
                acc += sign * p[m - g1];
                let g2 = (j * (3 * j + 1) / 2) as usize;
                if g2 <= m {
                    acc += sign * p[m - g2];
                }
                j += 1;
            }
            p[m] = acc;
        }
        p[n]
    }

    #[test]
    fn small_partitions() {
        let one = partitions(1).unwrap();
        assert_eq!(one, vec![Partition::from_multiplicities(vec![1])]);
        let four = partitions(4).unwrap();
        let parts: Vec<Vec<u32>> = four.iter().map(Partition::parts).collect();
        assert_eq!(parts, vec![vec![4], vec![3, 1], vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1]]);
        assert!(partitions(0).is_err());
    }

    #[test]
    fn counts_match_pentagonal_recurrence() {
        assert_eq!(partition_count(10), 42);
        for k in 1..=20u32 {
            let ps = partitions(k).unwrap();
            assert_eq!(ps.len() as i64, partition_count(k as usize));
            let mut seen = std::collections::HashSet::new();
            for p in &ps {
                assert_eq!(p.total(), k);
                assert!(p.len() >= 1);
                assert!(seen.insert(p.clone()));
            }
        }
    }

    #[test]
    fn cycle_counts_sum_to_factorial() {
        assert_eq!(cycle_count(&Partition::from_parts(&[1, 1])), BigRational::one());
        assert_eq!(cycle_count(&Partition::from_parts(&[2])), BigRational::one());
        for k in 1..=12u32 {
            let total = partitions(k)
                .unwrap()
                .iter()
                .fold(BigRational::zero(), |acc, p| acc + cycle_count(p));
            assert_eq!(total, BigRational::from_integer(factorial(k as usize)));
        }
    }

    #[test]
    fn cycle_counts_are_positive_integers() {
        for p in partitions(9).unwrap() {
            let a = cycle_count(&p);
            assert!(a.is_integer() && a > BigRational::zero());
        }
    }
}
