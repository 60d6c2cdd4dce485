//! Exact integer and rational arithmetic: binomials, Bernoulli and Euler
//! zigzag numbers, integer partitions with cycle counts, and truncated power
//! series over the rationals. Nothing here rounds.

mod numbers;
mod partition;
mod series;

pub use num_rational::BigRational;

pub use numbers::{bernoulli, binomial, binomial_int, double_factorial, euler_zigzag, factorial};
pub use partition::{cycle_count, partitions, Partition};
pub use series::{fps_arcsin, fps_power, RationalPowerSeries};

/// Renders a rational as `p/q`, or `p` when the denominator is one.
pub fn rational_to_string(v: &BigRational) -> String {
    v.to_string()
}

/// Parses `p/q` or `p`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    s.trim().parse().ok()
}
