//! Double-exponential (tanh-sinh) quadrature at arbitrary precision.
//!
//! The substitution `x = tanh(pi/2 sinh t)` turns integrals with algebraic or
//! logarithmic endpoint singularities into rapidly decaying ones, where the
//! trapezoidal rule converges geometrically in the number of levels. Level
//! `L` uses step `h = 2^-L` and only evaluates the nodes new at that level.
//!
//! Integrands receive a [`Point`] carrying both `x` and its distances to the
//! endpoints, computed without cancellation, so singular factors such as
//! `1/sqrt(1 - x)` stay accurate where `x` itself rounds to the endpoint.
//! No integrand is ever evaluated at an endpoint.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::factorial;
use crate::hp::{self, HpReal};

/// Default number of step halvings before giving up.
pub const DEFAULT_MAX_LEVEL: u32 = 12;

/// Extra digits carried by node tables over the integration precision.
const NODE_GUARD_DIGITS: u32 = 10;

/// Behaviour of the integrand at one end of the interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Regular,
    /// Integrable singularity: the node range extends until the weights are
    /// negligible at twice the working precision.
    Singular,
}

/// An abscissa together with its distances to both endpoints.
#[derive(Debug, Clone)]
pub struct Point {
    pub x: HpReal,
    /// `x - a`
    pub from_a: HpReal,
    /// `b - x`
    pub to_b: HpReal,
}

pub struct Integrand1D<F> {
    f: F,
    at_a: Endpoint,
    at_b: Endpoint,
}

impl<F> Integrand1D<F>
where
    F: Fn(&Point) -> HpReal + Sync,
{
    pub fn new(f: F) -> Self {
        Self { f, at_a: Endpoint::Regular, at_b: Endpoint::Regular }
    }

    pub fn singular_at_a(mut self) -> Self {
        self.at_a = Endpoint::Singular;
        self
    }

    pub fn singular_at_b(mut self) -> Self {
        self.at_b = Endpoint::Singular;
        self
    }

    pub fn endpoints(&self) -> (Endpoint, Endpoint) {
        (self.at_a, self.at_b)
    }

    pub fn eval(&self, p: &Point) -> HpReal {
        (self.f)(p)
    }
}

#[derive(Debug, Clone)]
pub struct QuadratureResult {
    pub value: HpReal,
    /// `|I_L - I_{L-1}|` at the final level.
    pub error: f64,
    pub levels: u32,
    /// Successive-level differences, starting with level 1.
    pub deltas: Vec<f64>,
}

/// One node at `t >= 0` on the reference interval `[-1, 1]`.
struct Node {
    weight: HpReal,
    /// `1 - u` with `u = tanh(pi/2 sinh t)`
    one_minus: HpReal,
    /// `1 + u`
    one_plus: HpReal,
}

struct Level {
    /// Nodes with `t > 0` in increasing `t`; level 0 also has `t = 0` first.
    nodes: Vec<Node>,
    has_center: bool,
}

fn node_at(t: &HpReal, half_pi: &HpReal) -> Node {
    let d = t.digits();
    let one = HpReal::one(d);
    let e = t.exp();
    let ei = &one / &e;
    let sinh = (&e - &ei).div_u64(2);
    let cosh = (&e + &ei).div_u64(2);
    let s = half_pi * &sinh;
    let q = (-(s.mul_u64(2))).exp();
    let one_q = &one + &q;
    Node {
        weight: half_pi * &cosh * q.mul_u64(4) / (&one_q * &one_q),
        one_minus: q.mul_u64(2) / &one_q,
        one_plus: HpReal::from_u64(2, d) / &one_q,
    }
}

/// Largest useful `t`: weights beyond it are below `10^-(2(digits + 12))`.
fn t_max(digits: u32) -> f64 {
    // weight ~ pi/2 cosh t * 4 exp(-pi sinh t)
    let target = 2.0 * (digits as f64 + 12.0) * std::f64::consts::LN_10;
    let mut t = 1.0f64;
    while std::f64::consts::PI * t.sinh() - t < target {
        t += 0.0625;
    }
    t
}

fn level_table(digits: u32, level: u32) -> Arc<Level> {
    static TABLES: OnceLock<Mutex<HashMap<(u32, u32), Arc<Level>>>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = tables.lock().expect("node cache poisoned").get(&(digits, level)) {
        return t.clone();
    }
    let d = digits + NODE_GUARD_DIGITS;
    let half_pi = hp::pi(d).div_u64(2);
    let h = 0.5f64.powi(level as i32);
    let tmax = t_max(digits);
    let kmax = (tmax / h).ceil() as u64;
    let (start, step) = if level == 0 { (0u64, 1u64) } else { (1u64, 2u64) };
    let ks: Vec<u64> = (start..=kmax).step_by(step as usize).collect();
    let scale = HpReal::one(d).div_u64(1u64 << level);
    let nodes: Vec<Node> = ks
        .par_iter()
        .map(|&k| node_at(&(HpReal::from_u64(k, d) * &scale), &half_pi))
        .collect();
    let built = Arc::new(Level { nodes, has_center: level == 0 });
    tables
        .lock()
        .expect("node cache poisoned")
        .entry((digits, level))
        .or_insert(built)
        .clone()
}

/// Tanh-sinh integrator at a fixed working precision.
#[derive(Debug, Clone, Copy)]
pub struct TanhSinh {
    pub digits: u32,
    pub max_level: u32,
    /// Convergence is not declared before this level.
    pub min_level: u32,
}

impl TanhSinh {
    pub fn new(digits: u32) -> Self {
        Self { digits, max_level: DEFAULT_MAX_LEVEL, min_level: 3 }
    }

    pub fn with_max_level(mut self, max_level: u32) -> Self {
        self.max_level = max_level;
        self
    }

    /// Integral of `f` over `(a, b)` to absolute tolerance `tol`.
    pub fn integrate<F>(&self, f: &Integrand1D<F>, a: &HpReal, b: &HpReal, tol: f64) -> Result<QuadratureResult>
    where
        F: Fn(&Point) -> HpReal + Sync,
    {
        if !(a < b) {
            return Err(Error::InvalidArgument("integration needs a < b".into()));
        }
        if !(tol > 0.0) {
            return Err(Error::InvalidArgument("tolerance must be positive".into()));
        }
        let d = self.digits;
        let half_len = (b - a).with_digits(d).div_u64(2);
        let (at_a, at_b) = f.endpoints();
        let cutoff = |e: Endpoint| match e {
            Endpoint::Regular => 10f64.powi(-(d as i32) - 12),
            Endpoint::Singular => 10f64.powi(-2 * (d as i32) - 24),
        };
        let (cut_a, cut_b) = (cutoff(at_a), cutoff(at_b));

        let mut total = HpReal::zero(d);
        let mut prev: Option<HpReal> = None;
        let mut deltas = Vec::new();
        for level in 0..=self.max_level {
            let table = level_table(d, level);
            let mut contributions: Vec<(usize, HpReal)> = table
                .nodes
                .par_iter()
                .enumerate()
                .map(|(i, node)| {
                    let w = node.weight.to_f64();
                    let mut acc = HpReal::zero(d);
                    if table.has_center && i == 0 {
                        let p = Point { x: a + &half_len, from_a: half_len.clone(), to_b: half_len.clone() };
                        return (i, &node.weight * f.eval(&p));
                    }
                    // t > 0 sits near b, t < 0 near a
                    if w >= cut_b {
                        let to_b = &half_len * &node.one_minus;
                        let from_a = &half_len * &node.one_plus;
                        let p = Point { x: a + &from_a, from_a, to_b };
                        acc = acc + f.eval(&p);
                    }
                    if w >= cut_a {
                        let from_a = &half_len * &node.one_minus;
                        let to_b = &half_len * &node.one_plus;
                        let p = Point { x: a + &from_a, from_a, to_b };
                        acc = acc + f.eval(&p);
                    }
                    (i, &node.weight * &acc)
                })
                .collect();
            contributions.sort_by_key(|(i, _)| *i);
            for (_, c) in contributions {
                total = total + c;
            }
            let h = HpReal::one(d).div_u64(1u64 << level);
            let estimate = &total * &h * &half_len;
            if !estimate.is_finite() {
                return Err(Error::InvalidArgument("integrand produced a non-finite value".into()));
            }
            if let Some(p) = prev.as_ref() {
                let delta = (&estimate - p).abs().to_f64();
                deltas.push(delta);
                if level >= self.min_level && delta <= tol {
                    return Ok(QuadratureResult { value: estimate, error: delta, levels: level, deltas });
                }
            }
            prev = Some(estimate);
        }
        let gap = deltas.last().copied().unwrap_or(f64::INFINITY);
        Err(Error::NonConvergence { estimate: prev.unwrap_or_else(|| HpReal::zero(d)), gap, levels: self.max_level })
    }
}

/// `integral_a^b f` with the default level cap.
pub fn integrate_1d<F>(f: &Integrand1D<F>, a: &HpReal, b: &HpReal, digits: u32, tol: f64) -> Result<QuadratureResult>
where
    F: Fn(&Point) -> HpReal + Sync,
{
    TanhSinh::new(digits).integrate(f, a, b, tol)
}

/// Iterated integral over the unit square, `integral_0^1 integral_0^1 f(x0, x1) dx0 dx1`.
///
/// The outer variable is `x1`; each inner integral over `x0` runs to `tol / 50`.
pub fn integrate_2d_iterated<F>(f: F, digits: u32, tol: f64) -> Result<QuadratureResult>
where
    F: Fn(&Point, &Point) -> HpReal + Sync,
{
    integrate_2d_with(f, digits, tol, Endpoint::Singular, Endpoint::Singular)
}

pub(crate) fn integrate_2d_with<F>(f: F, digits: u32, tol: f64, inner: Endpoint, outer: Endpoint) -> Result<QuadratureResult>
where
    F: Fn(&Point, &Point) -> HpReal + Sync,
{
    let zero = HpReal::zero(digits);
    let one = HpReal::one(digits);
    let inner_tol = tol / 50.0;
    let failure: Mutex<Option<Error>> = Mutex::new(None);
    let outer_fn = |p1: &Point| -> HpReal {
        let mut g = Integrand1D::new(|p0: &Point| f(p0, p1));
        if inner == Endpoint::Singular {
            g = g.singular_at_a().singular_at_b();
        }
        match integrate_1d(&g, &zero, &one, digits, inner_tol) {
            Ok(r) => r.value,
            Err(e) => {
                let mut slot = failure.lock().expect("failure slot poisoned");
                slot.get_or_insert(e);
                HpReal::zero(digits)
            }
        }
    };
    let mut g = Integrand1D::new(outer_fn);
    if outer == Endpoint::Singular {
        g = g.singular_at_a().singular_at_b();
    }
    let result = integrate_1d(&g, &zero, &one, digits, tol);
    if let Some(e) = failure.into_inner().expect("failure slot poisoned") {
        return Err(e);
    }
    let mut result = result?;
    result.error += inner_tol;
    Ok(result)
}

/// `C(m) = 1/m! integral_0^pi (theta^m / 2) cot(theta / 2) dtheta` by quadrature.
///
/// `cot(theta/2)` is evaluated as `tan((pi - theta)/2)` from the distance to `pi`.
pub fn moment_quadrature(m: u32, digits: u32, tol: f64) -> Result<QuadratureResult> {
    if m == 0 {
        return Err(Error::InvalidArgument("moment index must be >= 1".into()));
    }
    let w = digits;
    let inv_fact = HpReal::one(w) / HpReal::from_bigint(&factorial(m as usize), w);
    let f = Integrand1D::new(|p: &Point| {
        let theta = &p.from_a;
        theta.powi(m) * p.to_b.div_u64(2).tan() * &inv_fact / HpReal::from_u64(2, w)
    });
    integrate_1d(&f, &HpReal::zero(w), &hp::pi(w), w, tol)
}

/// The same moment after `v = 2 sin(theta/2)`: `integral_0^2 [2 arcsin(v/2)]^m / m! dv / v`.
pub fn moment_quadrature_arcsin(m: u32, digits: u32, tol: f64) -> Result<QuadratureResult> {
    if m == 0 {
        return Err(Error::InvalidArgument("moment index must be >= 1".into()));
    }
    let w = digits;
    let inv_fact = HpReal::one(w) / HpReal::from_bigint(&factorial(m as usize), w);
    let f = Integrand1D::new(|p: &Point| {
        // arcsin(v/2) = arcsin(1 - (2 - v)/2)
        let a = HpReal::asin_one_minus(&p.to_b.div_u64(2));
        a.mul_u64(2).powi(m) / &p.from_a * &inv_fact
    })
    .singular_at_b();
    integrate_1d(&f, &HpReal::zero(w), &HpReal::from_u64(2, w), w, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &HpReal, b: &HpReal, tol: f64) -> bool {
        (a - b).abs().to_f64() < tol
    }

    #[test]
    fn linear_and_constant() {
        let f = Integrand1D::new(|p: &Point| p.x.clone());
        let r = integrate_1d(&f, &HpReal::zero(30), &HpReal::one(30), 30, 1e-25).unwrap();
        assert!(close(&r.value, &HpReal::from_f64(0.5, 30), 1e-25));
        let sq = integrate_2d_iterated(|_: &Point, _: &Point| HpReal::one(20), 20, 1e-12).unwrap();
        assert!(close(&sq.value, &HpReal::one(20), 1e-12));
    }

    #[test]
    fn log_over_sqrt_closed_form() {
        let d = 30;
        let f = Integrand1D::new(|p: &Point| {
            let one_minus_x2 = &p.to_b * (HpReal::from_u64(2, d) - &p.to_b);
            -(p.from_a.ln()) / one_minus_x2.sqrt()
        })
        .singular_at_a()
        .singular_at_b();
        let r = integrate_1d(&f, &HpReal::zero(d), &HpReal::one(d), d, 1e-25).unwrap();
        let expected = hp::pi(d) * hp::log2(d) / HpReal::from_u64(2, d);
        assert!(close(&r.value, &expected, 1e-24), "{:?}", r);
    }

    #[test]
    fn deltas_shrink_after_level_four() {
        let d = 40;
        let f = Integrand1D::new(|p: &Point| p.from_a.sqrt() * p.from_a.ln()).singular_at_a();
        let r = TanhSinh { digits: d, max_level: 9, min_level: 1 }
            .integrate(&f, &HpReal::zero(d), &HpReal::one(d), 1e-34)
            .unwrap();
        assert!(close(&r.value, &(-HpReal::from_u64(4, d).div_u64(9)), 1e-30));
        for w in r.deltas.windows(2).skip(3) {
            assert!(w[1] <= w[0], "{:?}", r.deltas);
        }
    }

    #[test]
    fn rejects_bad_input() {
        let f = Integrand1D::new(|p: &Point| p.x.clone());
        assert!(integrate_1d(&f, &HpReal::one(20), &HpReal::zero(20), 20, 1e-10).is_err());
        assert!(moment_quadrature(0, 20, 1e-10).is_err());
    }

    #[test]
    fn non_convergence_reports_best_estimate() {
        // x^(-7/8) needs more than two levels
        let f = Integrand1D::new(|p: &Point| p.from_a.sqrt().sqrt().sqrt() / &p.from_a);
        let r = TanhSinh { digits: 20, max_level: 2, min_level: 1 }.integrate(
            &f,
            &HpReal::zero(20),
            &HpReal::one(20),
            1e-18,
        );
        match r {
            Err(Error::NonConvergence { gap, levels, .. }) => {
                assert_eq!(levels, 2);
                assert!(gap > 1e-18);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }
}
