use cotmoments::cfn;
use cotmoments::exact::{bernoulli, cycle_count, factorial, fps_arcsin, fps_power, partitions, BigRational};
use cotmoments::moments::{self, series};
use cotmoments::quadrature::{integrate_1d, moment_quadrature, moment_quadrature_arcsin, Integrand1D, Point};
use cotmoments::HpReal;
use num_traits::Zero;
use proptest::prelude::*;

#[test]
fn odd_bernoulli_numbers_vanish() {
    for n in 1..=30 {
        assert!(bernoulli(2 * n + 1).is_zero(), "B_{}", 2 * n + 1);
    }
}

#[test]
fn cycle_classes_partition_the_symmetric_group() {
    for k in 1..=12u32 {
        let total = partitions(k).unwrap().iter().fold(BigRational::zero(), |a, p| a + cycle_count(p));
        assert_eq!(total, BigRational::from_integer(factorial(k as usize)));
    }
}

#[test]
fn arcsin_square_coefficients() {
    let s = fps_power(&fps_arcsin(40).unwrap(), 2).unwrap();
    for (n, c) in s.coeffs().iter().enumerate() {
        assert!(*c >= BigRational::zero());
        if n % 2 == 1 {
            assert!(c.is_zero());
        }
    }
}

#[test]
fn moment_matches_change_of_variable() {
    let tol = 1e-25;
    for m in 1..=8 {
        let a = moment_quadrature(m, 35, tol).unwrap();
        let b = moment_quadrature_arcsin(m, 35, tol).unwrap();
        assert!((&a.value - &b.value).abs().to_f64() <= 2.0 * tol, "m={m}");
    }
}

#[test]
fn positive_term_series_have_increasing_partial_sums() {
    for m in 1..=6 {
        let mut prev: Option<HpReal> = None;
        for n in [10, 100, 1000] {
            let c = moments::c_cfn_route(m, 20, n).unwrap().value;
            if let Some(p) = prev {
                assert!(c > p);
            }
            prev = Some(c);
        }
    }
    for l in 0..=2 {
        let a = moments::s_odd(l, 20, 100).unwrap().value;
        let b = moments::s_odd(l, 20, 1000).unwrap().value;
        assert!(b > a);
    }
}

#[test]
fn first_moment_single_integral() {
    // -2 integral_0^1 log(x)/sqrt(1-x^2) dx = C(1)
    let d = 30;
    let two = HpReal::from_u64(2, d);
    let f = Integrand1D::new(|p: &Point| -(p.x.ln()) / (&p.to_b * &(&two - &p.to_b)).sqrt()).singular_at_a().singular_at_b();
    let r = integrate_1d(&f, &HpReal::zero(d), &HpReal::one(d), d, 1e-22).unwrap();
    let c1 = moments::c_eta_route(1, d).unwrap().value;
    assert!((&r.value.mul_u64(2) - &c1).abs().to_f64() < 1e-21);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn factorial_relation_at_random_corner(k in 0usize..8, extra in 0usize..8) {
        let r = cfn::check_factorial_relation(k, k + extra).unwrap();
        prop_assert!(r.all_pass());
    }

    #[test]
    fn harmonic_rows_are_non_decreasing(k in 0usize..5, n in 5usize..15) {
        let h1 = cfn::build_h1(k, n).unwrap();
        let h0 = cfn::build_h0(k, n).unwrap();
        for j in 1..n {
            prop_assert!(h1.get(k, j) <= h1.get(k, j + 1));
            prop_assert!(h0.get(k, j) <= h0.get(k, j + 1));
        }
    }

    #[test]
    fn log_power_identity(j in 0u32..7, l in 0u32..4) {
        let d = 25;
        let f = Integrand1D::new(|p: &Point| p.x.powi(j) * p.x.ln().powi(l)).singular_at_a();
        let v = integrate_1d(&f, &HpReal::zero(d), &HpReal::one(d), d, 1e-19).unwrap().value;
        let mut want = HpReal::from_bigint(&factorial(l as usize), d) / HpReal::from_u64(j as u64 + 1, d).powi(l + 1);
        if l % 2 == 1 {
            want = -want;
        }
        prop_assert!((&v - &want).abs().to_f64() < 1e-17);
    }

    #[test]
    fn dual_recurrence_matches_closed_form(k in 0u32..7) {
        let a = series::a_via_recurrence(k, cfn::Parity::Odd, 40).unwrap().value;
        prop_assert!((&a - &series::a1(k, 40).value).abs().to_f64() < 1e-32);
    }
}
