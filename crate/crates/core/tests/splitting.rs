mod common;

use common::*;
use proptest::prelude::*;
use singkam_core::series::mu;
use singkam_core::splitting::{expand_certificate, i2_certificate, pi_g, split};
use singkam_core::{Caps, Monomial, TruncatedSeries, Var};

fn caps() -> Caps {
    Caps::new(2, 10, 2).unwrap()
}

fn qp_exps(m: &Monomial) -> ([u32; 2], [u32; 2]) {
    (
        [m.exp(Var::q(0)), m.exp(Var::q(1))],
        [m.exp(Var::p(0)), m.exp(Var::p(1))],
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn round_trip(f in arb_series(caps(), 10, 20)) {
        let s = split(&f);
        let back = s.recombine();
        prop_assert!(max_rel(&(&back - &f), f.max_abs_coeff()) <= 1e-12);
    }

    #[test]
    fn component_supports(f in arb_series(caps(), 10, 20)) {
        let s = split(&f);
        for (m, _) in s.r.iter() {
            prop_assert!(m.is_param_only());
        }
        for (m, _) in s.g.b.iter() {
            let (i, j) = qp_exps(m);
            prop_assert!(i != j);
            prop_assert!((0..2).all(|k| i[k].min(j[k]) == 0));
        }
        for ck in &s.g.c {
            for (m, _) in ck.iter() {
                let (i, j) = qp_exps(m);
                prop_assert!(i != j);
            }
        }
        for ak in &s.g.a {
            for (m, _) in ak.iter() {
                prop_assert!(m.is_param_only());
            }
        }
    }

    #[test]
    fn i2_part_has_certificate(f in arb_series(caps(), 10, 20)) {
        let s = split(&f);
        let cert = i2_certificate(&f);
        prop_assert!(cert.iter().all(|t| t.r.iter().sum::<u32>() >= 2));
        let expanded = expand_certificate(caps(), &cert);
        let scale = s.i2.max_abs_coeff().max(f.max_abs_coeff());
        prop_assert!(max_rel(&(&expanded - &s.i2), scale) <= 1e-12);
    }

    #[test]
    fn projection_is_idempotent(f in arb_series(caps(), 10, 20)) {
        let g = pi_g(&f).recombine();
        let again = pi_g(&g).recombine();
        prop_assert!(max_rel(&(&again - &g), f.max_abs_coeff()) <= 1e-12);
        prop_assert!(split(&g).pi_f().max_abs_coeff() <= 1e-12 * f.max_abs_coeff());
    }
}

#[test]
fn mu_lands_in_a() {
    let caps = caps();
    for k in 0..2 {
        let s = split(&mu(caps, k));
        assert!(s.r.is_zero() && s.i2.is_zero() && s.g.b.is_zero());
        assert_eq!(s.g.a[k], TruncatedSeries::one(caps));
        assert!(s.g.a[1 - k].is_zero());
    }
}

#[test]
fn square_of_mu_is_i2() {
    let caps = caps();
    let m = &mu(caps, 0) * &mu(caps, 1);
    let s = split(&m);
    assert!(s.g.is_zero());
    assert!(s.r.is_zero());
    assert_eq!(s.i2, m);
}

#[test]
fn mixed_monomial() {
    // q1^2 p1 q2 = λ1 q1 q2 + μ1 q1 q2 with nothing in I²
    let caps = caps();
    let m = Monomial::from_blocks(&[], &[], &[2, 1], &[1, 0]);
    let s = split(&TruncatedSeries::monomial(caps, m, c(3.0)));
    let b = Monomial::from_blocks(&[], &[1], &[1, 1], &[0, 0]);
    assert_eq!(s.g.b, TruncatedSeries::monomial(caps, b, c(3.0)));
    let cof = Monomial::from_blocks(&[], &[], &[1, 1], &[0, 0]);
    assert_eq!(s.g.c[0], TruncatedSeries::monomial(caps, cof, c(3.0)));
    assert!(s.i2.is_zero());
}
