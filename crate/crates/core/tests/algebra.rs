mod common;

use common::*;
use proptest::prelude::*;
use singkam_core::arithmetic::golden;
use singkam_core::series::h0;
use singkam_core::{Caps, Monomial, TruncatedSeries, Var};

fn wide() -> Caps {
    Caps::new(2, 24, 6).unwrap()
}

fn tight() -> Caps {
    Caps::new(2, 8, 2).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn bracket_antisymmetric(f in arb_int_series(wide(), 8, 8), g in arb_int_series(wide(), 8, 8)) {
        let s = &f.poisson(&g) + &g.poisson(&f);
        prop_assert!(s.is_zero());
    }

    #[test]
    fn jacobi_exact(
        f in arb_int_series(wide(), 8, 5),
        g in arb_int_series(wide(), 8, 5),
        h in arb_int_series(wide(), 8, 5),
    ) {
        let j = &(&f.poisson(&g.poisson(&h)) + &g.poisson(&h.poisson(&f))) + &h.poisson(&f.poisson(&g));
        prop_assert!(j.is_zero(), "{}", j);
    }

    #[test]
    fn leibniz_exact(
        f in arb_int_series(wide(), 8, 5),
        g in arb_int_series(wide(), 8, 5),
        h in arb_int_series(wide(), 8, 5),
    ) {
        let lhs = f.poisson(&(&g * &h));
        let rhs = &(&f.poisson(&g) * &h) + &(&g * &f.poisson(&h));
        prop_assert!((&lhs - &rhs).is_zero());
    }

    // with caps hit, truncation commutes with all three identities up to
    // rounding of the float coefficients
    #[test]
    fn identities_under_truncation(
        f in arb_series(tight(), 8, 6),
        g in arb_series(tight(), 8, 6),
        h in arb_series(tight(), 8, 6),
    ) {
        let fg = f.poisson(&g);
        let scale = fg.max_abs_coeff().max(1.0);
        prop_assert!(max_rel(&(&fg + &g.poisson(&f)), scale) <= 1e-12);

        let a = f.poisson(&g.poisson(&h));
        let b = g.poisson(&h.poisson(&f));
        let c = h.poisson(&f.poisson(&g));
        let scale = a.max_abs_coeff().max(b.max_abs_coeff()).max(c.max_abs_coeff());
        prop_assert!(max_rel(&(&(&a + &b) + &c), scale) <= 1e-12);

        let lhs = f.poisson(&(&g * &h));
        let rhs = &(&fg * &h) + &(&g * &f.poisson(&h));
        let scale = lhs.max_abs_coeff().max(rhs.max_abs_coeff());
        prop_assert!(max_rel(&(&lhs - &rhs), scale) <= 1e-12);
    }

    #[test]
    fn product_commutes_and_associates(
        f in arb_int_series(wide(), 6, 6),
        g in arb_int_series(wide(), 6, 6),
        h in arb_int_series(wide(), 6, 6),
    ) {
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
    }

    #[test]
    fn params_are_casimirs(f in arb_int_series(wide(), 8, 8), i in 0usize..2) {
        let t = TruncatedSeries::var(wide(), Var::t(i));
        let l = TruncatedSeries::var(wide(), Var::lambda(i));
        prop_assert!(f.poisson(&t).is_zero());
        prop_assert!(f.poisson(&l).is_zero());
    }

    #[test]
    fn text_round_trip(f in arb_series(tight(), 8, 12)) {
        let back = TruncatedSeries::from_text(tight(), &f.to_text()).unwrap();
        prop_assert_eq!(back, f);
    }
}

#[test]
fn canonical_pair() {
    let caps = Caps::new(2, 4, 0).unwrap();
    let q = TruncatedSeries::var(caps, Var::q(0));
    let p = TruncatedSeries::var(caps, Var::p(0));
    assert_eq!(q.poisson(&p), TruncatedSeries::one(caps));
    assert!(q.poisson(&TruncatedSeries::var(caps, Var::p(1))).is_zero());
}

#[test]
fn eigen_relation_every_monomial() {
    let caps = Caps::new(2, 10, 2).unwrap();
    let alpha = [c(1.0), c(golden())];
    let h = h0(caps, &alpha);
    let mut count = 0;
    for q1 in 0..=10u32 {
        for q2 in 0..=10 - q1 {
            for p1 in 0..=10 - q1 - q2 {
                for p2 in 0..=10 - q1 - q2 - p1 {
                    let m = Monomial::from_blocks(&[], &[], &[q1, q2], &[p1, p2]);
                    let f = TruncatedSeries::monomial(caps, m, c(1.0));
                    let got = h.poisson(&f);
                    let k = [p1 as f64 - q1 as f64, p2 as f64 - q2 as f64];
                    let expected = TruncatedSeries::from_terms(
                        caps,
                        [
                            (m, c(alpha[0].re * k[0] + alpha[1].re * k[1])),
                            (m.mul(Monomial::var(Var::t(0))), c(k[0])),
                            (m.mul(Monomial::var(Var::t(1))), c(k[1])),
                        ],
                    );
                    let scale = expected.max_abs_coeff().max(1.0);
                    assert!((&got - &expected).max_abs_coeff() <= 1e-14 * scale, "{m}");
                    count += 1;
                }
            }
        }
    }
    assert_eq!(count, 1001);
}
