mod common;

use common::*;
use proptest::prelude::*;
use singkam_core::norms::{
    cauchy_bound, check_decay_uv, check_order_decay, check_sup_from_l2, coeff_sup, l1_majorant, l2, ActiveVars,
};
use singkam_core::{Caps, Error, Monomial, TruncatedSeries, C64};

const S_MAX: f64 = 0.56;

fn caps() -> Caps {
    Caps::new(2, 8, 2).unwrap()
}

fn arb_point(s: f64) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((0.0f64..1.0, 0.0f64..std::f64::consts::TAU), 8)
        .prop_map(move |v| v.into_iter().map(|(r, th)| C64::from_polar(r * s, th)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn decay_uv(f in arb_series(caps(), 8, 12), s in 0.05f64..0.3, sig in 0.01f64..0.25) {
        prop_assume!(!f.is_zero());
        prop_assert!(check_decay_uv(&f, s, sig).unwrap().holds);
    }

    #[test]
    fn sup_from_l2(f in arb_series(caps(), 8, 12), s in 0.05f64..0.3, sig in 0.01f64..0.25, w in arb_point(1.0)) {
        let active = ActiveVars::of(&f);
        let w: Vec<C64> = w.iter().map(|z| z * s).collect();
        let ineq = check_sup_from_l2(&f, [&w[0..2], &w[2..4], &w[4..6], &w[6..8]], s, sig, active).unwrap();
        prop_assert!(ineq.holds, "{:?}", ineq);
    }

    #[test]
    fn order_decay(f in arb_series(caps(), 8, 12), s in 0.05f64..0.3, gap in 0.01f64..0.25) {
        let ineq = check_order_decay(&f, s, s + gap, ActiveVars::of(&f)).unwrap();
        prop_assert!(ineq.holds, "{:?}", ineq);
    }

    #[test]
    fn cauchy(f in arb_series(caps(), 8, 12), s in 0.05f64..0.3, gap in 0.01f64..0.25, l in 0u32..=3) {
        for e in cauchy_bound(&f, s, s + gap, l, ActiveVars::of(&f)).unwrap() {
            prop_assert!(e.check.holds, "{:?}", e);
        }
    }

    #[test]
    fn norms_are_monotone_in_radius(f in arb_series(caps(), 8, 12), s in 0.05f64..0.3, gap in 0.0f64..0.25) {
        let a = ActiveVars::all(2);
        prop_assert!(coeff_sup(&f, s) <= coeff_sup(&f, s + gap));
        prop_assert!(l1_majorant(&f, s) <= l1_majorant(&f, s + gap));
        prop_assert!(l2(&f, s, a).unwrap() <= l2(&f, s + gap, a).unwrap());
    }

    #[test]
    fn triangle_inequality(f in arb_series(caps(), 8, 12), g in arb_series(caps(), 8, 12), s in 0.05f64..0.5) {
        let fg = &f + &g;
        let slack = 1.0 + 1e-12;
        prop_assert!(coeff_sup(&fg, s) <= (coeff_sup(&f, s) + coeff_sup(&g, s)) * slack);
        prop_assert!(l1_majorant(&fg, s) <= (l1_majorant(&f, s) + l1_majorant(&g, s)) * slack);
    }
}

#[test]
fn radius_domain() {
    let f = TruncatedSeries::var(caps(), singkam_core::Var::q(0));
    assert!(matches!(check_decay_uv(&f, 0.0, 0.1), Err(Error::InvalidRadius(_))));
    assert!(check_decay_uv(&f, 0.3, S_MAX).is_err());
    assert!(check_order_decay(&f, 0.3, 0.2, ActiveVars::all(2)).is_err());
}

#[test]
fn monomial_norms() {
    // coeffSup of 3 q1^2 p2 at s = 1/2 is 3/8; l1 agrees on a monomial
    let m = Monomial::from_blocks(&[], &[], &[2, 0], &[0, 1]);
    let f = TruncatedSeries::monomial(caps(), m, C64::new(3.0, 0.0));
    assert!((coeff_sup(&f, 0.5) - 0.375).abs() < 1e-16);
    assert!((l1_majorant(&f, 0.5) - 0.375).abs() < 1e-16);
}
