mod common;

use common::*;
use proptest::prelude::*;
use singkam_core::arithmetic::{golden, sigma, IndexNorm};
use singkam_core::homological::{
    difference, divisor, exact_formal_solve, quasi_inverse, residual, solve_b, InverseMode,
};
use singkam_core::norms::{coeff_sup, l1_majorant, l2, ActiveVars};
use singkam_core::series::h0;
use singkam_core::splitting::{pi_g, GPart};
use singkam_core::{Caps, Monomial, TruncatedSeries, C64};

fn alpha() -> [C64; 2] {
    [c(1.0), c(golden())]
}

fn caps() -> Caps {
    Caps::new(2, 80, 2).unwrap()
}

/// `B`-type monomials with `‖i − j‖_∞ ≤ 2^level`, optionally times `λ`, `t`.
fn arb_b_series(level: u32) -> impl Strategy<Value = TruncatedSeries> {
    let r = 1i64 << level;
    let term = (
        (-r..=r, -r..=r).prop_filter("nonzero", |(a, b)| *a != 0 || *b != 0),
        prop::array::uniform2(0u32..=1),
        prop::array::uniform2(0u32..=1),
        arb_coeff(),
    )
        .prop_map(|((a, b), l, t, v)| {
            let d = [a, b];
            let q: Vec<u32> = d.iter().map(|&x| x.max(0) as u32).collect();
            let p: Vec<u32> = d.iter().map(|&x| (-x).max(0) as u32).collect();
            (Monomial::from_blocks(&t, &l, &q, &p), v)
        });
    prop::collection::vec(term, 1..=12).prop_map(|t| TruncatedSeries::from_terms(caps(), t))
}

fn all_norms(f: &TruncatedSeries, s: f64) -> [f64; 3] {
    [
        coeff_sup(f, s),
        l2(f, s, ActiveVars::all(2)).unwrap(),
        l1_majorant(f, s),
    ]
}

fn check_division_bound(level: u32, f: &TruncatedSeries, s: f64) -> Result<(), TestCaseError> {
    let sig = sigma(&alpha(), level, IndexNorm::Sup).unwrap().value;
    let out = solve_b(f, &alpha(), Some(level)).unwrap();
    let lhs = all_norms(&out, s);
    // σ^{-1}‖f‖ evaluated as ‖σ^{-1} f‖, the same rounded reciprocal the
    // solver multiplies by
    let rhs = all_norms(&f.scale(c(1.0 / sig)), s);
    for k in 0..3 {
        prop_assert!(lhs[k] <= rhs[k], "level {level} norm {k}: {} > {}", lhs[k], rhs[k]);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn division_bound_level_1(f in arb_b_series(1), s in 0.05f64..0.5) { check_division_bound(1, &f, s)?; }
    #[test]
    fn division_bound_level_2(f in arb_b_series(2), s in 0.05f64..0.5) { check_division_bound(2, &f, s)?; }
    #[test]
    fn division_bound_level_3(f in arb_b_series(3), s in 0.05f64..0.5) { check_division_bound(3, &f, s)?; }
    #[test]
    fn division_bound_level_4(f in arb_b_series(4), s in 0.05f64..0.5) { check_division_bound(4, &f, s)?; }
    #[test]
    fn division_bound_level_5(f in arb_b_series(5), s in 0.05f64..0.5) { check_division_bound(5, &f, s)?; }
    #[test]
    fn division_bound_level_6(f in arb_b_series(6), s in 0.05f64..0.5) { check_division_bound(6, &f, s)?; }

    #[test]
    fn formal_solve_inverts_g(f in arb_b_series(3)) {
        // exact in t up to the t cap, so g ⋆ F reproduces f
        let f = f.filter(|m, _| m.t_degree() == 0);
        let x = exact_formal_solve(&f, &alpha(), None).unwrap();
        let back = singkam_core::homological::apply_g(&x, &alpha());
        // the t^T coefficients of x carry 1/(α,k)^{T+1}; cancellation happens at that scale
        let scale = f.max_abs_coeff().max(x.max_abs_coeff());
        prop_assert!(max_rel(&(&back - &f), scale) <= 1e-12);
    }

    #[test]
    fn frozen_residual_closed_form(f in arb_b_series(3)) {
        let caps = caps();
        let h = h0(caps, &alpha());
        let mut g = GPart::zero(caps);
        g.b = f.filter(|m, _| m.t_degree() < caps.t_cap);
        let r = residual(&h, &g, &alpha(), Some(3), InverseMode::Frozen).unwrap();
        let n = 2;
        let expected = TruncatedSeries::from_terms(
            caps,
            g.b.iter().flat_map(|(m, v)| {
                let k = difference(m, n);
                let d = divisor(&alpha(), &k[..n]);
                (0..n)
                    .filter(move |&i| k[i] != 0)
                    .map(move |i| (m.mul(Monomial::var(singkam_core::Var::t(i))), v * (k[i] as f64) / d))
            }),
        );
        prop_assert!(max_rel(&(&r.b - &expected), g.b.max_abs_coeff()) <= 1e-12);
        prop_assert!(r.a.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn general_hamiltonian_raises_order(
        pert in arb_series_with(Caps::new(2, 12, 2).unwrap(), 5, 6, true, arb_coeff()),
        target in arb_series_with(Caps::new(2, 12, 2).unwrap(), 6, 10, true, arb_coeff()),
    ) {
        let caps = Caps::new(2, 12, 2).unwrap();
        let pert = pert.filter(|m, _| m.degree() >= 3);
        let h = &h0(caps, &alpha()) + &pert;
        let g = pi_g(&target.filter(|m, _| m.degree() >= 3)).window(3, 12);
        prop_assume!(!g.is_zero());
        let level = 3;
        let (inside, _) = singkam_core::homological::partition_window(&g, level);
        prop_assume!(!inside.is_zero());
        let r = residual(&h, &inside, &alpha(), Some(level), InverseMode::TSeries).unwrap();
        let tol = 1e-12 * inside.max_abs_coeff();
        match (r.order_above(tol), inside.order()) {
            (Some(ro), Some(go)) => prop_assert!(ro > go, "residual order {ro} vs {go}"),
            _ => {}
        }
    }
}

#[test]
fn frozen_at_t_zero_vanishes_on_a_and_b() {
    let caps = Caps::new(2, 10, 1).unwrap();
    let h = h0(caps, &alpha());
    let m = |q: [u32; 2], p: [u32; 2], l: [u32; 2]| Monomial::from_blocks(&[], &l, &q, &p);
    let mut g = GPart::zero(caps);
    g.b = TruncatedSeries::from_terms(
        caps,
        [
            (m([2, 0], [0, 1], [0, 0]), c(0.3)),
            (m([0, 3], [1, 0], [1, 0]), c(-1.7)),
            (m([1, 1], [0, 0], [0, 1]), C64::new(0.2, 0.9)),
        ],
    );
    g.a[0] = TruncatedSeries::from_terms(caps, [(m([0, 0], [0, 0], [1, 1]), c(2.5))]);
    g.a[1] = TruncatedSeries::from_terms(caps, [(m([0, 0], [0, 0], [2, 0]), c(-0.125))]);
    let r = residual(&h, &g, &alpha(), Some(2), InverseMode::Frozen).unwrap();
    let at_zero = r.map(|x| x.filter(|mono, _| mono.t_degree() == 0));
    assert!(at_zero.a.iter().all(|x| x.is_zero()));
    // one rounded reciprocal and one product per coefficient
    assert!(at_zero.b.max_abs_coeff() <= 4.0 * f64::EPSILON * g.b.max_abs_coeff());
}

#[test]
fn witness_saturates_bound() {
    for level in 1..=6 {
        let s = sigma(&alpha(), level, IndexNorm::Sup).unwrap();
        let w = &s.witness;
        let q: Vec<u32> = w.iter().map(|&x| x.max(0) as u32).collect();
        let p: Vec<u32> = w.iter().map(|&x| (-x).max(0) as u32).collect();
        let f = TruncatedSeries::monomial(caps(), Monomial::from_blocks(&[], &[], &q, &p), c(1.0));
        let out = solve_b(&f, &alpha(), Some(level)).unwrap();
        for (a, b) in all_norms(&out, 0.3).iter().zip(all_norms(&f.scale(c(1.0 / s.value)), 0.3)) {
            assert_eq!(*a, b, "level {level}");
        }
    }
}

#[test]
fn tseries_quasi_inverse_exact_at_h0() {
    let caps = Caps::new(2, 10, 2).unwrap();
    let h = h0(caps, &alpha());
    let f = TruncatedSeries::from_terms(
        caps,
        [
            (Monomial::from_blocks(&[], &[], &[3, 0], &[0, 1]), c(0.4)),
            (Monomial::from_blocks(&[1, 0], &[], &[1, 2], &[2, 0]), c(-0.6)),
            (Monomial::from_blocks(&[], &[1, 0], &[0, 0], &[0, 0]), c(0.5)),
        ],
    );
    let g = pi_g(&f);
    let v = quasi_inverse(&h, &g, &alpha(), Some(2), InverseMode::TSeries).unwrap();
    let r = singkam_core::homological::rho(&h, &v).sub(&g);
    assert!(r.max_abs_coeff() <= 1e-14);
}
