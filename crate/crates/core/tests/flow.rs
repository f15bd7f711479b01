mod common;

use common::*;
use singkam_core::arithmetic::golden;
use singkam_core::engine::{formal_normalize, transformed_integrals};
use singkam_core::flow::{drift_report, integrate, specialize, FlowConfig, HamiltonianField, LambdaChoice};
use singkam_core::series::{h0, mu};
use singkam_core::{Caps, Error, Monomial, TruncatedSeries, Var, C64};

fn zeros(n: usize) -> Vec<C64> {
    vec![c(0.0); n]
}

fn alpha() -> [C64; 2] {
    [c(1.0), c(golden())]
}

fn benchmark(caps: Caps) -> TruncatedSeries {
    let pert = TruncatedSeries::from_terms(
        caps,
        [
            (Monomial::from_blocks(&[], &[], &[2, 1], &[0, 0]), c(0.01)),
            (Monomial::from_blocks(&[], &[], &[0, 0], &[1, 2]), c(0.01)),
        ],
    );
    &h0(caps, &alpha()) + &pert
}

#[test]
fn field_of_quadratic() {
    let caps = Caps::new(1, 4, 1).unwrap();
    let a = 0.7;
    let h = &(&TruncatedSeries::var(caps, Var::q(0)) * &TruncatedSeries::var(caps, Var::p(0))) * a;
    let f = HamiltonianField::new(&h, &zeros(1), &zeros(1)).unwrap();
    let v = f.eval(&[c(0.3), c(-2.0)]);
    assert_eq!(v, vec![c(a * 0.3), c(a * 2.0)]);
    let zero = HamiltonianField::new(&TruncatedSeries::constant(caps, c(5.0)), &zeros(1), &zeros(1)).unwrap();
    assert_eq!(zero.eval(&[c(0.3), c(-2.0)]), vec![c(0.0), c(0.0)]);
}

#[test]
fn field_is_linear() {
    let caps = Caps::new(2, 6, 1).unwrap();
    let f = benchmark(caps);
    let g = &mu(caps, 1) * &TruncatedSeries::var(caps, Var::q(0));
    let z = [c(0.1), c(-0.2), c(0.05), c(0.3)];
    let t = [c(0.02), c(-0.01)];
    let l = [c(0.03), c(0.01)];
    let sum = HamiltonianField::new(&(&f + &(&g * 2.0)), &t, &l).unwrap().eval(&z);
    let a = HamiltonianField::new(&f, &t, &l).unwrap().eval(&z);
    let b = HamiltonianField::new(&g, &t, &l).unwrap().eval(&z);
    for i in 0..4 {
        assert!((sum[i] - (a[i] + b[i] * 2.0)).norm() < 1e-15);
    }
}

#[test]
fn specialize_substitutes_parameters() {
    let caps = Caps::new(1, 4, 2).unwrap();
    let f = &(&h0(caps, &[c(2.0)]) * &TruncatedSeries::var(caps, Var::t(0))) - &mu(caps, 0);
    let s = specialize(&f, &[c(0.5)], &[c(0.25)]).unwrap();
    let qp = Monomial::from_blocks(&[], &[], &[1], &[1]);
    // (2 + t) t pq − pq + λ at t = 1/2, λ = 1/4
    assert_eq!(s.coeff(&qp), c(1.25 - 1.0));
    assert_eq!(s.coeff(&Monomial::ONE), c(0.25));
}

#[test]
fn zero_field_is_stationary() {
    let caps = Caps::new(1, 4, 1).unwrap();
    let f = HamiltonianField::new(&TruncatedSeries::zero(caps), &zeros(1), &zeros(1)).unwrap();
    let tr = integrate(&f, &[c(0.2), c(0.1)], 1.0, 1e-2).unwrap();
    assert_eq!(tr.states.len(), 101);
    assert!(tr.states.iter().all(|z| z == &vec![c(0.2), c(0.1)]));
}

#[test]
fn product_conserved_for_real_frequency() {
    let caps = Caps::new(1, 4, 1).unwrap();
    let a = golden();
    let h = &h0(caps, &[c(a)]) * 1.0;
    let f = HamiltonianField::new(&h, &zeros(1), &zeros(1)).unwrap();
    let z0 = [c(0.3), c(0.2)];
    let tr = integrate(&f, &z0, 1.0, 1e-3).unwrap();
    let start = z0[0] * z0[1];
    for z in &tr.states {
        assert!((z[0] * z[1] - start).norm() <= 1e-10);
    }
}

#[test]
fn fourth_order_convergence() {
    let caps = Caps::new(1, 4, 1).unwrap();
    let a = 1.3;
    let f = HamiltonianField::new(&h0(caps, &[c(a)]), &zeros(1), &zeros(1)).unwrap();
    let z0 = [c(0.3), c(0.2)];
    let err = |h: f64| {
        let tr = integrate(&f, &z0, 1.0, h).unwrap();
        let z = tr.states.last().unwrap();
        (z[0] - z0[0] * a.exp()).norm()
    };
    let ratio = err(0.1) / err(0.05);
    assert!((14.0..18.5).contains(&ratio), "ratio {ratio}");
}

#[test]
fn blow_up_flagged() {
    let caps = Caps::new(1, 6, 0).unwrap();
    let q = TruncatedSeries::var(caps, Var::q(0));
    let p = TruncatedSeries::var(caps, Var::p(0));
    // q̇ = q^2 escapes in finite time from q = 1
    let h = &(&q * &q) * &p;
    let f = HamiltonianField::new(&h, &zeros(1), &zeros(1)).unwrap();
    assert!(matches!(integrate(&f, &[c(1.0), c(0.0)], 5.0, 1e-2), Err(Error::BlowUp { .. })));
    assert!(integrate(&f, &[c(1.0), c(0.0)], 1.0, 0.0).is_err());
}

#[test]
fn quadratic_part_conserves_mu_exactly() {
    let caps = Caps::new(2, 8, 2).unwrap();
    let h = h0(caps, &alpha());
    let mus: Vec<_> = (0..2).map(|i| mu(caps, i)).collect();
    let rep = drift_report(&h, &mus, &FlowConfig::standard(2)).unwrap();
    for s in &rep.samples {
        assert!(s.drift.iter().all(|&d| d < 1e-10));
    }
}

#[test]
fn benchmark_drift() {
    let caps = Caps::new(2, 16, 2).unwrap();
    let h = benchmark(caps);
    let mus: Vec<_> = (0..2).map(|i| mu(caps, i)).collect();
    let cfg = FlowConfig::standard(2);
    let raw = drift_report(&h, &mus, &cfg).unwrap();
    // leading perturbation is cubic
    for s in &raw.slopes {
        assert!((s - 3.0).abs() < 0.1, "{s}");
    }
    let mut drifts = Vec::new();
    for k in 1..=3 {
        let run = formal_normalize(&h, &alpha(), k, 0.25).unwrap();
        let ks = transformed_integrals(&run.chain, caps).unwrap();
        let rep = drift_report(&h, &ks, &cfg).unwrap();
        assert!(raw.max_drift(0) >= 1e3 * rep.max_drift(0));
        if k == 1 {
            // first window leaves a degree-5 remainder
            assert!(rep.min_slope() >= 4.9, "{:?}", rep.slopes);
        }
        drifts.push(rep.max_drift(0));
        for s in &rep.samples {
            assert!(s.energy_drift < 1e-15);
        }
    }
    // from K = 2 on the true drift is far below the rounding floor of the
    // integrator, so only the first decrease is visible
    assert!(drifts[0] > 1e3 * drifts[1]);
    assert!(drifts[1] < 1e-16 && drifts[2] < 1e-16);
}

#[test]
fn level_set_lambda_matches_products() {
    let caps = Caps::new(2, 8, 2).unwrap();
    let mus: Vec<_> = (0..2).map(|i| mu(caps, i)).collect();
    let mut cfg = FlowConfig::standard(2);
    cfg.scales = vec![1.0];
    let rep = drift_report(&h0(caps, &alpha()), &mus, &cfg).unwrap();
    let z = &cfg.z0;
    assert_eq!(rep.samples[0].lambda_star, vec![z[0] * z[2], z[1] * z[3]]);
    cfg.lambda = LambdaChoice::Fixed(vec![c(0.0); 2]);
    let rep = drift_report(&h0(caps, &alpha()), &mus, &cfg).unwrap();
    assert_eq!(rep.samples[0].lambda_star, vec![c(0.0); 2]);
}
