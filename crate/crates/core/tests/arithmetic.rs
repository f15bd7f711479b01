use proptest::prelude::*;
use singkam_core::arithmetic::{
    bruno_sum, convergents, golden, in_class, profile, sigma_cf, sigma_profile, IndexNorm, LowerSeq,
};
use singkam_core::C64;

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn phi() -> f64 {
    (1.0 + 5f64.sqrt()) / 2.0
}

fn agree(alpha: [C64; 2], kmax: u32) {
    let prof = sigma_profile(&alpha, kmax, IndexNorm::Sup).unwrap();
    for (k, entry) in prof.iter().enumerate() {
        let cf = sigma_cf(alpha, k as u32).unwrap();
        assert_eq!(entry.value, cf.value, "α = {alpha:?}, k = {k}");
    }
}

#[test]
fn golden_profile_matches_continued_fraction() {
    agree([c(1.0), c(phi())], 12);
}

#[test]
fn golden_values() {
    let prof = sigma_profile(&[c(1.0), c(phi())], 4, IndexNorm::Sup).unwrap();
    let g = 1.0 / golden();
    let expected = [g, g * g, g.powi(3), g.powi(5), g.powi(6)];
    for (e, x) in prof.iter().zip(expected) {
        assert!((e.value - x).abs() < 1e-14, "{} vs {x}", e.value);
    }
}

#[test]
fn quadratic_irrationals_match() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20);
    let mut done = 0;
    while done < 20 {
        let d: i64 = rng.gen_range(2..60);
        let r = (d as f64).sqrt();
        if r.fract() == 0.0 {
            continue;
        }
        let a: i64 = rng.gen_range(-6..=6);
        let den: i64 = rng.gen_range(1..=7);
        let x = (a as f64 + r) / den as f64;
        if x == 0.0 {
            continue;
        }
        agree([c(1.0), c(x)], 12);
        done += 1;
    }
}

#[test]
fn convergents_of_golden_are_fibonacci() {
    let cv = convergents(phi(), 100);
    let fib = [(1, 0), (1, 1), (2, 1), (3, 2), (5, 3), (8, 5), (13, 8), (21, 13), (34, 21), (55, 34), (89, 55)];
    assert_eq!(cv, fib);
}

#[test]
fn bruno_geometric_closed_form() {
    let seq = LowerSeq::Geometric { c: 0.1, rho: 0.5 };
    let rep = bruno_sum(&seq, 50).unwrap();
    let closed = rep.closed_form.unwrap();
    assert!((rep.sum - closed).abs() <= 1e-12, "{} vs {closed}", rep.sum);
    assert!(rep.converged);
}

#[test]
fn class_membership() {
    let alpha = [c(1.0), c(phi())];
    let good = in_class(&alpha, &LowerSeq::Geometric { c: 0.5, rho: 0.25 }, 8, IndexNorm::Sup).unwrap();
    assert!(good.member);
    assert_eq!(good.first_fail, None);
    let bad = in_class(&alpha, &LowerSeq::List(vec![0.9]), 8, IndexNorm::Sup).unwrap();
    assert!(!bad.member);
    assert_eq!(bad.first_fail, Some(0));
}

#[test]
fn rational_frequency_resonates() {
    let prof = profile(&[c(1.0), c(0.5)], &LowerSeq::Geometric { c: 0.1, rho: 0.5 }, 3, IndexNorm::Sup).unwrap();
    assert_eq!(prof.sigma[0].value, 0.5);
    assert_eq!(prof.sigma[1].value, 0.0);
    assert!(!prof.member);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn sigma_is_nonincreasing(x in 0.01f64..10.0, y in -3.0f64..3.0) {
        let prof = sigma_profile(&[c(x), c(y)], 6, IndexNorm::Sup).unwrap();
        for w in prof.windows(2) {
            prop_assert!(w[1].value <= w[0].value);
        }
    }

    #[test]
    fn bruno_closed_form_any_geometric(cc in 0.01f64..1.0, rho in 0.05f64..1.0) {
        let rep = bruno_sum(&LowerSeq::Geometric { c: cc, rho }, 60).unwrap();
        prop_assert!((rep.sum - rep.closed_form.unwrap()).abs() <= 1e-12 * (1.0 + rep.sum.abs()));
    }
}
