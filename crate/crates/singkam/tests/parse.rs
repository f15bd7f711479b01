use proptest::prelude::*;
use singkam::parse::{parse_poly, print_poly};
use singkam::sampler::{Coeffs, Sampler};
use singkam_core::{Caps, Monomial, TruncatedSeries, C64};

fn bits(f: &TruncatedSeries) -> Vec<(Monomial, u64, u64)> {
    f.iter().map(|(m, v)| (*m, v.re.to_bits(), v.im.to_bits())).collect()
}

#[test]
fn thousand_random_series_round_trip() {
    let mut s = Sampler::new(1000);
    for k in 0..1000 {
        let n = 1 + k % 4;
        let caps = Caps::new(n, 10, 3).unwrap();
        let f = s.series(caps, 10, 15, true, Coeffs::Float);
        let text = print_poly(&f);
        let back = parse_poly(&text, caps, &[]).unwrap();
        assert_eq!(bits(&back), bits(&f), "{text}");
    }
}

fn arb_finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        any::<f64>().prop_filter("finite", |x| x.is_finite() && x.abs() >= 1e-14),
        -1e3f64..1e3,
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    // arbitrary bit patterns, including huge and tiny magnitudes
    #[test]
    fn any_coefficient_round_trips(re in arb_finite(), im in arb_finite(), q in 0u32..4, p in 0u32..4, t in 0u32..3) {
        let caps = Caps::new(2, 8, 2).unwrap();
        let m = Monomial::from_blocks(&[t, 0], &[0, 1], &[q, 0], &[0, p]);
        let f = TruncatedSeries::monomial(caps, m, C64::new(re, im));
        let back = parse_poly(&print_poly(&f), caps, &[]).unwrap();
        prop_assert_eq!(bits(&back), bits(&f));
    }

    #[test]
    fn sum_of_parsed_is_parsed_sum(seed in 0u64..1000) {
        let caps = Caps::new(2, 8, 2).unwrap();
        let mut s = Sampler::new(seed);
        let f = s.series(caps, 8, 6, true, Coeffs::Integer);
        let g = s.series(caps, 8, 6, true, Coeffs::Integer);
        let joined = format!("{} + ({})", print_poly(&f), print_poly(&g));
        prop_assert_eq!(parse_poly(&joined, caps, &[]).unwrap(), &f + &g);
    }

    #[test]
    fn product_respects_caps(a in 0u32..6, b in 0u32..6) {
        let caps = Caps::new(2, 8, 2).unwrap();
        let text = format!("q1^{a} * p2^{b}");
        let r = parse_poly(&text, caps, &[]);
        prop_assert_eq!(r.is_ok(), a + b <= 8);
    }
}

#[test]
fn zero_prints_and_parses() {
    let caps = Caps::new(2, 8, 2).unwrap();
    let z = TruncatedSeries::zero(caps);
    assert_eq!(parse_poly(&print_poly(&z), caps, &[]).unwrap(), z);
}
