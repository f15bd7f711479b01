#![allow(dead_code)]

use proptest::prelude::*;
use singkam_core::{Caps, Monomial, TruncatedSeries, C64};

pub fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Exponent blocks `(t, l, q, p)` for `n = 2` with weighted degree `≤ deg`.
pub fn arb_monomial(deg: u32, params: bool) -> impl Strategy<Value = Monomial> {
    let pmax = if params { 2u32 } else { 0 };
    (
        prop::array::uniform2(0..=pmax),
        prop::array::uniform2(0..=pmax / 2),
        prop::array::uniform2(0..=deg),
        prop::array::uniform2(0..=deg),
    )
        .prop_map(|(t, l, q, p)| Monomial::from_blocks(&t, &l, &q, &p))
        .prop_filter("degree", move |m| m.degree() <= deg)
}

/// Small-integer complex coefficients: every product and sum the tests build
/// stays exact in `f64`.
pub fn arb_int_coeff() -> impl Strategy<Value = C64> {
    (-4i32..=4, -2i32..=2)
        .prop_filter("nonzero", |(a, b)| *a != 0 || *b != 0)
        .prop_map(|(a, b)| C64::new(a as f64, b as f64))
}

pub fn arb_coeff() -> impl Strategy<Value = C64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| C64::new(a, b))
}

pub fn arb_series_with(
    caps: Caps,
    deg: u32,
    terms: usize,
    params: bool,
    coeff: impl Strategy<Value = C64>,
) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec((arb_monomial(deg, params), coeff), 1..=terms)
        .prop_map(move |t| TruncatedSeries::from_terms(caps, t))
}

pub fn arb_int_series(caps: Caps, deg: u32, terms: usize) -> impl Strategy<Value = TruncatedSeries> {
    arb_series_with(caps, deg, terms, true, arb_int_coeff())
}

pub fn arb_series(caps: Caps, deg: u32, terms: usize) -> impl Strategy<Value = TruncatedSeries> {
    arb_series_with(caps, deg, terms, true, arb_coeff())
}

pub fn max_rel(d: &TruncatedSeries, scale: f64) -> f64 {
    if scale == 0.0 {
        d.max_abs_coeff()
    } else {
        d.max_abs_coeff() / scale
    }
}
