//! Normalization drivers.
//!
//! [`formal_normalize`] removes the `A ⊕ B ⊕ C` part window by window, with
//! window `k` covering weighted degrees `(2^k, 2^{k+1}]`. [`kam_iterate`] runs
//! the recursion
//!
//! ```text
//! u_n     = j(a_n)(π_G β_n)
//! α_n     = π_F(β_n − u_n(a_n))
//! a_{n+1} = a_n + α_n
//! β_{n+1} = e^{−u_n}(a_n + β_n) − a_{n+1}
//! ```
//!
//! starting from `a_0 = H_0`, `β_0 = H − H_0`, and logs norms on a shrinking
//! sequence of radii. Both return the chain of derivations `w_n` with
//! `e^{w_K} ∘ … ∘ e^{w_0} (H)` in normal form.

use alloc::vec::Vec;

use crate::arithmetic::LowerSeq;
use crate::derivation::{Derivation, TransformChain};
use crate::homological::{exact_formal_solve, partition_window, quasi_inverse, InverseMode};
use crate::monomial::Var;
use crate::norms::{coeff_sup, l1_majorant};
use crate::series::{h0, mu, Caps, TruncatedSeries};
use crate::splitting::{pi_g, split, GPart};
use crate::{Error, Result, C64};

/// Default tolerance for the final residual.
pub const CERTIFICATE_TOL: f64 = 1e-10;

/// Pruning inside the drivers runs at `zero_tol · GUARD`. Genuine
/// coefficients of late windows are far below `zero_tol`, and dropping them
/// mid-computation leaves residuals at the `zero_tol` level.
pub const GUARD: f64 = 1e-16;

fn working_caps(caps: Caps) -> Caps {
    Caps {
        zero_tol: caps.zero_tol * GUARD,
        ..caps
    }
}

/// Checks that `h − H_0` has weighted order at least 3.
pub fn check_perturbation(h: &TruncatedSeries, alpha: &[C64]) -> Result<()> {
    if alpha.len() != h.n() {
        return Err(Error::NotPerturbation(alloc::format!(
            "α has {} entries but n = {}",
            alpha.len(),
            h.n()
        )));
    }
    let rest = h - &h0(h.caps(), alpha);
    match rest.order() {
        Some(o) if o < 3 => Err(Error::NotPerturbation(alloc::format!(
            "H − H0 has a term of weighted degree {o}"
        ))),
        _ => Ok(()),
    }
}

/// `s_{k+1} = s_k − s_0 2^{−(k+2)}`, so the limit is `s_0/2`.
pub fn radius_schedule(s0: f64, steps: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(steps);
    let mut s = s0;
    for k in 0..steps {
        out.push(s);
        s -= s0 * 2f64.powi(-(k as i32 + 2));
    }
    out
}

/// Per-step record shared by both drivers.
#[derive(Clone, Debug, PartialEq)]
pub struct StepRecord {
    pub step: u32,
    /// Weighted-degree window (formal mode) or `(0, deg_cap)` (analytic mode).
    pub window: (u32, u32),
    /// Divisor level: `‖i − j‖_∞ ≤ 2^level` (analytic mode).
    pub level: Option<u32>,
    pub radius: f64,
    /// Norms of the `A ⊕ B ⊕ C` residual before the step.
    pub r_coeff_sup: f64,
    pub r_l1: f64,
    /// `l1` norm at the radius of the generator plus shift coefficients.
    pub u_norm: f64,
    /// Lower-sequence value used for the tameness fit.
    pub lower: Option<f64>,
    pub inner_iterations: usize,
    /// Order of the nonzero `A ⊕ B ⊕ C` part after the step.
    pub order_after: Option<u32>,
    /// Largest `A ⊕ B ⊕ C` coefficient after the step.
    pub max_after: f64,
}

/// Outcome of a normalization run.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizationCertificate {
    pub steps: u32,
    /// Degree bound `2^{K+1}` the residual is certified to.
    pub certified_degree: u32,
    /// Max `|coefficient|` over `A ⊕ B ⊕ C` monomials of degree ≤ `certified_degree`.
    pub residual: f64,
    /// Smallest degree of a nonzero `A ⊕ B ⊕ C` term of the final series.
    pub residual_order: Option<u32>,
    pub passed: bool,
    /// `π_F` of the final series: functions of `(t, λ)` plus `I²`.
    pub normal_form: TruncatedSeries,
    /// The transformed Hamiltonian.
    pub transformed: TruncatedSeries,
    pub input_real: bool,
    pub chain_max_imag: f64,
    pub reality_preserved: bool,
    /// `log r_{k+1} / log r_k` for consecutive nonzero residual norms.
    pub decay_exponents: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormalizationRun {
    pub chain: TransformChain,
    pub certificate: NormalizationCertificate,
    pub records: Vec<StepRecord>,
}

fn shift_target(g: &GPart) -> Vec<TruncatedSeries> {
    g.a.clone()
}

/// Linear solve at `H_0`: shift from `A`, generator `g^{−1} ⋆` on `B` and `C`.
fn solve_at_h0(g: &GPart, alpha: &[C64]) -> Result<Derivation> {
    let caps = g.caps();
    let mut generator = exact_formal_solve(&g.b, alpha, None)?;
    for k in 0..caps.n {
        if g.c[k].is_zero() {
            continue;
        }
        let x = exact_formal_solve(&g.c[k], alpha, None)?;
        generator += &(&x * &mu(caps, k));
    }
    Derivation::new(shift_target(g), generator)
}

fn u_norm(v: &Derivation, s: f64) -> f64 {
    v.shift()
        .iter()
        .map(|a| l1_majorant(a, s))
        .sum::<f64>()
        + l1_majorant(v.generator(), s)
}

fn decay_exponents(r: &[f64]) -> Vec<f64> {
    r.windows(2)
        .filter(|w| w[0] > 0.0 && w[1] > 0.0 && w[0] < 1.0)
        .map(|w| w[1].ln() / w[0].ln())
        .collect()
}

fn finish(
    h: &TruncatedSeries,
    alpha: &[C64],
    transformed: TruncatedSeries,
    chain: &TransformChain,
    steps: u32,
    certified_degree: u32,
    r_log: &[f64],
) -> NormalizationCertificate {
    let parts = split(&transformed);
    let g = pi_g(&(&transformed - &h0(h.caps(), alpha)));
    let residual = g.max_abs_up_to(certified_degree);
    let input_real = h.is_real(0.0);
    let chain_max_imag = chain.max_imag();
    NormalizationCertificate {
        steps,
        certified_degree,
        residual,
        residual_order: g.order(),
        passed: residual <= CERTIFICATE_TOL,
        normal_form: parts.pi_f(),
        transformed,
        input_real,
        chain_max_imag,
        reality_preserved: !input_real || chain_max_imag <= 1e-13,
        decay_exponents: decay_exponents(r_log),
    }
}

/// Formal order-doubling normalization with `K` windows.
///
/// Window `k` solves `π_G(e^{−v} H) = 0` in degrees `≤ 2^{k+1}` by repeated
/// linear corrections `v ← v + L^{−1}(residual)`, where `L^{−1}` is the
/// exact inverse of the homological operator at `H_0` (identity on `A`, the
/// t-series inverse of `g ⋆` on `B` and `C`). The linear error of each
/// correction has strictly higher degree, so the loop terminates once the
/// window residual sits at the rounding floor.
pub fn formal_normalize(h: &TruncatedSeries, alpha: &[C64], k_steps: u32, s0: f64) -> Result<NormalizationRun> {
    let caps = h.caps();
    check_perturbation(h, alpha)?;
    let needed = 1u32 << (k_steps + 1);
    if needed > caps.deg_cap {
        return Err(Error::CapOverflow {
            needed,
            deg_cap: caps.deg_cap,
        });
    }
    let radii = radius_schedule(s0, k_steps as usize + 1);
    let mut chain = TransformChain::new();
    let mut records = Vec::new();
    let work = working_caps(caps);
    let mut current = h.with_caps(work);
    let mut r_log = Vec::new();
    let h_zero = h0(work, alpha);
    for k in 1..=k_steps {
        let (lo, hi) = ((1u32 << k) + 1, 1u32 << (k + 1));
        let s = radii[k as usize - 1];
        let before = pi_g(&(&current - &h_zero)).recombine();
        let (r_cs, r_l1) = (coeff_sup(&before, s), l1_majorant(&before, s));
        r_log.push(r_cs);

        let low = work.with_deg_cap(hi);
        let h_low = current.with_caps(low);
        let mut v = Derivation::zero(low);
        let mut inner = 0;
        // each correction raises the lowest degree of the window error by at
        // least one, so the window empties after at most hi - lo + 1 rounds
        while inner < (hi - lo + 3) as usize {
            let moved = v.neg().exp(&h_low)?;
            let g = pi_g(&moved).window(3, hi);
            if g.is_zero() {
                break;
            }
            v = v.add(&solve_at_h0(&g, alpha)?);
            inner += 1;
        }
        let v = v.with_caps(work);
        current = v.neg().exp(&current)?;
        let w = v.neg();
        let after = pi_g(&(&current - &h_zero));
        records.push(StepRecord {
            step: k,
            window: (lo, hi),
            level: None,
            radius: s,
            r_coeff_sup: r_cs,
            r_l1,
            u_norm: u_norm(&w, s),
            lower: None,
            inner_iterations: inner,
            order_after: after.order_above(caps.zero_tol),
            max_after: after.max_abs_coeff(),
        });
        chain.push(w);
    }
    let s_last = radii[k_steps as usize];
    r_log.push(coeff_sup(&pi_g(&(&current - &h_zero)).recombine(), s_last));
    let certificate = finish(h, alpha, current.with_caps(caps), &chain, k_steps, needed, &r_log);
    Ok(NormalizationRun {
        chain,
        certificate,
        records,
    })
}

/// Settings for the analytic iteration.
#[derive(Clone, Debug, PartialEq)]
pub struct KamOptions {
    pub k_steps: u32,
    pub lower: LowerSeq,
    pub s0: f64,
    /// Divisor inversion; the default inverts `(α + t, i − j)` exactly in `t`.
    pub inverse: InverseMode,
}

/// Result of [`kam_iterate`].
#[derive(Clone, Debug, PartialEq)]
pub struct KamRun {
    pub run: NormalizationRun,
    /// The accumulated normal part `a_{K+1}`.
    pub normal_part: TruncatedSeries,
    /// The last error term `β_{K+1}`.
    pub error: TruncatedSeries,
    pub radii: Vec<f64>,
    /// Smallest `B` with `N(u_n) ≤ B a_n^{−1} r_n` over all steps.
    pub fitted_b: f64,
}

/// Analytic recursion with steps `n = 0..=K`. Step `n` inverts divisors with
/// `‖i − j‖_∞ ≤ 2^{n+1}`; monomials outside that window stay in the error
/// term for later steps.
pub fn kam_iterate(h: &TruncatedSeries, alpha: &[C64], opts: &KamOptions) -> Result<KamRun> {
    let caps = h.caps();
    check_perturbation(h, alpha)?;
    let k_steps = opts.k_steps;
    let needed = 1u32 << (k_steps + 1);
    if needed > caps.deg_cap {
        return Err(Error::CapOverflow {
            needed,
            deg_cap: caps.deg_cap,
        });
    }
    opts.lower.validate(k_steps + 1)?;
    let radii = radius_schedule(opts.s0, k_steps as usize + 2);
    let work = working_caps(caps);
    let mut a = h0(work, alpha);
    let mut beta = &h.with_caps(work) - &a;
    let mut chain = TransformChain::new();
    let mut records = Vec::new();
    let mut r_log = Vec::new();
    let mut fitted_b: f64 = 0.0;
    for n in 0..=k_steps {
        let s = radii[n as usize];
        let level = n + 1;
        let g_all = pi_g(&beta);
        let r_series = g_all.recombine();
        let (r_cs, r_l1) = (coeff_sup(&r_series, s), l1_majorant(&r_series, s));
        if let Some(&prev) = r_log.last() {
            if r_cs > prev {
                return Err(Error::Divergence {
                    step: n as usize,
                    before: prev,
                    after: r_cs,
                });
            }
        }
        r_log.push(r_cs);
        let (inside, _outside) = partition_window(&g_all, level);
        let u = quasi_inverse(&a, &inside, alpha, Some(level), opts.inverse)?;
        let alpha_n = split(&(&beta - &u.apply(&a))).pi_f();
        let a_next = &a + &alpha_n;
        let moved = u.neg().exp(&(&a + &beta))?;
        beta = &moved - &a_next;
        a = a_next;

        let lower = opts.lower.value(level);
        let un = u_norm(&u, s);
        if r_l1 > 0.0 {
            fitted_b = fitted_b.max(un * lower / r_l1);
        }
        let after = pi_g(&beta);
        records.push(StepRecord {
            step: n,
            window: (0, caps.deg_cap),
            level: Some(level),
            radius: s,
            r_coeff_sup: r_cs,
            r_l1,
            u_norm: un,
            lower: Some(lower),
            inner_iterations: 1,
            order_after: after.order_above(caps.zero_tol),
            max_after: after.max_abs_coeff(),
        });
        chain.push(u.neg());
    }
    let s_last = radii[k_steps as usize + 1];
    r_log.push(coeff_sup(&pi_g(&beta).recombine(), s_last));
    let transformed = (&a + &beta).with_caps(caps);
    let certificate = finish(h, alpha, transformed, &chain, k_steps, needed, &r_log);
    Ok(KamRun {
        run: NormalizationRun {
            chain,
            certificate,
            records,
        },
        normal_part: a.with_caps(caps),
        error: beta.with_caps(caps),
        radii,
        fitted_b,
    })
}

/// Reduces `f` modulo the generators `K_m`, each of the form
/// `−λ_m + (terms without λ_m at degree 2) + higher order`, by repeatedly
/// replacing `λ_m` using `K_m`. Returns the `λ`-free remainder.
pub fn reduce_modulo(f: &TruncatedSeries, generators: &[TruncatedSeries]) -> TruncatedSeries {
    let caps = f.caps();
    let n = caps.n;
    let lambda_coeff: Vec<C64> = (0..n)
        .map(|m| {
            generators
                .get(m)
                .map(|g| g.coeff(&crate::Monomial::var(Var::lambda(m))))
                .unwrap_or_default()
        })
        .collect();
    let mut rem = f.clone();
    // monomials are processed by (degree ascending, λ-count descending)
    loop {
        let pick = rem
            .iter()
            .filter_map(|(m, v)| {
                let lam = (0..n).find(|&j| m.exp(Var::lambda(j)) > 0 && lambda_coeff[j].norm() > 0.5)?;
                let count: u32 = (0..n).map(|j| m.exp(Var::lambda(j))).sum();
                Some((m.degree(), core::cmp::Reverse(count), *m, *v, lam))
            })
            .min_by(|x, y| (x.0, x.1, x.2).cmp(&(y.0, y.1, y.2)));
        let Some((_, _, m, v, j)) = pick else { break };
        let cof = m.div(crate::Monomial::var(Var::lambda(j)));
        let factor = -(v / lambda_coeff[j]);
        let mut update = generators[j].mul_monomial(cof, factor);
        // the eliminated term cancels exactly
        update = update.filter(|k, _| *k != m);
        rem = (&rem + &update).filter(|k, _| *k != m);
    }
    rem
}

/// Report of [`involutivity_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct InvolutivityReport {
    /// `(a, b, max |coefficient| of the remainder, remainder order)`.
    pub pairs: Vec<(usize, usize, f64, Option<u32>)>,
    pub max_remainder: f64,
}

/// Reduces every bracket `{K_a, K_b}`, `a < b`, modulo the generators.
pub fn involutivity_check(generators: &[TruncatedSeries]) -> InvolutivityReport {
    let mut pairs = Vec::new();
    let mut worst: f64 = 0.0;
    for a in 0..generators.len() {
        for b in a + 1..generators.len() {
            let bracket = generators[a].poisson(&generators[b]);
            let rem = reduce_modulo(&bracket, generators);
            let size = rem.max_abs_coeff();
            worst = worst.max(size);
            pairs.push((a, b, size, rem.order()));
        }
    }
    InvolutivityReport {
        pairs,
        max_remainder: worst,
    }
}

/// The transformed integrals `K_m = chain.backward(μ_m)`.
pub fn transformed_integrals(chain: &TransformChain, caps: Caps) -> Result<Vec<TruncatedSeries>> {
    (0..caps.n).map(|m| chain.backward(&mu(caps, m))).collect()
}
