//! Small-divisor solvers for the homological equation.
//!
//! With `H_0 = Σ (α_i + t_i) p_i q_i` every monomial is an eigenvector of the
//! bracket: `{F, H_0} = g ⋆ F` where `g` multiplies `q^i p^j` by
//! `(α + t, i − j)`. Inverting `g` is the basic operation. [`solve_b`]
//! divides by the t-free part `(α, i − j)` (and negates), while
//! [`exact_formal_solve`] inverts the full multiplier as a geometric series
//! in `t`.
//!
//! Sign convention: the Hamiltonian generator `F` acts as `{F, −}`, so the
//! homological operator at `H_0` is `F ↦ {F, H_0} = g ⋆ F`, and the
//! quasi-inverse returns `F = g^{−1} ⋆ (target)`. In the frozen form this is
//! `F = −solve_b(target)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::derivation::Derivation;
use crate::monomial::{Monomial, Var, MAX_DIM};
use crate::series::{mu, Caps, TruncatedSeries};
use crate::splitting::{pi_g, GPart};
use crate::{Error, Result, C64};

/// Divisors below this modulus are reported as resonances.
pub const RESONANCE_TOL: f64 = 1e-13;

/// Coefficientwise product over the common support.
pub fn hadamard(f: &TruncatedSeries, g: &TruncatedSeries) -> TruncatedSeries {
    assert_eq!(f.caps(), g.caps());
    let terms: Vec<(Monomial, C64)> = f
        .iter()
        .filter_map(|(m, v)| {
            let w = g.coeff(m);
            (w.norm() > 0.0).then(|| (*m, v * w))
        })
        .collect();
    TruncatedSeries::from_terms(f.caps(), terms)
}

/// The difference vector `i − j` of `q^i p^j`.
pub fn difference(m: &Monomial, n: usize) -> [i64; MAX_DIM] {
    m.qp_difference(n)
}

/// `(α, k)` with the same summation order as
/// [`crate::arithmetic::pairing`], so that `|divisor(α, k)|` equals the
/// pairing bit for bit.
pub fn divisor(alpha: &[C64], k: &[i64]) -> C64 {
    let mut re = 0.0;
    let mut im = 0.0;
    for (a, &x) in alpha.iter().zip(k) {
        let x = x as f64;
        re += a.re * x;
        im += a.im * x;
    }
    C64::new(re, im)
}

/// Reciprocal of a divisor, failing on resonance.
fn reciprocal(alpha: &[C64], k: &[i64]) -> Result<C64> {
    let d = divisor(alpha, k);
    let modulus = d.norm();
    if !(modulus >= RESONANCE_TOL) {
        return Err(Error::Resonance {
            witness: k.to_vec(),
            divisor: modulus,
        });
    }
    if d.im == 0.0 {
        Ok(C64::new(1.0 / d.re, 0.0))
    } else {
        Ok(d.conj() * (1.0 / (modulus * modulus)))
    }
}

/// `‖k‖_∞`.
pub fn sup_norm(k: &[i64]) -> u64 {
    k.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0)
}

/// Whether `q^i p^j` lies in the level-`level` window `‖i − j‖_∞ ≤ 2^level`.
pub fn in_window(m: &Monomial, n: usize, level: u32) -> bool {
    sup_norm(&difference(m, n)[..n]) <= 1u64 << level
}

fn check_window(f: &TruncatedSeries, level: Option<u32>) -> Result<()> {
    let Some(level) = level else { return Ok(()) };
    let n = f.n();
    for (m, _) in f.iter() {
        if !in_window(m, n, level) {
            return Err(Error::OutsideWindow {
                witness: difference(m, n)[..n].to_vec(),
                level,
            });
        }
    }
    Ok(())
}

/// Divides each coefficient of `q^i p^j` by `(α, i − j)` and negates.
///
/// The division multiplies by a rounded reciprocal, which keeps the output
/// monotone in the divisor: for real `α`, every coefficient modulus is at
/// most that of `f` scaled by `1/σ` whenever all divisors are at least `σ`.
pub fn solve_b(f: &TruncatedSeries, alpha: &[C64], level: Option<u32>) -> Result<TruncatedSeries> {
    check_window(f, level)?;
    let n = f.n();
    let mut terms = Vec::with_capacity(f.len());
    for (m, v) in f.iter() {
        let k = difference(m, n);
        let inv = reciprocal(alpha, &k[..n])?;
        terms.push((*m, -(v * inv)));
    }
    Ok(TruncatedSeries::from_terms(f.caps(), terms))
}

/// `(t, k) = Σ k_i t_i` as a series.
fn t_pairing(caps: Caps, k: &[i64]) -> TruncatedSeries {
    let terms = k
        .iter()
        .enumerate()
        .filter(|(_, &x)| x != 0)
        .map(|(i, &x)| (Monomial::var(Var::t(i)), C64::new(x as f64, 0.0)));
    TruncatedSeries::from_terms(caps, terms)
}

/// `g ⋆ f`: multiplies `q^i p^j` by `(α + t, i − j)`, truncating in `t`.
pub fn apply_g(f: &TruncatedSeries, alpha: &[C64]) -> TruncatedSeries {
    let caps = f.caps();
    let n = caps.n;
    let mut out = TruncatedSeries::zero(caps);
    let mut by_diff: Vec<([i64; MAX_DIM], Vec<(Monomial, C64)>)> = Vec::new();
    for (m, v) in f.iter() {
        let k = difference(m, n);
        match by_diff.iter_mut().find(|(d, _)| *d == k) {
            Some((_, terms)) => terms.push((*m, *v)),
            None => by_diff.push((k, vec![(*m, *v)])),
        }
    }
    for (k, terms) in by_diff {
        let part = TruncatedSeries::from_terms(caps, terms);
        let d = divisor(alpha, &k[..n]);
        out += &part.scale(d);
        let tk = t_pairing(caps, &k[..n]);
        if !tk.is_zero() {
            out += &(&part * &tk);
        }
    }
    out
}

/// Inverts `g ⋆` exactly modulo `t^{t_cap + 1}`:
/// `1/(α + t, k) = Σ_r (−1)^r (t, k)^r / (α, k)^{r+1}`.
pub fn exact_formal_solve(f: &TruncatedSeries, alpha: &[C64], level: Option<u32>) -> Result<TruncatedSeries> {
    check_window(f, level)?;
    let caps = f.caps();
    let n = caps.n;
    let mut groups: Vec<([i64; MAX_DIM], Vec<(Monomial, C64)>)> = Vec::new();
    for (m, v) in f.iter() {
        let k = difference(m, n);
        match groups.iter_mut().find(|(d, _)| *d == k) {
            Some((_, terms)) => terms.push((*m, *v)),
            None => groups.push((k, vec![(*m, *v)])),
        }
    }
    let mut out = TruncatedSeries::zero(caps);
    for (k, terms) in groups {
        let inv = reciprocal(alpha, &k[..n])?;
        let tk = t_pairing(caps, &k[..n]).scale(-inv);
        // term_r = part · inv · (−(t,k) inv)^r
        let mut term = TruncatedSeries::from_terms(caps, terms).scale(inv);
        for _ in 0..=caps.t_cap {
            if term.is_zero() {
                break;
            }
            out += &term;
            if tk.is_zero() {
                break;
            }
            term = &term * &tk;
        }
    }
    Ok(out)
}

/// How the divisor `(α + t, i − j)` is inverted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InverseMode {
    /// Divide by `(α, i − j)` only, leaving the `t` part in the residual.
    Frozen,
    /// Invert the full multiplier as a geometric series in `t`.
    TSeries,
}

fn invert(f: &TruncatedSeries, alpha: &[C64], level: Option<u32>, mode: InverseMode) -> Result<TruncatedSeries> {
    match mode {
        InverseMode::Frozen => Ok(-solve_b(f, alpha, level)?),
        InverseMode::TSeries => exact_formal_solve(f, alpha, level),
    }
}

/// `ρ(f)(v) = π_G(v(f))`.
pub fn rho(f_ham: &TruncatedSeries, v: &Derivation) -> GPart {
    pi_g(&v.apply(f_ham))
}

/// Quasi-inverse of `ρ(f_ham)` by block elimination in the order `B`, `A`,
/// `C`:
///
/// * `F_B = g^{−1} ⋆ b`;
/// * shift `= a − π_A({F_B, f_ham})`;
/// * `F_C = Σ μ_k · g^{−1} ⋆ (c_k − π_C({F_B, f_ham})_k)`.
///
/// At `f_ham = H_0` the `A` correction vanishes and this is the lower
/// triangular inverse with identity on `A`. The `C` block never feeds the
/// `B` output.
pub fn quasi_inverse(
    f_ham: &TruncatedSeries,
    target: &GPart,
    alpha: &[C64],
    level: Option<u32>,
    mode: InverseMode,
) -> Result<Derivation> {
    let caps = f_ham.caps();
    let n = caps.n;
    let f_b = invert(&target.b, alpha, level, mode)?;
    let induced = if f_b.is_zero() {
        GPart::zero(caps)
    } else {
        pi_g(&f_b.poisson(f_ham))
    };
    let shift: Vec<TruncatedSeries> = (0..n).map(|k| &target.a[k] - &induced.a[k]).collect();
    let mut generator = f_b;
    for k in 0..n {
        let rhs = &target.c[k] - &induced.c[k];
        if rhs.is_zero() {
            continue;
        }
        let x = invert(&rhs, alpha, level, mode)?;
        generator += &(&x * &mu(caps, k));
    }
    Derivation::new(shift, generator)
}

/// `ρ(f_ham)(j(target)) − target`.
pub fn residual(
    f_ham: &TruncatedSeries,
    target: &GPart,
    alpha: &[C64],
    level: Option<u32>,
    mode: InverseMode,
) -> Result<GPart> {
    let v = quasi_inverse(f_ham, target, alpha, level, mode)?;
    Ok(rho(f_ham, &v).sub(target))
}

/// Splits a `G` part into the monomials inside the level window and the rest.
pub fn partition_window(g: &GPart, level: u32) -> (GPart, GPart) {
    let n = g.caps().n;
    let inside = g.map(|x| x.filter(|m, _| in_window(m, n, level)));
    let outside = g.map(|x| x.filter(|m, _| !in_window(m, n, level)));
    (inside, outside)
}

/// Divisor table for audit: every difference vector `k` with
/// `1 ≤ ‖k‖_∞ ≤ 2^level` in the half space, with `(α, k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DivisorTable {
    pub level: u32,
    pub entries: Vec<(Vec<i64>, C64)>,
}

impl DivisorTable {
    pub fn new(alpha: &[C64], level: u32) -> Result<Self> {
        let n = alpha.len();
        if n == 0 || n > MAX_DIM {
            return Err(Error::Dimension(n));
        }
        if level > 10 {
            return Err(Error::EnumerationBudget { k: level, kmax: 10, n });
        }
        let r = 1i64 << level;
        let side = (2 * r + 1) as usize;
        let total = side.pow(n as u32);
        let mut entries = Vec::new();
        for idx in 0..total {
            let mut k = vec![0i64; n];
            let mut rest = idx;
            for x in k.iter_mut() {
                *x = (rest % side) as i64 - r;
                rest /= side;
            }
            // keep the half space: first nonzero coordinate positive
            match k.iter().find(|&&x| x != 0) {
                Some(&x) if x > 0 => {}
                _ => continue,
            }
            let d = divisor(alpha, &k);
            if d.norm() < RESONANCE_TOL {
                return Err(Error::Resonance {
                    witness: k,
                    divisor: d.norm(),
                });
            }
            entries.push((k, d));
        }
        Ok(DivisorTable { level, entries })
    }

    /// Smallest divisor modulus in the table.
    pub fn min_modulus(&self) -> f64 {
        self.entries.iter().map(|(_, d)| d.norm()).fold(f64::INFINITY, f64::min)
    }
}
