//! Decomposition `R ⊕ A ⊕ B ⊕ C ⊕ I²` relative to the ideal generated by
//! `μ_k = p_k q_k − λ_k`.
//!
//! Every monomial `t^a λ^b q^i p^j` is rewritten in the basis
//! `t^a λ^b μ^r q^{i'} p^{j'}` with `min(i'_k, j'_k) = 0` by factoring out
//! `(q_k p_k)^{m_k}`, `m = min(i, j)`, and expanding `(μ_k + λ_k)^{m_k}`.
//! Terms with no `μ` land in `R` (when `i' = j' = 0`) or `B`, terms with one
//! `μ_k` in `A` or `C`, and the rest in `I²`.

use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::monomial::{Monomial, Var, MAX_DIM};
use crate::series::{mu, Caps, TruncatedSeries};
use crate::C64;

/// The `A ⊕ B ⊕ C` part: coefficients of `μ_k` in `A`, the plain `B` part,
/// and the `B`-type cofactors of `μ_k` in `C`.
#[derive(Clone, Debug, PartialEq)]
pub struct GPart {
    pub a: Vec<TruncatedSeries>,
    pub b: TruncatedSeries,
    pub c: Vec<TruncatedSeries>,
}

impl GPart {
    pub fn zero(caps: Caps) -> Self {
        GPart {
            a: vec![TruncatedSeries::zero(caps); caps.n],
            b: TruncatedSeries::zero(caps),
            c: vec![TruncatedSeries::zero(caps); caps.n],
        }
    }

    pub fn caps(&self) -> Caps {
        self.b.caps()
    }

    pub fn is_zero(&self) -> bool {
        self.b.is_zero() && self.a.iter().all(|x| x.is_zero()) && self.c.iter().all(|x| x.is_zero())
    }

    /// `Σ a_k μ_k + b + Σ μ_k c_k` in the original variables.
    pub fn recombine(&self) -> TruncatedSeries {
        let caps = self.caps();
        let mut out = self.b.clone();
        for k in 0..caps.n {
            let m = mu(caps, k);
            if !self.a[k].is_zero() {
                out += &(&self.a[k] * &m);
            }
            if !self.c[k].is_zero() {
                out += &(&self.c[k] * &m);
            }
        }
        out
    }

    pub fn add(&self, other: &GPart) -> GPart {
        self.zip(other, |x, y| x + y)
    }

    pub fn sub(&self, other: &GPart) -> GPart {
        self.zip(other, |x, y| x - y)
    }

    fn zip<F: Fn(&TruncatedSeries, &TruncatedSeries) -> TruncatedSeries>(&self, other: &GPart, f: F) -> GPart {
        GPart {
            a: self.a.iter().zip(&other.a).map(|(x, y)| f(x, y)).collect(),
            b: f(&self.b, &other.b),
            c: self.c.iter().zip(&other.c).map(|(x, y)| f(x, y)).collect(),
        }
    }

    pub fn map<F: Fn(&TruncatedSeries) -> TruncatedSeries>(&self, f: F) -> GPart {
        GPart {
            a: self.a.iter().map(&f).collect(),
            b: f(&self.b),
            c: self.c.iter().map(&f).collect(),
        }
    }

    /// Keeps the terms whose contribution to the recombined series has
    /// weighted degree in `lo..=hi`.
    pub fn window(&self, lo: u32, hi: u32) -> GPart {
        GPart {
            a: self
                .a
                .iter()
                .map(|x| x.filter(|m, _| (lo..=hi).contains(&(m.degree() + 2))))
                .collect(),
            b: self.b.order_window(lo, hi),
            c: self
                .c
                .iter()
                .map(|x| x.filter(|m, _| (lo..=hi).contains(&(m.degree() + 2))))
                .collect(),
        }
    }

    /// Smallest weighted degree contributed to the recombined series.
    pub fn order(&self) -> Option<u32> {
        let shifted = self
            .a
            .iter()
            .chain(&self.c)
            .filter_map(|x| x.order().map(|o| o + 2));
        shifted.chain(self.b.order()).min()
    }

    /// Largest coefficient modulus over all components.
    pub fn max_abs_coeff(&self) -> f64 {
        self.a
            .iter()
            .chain(&self.c)
            .map(|x| x.max_abs_coeff())
            .fold(self.b.max_abs_coeff(), f64::max)
    }

    /// Largest coefficient modulus among terms contributing weighted degree
    /// at most `d`.
    pub fn max_abs_up_to(&self, d: u32) -> f64 {
        self.window(0, d).max_abs_coeff()
    }

    /// Smallest weighted degree carrying a coefficient above `tol`.
    pub fn order_above(&self, tol: f64) -> Option<u32> {
        let thresh = |x: &TruncatedSeries, shift: u32| {
            x.iter()
                .filter(|(_, v)| v.norm() > tol)
                .map(|(m, _)| m.degree() + shift)
                .min()
        };
        self.a
            .iter()
            .chain(&self.c)
            .filter_map(|x| thresh(x, 2))
            .chain(thresh(&self.b, 0))
            .min()
    }
}

/// Full decomposition of a series.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalFormSplit {
    /// Functions of `(t, λ)`.
    pub r: TruncatedSeries,
    pub g: GPart,
    /// Element of `I²`, in the original variables.
    pub i2: TruncatedSeries,
}

impl NormalFormSplit {
    pub fn recombine(&self) -> TruncatedSeries {
        &(&self.r + &self.g.recombine()) + &self.i2
    }

    /// `π_F = R + I²`.
    pub fn pi_f(&self) -> TruncatedSeries {
        &self.r + &self.i2
    }
}

/// Decomposes `q^i p^j` with `m = min(i, j)`, returning the `B`-type part
/// `q^{i−m} p^{j−m}` and `m`.
#[inline]
pub fn reduce_monomial(m: Monomial, n: usize) -> (Monomial, [u32; MAX_DIM]) {
    let mut common = [0u32; MAX_DIM];
    let mut reduced = m;
    for (k, ck) in common.iter_mut().enumerate().take(n) {
        let e = m.exp(Var::q(k)).min(m.exp(Var::p(k)));
        if e > 0 {
            *ck = e;
            let pq = Monomial::var_pow(Var::q(k), e).mul(Monomial::var_pow(Var::p(k), e));
            reduced = reduced.div(pq);
        }
    }
    (reduced, common)
}

fn lambda_pow(common: &[u32; MAX_DIM], n: usize) -> Monomial {
    let mut out = Monomial::ONE;
    for (k, &e) in common.iter().enumerate().take(n) {
        if e > 0 {
            out = out.mul(Monomial::var_pow(Var::lambda(k), e));
        }
    }
    out
}

fn qp_of(k: usize) -> Monomial {
    Monomial::var(Var::q(k)).mul(Monomial::var(Var::p(k)))
}

/// Splits `f` into its five components.
pub fn split(f: &TruncatedSeries) -> NormalFormSplit {
    let caps = f.caps();
    let n = caps.n;
    let mut r = Vec::new();
    let mut b = Vec::new();
    let mut a: Vec<Vec<(Monomial, C64)>> = vec![Vec::new(); n];
    let mut cc: Vec<Vec<(Monomial, C64)>> = vec![Vec::new(); n];
    let mut i2 = Vec::new();
    for &(m, v) in f.terms() {
        let (reduced, common) = reduce_monomial(m, n);
        let mcount: u32 = common.iter().sum();
        if mcount == 0 {
            if reduced.is_param_only() {
                r.push((m, v));
            } else {
                b.push((m, v));
            }
            continue;
        }
        // q^i p^j = λ^m · rest + Σ_k m_k λ^{m−e_k} μ_k · rest + I² remainder
        let lam = lambda_pow(&common, n);
        let zero_mu = reduced.mul(lam);
        let diagonal = reduced.is_param_only();
        if diagonal {
            r.push((zero_mu, v));
        } else {
            b.push((zero_mu, v));
        }
        i2.push((m, v));
        i2.push((zero_mu, -v));
        for k in 0..n {
            if common[k] == 0 {
                continue;
            }
            let cof = zero_mu.div(Monomial::var(Var::lambda(k)));
            let w = v * common[k] as f64;
            if diagonal {
                a[k].push((cof, w));
            } else {
                cc[k].push((cof, w));
            }
            // subtract the one-μ term from the remainder: w · cof · (q_k p_k − λ_k)
            i2.push((cof.mul(qp_of(k)), -w));
            i2.push((zero_mu, w));
        }
    }
    let build = |terms: Vec<(Monomial, C64)>| TruncatedSeries::from_terms(caps, terms);
    NormalFormSplit {
        r: build(r),
        g: GPart {
            a: a.into_iter().map(build).collect(),
            b: build(b),
            c: cc.into_iter().map(build).collect(),
        },
        i2: build(i2),
    }
}

/// `π_G(f)`.
pub fn pi_g(f: &TruncatedSeries) -> GPart {
    split(f).g
}

/// `π_F(f) = R + I²`.
pub fn pi_f(f: &TruncatedSeries) -> TruncatedSeries {
    split(f).pi_f()
}

/// One certificate entry: `coeff · μ^r · cofactor` with `|r| ≥ 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct I2Term {
    pub r: [u32; MAX_DIM],
    pub cofactor: Monomial,
    pub coeff: C64,
}

/// Writes the `I²` part of `f` explicitly as a combination of products
/// `μ^r` with `|r| ≥ 2`, by full binomial expansion.
pub fn i2_certificate(f: &TruncatedSeries) -> Vec<I2Term> {
    let caps = f.caps();
    let n = caps.n;
    let mut acc: HashMap<([u32; MAX_DIM], Monomial), C64> = HashMap::new();
    for &(m, v) in f.terms() {
        let (reduced, common) = reduce_monomial(m, n);
        if common.iter().sum::<u32>() < 2 {
            continue;
        }
        let mut r = [0u32; MAX_DIM];
        expand(&common, n, 0, &mut r, &mut |r, binom| {
            if r.iter().sum::<u32>() < 2 {
                return;
            }
            let mut lam = [0u32; MAX_DIM];
            for k in 0..n {
                lam[k] = common[k] - r[k];
            }
            let cof = reduced.mul(lambda_pow(&lam, n));
            *acc.entry((*r, cof)).or_insert(C64::new(0.0, 0.0)) += v * binom;
        });
    }
    let mut out: Vec<I2Term> = acc
        .into_iter()
        .filter(|(_, v)| v.norm() > caps.zero_tol)
        .map(|((r, cofactor), coeff)| I2Term { r, cofactor, coeff })
        .collect();
    out.sort_by(|x, y| x.r.cmp(&y.r).then(x.cofactor.cmp(&y.cofactor)));
    out
}

/// Expands a certificate back into the original variables.
pub fn expand_certificate(caps: Caps, cert: &[I2Term]) -> TruncatedSeries {
    let mut out = TruncatedSeries::zero(caps);
    for term in cert {
        let mut prod = TruncatedSeries::monomial(caps, term.cofactor, term.coeff);
        for k in 0..caps.n {
            for _ in 0..term.r[k] {
                prod = &prod * &mu(caps, k);
            }
        }
        out += &prod;
    }
    out
}

/// Visits every `r ≤ common` with the product of binomial coefficients.
fn expand(common: &[u32; MAX_DIM], n: usize, k: usize, r: &mut [u32; MAX_DIM], visit: &mut dyn FnMut(&[u32; MAX_DIM], f64)) {
    if k == n {
        let binom: f64 = (0..n).map(|j| binomial(common[j], r[j])).product();
        visit(r, binom);
        return;
    }
    for e in 0..=common[k] {
        r[k] = e;
        expand(common, n, k + 1, r, visit);
    }
    r[k] = 0;
}

fn binomial(n: u32, k: u32) -> f64 {
    let mut out = 1.0;
    for j in 0..k {
        out = out * (n - j) as f64 / (j + 1) as f64;
    }
    out
}
