//! Sparse truncated power series in `(t, λ, q, p)`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::fmt::Write as _;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use hashbrown::HashMap;
use num_traits::Zero;

use crate::monomial::{Monomial, Var, VarKind, MAX_DIM};
use crate::{Error, Result, C64};

/// Largest degree or t-degree cap. Keeps every exponent field at most 120
/// so the packed sum of two admissible monomials cannot overflow.
pub const MAX_CAP: u32 = 120;

/// Default pruning threshold.
pub const DEFAULT_ZERO_TOL: f64 = 1e-14;

/// Default t-degree cap.
pub const DEFAULT_T_CAP: u32 = 4;

/// Dimension and truncation data shared by every series in a computation.
#[derive(Clone, Copy, Debug)]
pub struct Caps {
    pub n: usize,
    pub deg_cap: u32,
    pub t_cap: u32,
    pub zero_tol: f64,
}

impl PartialEq for Caps {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.deg_cap == other.deg_cap
            && self.t_cap == other.t_cap
            && self.zero_tol.to_bits() == other.zero_tol.to_bits()
    }
}

impl Caps {
    pub fn new(n: usize, deg_cap: u32, t_cap: u32) -> Result<Self> {
        Self::with_tol(n, deg_cap, t_cap, DEFAULT_ZERO_TOL)
    }

    pub fn with_tol(n: usize, deg_cap: u32, t_cap: u32, zero_tol: f64) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::Dimension(n));
        }
        if deg_cap > MAX_CAP || t_cap > MAX_CAP {
            return Err(Error::InvalidCaps(format!(
                "deg_cap = {deg_cap}, t_cap = {t_cap}; both must be at most {MAX_CAP}"
            )));
        }
        if !(zero_tol >= 0.0 && zero_tol.is_finite()) {
            return Err(Error::InvalidCaps(format!("zero_tol = {zero_tol}")));
        }
        Ok(Caps {
            n,
            deg_cap,
            t_cap,
            zero_tol,
        })
    }

    /// Same caps with a different degree cap.
    pub fn with_deg_cap(self, deg_cap: u32) -> Self {
        assert!(deg_cap <= MAX_CAP);
        Caps { deg_cap, ..self }
    }

    #[inline]
    pub fn admits(&self, m: &Monomial) -> bool {
        m.degree() <= self.deg_cap && m.t_degree() <= self.t_cap
    }

    /// Whether a monomial may appear in a series of these caps: inside the
    /// caps and only using the first `n` variables of each block.
    pub fn admits_fully(&self, m: &Monomial) -> bool {
        self.admits(m) && m.fits_dim(self.n)
    }
}

/// Finite map from monomials to complex coefficients, kept sorted in graded
/// lexicographic order, free of near-zero entries and within its caps.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries {
    caps: Caps,
    terms: Vec<(Monomial, C64)>,
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

impl TruncatedSeries {
    pub fn zero(caps: Caps) -> Self {
        TruncatedSeries {
            caps,
            terms: Vec::new(),
        }
    }

    pub fn constant(caps: Caps, value: C64) -> Self {
        Self::monomial(caps, Monomial::ONE, value)
    }

    pub fn one(caps: Caps) -> Self {
        Self::constant(caps, c(1.0))
    }

    /// `value · m`, or zero if `m` falls outside the caps.
    pub fn monomial(caps: Caps, m: Monomial, value: C64) -> Self {
        let mut s = Self::zero(caps);
        if caps.admits(&m) && value.norm() > caps.zero_tol {
            debug_assert!(m.fits_dim(caps.n));
            s.terms.push((m, value));
        }
        s
    }

    pub fn var(caps: Caps, v: Var) -> Self {
        assert!(v.index < caps.n, "variable {v} outside dimension {}", caps.n);
        Self::monomial(caps, Monomial::var(v), c(1.0))
    }

    /// Builds a series from arbitrary terms: duplicates are summed, terms
    /// outside the caps dropped, small coefficients pruned.
    pub fn from_terms<I>(caps: Caps, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, C64)>,
    {
        let mut acc: HashMap<Monomial, C64> = HashMap::new();
        for (m, v) in terms {
            if caps.admits(&m) {
                debug_assert!(m.fits_dim(caps.n));
                *acc.entry(m).or_insert_with(C64::zero) += v;
            }
        }
        Self::from_map(caps, acc)
    }

    fn from_map(caps: Caps, acc: HashMap<Monomial, C64>) -> Self {
        let mut terms: Vec<(Monomial, C64)> = acc
            .into_iter()
            .filter(|(_, v)| v.norm() > caps.zero_tol)
            .collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        TruncatedSeries { caps, terms }
    }

    /// Builds from terms that are already sorted, unique and admissible.
    fn from_sorted(caps: Caps, terms: Vec<(Monomial, C64)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 < w[1].0));
        let terms = terms
            .into_iter()
            .filter(|(_, v)| v.norm() > caps.zero_tol)
            .collect();
        TruncatedSeries { caps, terms }
    }

    #[inline]
    pub fn caps(&self) -> Caps {
        self.caps
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.caps.n
    }

    #[inline]
    pub fn terms(&self) -> &[(Monomial, C64)] {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &C64)> {
        self.terms.iter().map(|(m, v)| (m, v))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> C64 {
        match self.terms.binary_search_by(|(k, _)| k.cmp(m)) {
            Ok(i) => self.terms[i].1,
            Err(_) => C64::zero(),
        }
    }

    /// Smallest weighted degree present, `None` for the zero series.
    pub fn order(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.degree())
    }

    /// Largest weighted degree present.
    pub fn max_degree(&self) -> Option<u32> {
        self.terms.last().map(|(m, _)| m.degree())
    }

    /// Largest t-degree present.
    pub fn max_t_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.t_degree()).max()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.iter().map(|(_, v)| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_imag(&self) -> f64 {
        self.terms.iter().map(|(_, v)| v.im.abs()).fold(0.0, f64::max)
    }

    /// Recasts to new caps, dropping terms that no longer fit. The dimension
    /// must match.
    pub fn with_caps(&self, caps: Caps) -> Self {
        assert_eq!(caps.n, self.caps.n, "dimension mismatch");
        let terms = self
            .terms
            .iter()
            .filter(|(m, v)| caps.admits(m) && v.norm() > caps.zero_tol)
            .copied()
            .collect();
        TruncatedSeries { caps, terms }
    }

    /// Keeps the terms selected by `keep`.
    pub fn filter<F: FnMut(&Monomial, &C64) -> bool>(&self, mut keep: F) -> Self {
        TruncatedSeries {
            caps: self.caps,
            terms: self
                .terms
                .iter()
                .filter(|(m, v)| keep(m, v))
                .copied()
                .collect(),
        }
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs<F: FnMut(&Monomial, C64) -> C64>(&self, mut f: F) -> Self {
        let terms = self.terms.iter().map(|&(m, v)| (m, f(&m, v))).collect();
        Self::from_sorted(self.caps, terms)
    }

    /// Terms of weighted degree exactly `d`.
    pub fn graded_component(&self, d: u32) -> Self {
        self.order_window(d, d)
    }

    /// Terms with `lo ≤ weighted degree ≤ hi`.
    pub fn order_window(&self, lo: u32, hi: u32) -> Self {
        let start = self.terms.partition_point(|(m, _)| m.degree() < lo);
        let end = self.terms.partition_point(|(m, _)| m.degree() <= hi);
        TruncatedSeries {
            caps: self.caps,
            terms: if start < end {
                self.terms[start..end].to_vec()
            } else {
                Vec::new()
            },
        }
    }

    /// Terms of t-degree at most `tmax`.
    pub fn t_truncate(&self, tmax: u32) -> Self {
        self.filter(|m, _| m.t_degree() <= tmax)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_caps(other)?;
        Ok(self.combine(other, c(1.0)))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_caps(other)?;
        Ok(self.combine(other, c(-1.0)))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_caps(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn checked_poisson(&self, other: &Self) -> Result<Self> {
        self.check_caps(other)?;
        Ok(self.poisson_unchecked(other))
    }

    fn check_caps(&self, other: &Self) -> Result<()> {
        if self.caps == other.caps {
            Ok(())
        } else {
            Err(Error::CapMismatch)
        }
    }

    fn assert_caps(&self, other: &Self) {
        assert!(
            self.caps == other.caps,
            "series caps do not match: {:?} vs {:?}",
            self.caps,
            other.caps
        );
    }

    /// `self + factor · other` by merging the sorted term lists.
    fn combine(&self, other: &Self, factor: C64) -> Self {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                core::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                core::cmp::Ordering::Greater => {
                    out.push((b[j].0, b[j].1 * factor));
                    j += 1;
                }
                core::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1 * factor));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend(b[j..].iter().map(|&(m, v)| (m, v * factor)));
        Self::from_sorted(self.caps, out)
    }

    /// `self + factor · other`.
    pub fn add_scaled(&self, other: &Self, factor: C64) -> Self {
        self.assert_caps(other);
        self.combine(other, factor)
    }

    pub fn scale(&self, factor: C64) -> Self {
        if factor.is_zero() {
            return Self::zero(self.caps);
        }
        Self::from_sorted(
            self.caps,
            self.terms.iter().map(|&(m, v)| (m, v * factor)).collect(),
        )
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.caps);
        }
        let caps = self.caps;
        let mut acc: HashMap<Monomial, C64> = HashMap::new();
        for &(ma, va) in &self.terms {
            let room = match caps.deg_cap.checked_sub(ma.degree()) {
                Some(r) => r,
                None => break,
            };
            for &(mb, vb) in &other.terms {
                if mb.degree() > room {
                    break;
                }
                if ma.t_degree() + mb.t_degree() > caps.t_cap {
                    continue;
                }
                *acc.entry(ma.mul(mb)).or_insert_with(C64::zero) += va * vb;
            }
        }
        Self::from_map(caps, acc)
    }

    /// The bracket `{f, g} = Σ ∂_{q_i} f ∂_{p_i} g − ∂_{q_i} g ∂_{p_i} f`.
    pub fn poisson(&self, other: &Self) -> Self {
        self.assert_caps(other);
        self.poisson_unchecked(other)
    }

    fn poisson_unchecked(&self, other: &Self) -> Self {
        let caps = self.caps;
        let n = caps.n;
        let mut acc: HashMap<Monomial, C64> = HashMap::new();
        let a_terms: Vec<&(Monomial, C64)> =
            self.terms.iter().filter(|(m, _)| !m.is_param_only()).collect();
        let b_terms: Vec<&(Monomial, C64)> =
            other.terms.iter().filter(|(m, _)| !m.is_param_only()).collect();
        for &&(ma, va) in &a_terms {
            let room = caps.deg_cap + 2;
            if ma.degree() > room {
                break;
            }
            for &&(mb, vb) in &b_terms {
                if ma.degree() + mb.degree() > room {
                    break;
                }
                if ma.t_degree() + mb.t_degree() > caps.t_cap {
                    continue;
                }
                let prod = ma.mul(mb);
                let vv = va * vb;
                for i in 0..n {
                    let (qa, pa) = (ma.exp(Var::q(i)) as i64, ma.exp(Var::p(i)) as i64);
                    let (qb, pb) = (mb.exp(Var::q(i)) as i64, mb.exp(Var::p(i)) as i64);
                    let w = qa * pb - qb * pa;
                    if w == 0 {
                        continue;
                    }
                    // w ≠ 0 forces q_i and p_i to occur in the product
                    let m = prod
                        .div(Monomial::var(Var::q(i)))
                        .div(Monomial::var(Var::p(i)));
                    *acc.entry(m).or_insert_with(C64::zero) += vv * (w as f64);
                }
            }
        }
        Self::from_map(caps, acc)
    }

    /// Partial derivative with respect to `v`.
    pub fn derivative(&self, v: Var) -> Self {
        let terms: Vec<(Monomial, C64)> = self
            .terms
            .iter()
            .filter_map(|&(m, val)| m.lower(v).map(|(m2, e)| (m2, val * (e as f64))))
            .collect();
        Self::from_terms(self.caps, terms)
    }

    /// Multiplies by the monomial `m`, dropping whatever leaves the caps.
    pub fn mul_monomial(&self, m: Monomial, value: C64) -> Self {
        let caps = self.caps;
        let mut terms: Vec<(Monomial, C64)> = self
            .terms
            .iter()
            .map(|&(k, v)| (k.mul(m), v * value))
            .filter(|(k, _)| caps.admits(k))
            .collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        Self::from_sorted(caps, terms)
    }

    /// Coefficientwise complex conjugation.
    pub fn conjugate(&self) -> Self {
        TruncatedSeries {
            caps: self.caps,
            terms: self.terms.iter().map(|&(m, v)| (m, v.conj())).collect(),
        }
    }

    /// True when every imaginary part has modulus at most `tol`.
    pub fn is_real(&self, tol: f64) -> bool {
        self.terms.iter().all(|(_, v)| v.im.abs() <= tol)
    }

    /// Evaluates at a point. Each slice has length `n`; products use
    /// precomputed power tables and the sum is compensated.
    pub fn eval(&self, t: &[C64], lambda: &[C64], q: &[C64], p: &[C64]) -> C64 {
        let n = self.caps.n;
        assert!(t.len() == n && lambda.len() == n && q.len() == n && p.len() == n);
        let tables = PowerTables::new(self, [t, lambda, q, p]);
        let mut sum = KahanSum::default();
        for (m, v) in &self.terms {
            sum.add(*v * tables.monomial(m));
        }
        sum.value()
    }

    /// Serializes one term per line as `re im : t.. | l.. | q.. | p..`.
    pub fn to_text(&self) -> String {
        let n = self.caps.n;
        let mut out = String::new();
        for (m, v) in &self.terms {
            let _ = write!(out, "{:?} {:?} :", v.re, v.im);
            for (b, kind) in VarKind::ALL.into_iter().enumerate() {
                if b > 0 {
                    out.push_str(" |");
                }
                for i in 0..n {
                    let _ = write!(out, " {}", m.exp(Var::new(kind, i)));
                }
            }
            out.push('\n');
        }
        out
    }

    /// Parses the line format of [`TruncatedSeries::to_text`]. Blank lines
    /// and lines starting with `#` are ignored.
    pub fn from_text(caps: Caps, text: &str) -> Result<Self> {
        let n = caps.n;
        let mut terms = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |what: &str| {
                Error::InvalidArgument(format!("line {}: {what}", lineno + 1))
            };
            let (coef, exps) = line.split_once(':').ok_or_else(|| bad("missing ':'"))?;
            let mut parts = coef.split_whitespace();
            let re: f64 = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| bad("bad real part"))?;
            let im: f64 = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| bad("bad imaginary part"))?;
            if parts.next().is_some() {
                return Err(bad("trailing coefficient data"));
            }
            let blocks: Vec<&str> = exps.split('|').collect();
            if blocks.len() != 4 {
                return Err(bad("expected four exponent blocks"));
            }
            let mut m = Monomial::ONE;
            for (kind, block) in VarKind::ALL.into_iter().zip(blocks) {
                let es: Vec<&str> = block.split_whitespace().collect();
                if es.len() != n {
                    return Err(bad("exponent block has wrong length"));
                }
                for (i, e) in es.iter().enumerate() {
                    let e: u32 = e.parse().map_err(|_| bad("bad exponent"))?;
                    if e > MAX_CAP {
                        return Err(Error::ExponentOverflow(format!(
                            "line {}: exponent {e}",
                            lineno + 1
                        )));
                    }
                    if e > 0 {
                        m = m.mul(Monomial::var_pow(Var::new(kind, i), e));
                    }
                }
            }
            if !caps.admits(&m) {
                return Err(Error::ExponentOverflow(format!(
                    "line {}: monomial {m} exceeds the caps",
                    lineno + 1
                )));
            }
            terms.push((m, C64::new(re, im)));
        }
        Ok(Self::from_terms(caps, terms))
    }
}

/// Precomputed powers of each coordinate for repeated monomial evaluation.
pub(crate) struct PowerTables {
    // powers[slot][e]
    powers: Vec<Vec<C64>>,
}

impl PowerTables {
    pub(crate) fn new(f: &TruncatedSeries, point: [&[C64]; 4]) -> Self {
        let n = f.caps.n;
        let mut max_exp = [0u32; 4 * MAX_DIM];
        for (m, _) in &f.terms {
            for (v, e) in m.factors() {
                let s = v.slot();
                max_exp[s] = max_exp[s].max(e);
            }
        }
        let mut powers = Vec::with_capacity(4 * MAX_DIM);
        for slot in 0..4 * MAX_DIM {
            let v = Var::from_slot(slot);
            let mut row = Vec::with_capacity(max_exp[slot] as usize + 1);
            row.push(c(1.0));
            if v.index < n {
                let x = point[slot / MAX_DIM][v.index];
                for e in 1..=max_exp[slot] as usize {
                    row.push(row[e - 1] * x);
                }
            }
            powers.push(row);
        }
        PowerTables { powers }
    }

    pub(crate) fn monomial(&self, m: &Monomial) -> C64 {
        let mut acc = c(1.0);
        for (v, e) in m.factors() {
            acc *= self.powers[v.slot()][e as usize];
        }
        acc
    }
}

/// Neumaier-compensated complex summation.
#[derive(Default, Clone, Copy)]
pub(crate) struct KahanSum {
    re: (f64, f64),
    im: (f64, f64),
}

fn neumaier(acc: &mut (f64, f64), x: f64) {
    let (s, comp) = *acc;
    let t = s + x;
    let comp = if s.abs() >= x.abs() {
        comp + ((s - t) + x)
    } else {
        comp + ((x - t) + s)
    };
    *acc = (t, comp);
}

impl KahanSum {
    pub(crate) fn add(&mut self, z: C64) {
        neumaier(&mut self.re, z.re);
        neumaier(&mut self.im, z.im);
    }

    pub(crate) fn value(&self) -> C64 {
        C64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (m, v)) in self.terms.iter().enumerate() {
            if idx > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({:?}{:+?}i)", v.re, v.im)?;
            if *m != Monomial::ONE {
                write!(f, "*{m}")?;
            }
        }
        Ok(())
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&TruncatedSeries> for &TruncatedSeries {
            type Output = TruncatedSeries;
            fn $method(self, rhs: &TruncatedSeries) -> TruncatedSeries {
                self.assert_caps(rhs);
                #[allow(clippy::redundant_closure_call)]
                ($body)(self, rhs)
            }
        }
        impl $trait<TruncatedSeries> for TruncatedSeries {
            type Output = TruncatedSeries;
            fn $method(self, rhs: TruncatedSeries) -> TruncatedSeries {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&TruncatedSeries> for TruncatedSeries {
            type Output = TruncatedSeries;
            fn $method(self, rhs: &TruncatedSeries) -> TruncatedSeries {
                (&self).$method(rhs)
            }
        }
        impl $trait<TruncatedSeries> for &TruncatedSeries {
            type Output = TruncatedSeries;
            fn $method(self, rhs: TruncatedSeries) -> TruncatedSeries {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, |a: &TruncatedSeries, b: &TruncatedSeries| a
    .combine(b, c(1.0)));
binop!(Sub, sub, |a: &TruncatedSeries, b: &TruncatedSeries| a
    .combine(b, c(-1.0)));
binop!(Mul, mul, |a: &TruncatedSeries, b: &TruncatedSeries| a
    .mul_unchecked(b));

impl AddAssign<&TruncatedSeries> for TruncatedSeries {
    fn add_assign(&mut self, rhs: &TruncatedSeries) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&TruncatedSeries> for TruncatedSeries {
    fn sub_assign(&mut self, rhs: &TruncatedSeries) {
        *self = &*self - rhs;
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        self.scale(c(-1.0))
    }
}

impl Neg for TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        -&self
    }
}

impl Mul<C64> for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: C64) -> TruncatedSeries {
        self.scale(rhs)
    }
}

impl Mul<f64> for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: f64) -> TruncatedSeries {
        self.scale(c(rhs))
    }
}

impl Mul<C64> for TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: C64) -> TruncatedSeries {
        self.scale(rhs)
    }
}

impl Mul<f64> for TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: f64) -> TruncatedSeries {
        self.scale(c(rhs))
    }
}

/// `Σ_i (α_i + t_i) p_i q_i`.
pub fn h0(caps: Caps, alpha: &[C64]) -> TruncatedSeries {
    assert_eq!(alpha.len(), caps.n);
    let mut terms = Vec::new();
    for (i, &a) in alpha.iter().enumerate() {
        let pq = Monomial::var(Var::q(i)).mul(Monomial::var(Var::p(i)));
        terms.push((pq, a));
        terms.push((pq.mul(Monomial::var(Var::t(i))), c(1.0)));
    }
    TruncatedSeries::from_terms(caps, terms)
}

/// `μ_i = p_i q_i − λ_i`.
pub fn mu(caps: Caps, i: usize) -> TruncatedSeries {
    let pq = Monomial::var(Var::q(i)).mul(Monomial::var(Var::p(i)));
    TruncatedSeries::from_terms(
        caps,
        [(pq, c(1.0)), (Monomial::var(Var::lambda(i)), c(-1.0))],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn caps2() -> Caps {
        Caps::new(2, 10, 2).unwrap()
    }

    fn v(caps: Caps, var: Var) -> TruncatedSeries {
        TruncatedSeries::var(caps, var)
    }

    #[test]
    fn add_examples() {
        let caps = caps2();
        let q1 = v(caps, Var::q(0));
        assert_eq!(&q1 + &TruncatedSeries::zero(caps), q1);
        assert!((&q1 - &q1).is_zero());
        let q1p1 = &q1 * &v(caps, Var::p(0));
        let five = &(&q1p1 * 2.0) + &(&q1p1 * 3.0);
        assert_eq!(five, &q1p1 * 5.0);
    }

    #[test]
    fn mul_examples() {
        let caps = caps2();
        let q1 = v(caps, Var::q(0));
        let l1 = v(caps, Var::lambda(0));
        let lhs = &(&q1 + &l1) * &(&q1 - &l1);
        let rhs = &(&q1 * &q1) - &(&l1 * &l1);
        assert_eq!(lhs, rhs);
        assert_eq!(&TruncatedSeries::one(caps) * &q1, q1);
    }

    #[test]
    fn mul_drops_above_caps() {
        let caps = Caps::new(1, 3, 1).unwrap();
        let q = v(caps, Var::q(0));
        let t = v(caps, Var::t(0));
        let q2 = &q * &q;
        assert!((&q2 * &q2).is_zero());
        assert!((&t * &t).is_zero());
    }

    #[test]
    fn poisson_examples() {
        let caps = caps2();
        let q1 = v(caps, Var::q(0));
        let p1 = v(caps, Var::p(0));
        assert_eq!(q1.poisson(&p1), TruncatedSeries::one(caps));
        let pq = &p1 * &q1;
        for (a, b) in [(0u32, 3u32), (2, 1), (4, 4), (1, 0)] {
            let m = TruncatedSeries::monomial(
                caps,
                Monomial::from_blocks(&[], &[], &[a], &[b]),
                c(1.0),
            );
            let expect = &m * ((b as f64) - (a as f64));
            assert_eq!(pq.poisson(&m), expect);
        }
        let l1 = v(caps, Var::lambda(0));
        assert!(l1.poisson(&(&q1 * &p1)).is_zero());
    }

    #[test]
    fn windows() {
        let caps = caps2();
        let q1 = v(caps, Var::q(0));
        let p1 = v(caps, Var::p(0));
        let l1 = v(caps, Var::lambda(0));
        let f = &(&q1 * &p1) + &q1;
        assert_eq!(f.graded_component(2), &q1 * &p1);
        assert_eq!(l1.graded_component(2), l1);
        assert_eq!(f.order(), Some(1));
    }

    #[test]
    fn conj_and_real() {
        let caps = caps2();
        let q1 = v(caps, Var::q(0));
        let iq = q1.scale(C64::new(0.0, 1.0));
        assert_eq!(iq.conjugate(), iq.scale(c(-1.0)));
        let f = &(&q1 * &v(caps, Var::p(0))) + &(&v(caps, Var::lambda(0)) * 0.5);
        assert!(f.is_real(0.0));
        let g = &q1 + &q1.scale(C64::new(0.0, 1e-9));
        assert!(!g.is_real(1e-12));
    }

    #[test]
    fn text_round_trip() {
        let caps = caps2();
        let f = TruncatedSeries::from_terms(
            caps,
            [
                (Monomial::from_blocks(&[1, 0], &[0, 1], &[2, 0], &[0, 1]), C64::new(0.1, -3.5e-17)),
                (Monomial::ONE, C64::new(1.0 / 3.0, 0.0)),
            ],
        );
        let text = f.to_text();
        let g = TruncatedSeries::from_text(caps, &text).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn eval_matches_hand() {
        let caps = caps2();
        let f = h0(caps, &[c(1.0), c(2.0)]);
        let z = [c(0.5), c(-1.0)];
        let val = f.eval(&[c(0.1), c(0.0)], &[c(0.0); 2], &z, &[c(2.0), c(3.0)]);
        let expect = 1.1 * 0.5 * 2.0 + 2.0 * -1.0 * 3.0;
        assert!((val - c(expect)).norm() < 1e-15);
    }
}
