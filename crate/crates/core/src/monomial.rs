//! Packed exponent vectors over the `(t, λ, q, p)` variable blocks.
//!
//! A monomial stores sixteen 8-bit exponent fields in a `u128`: four slots for
//! each block, most significant first in the order `t, λ, q, p`. Comparing the
//! packed words therefore compares the exponent vectors lexicographically,
//! and adding two packed words adds the exponents as long as no field
//! overflows, which the caps in [`crate::Caps`] rule out.

use core::cmp::Ordering;
use core::fmt;

/// Largest supported dimension `n`.
pub const MAX_DIM: usize = 4;

const FIELD_BITS: u32 = 8;
const FIELD_MASK: u128 = 0xff;
const FIELDS: usize = 4 * MAX_DIM;

/// Largest exponent a single field can hold.
pub const MAX_EXPONENT: u32 = 255;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    T,
    Lambda,
    Q,
    P,
}

impl VarKind {
    pub const ALL: [VarKind; 4] = [VarKind::T, VarKind::Lambda, VarKind::Q, VarKind::P];

    /// Weight in the grading `deg t = 0, deg λ = 2, deg q = deg p = 1`.
    pub fn weight(self) -> u32 {
        match self {
            VarKind::T => 0,
            VarKind::Lambda => 2,
            VarKind::Q | VarKind::P => 1,
        }
    }

    fn block(self) -> usize {
        match self {
            VarKind::T => 0,
            VarKind::Lambda => 1,
            VarKind::Q => 2,
            VarKind::P => 3,
        }
    }

    pub fn prefix(self) -> &'static str {
        match self {
            VarKind::T => "t",
            VarKind::Lambda => "l",
            VarKind::Q => "q",
            VarKind::P => "p",
        }
    }
}

/// A single variable, e.g. `q_2` is `Var { kind: Q, index: 1 }`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub kind: VarKind,
    pub index: usize,
}

impl Var {
    pub fn new(kind: VarKind, index: usize) -> Self {
        debug_assert!(index < MAX_DIM);
        Var { kind, index }
    }
    pub fn t(i: usize) -> Self {
        Var::new(VarKind::T, i)
    }
    pub fn lambda(i: usize) -> Self {
        Var::new(VarKind::Lambda, i)
    }
    pub fn q(i: usize) -> Self {
        Var::new(VarKind::Q, i)
    }
    pub fn p(i: usize) -> Self {
        Var::new(VarKind::P, i)
    }

    /// Position in the packed layout, `0..16`.
    pub fn slot(self) -> usize {
        self.kind.block() * MAX_DIM + self.index
    }

    pub fn from_slot(slot: usize) -> Self {
        Var::new(VarKind::ALL[slot / MAX_DIM], slot % MAX_DIM)
    }

    /// All `4n` variables of dimension `n` in layout order.
    pub fn all(n: usize) -> impl Iterator<Item = Var> {
        VarKind::ALL
            .into_iter()
            .flat_map(move |kind| (0..n).map(move |i| Var::new(kind, i)))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind.prefix(), self.index + 1)
    }
}

#[inline]
fn shift(slot: usize) -> u32 {
    (FIELDS - 1 - slot) as u32 * FIELD_BITS
}

/// Exponent vector `t^a λ^b q^i p^j`.
///
/// Equality and hashing use the packed exponents; ordering is graded
/// lexicographic: weighted degree first, then `(a, b, i, j)` lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    key: u128,
    deg: u16,
    tdeg: u16,
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg
            .cmp(&other.deg)
            .then_with(|| self.key.cmp(&other.key))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Default for Monomial {
    fn default() -> Self {
        Self::ONE
    }
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        key: 0,
        deg: 0,
        tdeg: 0,
    };

    /// The variable `v` to the power `e`.
    pub fn var_pow(v: Var, e: u32) -> Self {
        assert!(e <= MAX_EXPONENT, "exponent {e} overflows a field");
        Monomial {
            key: (e as u128) << shift(v.slot()),
            deg: (v.kind.weight() * e) as u16,
            tdeg: if v.kind == VarKind::T { e as u16 } else { 0 },
        }
    }

    pub fn var(v: Var) -> Self {
        Self::var_pow(v, 1)
    }

    /// Builds a monomial from the four exponent blocks, each of length `n`.
    pub fn from_blocks(t: &[u32], lambda: &[u32], q: &[u32], p: &[u32]) -> Self {
        let mut m = Monomial::ONE;
        for (kind, block) in VarKind::ALL.into_iter().zip([t, lambda, q, p]) {
            assert!(block.len() <= MAX_DIM);
            for (i, &e) in block.iter().enumerate() {
                if e > 0 {
                    m = m.mul(Monomial::var_pow(Var::new(kind, i), e));
                }
            }
        }
        m
    }

    #[inline]
    pub fn key(&self) -> u128 {
        self.key
    }

    /// Weighted degree `|i| + |j| + 2|b|`.
    #[inline]
    pub fn degree(&self) -> u32 {
        self.deg as u32
    }

    /// Total exponent of the `t` block.
    #[inline]
    pub fn t_degree(&self) -> u32 {
        self.tdeg as u32
    }

    /// Sum of all exponents, every variable counted with weight one.
    pub fn plain_degree(&self) -> u32 {
        (0..FIELDS).map(|s| self.slot_exp(s)).sum()
    }

    #[inline]
    pub fn slot_exp(&self, slot: usize) -> u32 {
        ((self.key >> shift(slot)) & FIELD_MASK) as u32
    }

    #[inline]
    pub fn exp(&self, v: Var) -> u32 {
        self.slot_exp(v.slot())
    }

    pub fn block(&self, kind: VarKind, n: usize) -> [u32; MAX_DIM] {
        let mut out = [0; MAX_DIM];
        for (i, o) in out.iter_mut().enumerate().take(n) {
            *o = self.exp(Var::new(kind, i));
        }
        out
    }

    #[inline]
    pub fn mul(self, other: Monomial) -> Monomial {
        Monomial {
            key: self.key + other.key,
            deg: self.deg + other.deg,
            tdeg: self.tdeg + other.tdeg,
        }
    }

    /// Whether `other` divides `self`.
    pub fn divisible_by(&self, other: &Monomial) -> bool {
        (0..FIELDS).all(|s| self.slot_exp(s) >= other.slot_exp(s))
    }

    /// `self / other`, assuming divisibility.
    #[inline]
    pub fn div(self, other: Monomial) -> Monomial {
        debug_assert!(self.divisible_by(&other));
        Monomial {
            key: self.key - other.key,
            deg: self.deg - other.deg,
            tdeg: self.tdeg - other.tdeg,
        }
    }

    /// Lowers the exponent of `v` by one, returning the old exponent, or
    /// `None` when it is already zero.
    #[inline]
    pub fn lower(self, v: Var) -> Option<(Monomial, u32)> {
        let e = self.exp(v);
        if e == 0 {
            None
        } else {
            Some((self.div(Monomial::var(v)), e))
        }
    }

    /// The `q`/`p` part of the monomial (t and λ exponents cleared).
    #[inline]
    pub fn qp_part(self, n: usize) -> Monomial {
        let _ = n;
        let mask: u128 = (1u128 << (2 * MAX_DIM as u32 * FIELD_BITS)) - 1;
        let key = self.key & mask;
        let mut m = Monomial {
            key,
            deg: 0,
            tdeg: 0,
        };
        m.deg = (0..MAX_DIM)
            .map(|i| m.exp(Var::q(i)) + m.exp(Var::p(i)))
            .sum::<u32>() as u16;
        m
    }

    /// The `t`/`λ` part of the monomial.
    #[inline]
    pub fn param_part(self, n: usize) -> Monomial {
        self.div(self.qp_part(n))
    }

    /// True when the monomial has no `q` or `p` factor.
    pub fn is_param_only(&self) -> bool {
        let mask: u128 = (1u128 << (2 * MAX_DIM as u32 * FIELD_BITS)) - 1;
        self.key & mask == 0
    }

    /// True when the monomial only involves `t`.
    pub fn is_t_only(&self) -> bool {
        self.deg == 0
    }

    /// The difference vector `qExp - pExp`.
    pub fn qp_difference(&self, n: usize) -> [i64; MAX_DIM] {
        let mut out = [0i64; MAX_DIM];
        for (i, o) in out.iter_mut().enumerate().take(n) {
            *o = self.exp(Var::q(i)) as i64 - self.exp(Var::p(i)) as i64;
        }
        out
    }

    /// Iterates `(variable, exponent)` over nonzero exponents.
    pub fn factors(&self) -> impl Iterator<Item = (Var, u32)> + '_ {
        (0..FIELDS).filter_map(move |s| {
            let e = self.slot_exp(s);
            (e > 0).then(|| (Var::from_slot(s), e))
        })
    }

    /// Whether every exponent lives in the first `n` slots of each block.
    pub fn fits_dim(&self, n: usize) -> bool {
        self.factors().all(|(v, _)| v.index < n)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, e) in self.factors() {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrees_follow_grading() {
        let m = Monomial::from_blocks(&[3, 1], &[1, 0], &[2, 0], &[0, 1]);
        assert_eq!(m.degree(), 2 + 2 + 1);
        assert_eq!(m.t_degree(), 4);
        assert_eq!(m.plain_degree(), 3 + 1 + 1 + 2 + 1);
    }

    #[test]
    fn packed_arithmetic_matches_exponents() {
        let a = Monomial::from_blocks(&[1, 0], &[0, 2], &[1, 1], &[0, 3]);
        let b = Monomial::from_blocks(&[0, 1], &[1, 0], &[2, 0], &[1, 0]);
        let c = a.mul(b);
        assert_eq!(c, Monomial::from_blocks(&[1, 1], &[1, 2], &[3, 1], &[1, 3]));
        assert_eq!(c.div(b), a);
        assert!(c.divisible_by(&a));
        assert!(!a.divisible_by(&c));
    }

    #[test]
    fn graded_lex_order() {
        let q1 = Monomial::var(Var::q(0));
        let l1 = Monomial::var(Var::lambda(0));
        let t1 = Monomial::var(Var::t(0));
        let q1p1 = Monomial::from_blocks(&[], &[], &[1], &[1]);
        assert!(t1 < q1);
        assert!(q1 < q1p1);
        // same degree: λ block precedes q block lexicographically
        assert!(q1p1 < l1);
        let t1q1 = t1.mul(q1);
        assert!(q1 < t1q1);
    }

    #[test]
    fn qp_split() {
        let m = Monomial::from_blocks(&[2], &[1], &[3], &[1]);
        let qp = m.qp_part(1);
        assert_eq!(qp, Monomial::from_blocks(&[], &[], &[3], &[1]));
        assert_eq!(m.param_part(1), Monomial::from_blocks(&[2], &[1], &[], &[]));
        assert_eq!(m.qp_difference(1)[0], 2);
    }
}
