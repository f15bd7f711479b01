//! Derivations `v = Σ a_i ∂_{t_i} + {F, −}` and their Lie-series exponentials.

use alloc::vec::Vec;

use crate::monomial::Var;
use crate::series::{Caps, TruncatedSeries};
use crate::{Error, Result, C64};

/// A derivation in split form: a t-shift with coefficients depending on
/// `(t, λ)` only, and a Hamiltonian generator.
#[derive(Clone, Debug, PartialEq)]
pub struct Derivation {
    shift: Vec<TruncatedSeries>,
    generator: TruncatedSeries,
}

impl Derivation {
    /// Fails if some shift coefficient involves `q` or `p`.
    pub fn new(shift: Vec<TruncatedSeries>, generator: TruncatedSeries) -> Result<Self> {
        let caps = generator.caps();
        if shift.len() != caps.n {
            return Err(Error::InvalidArgument(alloc::format!(
                "expected {} shift coefficients, got {}",
                caps.n,
                shift.len()
            )));
        }
        for a in &shift {
            if a.caps() != caps {
                return Err(Error::CapMismatch);
            }
            if a.iter().any(|(m, _)| !m.is_param_only()) {
                return Err(Error::InvalidArgument(
                    "shift coefficients must depend on t and λ only".into(),
                ));
            }
        }
        Ok(Derivation { shift, generator })
    }

    pub fn zero(caps: Caps) -> Self {
        Derivation {
            shift: (0..caps.n).map(|_| TruncatedSeries::zero(caps)).collect(),
            generator: TruncatedSeries::zero(caps),
        }
    }

    /// The Hamiltonian derivation `{F, −}`.
    pub fn hamiltonian(generator: TruncatedSeries) -> Self {
        let caps = generator.caps();
        Derivation {
            shift: (0..caps.n).map(|_| TruncatedSeries::zero(caps)).collect(),
            generator,
        }
    }

    pub fn caps(&self) -> Caps {
        self.generator.caps()
    }

    pub fn shift(&self) -> &[TruncatedSeries] {
        &self.shift
    }

    pub fn generator(&self) -> &TruncatedSeries {
        &self.generator
    }

    pub fn is_zero(&self) -> bool {
        self.generator.is_zero() && self.shift.iter().all(|a| a.is_zero())
    }

    pub fn neg(&self) -> Self {
        self.scale(C64::new(-1.0, 0.0))
    }

    pub fn scale(&self, factor: C64) -> Self {
        Derivation {
            shift: self.shift.iter().map(|a| a.scale(factor)).collect(),
            generator: self.generator.scale(factor),
        }
    }

    pub fn add(&self, other: &Derivation) -> Self {
        Derivation {
            shift: self
                .shift
                .iter()
                .zip(&other.shift)
                .map(|(a, b)| a + b)
                .collect(),
            generator: &self.generator + &other.generator,
        }
    }

    pub fn with_caps(&self, caps: Caps) -> Self {
        Derivation {
            shift: self.shift.iter().map(|a| a.with_caps(caps)).collect(),
            generator: self.generator.with_caps(caps),
        }
    }

    /// `min(min_i order(a_i p_i q_i) − 2, order(F) − 2)`, or `None` for the
    /// zero derivation.
    pub fn order(&self) -> Option<i64> {
        let shift = self
            .shift
            .iter()
            .filter_map(|a| a.order())
            .map(|o| o as i64)
            .min();
        let gen = self.generator.order().map(|o| o as i64 - 2);
        match (shift, gen) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    /// `v(f) = Σ a_i ∂_{t_i} f + {F, f}`.
    pub fn apply(&self, f: &TruncatedSeries) -> TruncatedSeries {
        let mut out = self.generator.poisson(f);
        for (i, a) in self.shift.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let dt = f.derivative(Var::t(i));
            if !dt.is_zero() {
                out += &(a * &dt);
            }
        }
        out
    }

    /// The Lie series `e^v f = Σ_m v^m f / m!`.
    ///
    /// Terminates within the degree cap when the order is at least one. For
    /// lower orders the series is still attempted, since nilpotent cases such
    /// as `{q², −}` acting on linear functions terminate anyway, and an error
    /// is returned if it has not vanished after `deg_cap + t_cap + 2` terms.
    pub fn exp(&self, f: &TruncatedSeries) -> Result<TruncatedSeries> {
        if self.is_zero() {
            return Ok(f.clone());
        }
        let caps = f.caps();
        let order = self.order().unwrap_or(i64::MAX);
        let budget = (caps.deg_cap + caps.t_cap + 2) as usize;
        let mut sum = f.clone();
        let mut term = f.clone();
        for m in 1..=budget {
            term = self.apply(&term).scale(C64::new(1.0 / m as f64, 0.0));
            if term.is_zero() {
                return Ok(sum);
            }
            sum += &term;
        }
        debug_assert!(order < 1, "order ≥ 1 derivation failed to terminate");
        Err(Error::Nonterminating { order })
    }
}

/// An ordered list of derivations `w_0, …, w_K` representing the
/// automorphism `e^{w_K} ∘ … ∘ e^{w_0}`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TransformChain {
    steps: Vec<Derivation>,
}

impl TransformChain {
    pub fn new() -> Self {
        TransformChain { steps: Vec::new() }
    }

    pub fn push(&mut self, w: Derivation) {
        self.steps.push(w);
    }

    pub fn steps(&self) -> &[Derivation] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `e^{w_K}(… e^{w_0}(f))`.
    pub fn forward(&self, f: &TruncatedSeries) -> Result<TruncatedSeries> {
        let mut g = f.clone();
        for w in &self.steps {
            g = w.with_caps(g.caps()).exp(&g)?;
        }
        Ok(g)
    }

    /// Inverse of [`TransformChain::forward`]: `e^{−w_0}(… e^{−w_K}(f))`.
    pub fn backward(&self, f: &TruncatedSeries) -> Result<TruncatedSeries> {
        let mut g = f.clone();
        for w in self.steps.iter().rev() {
            g = w.with_caps(g.caps()).neg().exp(&g)?;
        }
        Ok(g)
    }

    /// Largest imaginary coefficient over all steps.
    pub fn max_imag(&self) -> f64 {
        self.steps
            .iter()
            .map(|w| {
                w.shift
                    .iter()
                    .map(|a| a.max_imag())
                    .fold(w.generator.max_imag(), f64::max)
            })
            .fold(0.0, f64::max)
    }
}
