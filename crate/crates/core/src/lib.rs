//! Truncated power-series engine for normalizing perturbed Hamiltonians
//! `H = Σ (α_i + t_i) p_i q_i + o(2)` toward the 2n-gon normal form.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is a pure
//! function of its inputs: series arithmetic with the symplectic bracket
//! ([`series`], [`derivation`]), polydisc norms and their inequalities
//! ([`norms`]), small-divisor arithmetic ([`arithmetic`]), the normal-form
//! splitting ([`splitting`]), the homological solvers ([`homological`]), the
//! two normalization drivers ([`engine`]) and the flow-based drift checks
//! ([`flow`]).
//!
//! Variables come in four blocks of `n` each: the deformation parameters
//! `t`, the Casimirs `λ`, and the canonical pairs `q`, `p`. The grading used
//! for all order bookkeeping gives `q` and `p` weight one, `λ` weight two and
//! `t` weight zero.

#![no_std]

extern crate alloc;

pub mod arithmetic;
pub mod derivation;
pub mod engine;
mod error;
pub mod flow;
pub mod homological;
pub mod monomial;
pub mod norms;
pub mod series;
pub mod splitting;

pub use error::{Error, Result};

pub use derivation::{Derivation, TransformChain};
pub use monomial::{Monomial, Var, VarKind, MAX_DIM};
pub use series::{Caps, TruncatedSeries};

/// Complex coefficient type used throughout.
pub type C64 = num_complex::Complex64;
