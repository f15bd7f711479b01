use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension {0} is not supported (expected 1..=4)")]
    Dimension(usize),

    #[error("invalid caps: {0}")]
    InvalidCaps(String),

    #[error("series caps do not match")]
    CapMismatch,

    #[error("exponent overflow: {0}")]
    ExponentOverflow(String),

    #[error("derivation has order {order} and its Lie series does not terminate")]
    Nonterminating { order: i64 },

    #[error("invalid radius {0}: expected 0 < s < 1/sqrt(pi)")]
    InvalidRadius(f64),

    #[error("radii must satisfy s < t (got s = {s}, t = {t})")]
    RadiusOrder { s: f64, t: f64 },

    #[error("the zero series has no order")]
    ZeroSeries,

    #[error("point lies outside the polydisc of radius {radius}")]
    OutsideDomain { radius: f64 },

    #[error("series uses a variable outside the active set")]
    InactiveVariable,

    #[error("resonance: divisor {divisor:e} at difference vector {witness:?}")]
    Resonance { witness: Vec<i64>, divisor: f64 },

    #[error("monomial with difference vector {witness:?} lies outside the level-{level} window")]
    OutsideWindow { witness: Vec<i64>, level: u32 },

    #[error("level {k} exceeds the enumeration budget (max {kmax} for n = {n})")]
    EnumerationBudget { k: u32, kmax: u32, n: usize },

    #[error("degenerate frequency vector: {0}")]
    DegenerateFrequency(String),

    #[error("lower sequence entry {index} is not positive")]
    NonPositiveSequence { index: usize },

    #[error("frequency vector leaves the arithmetic class at level {first_fail}")]
    NotInClass { first_fail: u32 },

    #[error("normalization needs degree {needed} but the degree cap is {deg_cap}")]
    CapOverflow { needed: u32, deg_cap: u32 },

    #[error("input is not of the form H0 + o(2): {0}")]
    NotPerturbation(String),

    #[error("KAM iteration diverged at step {step}: residual grew from {before:e} to {after:e}")]
    Divergence { step: usize, before: f64, after: f64 },

    #[error("trajectory left the finite range at time {time}")]
    BlowUp { time: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
