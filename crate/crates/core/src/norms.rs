//! Polydisc norms of truncated series and the inequalities relating them.
//!
//! Norms treat every variable alike: a monomial `z^i` has size `s^{|i|}` with
//! `|i|` the plain degree. The sup norm on the polydisc is not computed; the
//! ℓ¹ majorant `Σ |a_i| s^{|i|}` is the certified upper proxy.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::monomial::{Monomial, Var, MAX_DIM};
use crate::series::TruncatedSeries;
use crate::{Error, Result, C64};

/// Multiplicative slack applied to the right side of every inequality check.
pub const SLACK: f64 = 1.0 + 1e-12;

/// Checks `0 < s < 1/√π`.
pub fn check_radius(s: f64) -> Result<()> {
    if s > 0.0 && s < 1.0 / PI.sqrt() {
        Ok(())
    } else {
        Err(Error::InvalidRadius(s))
    }
}

/// A set of variables among the `4n` slots, as a bitmask over packed slots.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ActiveVars(u16);

impl ActiveVars {
    pub fn all(n: usize) -> Self {
        ActiveVars::from_vars(Var::all(n))
    }

    pub fn from_vars<I: IntoIterator<Item = Var>>(vars: I) -> Self {
        ActiveVars(vars.into_iter().fold(0, |acc, v| acc | (1 << v.slot())))
    }

    /// The variables that actually occur in `f`.
    pub fn of(f: &TruncatedSeries) -> Self {
        ActiveVars(
            f.iter()
                .flat_map(|(m, _)| m.factors().map(|(v, _)| 1u16 << v.slot()))
                .fold(0, |a, b| a | b),
        )
    }

    pub fn contains(&self, v: Var) -> bool {
        self.0 & (1 << v.slot()) != 0
    }

    pub fn count(&self) -> u32 {
        self.0.count_ones()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        (0..4 * MAX_DIM)
            .filter(|s| self.0 & (1 << s) != 0)
            .map(Var::from_slot)
    }

    fn covers(&self, f: &TruncatedSeries) -> Result<()> {
        if ActiveVars::of(f).0 & !self.0 == 0 {
            Ok(())
        } else {
            Err(Error::InactiveVariable)
        }
    }
}

/// `max |a_i| s^{|i|}`.
pub fn coeff_sup(f: &TruncatedSeries, s: f64) -> f64 {
    f.iter()
        .map(|(m, v)| v.norm() * s.powi(m.plain_degree() as i32))
        .fold(0.0, f64::max)
}

/// `Σ |a_i| s^{|i|}`, an upper bound for `|f|` on the closed polydisc.
pub fn l1_majorant(f: &TruncatedSeries, s: f64) -> f64 {
    f.iter()
        .map(|(m, v)| v.norm() * s.powi(m.plain_degree() as i32))
        .sum()
}

/// Squared `L²` norm of a single monomial over the polydisc in `active`.
pub fn monomial_l2_sq(m: &Monomial, s: f64, active: ActiveVars) -> f64 {
    active
        .vars()
        .map(|v| {
            let e = m.exp(v) as i32;
            PI * s.powi(2 * e + 2) / (e + 1) as f64
        })
        .product()
}

/// Exact `L²` norm over the polydisc of radius `s` in the active variables.
pub fn l2(f: &TruncatedSeries, s: f64, active: ActiveVars) -> Result<f64> {
    active.covers(f)?;
    Ok(f.iter()
        .map(|(m, v)| v.norm_sqr() * monomial_l2_sq(m, s, active))
        .sum::<f64>()
        .sqrt())
}

/// Smallest plain degree present.
pub fn plain_order(f: &TruncatedSeries) -> Option<u32> {
    f.iter().map(|(m, _)| m.plain_degree()).min()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormReport {
    pub coeff_sup: f64,
    pub l2: f64,
    pub l1: f64,
    pub radius: f64,
    pub order: Option<u32>,
}

pub fn norm_report(f: &TruncatedSeries, s: f64, active: ActiveVars) -> Result<NormReport> {
    check_radius(s)?;
    Ok(NormReport {
        coeff_sup: coeff_sup(f, s),
        l2: l2(f, s, active)?,
        l1: l1_majorant(f, s),
        radius: s,
        order: plain_order(f),
    })
}

/// Both sides of an inequality `lhs ≤ rhs` and whether it holds with
/// [`SLACK`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Inequality {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl Inequality {
    pub fn new(lhs: f64, rhs: f64) -> Self {
        Inequality {
            lhs,
            rhs,
            holds: lhs <= rhs * SLACK,
        }
    }
}

/// `|f|^∞_s ≤ |f|^∞_{s+σ} (s/(s+σ))^N` with `N` the plain order of `f`.
pub fn check_decay_uv(f: &TruncatedSeries, s: f64, sigma: f64) -> Result<Inequality> {
    check_radius(s)?;
    check_radius(s + sigma)?;
    if sigma <= 0.0 {
        return Err(Error::RadiusOrder { s, t: s + sigma });
    }
    let n = plain_order(f).ok_or(Error::ZeroSeries)?;
    let t = s + sigma;
    Ok(Inequality::new(
        coeff_sup(f, s),
        coeff_sup(f, t) * (s / t).powi(n as i32),
    ))
}

/// `|f(w)| ≤ σ^{−m} ‖f‖_{L²(s+σ)}` for `w` in the polydisc of radius `s`,
/// with `m` the number of active variables. `w` lists `(t, λ, q, p)`.
pub fn check_sup_from_l2(
    f: &TruncatedSeries,
    w: [&[C64]; 4],
    s: f64,
    sigma: f64,
    active: ActiveVars,
) -> Result<Inequality> {
    check_radius(s)?;
    check_radius(s + sigma)?;
    if sigma <= 0.0 {
        return Err(Error::RadiusOrder { s, t: s + sigma });
    }
    for v in active.vars() {
        let z = w[v.slot() / MAX_DIM][v.index];
        if z.norm() > s {
            return Err(Error::OutsideDomain { radius: s });
        }
    }
    let value = f.eval(w[0], w[1], w[2], w[3]).norm();
    let m = active.count() as i32;
    Ok(Inequality::new(
        value,
        sigma.powi(-m) * l2(f, s + sigma, active)?,
    ))
}

/// `l1(f, s) ≤ (t−s)^{−m} |f|^∞_t (s/t)^N` with `N` the plain order and `m`
/// the number of active variables.
pub fn check_order_decay(f: &TruncatedSeries, s: f64, t: f64, active: ActiveVars) -> Result<Inequality> {
    check_radius(s)?;
    check_radius(t)?;
    if s >= t {
        return Err(Error::RadiusOrder { s, t });
    }
    active.covers(f)?;
    let Some(n) = plain_order(f) else {
        return Ok(Inequality::new(0.0, 0.0));
    };
    let m = active.count() as i32;
    Ok(Inequality::new(
        l1_majorant(f, s),
        (t - s).powi(-m) * coeff_sup(f, t) * (s / t).powi(n as i32),
    ))
}

/// One derivative direction of a Cauchy estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct CauchyEntry {
    pub direction: Vec<(Var, u32)>,
    pub check: Inequality,
}

/// For every multi-index `j` over the active variables with `|j| = l`:
/// `|∂^j f|^∞_s ≤ l! (t−s)^{−l} l1(f, t)`.
pub fn cauchy_bound(
    f: &TruncatedSeries,
    s: f64,
    t: f64,
    l: u32,
    active: ActiveVars,
) -> Result<Vec<CauchyEntry>> {
    check_radius(s)?;
    check_radius(t)?;
    if s >= t {
        return Err(Error::RadiusOrder { s, t });
    }
    active.covers(f)?;
    let vars: Vec<Var> = active.vars().collect();
    let fact: f64 = (1..=l).map(|k| k as f64).product();
    let rhs = fact * (t - s).powi(-(l as i32)) * l1_majorant(f, t);
    let mut out = Vec::new();
    let mut j = alloc::vec![0u32; vars.len()];
    compositions(l, &mut j, 0, &mut |j| {
        let mut d = f.clone();
        for (v, &e) in vars.iter().zip(j.iter()) {
            for _ in 0..e {
                d = d.derivative(*v);
            }
        }
        out.push(CauchyEntry {
            direction: vars
                .iter()
                .zip(j.iter())
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| (*v, e))
                .collect(),
            check: Inequality::new(coeff_sup(&d, s), rhs),
        });
    });
    Ok(out)
}

/// Calls `visit` on every vector of length `j.len()` summing to `l`.
fn compositions(l: u32, j: &mut [u32], pos: usize, visit: &mut dyn FnMut(&[u32])) {
    if j.is_empty() {
        if l == 0 {
            visit(j);
        }
        return;
    }
    if pos == j.len() - 1 {
        j[pos] = l;
        visit(j);
        j[pos] = 0;
        return;
    }
    for e in 0..=l {
        j[pos] = e;
        compositions(l - e, j, pos + 1, visit);
    }
    j[pos] = 0;
}
