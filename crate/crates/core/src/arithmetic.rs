//! Small-divisor arithmetic: the sequence `σ(α)_k`, arithmetic classes and
//! the Bruno-type summability condition.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result, C64};

/// Norm on integer vectors used to define the levels of `σ(α)_k`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum IndexNorm {
    #[default]
    Sup,
    L1,
    L2,
}

impl IndexNorm {
    /// Smallest `k ≥ 0` with `‖i‖ ≤ 2^k`. The zero vector has level 0.
    pub fn level(self, i: &[i64]) -> u32 {
        match self {
            IndexNorm::Sup => ceil_log2(i.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0)),
            IndexNorm::L1 => ceil_log2(i.iter().map(|x| x.unsigned_abs()).sum()),
            IndexNorm::L2 => {
                let sq: u64 = i.iter().map(|x| x.unsigned_abs().pow(2)).sum();
                ceil_log2(sq).div_ceil(2)
            }
        }
    }
}

fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

/// `|(α, i)| = |Σ α_m i_m|` with the bilinear pairing. Every σ value in this
/// module goes through this one function.
pub fn pairing(alpha: &[C64], i: &[i64]) -> f64 {
    let mut re = 0.0;
    let mut im = 0.0;
    for (a, &k) in alpha.iter().zip(i) {
        let k = k as f64;
        re += a.re * k;
        im += a.im * k;
    }
    if im == 0.0 {
        re.abs()
    } else {
        re.hypot(im)
    }
}

/// Default enumeration budget: largest admissible level for dimension `n`.
pub fn default_kmax(n: usize) -> u32 {
    match n {
        0..=2 => 14,
        3 => 8,
        _ => 5,
    }
}

/// `σ(α)_k` together with a vector attaining it.
#[derive(Clone, Debug, PartialEq)]
pub struct SigmaEntry {
    pub value: f64,
    pub witness: Vec<i64>,
}

/// `σ(α)_0, …, σ(α)_kmax` by enumeration of the half box `‖i‖_∞ ≤ 2^kmax`.
pub fn sigma_profile(alpha: &[C64], kmax: u32, norm: IndexNorm) -> Result<Vec<SigmaEntry>> {
    let n = alpha.len();
    if n == 0 || n > crate::MAX_DIM {
        return Err(Error::Dimension(n));
    }
    if alpha.iter().all(|a| a.norm() == 0.0) || alpha.iter().any(|a| !a.is_finite()) {
        return Err(Error::DegenerateFrequency(format!("{alpha:?}")));
    }
    let budget = default_kmax(n);
    if kmax > budget {
        return Err(Error::EnumerationBudget {
            k: kmax,
            kmax: budget,
            n,
        });
    }
    let r = 1i64 << kmax;
    let mut best: Vec<Option<SigmaEntry>> = vec![None; kmax as usize + 1];
    let mut i = vec![0i64; n];
    // Half box: the first nonzero coordinate is positive.
    for lead in 0..n {
        for v in i.iter_mut() {
            *v = 0;
        }
        i[lead] = 1;
        for x in i.iter_mut().skip(lead + 1) {
            *x = -r;
        }
        loop {
            let level = norm.level(&i);
            if level <= kmax {
                let value = pairing(alpha, &i);
                let slot = &mut best[level as usize];
                if slot.as_ref().is_none_or(|b| value < b.value) {
                    *slot = Some(SigmaEntry {
                        value,
                        witness: i.clone(),
                    });
                }
            }
            // odometer over i[lead..] with i[lead] in 1..=r and the rest in -r..=r
            let mut pos = n - 1;
            loop {
                let lo = if pos == lead { 1 } else { -r };
                if i[pos] < r {
                    i[pos] += 1;
                    break;
                }
                i[pos] = lo;
                if pos == lead {
                    pos = usize::MAX;
                    break;
                }
                pos -= 1;
            }
            if pos == usize::MAX {
                break;
            }
        }
    }
    let mut out: Vec<SigmaEntry> = Vec::with_capacity(best.len());
    for entry in best {
        let prev = out.last().cloned();
        let next = match (prev, entry) {
            (Some(p), Some(e)) => {
                if e.value < p.value {
                    e
                } else {
                    p
                }
            }
            (Some(p), None) => p,
            (None, Some(e)) => e,
            (None, None) => unreachable!("level 0 always holds the unit vectors"),
        };
        out.push(next);
    }
    Ok(out)
}

/// `σ(α)_k` by enumeration.
pub fn sigma(alpha: &[C64], k: u32, norm: IndexNorm) -> Result<SigmaEntry> {
    Ok(sigma_profile(alpha, k, norm)?.pop().expect("nonempty profile"))
}

/// Continued-fraction convergents `p/q` of `x ≥ 0`, starting with `1/0`,
/// until the denominator or numerator exceeds `bound`.
pub fn convergents(x: f64, bound: i64) -> Vec<(i64, i64)> {
    let mut out = vec![(1i64, 0i64)];
    let (mut p0, mut q0) = (1i64, 0i64);
    let (mut p1, mut q1) = (0i64, 1i64);
    let mut y = x;
    for _ in 0..64 {
        let a = y.floor();
        if a > bound as f64 {
            break;
        }
        let a = a as i64;
        let (p, q) = (a * p0 + p1, a * q0 + q1);
        if p > bound || q > bound {
            break;
        }
        out.push((p, q));
        (p1, q1, p0, q0) = (p0, q0, p, q);
        let frac = y - a as f64;
        if frac <= 1e-15 * y.max(1.0) {
            break;
        }
        y = 1.0 / frac;
    }
    out
}

/// `σ(α)_k` for `n = 2` and real `α` from the continued fraction of
/// `|α_2/α_1|`, using the sup norm. Agrees with [`sigma`] exactly because the
/// candidate vector is evaluated through the same [`pairing`].
pub fn sigma_cf(alpha: [C64; 2], k: u32) -> Result<SigmaEntry> {
    let [a, b] = alpha;
    if a.im != 0.0 || b.im != 0.0 || a.re == 0.0 || !a.is_finite() || !b.is_finite() {
        return Err(Error::DegenerateFrequency(format!(
            "continued fractions need real α with α_1 ≠ 0, got {alpha:?}"
        )));
    }
    if b.re == 0.0 {
        // (α, (0, 1)) = 0
        return Ok(SigmaEntry {
            value: pairing(&alpha, &[0, 1]),
            witness: vec![0, 1],
        });
    }
    let x = (b.re / a.re).abs();
    let bound = 1i64 << k;
    let &(p, q) = convergents(x, bound).last().expect("1/0 is always present");
    let witness = vec![-(a.re.signum() as i64) * p, (b.re.signum() as i64) * q];
    Ok(SigmaEntry {
        value: pairing(&alpha, &witness),
        witness,
    })
}

/// A positive lower-bound sequence `a_k`.
#[derive(Clone, Debug, PartialEq)]
pub enum LowerSeq {
    /// `a_k = c ρ^k`.
    Geometric { c: f64, rho: f64 },
    /// Explicit values; the last one repeats beyond the end of the list.
    List(Vec<f64>),
}

impl LowerSeq {
    pub fn value(&self, k: u32) -> f64 {
        match self {
            LowerSeq::Geometric { c, rho } => c * rho.powi(k as i32),
            LowerSeq::List(v) => *v.get(k as usize).or(v.last()).unwrap_or(&0.0),
        }
    }

    /// `log a_k`, evaluated without forming `a_k` for geometric sequences.
    pub fn log_value(&self, k: u32) -> f64 {
        match self {
            LowerSeq::Geometric { c, rho } => c.ln() + k as f64 * rho.ln(),
            LowerSeq::List(_) => self.value(k).ln(),
        }
    }

    pub fn validate(&self, kmax: u32) -> Result<()> {
        match self {
            LowerSeq::Geometric { c, rho } => {
                if !(*c > 0.0 && *rho > 0.0 && c.is_finite() && rho.is_finite()) {
                    return Err(Error::NonPositiveSequence { index: 0 });
                }
            }
            LowerSeq::List(v) => {
                if v.is_empty() {
                    return Err(Error::InvalidArgument("empty lower sequence".into()));
                }
                for k in 0..=kmax as usize {
                    let x = *v.get(k).or(v.last()).unwrap();
                    if !(x > 0.0 && x.is_finite()) {
                        return Err(Error::NonPositiveSequence { index: k });
                    }
                }
            }
        }
        Ok(())
    }
}

/// Partial sums of `Σ log a_k / 2^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct BrunoReport {
    pub partials: Vec<f64>,
    pub sum: f64,
    /// Tail ratio test on the last two terms.
    pub converged: bool,
    /// `2 log c + 2 log ρ` for geometric sequences.
    pub closed_form: Option<f64>,
}

pub fn bruno_sum(seq: &LowerSeq, kmax: u32) -> Result<BrunoReport> {
    seq.validate(kmax)?;
    let mut partials = Vec::with_capacity(kmax as usize + 1);
    let mut terms = Vec::with_capacity(kmax as usize + 1);
    let mut acc = 0.0;
    for k in 0..=kmax {
        let term = seq.log_value(k) / 2f64.powi(k as i32);
        acc += term;
        terms.push(term);
        partials.push(acc);
    }
    let converged = match terms.as_slice() {
        [.., prev, last] => *last == 0.0 || last.abs() <= 0.75 * prev.abs(),
        _ => true,
    };
    let closed_form = match seq {
        LowerSeq::Geometric { c, rho } => Some(2.0 * c.ln() + 2.0 * rho.ln()),
        LowerSeq::List(_) => None,
    };
    Ok(BrunoReport {
        partials,
        sum: acc,
        converged,
        closed_form,
    })
}

/// Class membership `σ(α)_k ≥ a_k` for all `k ≤ kmax`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassReport {
    pub member: bool,
    pub first_fail: Option<u32>,
    pub sigma: Vec<SigmaEntry>,
    pub lower: Vec<f64>,
}

pub fn in_class(alpha: &[C64], seq: &LowerSeq, kmax: u32, norm: IndexNorm) -> Result<ClassReport> {
    seq.validate(kmax)?;
    let sigma = sigma_profile(alpha, kmax, norm)?;
    let lower: Vec<f64> = (0..=kmax).map(|k| seq.value(k)).collect();
    let first_fail = sigma
        .iter()
        .zip(&lower)
        .position(|(s, a)| s.value < *a)
        .map(|k| k as u32);
    Ok(ClassReport {
        member: first_fail.is_none(),
        first_fail,
        sigma,
        lower,
    })
}

/// Everything known about a frequency vector relative to a lower sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct DiophantineProfile {
    pub alpha: Vec<C64>,
    pub sigma: Vec<SigmaEntry>,
    pub lower: Vec<f64>,
    pub bruno: Vec<f64>,
    pub member: bool,
    pub first_fail: Option<u32>,
}

pub fn profile(alpha: &[C64], seq: &LowerSeq, kmax: u32, norm: IndexNorm) -> Result<DiophantineProfile> {
    let class = in_class(alpha, seq, kmax, norm)?;
    let bruno = bruno_sum(seq, kmax)?;
    Ok(DiophantineProfile {
        alpha: alpha.to_vec(),
        sigma: class.sigma,
        lower: class.lower,
        bruno: bruno.partials,
        member: class.member,
        first_fail: class.first_fail,
    })
}

/// The golden ratio `(1 + √5)/2`.
pub fn golden() -> f64 {
    (1.0 + 5f64.sqrt()) / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(xs: &[f64]) -> Vec<C64> {
        xs.iter().map(|&x| C64::new(x, 0.0)).collect()
    }

    #[test]
    fn resonant_pair() {
        let s = sigma(&re(&[1.0, 1.0]), 3, IndexNorm::Sup).unwrap();
        assert_eq!(s.value, 0.0);
        assert_eq!(s.witness, vec![1, -1]);
    }

    #[test]
    fn golden_first_levels() {
        let phi = golden();
        let prof = sigma_profile(&re(&[1.0, phi]), 4, IndexNorm::Sup).unwrap();
        assert!((prof[0].value - (phi - 1.0)).abs() < 1e-15);
        assert!((prof[1].value - (2.0 - phi)).abs() < 1e-15);
        // best approximations with max(|i_1|, |i_2|) ≤ 2^k: φ^{-1}, φ^{-2},
        // φ^{-3} from (3, -2), φ^{-5} from (-8, 5), φ^{-6} from (13, -8)
        for (k, e) in [1, 2, 3, 5, 6].iter().enumerate() {
            let expect = phi.powi(-e);
            assert!((prof[k].value - expect).abs() < 1e-14, "k {k}: {}", prof[k].value);
        }
    }

    #[test]
    fn levels() {
        assert_eq!(IndexNorm::Sup.level(&[1, -1]), 0);
        assert_eq!(IndexNorm::Sup.level(&[2, 0]), 1);
        assert_eq!(IndexNorm::Sup.level(&[3, 0]), 2);
        assert_eq!(IndexNorm::L1.level(&[1, -1]), 1);
        assert_eq!(IndexNorm::L2.level(&[1, 1]), 1);
        assert_eq!(IndexNorm::L2.level(&[2, 0]), 1);
    }

    #[test]
    fn cf_agrees_with_enumeration() {
        let phi = golden();
        for gamma in [phi, 2f64.sqrt(), 0.5, 3.0f64.sqrt() - 1.0] {
            let alpha = re(&[1.0, gamma]);
            let prof = sigma_profile(&alpha, 8, IndexNorm::Sup).unwrap();
            for (k, s) in prof.iter().enumerate() {
                let cf = sigma_cf([alpha[0], alpha[1]], k as u32).unwrap();
                assert_eq!(cf.value, s.value, "gamma {gamma} k {k}");
            }
        }
    }

    #[test]
    fn rational_gamma_vanishes() {
        let alpha = [C64::new(1.0, 0.0), C64::new(0.5, 0.0)];
        assert_eq!(sigma_cf(alpha, 1).unwrap().value, 0.0);
        assert!(sigma_cf(alpha, 0).unwrap().value > 0.0);
    }

    #[test]
    fn bruno_examples() {
        let r = bruno_sum(&LowerSeq::List(vec![1.0]), 10).unwrap();
        assert_eq!(r.sum, 0.0);
        let (c, rho) = (0.1, 0.5);
        let r = bruno_sum(&LowerSeq::Geometric { c, rho }, 50).unwrap();
        assert!((r.sum - (2.0 * c.ln() + 2.0 * rho.ln())).abs() < 1e-12);
        assert!(r.converged);
        let seq: Vec<f64> = (0..=8).map(|k| (-(2f64.powi(k))).exp()).collect();
        let r = bruno_sum(&LowerSeq::List(seq), 8).unwrap();
        for (k, p) in r.partials.iter().enumerate() {
            assert!((p + (k as f64 + 1.0)).abs() < 1e-12);
        }
        assert!(!r.converged);
        assert!(bruno_sum(&LowerSeq::List(vec![1.0, 0.0]), 3).is_err());
    }

    #[test]
    fn class_examples() {
        let phi = golden();
        let alpha = re(&[1.0, phi]);
        let r = in_class(&alpha, &LowerSeq::Geometric { c: 0.1, rho: 1.0 / 3.0 }, 10, IndexNorm::Sup)
            .unwrap();
        assert!(r.member);
        let r = in_class(&alpha, &LowerSeq::List(vec![0.9]), 4, IndexNorm::Sup).unwrap();
        assert_eq!(r.first_fail, Some(0));
        let r = in_class(&re(&[1.0, 1.0]), &LowerSeq::List(vec![1e-3]), 2, IndexNorm::Sup).unwrap();
        assert_eq!(r.first_fail, Some(0));
    }
}
