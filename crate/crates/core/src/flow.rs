//! Hamiltonian flow of a series with frozen parameters, and the drift of
//! candidate first integrals along it.
//!
//! States are `z = (q_1..q_n, p_1..p_n)` in `C^{2n}`. With `t`, `λ` held at
//! fixed values the equations of motion are `q̇ = ∂_p H`, `ṗ = −∂_q H`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::monomial::Var;
use crate::series::{Caps, KahanSum, PowerTables};
use crate::{Error, Monomial, Result, TruncatedSeries, C64};

/// Substitutes `t = t_star`, `λ = lambda_star`. The result only has `q`,
/// `p` monomials and is never pruned.
pub fn specialize(f: &TruncatedSeries, t_star: &[C64], lambda_star: &[C64]) -> Result<TruncatedSeries> {
    let n = f.n();
    if t_star.len() != n || lambda_star.len() != n {
        return Err(Error::InvalidArgument(alloc::format!(
            "parameter vectors must have length {n}"
        )));
    }
    let zeros = vec![C64::new(0.0, 0.0); n];
    let tables = PowerTables::new(f, [t_star, lambda_star, &zeros, &zeros]);
    let mut acc: BTreeMap<Monomial, KahanSum> = BTreeMap::new();
    for (m, v) in f.iter() {
        let factor = tables.monomial(&m.param_part(n));
        acc.entry(m.qp_part(n)).or_default().add(*v * factor);
    }
    let caps = Caps {
        zero_tol: 0.0,
        ..f.caps()
    };
    Ok(TruncatedSeries::from_terms(
        caps,
        acc.into_iter().map(|(m, s)| (m, s.value())),
    ))
}

fn eval_qp(f: &TruncatedSeries, z: &[C64]) -> C64 {
    let n = f.n();
    let zeros = vec![C64::new(0.0, 0.0); n];
    f.eval(&zeros, &zeros, &z[..n], &z[n..])
}

/// The vector field `(∂_p H, −∂_q H)` at frozen parameters.
#[derive(Clone, Debug)]
pub struct HamiltonianField {
    n: usize,
    dq: Vec<TruncatedSeries>,
    dp: Vec<TruncatedSeries>,
}

impl HamiltonianField {
    pub fn new(h: &TruncatedSeries, t_star: &[C64], lambda_star: &[C64]) -> Result<Self> {
        let n = h.n();
        let hs = specialize(h, t_star, lambda_star)?;
        let dq = (0..n).map(|i| hs.derivative(Var::q(i))).collect();
        let dp = (0..n).map(|i| hs.derivative(Var::p(i))).collect();
        Ok(HamiltonianField { n, dq, dp })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn eval(&self, z: &[C64]) -> Vec<C64> {
        assert_eq!(z.len(), 2 * self.n);
        let mut out = Vec::with_capacity(2 * self.n);
        out.extend(self.dp.iter().map(|d| eval_qp(d, z)));
        out.extend(self.dq.iter().map(|d| -eval_qp(d, z)));
        out
    }
}

/// Sampled RK4 trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<C64>>,
}

fn axpy(z: &[C64], h: f64, k: &[C64]) -> Vec<C64> {
    z.iter().zip(k).map(|(a, b)| a + b * h).collect()
}

/// Classical fixed-step RK4 up to `horizon`, keeping every state.
pub fn integrate(field: &HamiltonianField, z0: &[C64], horizon: f64, step: f64) -> Result<Trajectory> {
    if !(step > 0.0) || !(horizon >= 0.0) {
        return Err(Error::InvalidArgument(alloc::format!(
            "step {step} and horizon {horizon} must be positive"
        )));
    }
    if z0.len() != 2 * field.n {
        return Err(Error::InvalidArgument(alloc::format!(
            "initial point has {} entries, expected {}",
            z0.len(),
            2 * field.n
        )));
    }
    let count = (horizon / step).round() as usize;
    let mut times = Vec::with_capacity(count + 1);
    let mut states = Vec::with_capacity(count + 1);
    let mut z = z0.to_vec();
    times.push(0.0);
    states.push(z.clone());
    for s in 1..=count {
        let k1 = field.eval(&z);
        let k2 = field.eval(&axpy(&z, step / 2.0, &k1));
        let k3 = field.eval(&axpy(&z, step / 2.0, &k2));
        let k4 = field.eval(&axpy(&z, step, &k3));
        for i in 0..z.len() {
            z[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (step / 6.0);
        }
        let time = s as f64 * step;
        if z.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
            return Err(Error::BlowUp { time });
        }
        times.push(time);
        states.push(z.clone());
    }
    Ok(Trajectory { times, states })
}

/// How `λ*` is fixed for each initial point.
#[derive(Clone, Debug, PartialEq)]
pub enum LambdaChoice {
    Fixed(Vec<C64>),
    /// Solve `K(z0; λ) = 0` so that `z0` lies on the common level set of the
    /// integrals through the origin.
    OnLevelSet,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowConfig {
    pub t_star: Vec<C64>,
    pub lambda: LambdaChoice,
    /// Initial point at scale 1.
    pub z0: Vec<C64>,
    pub horizon: f64,
    pub step: f64,
    pub scales: Vec<f64>,
}

impl FlowConfig {
    /// Zero parameters, `λ*` on the level set, `‖z0‖ = 0.1` along
    /// `(1, 1, .., 1)`, horizon 1, step `1e−3`, scales `1, 1/2, 1/4`.
    pub fn standard(n: usize) -> Self {
        let w = 0.1 / (2.0 * n as f64).sqrt();
        FlowConfig {
            t_star: vec![C64::new(0.0, 0.0); n],
            lambda: LambdaChoice::OnLevelSet,
            z0: vec![C64::new(w, 0.0); 2 * n],
            horizon: 1.0,
            step: 1e-3,
            scales: vec![1.0, 0.5, 0.25],
        }
    }
}

/// Drift at one scale of the initial point.
#[derive(Clone, Debug, PartialEq)]
pub struct DriftSample {
    pub scale: f64,
    pub z0_norm: f64,
    pub lambda_star: Vec<C64>,
    /// `max_τ |K_m(z(τ)) − K_m(z0)|` per integral.
    pub drift: Vec<f64>,
    /// `max_τ |H(z(τ)) − H(z0)|`.
    pub energy_drift: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DriftReport {
    pub samples: Vec<DriftSample>,
    /// Least-squares slope of `log2 drift` against `log2 scale`, per integral.
    pub slopes: Vec<f64>,
}

impl DriftReport {
    pub fn max_drift(&self, scale_index: usize) -> f64 {
        self.samples[scale_index].drift.iter().cloned().fold(0.0, f64::max)
    }

    pub fn min_slope(&self) -> f64 {
        self.slopes.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

fn norm(z: &[C64]) -> f64 {
    z.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Newton-free solve of `K(z0; λ) = 0`: every integral has the form
/// `p_m q_m − λ_m + …`, so `λ ← λ + K(z0; λ)` contracts for small `z0`.
fn level_set_lambda(integrals: &[TruncatedSeries], t_star: &[C64], z0: &[C64]) -> Result<Vec<C64>> {
    let n = integrals.len();
    let mut lambda = vec![C64::new(0.0, 0.0); n];
    for _ in 0..100 {
        let mut change: f64 = 0.0;
        let mut next = lambda.clone();
        for (m, k) in integrals.iter().enumerate() {
            let v = eval_qp(&specialize(k, t_star, &lambda)?, z0);
            next[m] += v;
            change = change.max(v.norm());
        }
        lambda = next;
        if change <= 1e-17 * (1.0 + lambda.iter().map(|x| x.norm()).fold(0.0, f64::max)) {
            return Ok(lambda);
        }
    }
    Ok(lambda)
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Integrates the flow of `h` from each scaled initial point and records
/// the drift of every integral.
pub fn drift_report(h: &TruncatedSeries, integrals: &[TruncatedSeries], config: &FlowConfig) -> Result<DriftReport> {
    let n = h.n();
    if config.z0.len() != 2 * n || config.t_star.len() != n {
        return Err(Error::InvalidArgument(alloc::format!(
            "flow configuration does not match n = {n}"
        )));
    }
    if config.scales.is_empty() {
        return Err(Error::InvalidArgument("no scales".into()));
    }
    let mut samples = Vec::new();
    for &scale in &config.scales {
        let z0: Vec<C64> = config.z0.iter().map(|x| x * scale).collect();
        let lambda_star = match &config.lambda {
            LambdaChoice::Fixed(l) => l.clone(),
            LambdaChoice::OnLevelSet => level_set_lambda(integrals, &config.t_star, &z0)?,
        };
        let field = HamiltonianField::new(h, &config.t_star, &lambda_star)?;
        let traj = integrate(&field, &z0, config.horizon, config.step)?;
        let hs = specialize(h, &config.t_star, &lambda_star)?;
        let ks = integrals
            .iter()
            .map(|k| specialize(k, &config.t_star, &lambda_star))
            .collect::<Result<Vec<_>>>()?;
        let k0: Vec<C64> = ks.iter().map(|k| eval_qp(k, &z0)).collect();
        let h0 = eval_qp(&hs, &z0);
        let mut drift = vec![0.0f64; ks.len()];
        let mut energy_drift: f64 = 0.0;
        for z in &traj.states {
            for (m, k) in ks.iter().enumerate() {
                drift[m] = drift[m].max((eval_qp(k, z) - k0[m]).norm());
            }
            energy_drift = energy_drift.max((eval_qp(&hs, z) - h0).norm());
        }
        samples.push(DriftSample {
            scale,
            z0_norm: norm(&z0),
            lambda_star,
            drift,
            energy_drift,
        });
    }
    let xs: Vec<f64> = samples.iter().map(|s| s.scale.log2()).collect();
    let slopes = (0..integrals.len())
        .map(|m| {
            if samples.len() < 2 {
                return f64::NAN;
            }
            let ys: Vec<f64> = samples.iter().map(|s| s.drift[m].log2()).collect();
            slope(&xs, &ys)
        })
        .collect();
    Ok(DriftReport { samples, slopes })
}
