//! JSON reports and CSV tables.
//!
//! Every JSON report is an object with `schema_version`, `generated_at` and
//! `command` next to its payload. Keys are sorted, so two runs of the same
//! configuration differ only in `generated_at`. Setting `SOURCE_DATE_EPOCH`
//! pins that too.
//!
//! Complex numbers are `[re, im]` pairs; series are in the canonical line
//! format of [`TruncatedSeries::to_text`].

use std::io::Write;
use std::path::Path;
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use serde_json::{json, Value};
use singkam_core::arithmetic::{DiophantineProfile, IndexNorm, LowerSeq};
use singkam_core::engine::{KamRun, NormalizationCertificate, NormalizationRun, StepRecord};
use singkam_core::flow::{specialize, DriftReport, Trajectory};
use singkam_core::homological::{DivisorTable, InverseMode};
use singkam_core::norms::NormReport;
use singkam_core::splitting::NormalFormSplit;
use singkam_core::{TransformChain, TruncatedSeries, C64};

use crate::config::RunConfig;

pub const SCHEMA_VERSION: u32 = 1;

pub fn timestamp() -> String {
    let now = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<u64>().ok())
        .map(|secs| UNIX_EPOCH + Duration::from_secs(secs))
        .unwrap_or_else(SystemTime::now);
    humantime::format_rfc3339_seconds(now).to_string()
}

/// Wraps a payload object with the schema header.
pub fn envelope(command: &str, payload: Value) -> Value {
    let mut out = json!({
        "schema_version": SCHEMA_VERSION,
        "generated_at": timestamp(),
        "command": command,
    });
    if let (Some(dst), Value::Object(src)) = (out.as_object_mut(), payload) {
        dst.extend(src);
    }
    out
}

pub fn complex(z: C64) -> Value {
    json!([z.re, z.im])
}

fn complexes(v: &[C64]) -> Value {
    Value::Array(v.iter().map(|z| complex(*z)).collect())
}

/// 17 significant digits.
pub fn full_precision(x: f64) -> String {
    format!("{x:.16e}")
}

fn full_precision_complex(z: C64) -> String {
    if z.im == 0.0 {
        full_precision(z.re)
    } else {
        format!("({}{}{}i)", full_precision(z.re), if z.im < 0.0 { "-" } else { "+" }, full_precision(z.im.abs()))
    }
}

pub fn lower_name(seq: &LowerSeq) -> String {
    match seq {
        LowerSeq::Geometric { c, rho } => format!("geometric {c:?} {rho:?}"),
        LowerSeq::List(v) => format!(
            "list {}",
            v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(", ")
        ),
    }
}

pub fn norm_name(norm: IndexNorm) -> &'static str {
    match norm {
        IndexNorm::Sup => "sup",
        IndexNorm::L1 => "l1",
        IndexNorm::L2 => "l2",
    }
}

fn inverse_name(mode: InverseMode) -> &'static str {
    match mode {
        InverseMode::Frozen => "frozen",
        InverseMode::TSeries => "tseries",
    }
}

/// The file as read plus the values it resolved to.
pub fn config_echo(cfg: &RunConfig) -> Value {
    json!({
        "raw": cfg.raw,
        "n": cfg.caps.n,
        "deg_cap": cfg.caps.deg_cap,
        "t_cap": cfg.caps.t_cap,
        "zero_tol": cfg.caps.zero_tol,
        "alpha": cfg.alpha.iter().map(|z| full_precision_complex(*z)).collect::<Vec<_>>(),
        "k": cfg.k,
        "s0": cfg.s0,
        "mode": cfg.mode.name(),
        "lower": lower_name(&cfg.lower),
        "inverse": inverse_name(cfg.inverse),
        "index_norm": norm_name(cfg.norm),
        "kmax": cfg.kmax,
        "seed": cfg.seed,
    })
}

pub fn profile_json(p: &DiophantineProfile) -> Value {
    json!({
        "alpha": complexes(&p.alpha),
        "alpha_text": p.alpha.iter().map(|z| full_precision_complex(*z)).collect::<Vec<_>>(),
        "sigma": p.sigma.iter().map(|e| e.value).collect::<Vec<_>>(),
        "witness": p.sigma.iter().map(|e| e.witness.clone()).collect::<Vec<_>>(),
        "a": p.lower,
        "bruno": p.bruno,
        "member": p.member,
        "first_fail": p.first_fail,
    })
}

pub fn norm_report_json(r: &NormReport) -> Value {
    json!({
        "coeff_sup": r.coeff_sup,
        "l2": r.l2,
        "l1": r.l1,
        "radius": r.radius,
        "order": r.order,
    })
}

pub fn record_json(r: &StepRecord) -> Value {
    json!({
        "k": r.step,
        "window": [r.window.0, r.window.1],
        "level": r.level,
        "s_k": r.radius,
        "r_coeffsup": r.r_coeff_sup,
        "r_l1": r.r_l1,
        "u_norm": r.u_norm,
        "lower": r.lower,
        "inner_iterations": r.inner_iterations,
        "order_after": r.order_after,
        "max_after": r.max_after,
    })
}

pub fn certificate_json(c: &NormalizationCertificate) -> Value {
    json!({
        "steps": c.steps,
        "certified_degree": c.certified_degree,
        "residual": c.residual,
        "residual_order": c.residual_order,
        "passed": c.passed,
        "input_real": c.input_real,
        "chain_max_imag": c.chain_max_imag,
        "reality_preserved": c.reality_preserved,
        "decay_exponents": c.decay_exponents,
        "normal_form": c.normal_form.to_text(),
        "transformed": c.transformed.to_text(),
    })
}

pub fn chain_json(chain: &TransformChain) -> Value {
    Value::Array(
        chain
            .steps()
            .iter()
            .enumerate()
            .map(|(k, w)| {
                json!({
                    "k": k,
                    "shift": w.shift().iter().map(|a| a.to_text()).collect::<Vec<_>>(),
                    "generator": w.generator().to_text(),
                })
            })
            .collect(),
    )
}

pub fn run_json(run: &NormalizationRun) -> Value {
    json!({
        "records": run.records.iter().map(record_json).collect::<Vec<_>>(),
        "certificate": certificate_json(&run.certificate),
        "chain": chain_json(&run.chain),
    })
}

pub fn kam_json(k: &KamRun) -> Value {
    let mut v = run_json(&k.run);
    if let Some(obj) = v.as_object_mut() {
        obj.insert("fitted_b".into(), json!(k.fitted_b));
        obj.insert("radii".into(), json!(k.radii));
        obj.insert("normal_part".into(), json!(k.normal_part.to_text()));
        obj.insert("error_max".into(), json!(k.error.max_abs_coeff()));
    }
    v
}

pub fn drift_json(r: &DriftReport) -> Value {
    json!({
        "samples": r.samples.iter().map(|s| json!({
            "scale": s.scale,
            "z0_norm": s.z0_norm,
            "lambda_star": complexes(&s.lambda_star),
            "drift": s.drift,
            "energy_drift": s.energy_drift,
        })).collect::<Vec<_>>(),
        "max_drift": r.samples.iter().map(|s| s.drift.iter().cloned().fold(0.0, f64::max)).collect::<Vec<_>>(),
        "slopes": r.slopes,
    })
}

/// `R`, `A_k`, `B`, `C_k` and `I²`.
pub fn split_json(s: &NormalFormSplit) -> Value {
    json!({
        "r": s.r.to_text(),
        "a": s.g.a.iter().map(|x| x.to_text()).collect::<Vec<_>>(),
        "b": s.g.b.to_text(),
        "c": s.g.c.iter().map(|x| x.to_text()).collect::<Vec<_>>(),
        "i2": s.i2.to_text(),
    })
}

/// Pretty JSON with a trailing newline, to `path` or stdout.
pub fn emit(value: &Value, path: Option<&Path>) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(std::io::Error::other)?;
    text.push('\n');
    match path {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn float(x: f64) -> String {
    format!("{x:?}")
}

/// `k, s_k, r_coeffsup, r_l1, u_norm` per step.
pub fn write_norms_csv<W: Write>(out: W, records: &[StepRecord]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["k", "s_k", "r_coeffsup", "r_l1", "u_norm"])?;
    for r in records {
        w.write_record([
            r.step.to_string(),
            float(r.radius),
            float(r.r_coeff_sup),
            float(r.r_l1),
            float(r.u_norm),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Difference vector, divisor and its modulus.
pub fn write_divisors_csv<W: Write>(out: W, table: &DivisorTable) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let n = table.entries.first().map_or(0, |e| e.0.len());
    let mut header: Vec<String> = (1..=n).map(|i| format!("k{i}")).collect();
    header.extend(["re", "im", "modulus"].map(String::from));
    w.write_record(&header)?;
    for (k, d) in &table.entries {
        let mut row: Vec<String> = k.iter().map(|x| x.to_string()).collect();
        row.extend([float(d.re), float(d.im), float(d.norm())]);
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// `τ`, the state and the integrals along a trajectory; complex values are
/// split into `_re` and `_im` columns.
pub fn write_trajectory_csv<W: Write>(
    out: W,
    traj: &Trajectory,
    integrals: &[TruncatedSeries],
    t_star: &[C64],
    lambda_star: &[C64],
) -> Result<(), Box<dyn std::error::Error>> {
    let n = t_star.len();
    let ks = integrals
        .iter()
        .map(|k| specialize(k, t_star, lambda_star))
        .collect::<Result<Vec<_>, _>>()?;
    let zeros = vec![C64::new(0.0, 0.0); n];
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["tau".to_string()];
    for name in ["q", "p"] {
        for i in 1..=n {
            header.push(format!("{name}{i}_re"));
            header.push(format!("{name}{i}_im"));
        }
    }
    for m in 1..=ks.len() {
        header.push(format!("K{m}_re"));
        header.push(format!("K{m}_im"));
    }
    w.write_record(&header)?;
    for (tau, z) in traj.times.iter().zip(&traj.states) {
        let mut row = vec![float(*tau)];
        for x in z {
            row.push(float(x.re));
            row.push(float(x.im));
        }
        for k in &ks {
            let v = k.eval(&zeros, &zeros, &z[..n], &z[n..]);
            row.push(float(v.re));
            row.push(float(v.im));
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(full_precision(1.0), "1.0000000000000000e0");
        let phi = singkam_core::arithmetic::golden();
        assert_eq!(full_precision(phi).parse::<f64>().unwrap(), phi);
    }

    #[test]
    fn envelope_has_header() {
        let v = envelope("sigma", json!({"x": 1}));
        assert_eq!(v["schema_version"], SCHEMA_VERSION);
        assert_eq!(v["command"], "sigma");
        assert_eq!(v["x"], 1);
        assert!(v["generated_at"].as_str().unwrap().ends_with('Z'));
    }

    #[test]
    fn norms_csv_columns() {
        let rec = StepRecord {
            step: 1,
            window: (2, 4),
            level: None,
            radius: 0.25,
            r_coeff_sup: 0.01,
            r_l1: 0.02,
            u_norm: 0.5,
            lower: None,
            inner_iterations: 2,
            order_after: Some(5),
            max_after: 1e-3,
        };
        let mut buf = Vec::new();
        write_norms_csv(&mut buf, &[rec]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "k,s_k,r_coeffsup,r_l1,u_norm\n1,0.25,0.01,0.02,0.5\n");
    }
}
