//! Run configuration: a flat INI file with an optional `[flow]` section.
//!
//! ```ini
//! n = 2
//! deg_cap = 16
//! t_cap = 2
//! alpha = 1, golden
//! hamiltonian = (alpha1+t1)*q1*p1 + (alpha2+t2)*q2*p2 + 0.01*(q1^2*q2 + p1*p2^2)
//! k = 3
//! mode = both
//! lower = geometric 0.1 0.5
//!
//! [flow]
//! lambda_star = level
//! scales = 1, 0.5, 0.25
//! ```
//!
//! Every key is optional except `n`, `alpha` and `hamiltonian`. Unknown keys
//! and sections are rejected.

use ini::Ini;
use singkam_core::arithmetic::{default_kmax, IndexNorm, LowerSeq};
use singkam_core::engine::KamOptions;
use singkam_core::flow::{FlowConfig, LambdaChoice};
use singkam_core::homological::InverseMode;
use singkam_core::series::DEFAULT_ZERO_TOL;
use singkam_core::{Caps, TruncatedSeries, C64};

use crate::parse::{parse_constant, parse_poly, ParseError};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("config syntax: {0}")]
    Ini(String),
    #[error("missing key `{0}`")]
    Missing(&'static str),
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("unknown section `{0}`")]
    UnknownSection(String),
    #[error("key `{key}`: {msg}")]
    Invalid { key: String, msg: String },
    #[error("key `{key}`: {source}")]
    Parse {
        key: String,
        #[source]
        source: ParseError,
    },
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Formal,
    Kam,
    Both,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Formal => "formal",
            Mode::Kam => "kam",
            Mode::Both => "both",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub caps: Caps,
    pub alpha: Vec<C64>,
    pub hamiltonian: TruncatedSeries,
    pub k: u32,
    pub s0: f64,
    pub mode: Mode,
    pub lower: LowerSeq,
    pub inverse: InverseMode,
    pub norm: IndexNorm,
    pub kmax: u32,
    pub seed: u64,
    pub flow: Option<FlowConfig>,
    /// The file as read.
    pub raw: String,
}

const MAIN_KEYS: &[&str] = &[
    "n",
    "deg_cap",
    "t_cap",
    "zero_tol",
    "alpha",
    "hamiltonian",
    "k",
    "s0",
    "mode",
    "lower",
    "inverse",
    "index_norm",
    "kmax",
    "seed",
];

const FLOW_KEYS: &[&str] = &["t_star", "lambda_star", "z0", "horizon", "step", "scales"];

fn invalid(key: &str, msg: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key: key.to_string(),
        msg: msg.into(),
    }
}

fn number<T: std::str::FromStr>(key: &str, text: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    text.trim().parse().map_err(|e: T::Err| invalid(key, e.to_string()))
}

fn real(key: &str, text: &str) -> Result<f64, ConfigError> {
    let z = complex(key, text)?;
    if z.im != 0.0 {
        return Err(invalid(key, "expected a real number"));
    }
    Ok(z.re)
}

fn complex(key: &str, text: &str) -> Result<C64, ConfigError> {
    parse_constant(text).map_err(|source| ConfigError::Parse {
        key: key.to_string(),
        source,
    })
}

/// Splits on commas outside parentheses.
fn items(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(text[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(text[start..].trim());
    out
}

/// A comma-separated list of constant expressions.
pub fn parse_vector(key: &str, text: &str) -> Result<Vec<C64>, ConfigError> {
    items(text).into_iter().map(|s| complex(key, s)).collect()
}

fn vector_of_len(key: &str, text: &str, len: usize) -> Result<Vec<C64>, ConfigError> {
    let v = parse_vector(key, text)?;
    if v.len() != len {
        return Err(invalid(key, format!("expected {len} entries, got {}", v.len())));
    }
    Ok(v)
}

pub fn parse_lower(key: &str, text: &str) -> Result<LowerSeq, ConfigError> {
    let mut words = text.split_whitespace();
    let seq = match words.next() {
        Some("geometric") => {
            let rest: Vec<&str> = words.collect();
            if rest.len() != 2 {
                return Err(invalid(key, "expected `geometric <c> <rho>`"));
            }
            LowerSeq::Geometric {
                c: real(key, rest[0])?,
                rho: real(key, rest[1])?,
            }
        }
        Some("list") => {
            let rest = text.trim_start()["list".len()..].trim();
            let values = items(rest)
                .into_iter()
                .map(|s| real(key, s))
                .collect::<Result<Vec<_>, _>>()?;
            LowerSeq::List(values)
        }
        _ => return Err(invalid(key, "expected `geometric <c> <rho>` or `list <a0>, <a1>, ...`")),
    };
    seq.validate(0).map_err(|e| invalid(key, e.to_string()))?;
    Ok(seq)
}

impl RunConfig {
    pub fn from_file(path: &std::path::Path) -> Result<Self, ConfigError> {
        let raw = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.display().to_string(),
            msg: e.to_string(),
        })?;
        Self::from_text(&raw)
    }

    pub fn from_text(raw: &str) -> Result<Self, ConfigError> {
        let ini = Ini::load_from_str(raw).map_err(|e| ConfigError::Ini(e.to_string()))?;
        for (section, props) in ini.iter() {
            let allowed = match section {
                None => MAIN_KEYS,
                Some("flow") => FLOW_KEYS,
                Some(other) => return Err(ConfigError::UnknownSection(other.to_string())),
            };
            for (key, _) in props.iter() {
                if !allowed.contains(&key) {
                    return Err(ConfigError::UnknownKey(key.to_string()));
                }
            }
        }
        let main = ini.general_section();
        let get = |key: &'static str| main.get(key);
        let need = |key: &'static str| get(key).ok_or(ConfigError::Missing(key));

        let n: usize = number("n", need("n")?)?;
        let deg_cap: u32 = get("deg_cap").map(|s| number("deg_cap", s)).transpose()?.unwrap_or(16);
        let t_cap: u32 = get("t_cap").map(|s| number("t_cap", s)).transpose()?.unwrap_or(2);
        let zero_tol = get("zero_tol")
            .map(|s| real("zero_tol", s))
            .transpose()?
            .unwrap_or(DEFAULT_ZERO_TOL);
        let caps = Caps::with_tol(n, deg_cap, t_cap, zero_tol).map_err(|e| invalid("n", e.to_string()))?;
        let alpha = vector_of_len("alpha", need("alpha")?, n)?;
        let hamiltonian = parse_poly(need("hamiltonian")?, caps, &alpha).map_err(|source| ConfigError::Parse {
            key: "hamiltonian".into(),
            source,
        })?;
        let k: u32 = get("k").map(|s| number("k", s)).transpose()?.unwrap_or(3);
        let s0 = get("s0").map(|s| real("s0", s)).transpose()?.unwrap_or(0.25);
        singkam_core::norms::check_radius(s0).map_err(|e| invalid("s0", e.to_string()))?;
        let mode = match get("mode").unwrap_or("both").trim() {
            "formal" => Mode::Formal,
            "kam" => Mode::Kam,
            "both" => Mode::Both,
            other => return Err(invalid("mode", format!("`{other}` is not formal, kam or both"))),
        };
        let lower = get("lower")
            .map(|s| parse_lower("lower", s))
            .transpose()?
            .unwrap_or(LowerSeq::Geometric { c: 0.1, rho: 0.5 });
        let inverse = match get("inverse").unwrap_or("tseries").trim() {
            "tseries" => InverseMode::TSeries,
            "frozen" => InverseMode::Frozen,
            other => return Err(invalid("inverse", format!("`{other}` is not tseries or frozen"))),
        };
        let norm = parse_index_norm("index_norm", get("index_norm").unwrap_or("sup"))?;
        let kmax = get("kmax")
            .map(|s| number("kmax", s))
            .transpose()?
            .unwrap_or(default_kmax(n));
        let seed: u64 = get("seed").map(|s| number("seed", s)).transpose()?.unwrap_or(20);

        let flow = match ini.section(Some("flow")) {
            None => None,
            Some(props) => {
                let mut cfg = FlowConfig::standard(n);
                if let Some(s) = props.get("t_star") {
                    cfg.t_star = vector_of_len("t_star", s, n)?;
                }
                if let Some(s) = props.get("lambda_star") {
                    cfg.lambda = if s.trim() == "level" {
                        LambdaChoice::OnLevelSet
                    } else {
                        LambdaChoice::Fixed(vector_of_len("lambda_star", s, n)?)
                    };
                }
                if let Some(s) = props.get("z0") {
                    cfg.z0 = vector_of_len("z0", s, 2 * n)?;
                }
                if let Some(s) = props.get("horizon") {
                    cfg.horizon = real("horizon", s)?;
                    if !(cfg.horizon > 0.0 && cfg.horizon.is_finite()) {
                        return Err(invalid("horizon", "must be positive"));
                    }
                }
                if let Some(s) = props.get("step") {
                    cfg.step = real("step", s)?;
                    if !(cfg.step > 0.0 && cfg.step.is_finite()) {
                        return Err(invalid("step", "must be positive"));
                    }
                }
                if let Some(s) = props.get("scales") {
                    cfg.scales = items(s).into_iter().map(|x| real("scales", x)).collect::<Result<_, _>>()?;
                    if cfg.scales.is_empty() || cfg.scales.iter().any(|x| !(*x > 0.0)) {
                        return Err(invalid("scales", "must be positive"));
                    }
                }
                Some(cfg)
            }
        };

        Ok(RunConfig {
            caps,
            alpha,
            hamiltonian,
            k,
            s0,
            mode,
            lower,
            inverse,
            norm,
            kmax,
            seed,
            flow,
            raw: raw.to_string(),
        })
    }

    pub fn kam_options(&self) -> KamOptions {
        KamOptions {
            k_steps: self.k,
            lower: self.lower.clone(),
            s0: self.s0,
            inverse: self.inverse,
        }
    }

    /// The flow block, or the standard one when the file has none.
    pub fn flow_or_default(&self) -> FlowConfig {
        self.flow.clone().unwrap_or_else(|| FlowConfig::standard(self.caps.n))
    }
}

pub fn parse_index_norm(key: &str, text: &str) -> Result<IndexNorm, ConfigError> {
    match text.trim() {
        "sup" => Ok(IndexNorm::Sup),
        "l1" => Ok(IndexNorm::L1),
        "l2" => Ok(IndexNorm::L2),
        other => Err(invalid(key, format!("`{other}` is not sup, l1 or l2"))),
    }
}

/// The benchmark run: `α = (1, φ)`, `H = H_0 + 0.01(q1²q2 + p1p2²)`, three
/// windows, degree cap 16.
pub const BENCHMARK: &str = "\
n = 2
deg_cap = 16
t_cap = 2
zero_tol = 1e-14
alpha = 1, golden
hamiltonian = (alpha1+t1)*q1*p1 + (alpha2+t2)*q2*p2 + 0.01*(q1^2*q2 + p1*p2^2)
k = 3
s0 = 0.25
mode = both
lower = geometric 0.1 0.5
inverse = tseries
seed = 20

[flow]
t_star = 0, 0
lambda_star = level
horizon = 1
step = 1e-3
scales = 1, 0.5, 0.25
";
