//! Command dispatch and exit codes.
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | a check or certificate failed |
//! | 2 | invalid input: arguments, configuration, expressions |
//! | 3 | the computation failed: resonance, divergence, blow-up, ... |
//!
//! Errors are written to stderr as one JSON object.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use singkam_core::arithmetic::{default_kmax, in_class, profile};
use singkam_core::engine::{formal_normalize, kam_iterate, transformed_integrals, KamRun, NormalizationRun};
use singkam_core::flow::{drift_report, integrate, HamiltonianField};
use singkam_core::homological::DivisorTable;
use singkam_core::norms::{norm_report, ActiveVars};
use singkam_core::series::mu;
use singkam_core::splitting::split;
use singkam_core::Error;

use crate::config::{parse_index_norm, parse_lower, parse_vector, ConfigError, Mode, RunConfig};
use crate::report::{self, envelope};
use crate::suite;

#[derive(Parser, Debug)]
#[command(name = "singkam", version, about = "Normal forms of perturbed Hamiltonians near the 2n-gon singularity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Diophantine profile σ(α)_k, k = 0..kmax
    Sigma {
        /// Comma-separated frequencies, e.g. `1,golden`
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long)]
        kmax: Option<u32>,
        /// Lower sequence for the class test
        #[arg(long, default_value = "geometric 0.1 0.5")]
        lower: String,
        /// Index norm: sup, l1 or l2
        #[arg(long, default_value = "sup")]
        norm: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Order-doubling normalization (and the analytic iteration for mode = kam or both)
    Normalize {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Per-step norms as CSV
        #[arg(long)]
        norms_csv: Option<PathBuf>,
    },
    /// Analytic iteration with norm logging
    Kam {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        norms_csv: Option<PathBuf>,
    },
    /// Drift of the transformed integrals along the flow
    VerifyFlow {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Trajectory at the first scale as CSV
        #[arg(long)]
        trajectory_csv: Option<PathBuf>,
    },
    /// Acceptance suite
    Check {
        #[arg(long, default_value_t = 20)]
        seed: u64,
        /// Comma-separated criterion numbers
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Five-component split of the configured Hamiltonian
    Split {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Norms of the configured Hamiltonian at one radius
    Norms {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        radius: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Divisor table (α, k) for 1 ≤ ‖k‖ ≤ 2^level as CSV
    Divisors {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long)]
        level: u32,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Config(ConfigError),
    Core(Error),
    Io(String),
    /// A check ran and failed; the report is already written.
    Failed(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn core_kind(e: &Error) -> (&'static str, i32) {
    match e {
        Error::Nonterminating { .. } => ("nonterminating", 3),
        Error::Resonance { .. } => ("resonance", 3),
        Error::Divergence { .. } => ("divergence", 3),
        Error::BlowUp { .. } => ("blow_up", 3),
        Error::NotInClass { .. } => ("not_in_class", 3),
        Error::OutsideWindow { .. } => ("outside_window", 3),
        Error::ZeroSeries => ("zero_series", 3),
        Error::Dimension(_) => ("dimension", 2),
        Error::InvalidCaps(_) => ("invalid_caps", 2),
        Error::CapMismatch => ("cap_mismatch", 2),
        Error::ExponentOverflow(_) => ("exponent_overflow", 2),
        Error::InvalidRadius(_) => ("invalid_radius", 2),
        Error::RadiusOrder { .. } => ("radius_order", 2),
        Error::OutsideDomain { .. } => ("outside_domain", 2),
        Error::InactiveVariable => ("inactive_variable", 2),
        Error::EnumerationBudget { .. } => ("enumeration_budget", 2),
        Error::DegenerateFrequency(_) => ("degenerate_frequency", 2),
        Error::NonPositiveSequence { .. } => ("non_positive_sequence", 2),
        Error::CapOverflow { .. } => ("cap_overflow", 2),
        Error::NotPerturbation(_) => ("not_perturbation", 2),
        Error::InvalidArgument(_) => ("invalid_argument", 2),
    }
}

impl Failure {
    /// `(kind, exit code, message)`.
    pub fn describe(&self) -> (&'static str, i32, String) {
        match self {
            Failure::Usage(m) => ("usage", 2, m.clone()),
            Failure::Config(e) => ("config", 2, e.to_string()),
            Failure::Core(e) => {
                let (kind, code) = core_kind(e);
                (kind, code, e.to_string())
            }
            Failure::Io(m) => ("io", 2, m.clone()),
            Failure::Failed(m) => ("check_failed", 1, m.clone()),
        }
    }

    pub fn to_json(&self) -> Value {
        let (kind, code, message) = self.describe();
        let mut v = json!({ "error": { "kind": kind, "exit_code": code, "message": message } });
        if let Failure::Core(Error::Resonance { witness, divisor }) = self {
            v["error"]["witness"] = json!(witness);
            v["error"]["divisor"] = json!(divisor);
        }
        if let Failure::Config(ConfigError::Parse { key, source }) = self {
            v["error"]["key"] = json!(key);
            v["error"]["position"] = json!(source.position());
        }
        v
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            return fail(&Failure::Usage(e.to_string()));
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(f) => fail(&f),
    }
}

fn fail(f: &Failure) -> i32 {
    let (_, code, _) = f.describe();
    eprintln!("{}", f.to_json());
    code
}

fn dispatch(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Sigma {
            alpha,
            kmax,
            lower,
            norm,
            out,
        } => sigma(&alpha, kmax, &lower, &norm, out.as_deref()),
        Command::Normalize { config, out, norms_csv } => normalize(&config, out.as_deref(), norms_csv.as_deref()),
        Command::Kam { config, out, norms_csv } => kam(&config, out.as_deref(), norms_csv.as_deref()),
        Command::VerifyFlow {
            config,
            out,
            trajectory_csv,
        } => verify_flow(&config, out.as_deref(), trajectory_csv.as_deref()),
        Command::Check { seed, only, out } => check(seed, &only, out.as_deref()),
        Command::Split { config, out } => {
            let cfg = RunConfig::from_file(&config)?;
            let payload = json!({
                "config": report::config_echo(&cfg),
                "split": report::split_json(&split(&cfg.hamiltonian)),
            });
            Ok(report::emit(&envelope("split", payload), out.as_deref())?)
        }
        Command::Norms { config, radius, out } => {
            let cfg = RunConfig::from_file(&config)?;
            let h = &cfg.hamiltonian;
            let rep = norm_report(h, radius, ActiveVars::of(h))?;
            let payload = json!({
                "config": report::config_echo(&cfg),
                "norms": report::norm_report_json(&rep),
            });
            Ok(report::emit(&envelope("norms", payload), out.as_deref())?)
        }
        Command::Divisors { alpha, level, csv } => {
            let alpha = parse_vector("alpha", &alpha)?;
            let table = DivisorTable::new(&alpha, level)?;
            match csv {
                Some(p) => report::write_divisors_csv(std::fs::File::create(p)?, &table),
                None => report::write_divisors_csv(std::io::stdout().lock(), &table),
            }
            .map_err(|e| Failure::Io(e.to_string()))
        }
    }
}

fn sigma(alpha: &str, kmax: Option<u32>, lower: &str, norm: &str, out: Option<&Path>) -> Result<(), Failure> {
    let alpha = parse_vector("alpha", alpha)?;
    if alpha.is_empty() || alpha.len() > singkam_core::MAX_DIM {
        return Err(Error::Dimension(alpha.len()).into());
    }
    let kmax = kmax.unwrap_or(default_kmax(alpha.len()));
    let lower = parse_lower("lower", lower)?;
    let norm = parse_index_norm("norm", norm)?;
    let prof = profile(&alpha, &lower, kmax, norm)?;
    let payload = json!({
        "kmax": kmax,
        "lower": report::lower_name(&lower),
        "index_norm": report::norm_name(norm),
        "profile": report::profile_json(&prof),
    });
    Ok(report::emit(&envelope("sigma", payload), out)?)
}

fn write_norms(path: Option<&Path>, run: &NormalizationRun) -> Result<(), Failure> {
    if let Some(p) = path {
        report::write_norms_csv(std::fs::File::create(p)?, &run.records).map_err(|e| Failure::Io(e.to_string()))?;
    }
    Ok(())
}

/// The analytic iteration requires `α` in the arithmetic class of the lower
/// sequence at every level it uses.
fn run_kam(cfg: &RunConfig) -> Result<(Value, KamRun), Failure> {
    let class = in_class(&cfg.alpha, &cfg.lower, cfg.k + 1, cfg.norm)?;
    if !class.member {
        return Err(Error::NotInClass {
            first_fail: class.first_fail.unwrap_or(0),
        }
        .into());
    }
    let run = kam_iterate(&cfg.hamiltonian, &cfg.alpha, &cfg.kam_options())?;
    let class_json = json!({
        "member": class.member,
        "sigma": class.sigma.iter().map(|e| e.value).collect::<Vec<_>>(),
        "a": class.lower,
    });
    Ok((class_json, run))
}

fn agreement(a: &NormalizationRun, b: &NormalizationRun) -> Value {
    let (x, y) = (&a.certificate.normal_form, &b.certificate.normal_form);
    let mut shared = 0;
    let mut worst: f64 = 0.0;
    for (m, u) in x.iter() {
        let v = y.coeff(m);
        if v.norm() == 0.0 {
            continue;
        }
        shared += 1;
        worst = worst.max((u - v).norm() / u.norm().max(v.norm()));
    }
    json!({ "shared_monomials": shared, "max_relative_difference": worst, "within_1e-9": worst <= 1e-9 })
}

fn normalize(config: &Path, out: Option<&Path>, norms_csv: Option<&Path>) -> Result<(), Failure> {
    let cfg = RunConfig::from_file(config)?;
    let mut payload = json!({ "config": report::config_echo(&cfg) });
    let mut passed = true;
    let formal = match cfg.mode {
        Mode::Formal | Mode::Both => Some(formal_normalize(&cfg.hamiltonian, &cfg.alpha, cfg.k, cfg.s0)?),
        Mode::Kam => None,
    };
    let analytic = match cfg.mode {
        Mode::Kam | Mode::Both => Some(run_kam(&cfg)?),
        Mode::Formal => None,
    };
    if let Some(run) = &formal {
        passed &= run.certificate.passed;
        payload["formal"] = report::run_json(run);
        write_norms(norms_csv, run)?;
    }
    if let Some((class, run)) = &analytic {
        passed &= run.run.certificate.passed;
        payload["kam"] = report::kam_json(run);
        payload["kam"]["class"] = class.clone();
        if formal.is_none() {
            write_norms(norms_csv, &run.run)?;
        }
    }
    if let (Some(a), Some((_, b))) = (&formal, &analytic) {
        let agree = agreement(a, &b.run);
        passed &= agree["within_1e-9"].as_bool().unwrap_or(false);
        payload["agreement"] = agree;
    }
    payload["passed"] = json!(passed);
    report::emit(&envelope("normalize", payload), out)?;
    if passed {
        Ok(())
    } else {
        Err(Failure::Failed("normalization certificate failed".into()))
    }
}

fn kam(config: &Path, out: Option<&Path>, norms_csv: Option<&Path>) -> Result<(), Failure> {
    let cfg = RunConfig::from_file(config)?;
    let (class, run) = run_kam(&cfg)?;
    write_norms(norms_csv, &run.run)?;
    let passed = run.run.certificate.passed;
    let mut body = report::kam_json(&run);
    body["class"] = class;
    let payload = json!({
        "config": report::config_echo(&cfg),
        "kam": body,
        "passed": passed,
    });
    report::emit(&envelope("kam", payload), out)?;
    if passed {
        Ok(())
    } else {
        Err(Failure::Failed("normalization certificate failed".into()))
    }
}

fn verify_flow(config: &Path, out: Option<&Path>, trajectory_csv: Option<&Path>) -> Result<(), Failure> {
    let cfg = RunConfig::from_file(config)?;
    let flow = cfg.flow_or_default();
    let caps = cfg.caps;
    let chain = match cfg.mode {
        Mode::Kam => run_kam(&cfg)?.1.run.chain,
        Mode::Formal | Mode::Both => formal_normalize(&cfg.hamiltonian, &cfg.alpha, cfg.k, cfg.s0)?.chain,
    };
    let integrals = transformed_integrals(&chain, caps)?;
    let mus: Vec<_> = (0..caps.n).map(|i| mu(caps, i)).collect();
    let rep = drift_report(&cfg.hamiltonian, &integrals, &flow)?;
    let raw = drift_report(&cfg.hamiltonian, &mus, &flow)?;
    if let Some(path) = trajectory_csv {
        let sample = &rep.samples[0];
        let z0: Vec<_> = flow.z0.iter().map(|x| x * sample.scale).collect();
        let field = HamiltonianField::new(&cfg.hamiltonian, &flow.t_star, &sample.lambda_star)?;
        let traj = integrate(&field, &z0, flow.horizon, flow.step)?;
        report::write_trajectory_csv(
            std::fs::File::create(path)?,
            &traj,
            &integrals,
            &flow.t_star,
            &sample.lambda_star,
        )
        .map_err(|e| Failure::Io(e.to_string()))?;
    }
    let payload = json!({
        "config": report::config_echo(&cfg),
        "flow": {
            "t_star": flow.t_star.iter().map(|z| report::complex(*z)).collect::<Vec<_>>(),
            "z0": flow.z0.iter().map(|z| report::complex(*z)).collect::<Vec<_>>(),
            "horizon": flow.horizon,
            "step": flow.step,
            "scales": flow.scales,
        },
        "integrals": report::drift_json(&rep),
        "raw_products": report::drift_json(&raw),
        "ratio_at_first_scale": raw.max_drift(0) / rep.max_drift(0),
    });
    Ok(report::emit(&envelope("verify-flow", payload), out)?)
}

fn check(seed: u64, only: &[u32], out: Option<&Path>) -> Result<(), Failure> {
    if let Some(bad) = only.iter().find(|id| !(1..=suite::CRITERIA.len() as u32).contains(id)) {
        return Err(Failure::Usage(format!("no criterion {bad}")));
    }
    eprintln!("seed {seed}, {} threads", suite::thread_count());
    let rep = suite::run_suite(seed, only);
    for o in &rep.outcomes {
        eprintln!(
            "criterion {:>2} {} {}: {} ({:.2} s)",
            o.id,
            if o.passed { "PASS" } else { "FAIL" },
            o.name,
            o.measured,
            o.seconds
        );
    }
    eprintln!("{}/{} passed", rep.passed, rep.total);
    let payload = json!({ "suite": rep });
    report::emit(&envelope("check", payload), out)?;
    if rep.all_passed() {
        Ok(())
    } else {
        Err(Failure::Failed(format!("{} of {} criteria failed", rep.total - rep.passed, rep.total)))
    }
}
