//! `unitrace` command line: one JSON config in, JSON/CSV artifacts out.
//!
//! Exit codes: 0 success, 1 I/O or configuration problem, 2 a hypothesis of
//! the trace formula fails (or the family has no crystalline expansion),
//! 3 a verification ran but did not pass.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::corpus;
use crate::error::{Error, Result};
use crate::family::{FamilySpec, ObservableFamily, UnitaryFamily};
use crate::linalg::ComplexMatrix;
use crate::measure::{
    abel_exp_sum, build_measure, crystalline_expand, measure_document, verify_trace_formula, GaussianTestFunction,
    VerificationReport,
};
use crate::newton::remainder_terms;
use crate::output::{fmt17, write_atomic};
use crate::spectral_flow::{find_crossings, phase_curves, scan_eigenphases};
use crate::trace_formula::{abel_kernel_eval, abel_sum_direct, crossing_weight, AbelParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_HYPOTHESIS: i32 = 2;
pub const EXIT_NOT_VERIFIED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "unitrace", version, about = "Trace formula for one-parameter unitary families")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct CommonArgs {
    /// Run configuration (JSON)
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory; overrides `output_dir` from the config
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Locate the k where U(k) has eigenvalue 1; writes crossings.json
    FindCrossings(CommonArgs),
    /// Compare both sides of the trace formula; writes verify_report.json
    Verify(CommonArgs),
    /// Sample a curve over the k-grid; writes scan_<what>.csv
    Scan {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum, default_value_t = ScanWhat::Abel)]
        what: ScanWhat,
    },
    /// Exponential-sum expansion plus atoms; writes crystalline.json
    Crystalline {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 4)]
        m_max: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanWhat {
    Abel,
    Phases,
    Newton,
}

impl ScanWhat {
    fn name(self) -> &'static str {
        match self {
            ScanWhat::Abel => "abel",
            ScanWhat::Phases => "phases",
            ScanWhat::Newton => "newton",
        }
    }
}

/// Family as written in a config: any [`FamilySpec`] or a seeded random
/// `diag_phase`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum FamilyConfig {
    DiagPhase { lengths: Vec<f64>, s: ComplexMatrix },
    ExpPath { h: ComplexMatrix, u0: ComplexMatrix },
    Scalar { omega: f64 },
    RandomDiagPhase {
        n: usize,
        #[serde(default = "default_length_range")]
        length_range: (f64, f64),
    },
}

fn default_length_range() -> (f64, f64) {
    (0.5, 2.0)
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum ObservableConfig {
    Constant { a: ComplexMatrix },
    DerivativeOfU,
    Identity,
    RandomHermitian,
    RandomUnitary,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Step {
    Auto(AutoTag),
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AutoTag {
    Auto,
}

fn default_step() -> Step {
    Step::Auto(AutoTag::Auto)
}

fn default_schedule() -> Vec<f64> {
    vec![0.9, 0.99, 0.999]
}

fn default_observable() -> ObservableConfig {
    ObservableConfig::Identity
}

fn default_output_dir() -> PathBuf {
    PathBuf::from(".")
}

fn default_newton_n() -> usize {
    100
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub family: FamilyConfig,
    #[serde(default = "default_observable")]
    pub observable: ObservableConfig,
    pub k_range: (f64, f64),
    #[serde(default = "default_step")]
    pub step: Step,
    #[serde(default = "default_schedule")]
    pub t_schedule: Vec<f64>,
    #[serde(default)]
    pub test_functions: Vec<GaussianTestFunction>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub seed: u64,
    /// `N` of the partial sums in the newton scan.
    #[serde(default = "default_newton_n")]
    pub newton_n: usize,
}

/// A config with its random parts drawn and everything validated.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub family: UnitaryFamily,
    pub observable: ObservableFamily,
    pub k_range: (f64, f64),
    pub step: f64,
    pub config: RunConfig,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn resolve(&self) -> Result<Resolved> {
        let (lo, hi) = self.k_range;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Config(format!("k_range [{lo}, {hi}] is empty")));
        }
        crate::measure::check_schedule(&self.t_schedule).map_err(|e| Error::Config(e.to_string()))?;
        for g in &self.test_functions {
            g.validate().map_err(|e| Error::Config(e.to_string()))?;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let family = match &self.family {
            FamilyConfig::DiagPhase { lengths, s } => UnitaryFamily::diag_phase(lengths.clone(), s.clone()),
            FamilyConfig::ExpPath { h, u0 } => UnitaryFamily::exp_path(h.clone(), u0.clone()),
            FamilyConfig::Scalar { omega } => UnitaryFamily::scalar(*omega),
            FamilyConfig::RandomDiagPhase { n, length_range } => {
                let (a, b) = *length_range;
                if *n == 0 || !(0.0 < a && a < b && b.is_finite()) {
                    return Err(Error::Config("random_diag_phase needs n > 0 and 0 < lo < hi".into()));
                }
                Ok(corpus::random_diag_phase(&mut rng, *n, *length_range))
            }
        }
        .map_err(|e| Error::Config(format!("family: {e}")))?;
        let n = family.dim();
        let observable = match &self.observable {
            ObservableConfig::Constant { a } => ObservableFamily::Constant { a: a.clone() },
            ObservableConfig::DerivativeOfU => ObservableFamily::DerivativeOfU,
            ObservableConfig::Identity => ObservableFamily::Identity,
            ObservableConfig::RandomHermitian => ObservableFamily::Constant { a: corpus::random_hermitian(&mut rng, n) },
            ObservableConfig::RandomUnitary => ObservableFamily::Constant { a: corpus::random_unitary(&mut rng, n) },
        };
        observable.evaluate(&family, lo).map_err(|e| Error::Config(format!("observable: {e}")))?;
        let step = match self.step {
            Step::Auto(_) => family.default_step(),
            Step::Fixed(s) if s > 0.0 && s.is_finite() => s,
            Step::Fixed(s) => return Err(Error::Config(format!("step must be positive, got {s}"))),
        };
        Ok(Resolved {
            family,
            observable,
            k_range: self.k_range,
            step,
            config: self.clone(),
        })
    }
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli.command),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_FAILURE
            } else {
                EXIT_OK
            }
        }
    }
}

pub fn run(command: &Command) -> i32 {
    let (common, result) = match command {
        Command::FindCrossings(c) => (c, with_config(c, cmd_find_crossings)),
        Command::Verify(c) => (c, with_config(c, cmd_verify)),
        Command::Scan { common, what } => (common, with_config(common, |r, out| cmd_scan(r, *what, out))),
        Command::Crystalline { common, m_max } => (common, with_config(common, |r, out| cmd_crystalline(r, *m_max, out))),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("unitrace: {}: {e}", common.config.display());
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_hypothesis_violation() || matches!(e, Error::UnsupportedFamily(_)) {
        EXIT_HYPOTHESIS
    } else {
        EXIT_FAILURE
    }
}

fn with_config<F>(common: &CommonArgs, cmd: F) -> Result<i32>
where
    F: FnOnce(&Resolved, &Path) -> Result<i32>,
{
    let resolved = RunConfig::load(&common.config)?.resolve()?;
    let out = common.out.clone().unwrap_or_else(|| resolved.config.output_dir.clone());
    std::fs::create_dir_all(&out)?;
    cmd(&resolved, &out)
}

fn c17(z: Complex64) -> Value {
    json!([fmt17(z.re), fmt17(z.im)])
}

fn write_json(path: &Path, value: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_atomic(path, text.as_bytes())?;
    log::info!("wrote {}", path.display());
    Ok(())
}

fn family_json(r: &Resolved) -> Result<Value> {
    Ok(serde_json::to_value(r.family.spec())?)
}

/// Writes `crossings.json`: position, speed, residual and weight of every
/// validated crossing.
pub fn cmd_find_crossings(r: &Resolved, out: &Path) -> Result<i32> {
    let (lo, hi) = r.k_range;
    let crossings = find_crossings(&r.family, lo, hi, r.step)?;
    let mut rows = Vec::with_capacity(crossings.len());
    for c in &crossings {
        rows.push(json!({
            "k0": fmt17(c.k0),
            "track": c.track_index,
            "speed": c17(c.speed),
            "abs_speed": fmt17(c.speed.norm()),
            "residual": fmt17(c.residual),
            "abs_det": fmt17(c.abs_det),
            "weight": c17(crossing_weight(&r.family, &r.observable, c)?),
        }));
    }
    println!("{} crossing(s) in [{lo}, {hi}]", crossings.len());
    write_json(
        &out.join("crossings.json"),
        &json!({
            "family": family_json(r)?,
            "observable": serde_json::to_value(&r.observable)?,
            "k_range": [fmt17(lo), fmt17(hi)],
            "step": fmt17(r.step),
            "crossings": rows,
        }),
    )?;
    Ok(EXIT_OK)
}

fn report_json(rep: &VerificationReport) -> Value {
    let g = &rep.test_function;
    json!({
        "test_function": {"center": fmt17(g.center), "width": fmt17(g.width), "amplitude": c17(g.amplitude)},
        "n_atoms": rep.n_atoms,
        "rows": rep.rows.iter().map(|row| json!({
            "t": fmt17(row.t),
            "lhs": c17(row.lhs),
            "rhs": c17(row.rhs),
            "abs_err": fmt17(row.abs_err),
        })).collect::<Vec<_>>(),
        "scale": fmt17(rep.scale),
        "rel_err": fmt17(rep.rel_err),
        "threshold": fmt17(rep.threshold),
        "monotone": rep.monotone,
        "extrapolated_lhs": c17(rep.extrapolated),
        "pass": rep.pass,
    })
}

/// Writes `verify_report.json`; exit 0 iff every test function passes.
pub fn cmd_verify(r: &Resolved, out: &Path) -> Result<i32> {
    if r.config.test_functions.is_empty() {
        return Err(Error::Config("verify needs at least one entry in test_functions".into()));
    }
    let mut reports = Vec::new();
    for g in &r.config.test_functions {
        let rep = verify_trace_formula(&r.family, &r.observable, g, &r.config.t_schedule)?;
        println!(
            "{} g(center={}, width={}): rel_err {:.3e} (threshold {:.3e}), monotone {}",
            if rep.pass { "PASS" } else { "FAIL" },
            g.center,
            g.width,
            rep.rel_err,
            rep.threshold,
            rep.monotone
        );
        reports.push(rep);
    }
    let all_pass = reports.iter().all(|r| r.pass);
    write_json(
        &out.join("verify_report.json"),
        &json!({
            "family": family_json(r)?,
            "observable": serde_json::to_value(&r.observable)?,
            "t_schedule": r.config.t_schedule.iter().map(|&t| fmt17(t)).collect::<Vec<_>>(),
            "reports": reports.iter().map(report_json).collect::<Vec<_>>(),
            "pass": all_pass,
        }),
    )?;
    Ok(if all_pass { EXIT_OK } else { EXIT_NOT_VERIFIED })
}

fn grid(r: &Resolved) -> Vec<f64> {
    let (lo, hi) = r.k_range;
    let steps = ((hi - lo) / r.step).ceil() as usize;
    (0..=steps).map(|i| (lo + i as f64 * r.step).min(hi)).collect()
}

/// Writes `scan_<what>.csv` over the k-grid.
pub fn cmd_scan(r: &Resolved, what: ScanWhat, out: &Path) -> Result<i32> {
    let mut csv = String::new();
    match what {
        ScanWhat::Abel => {
            let t = *r.config.t_schedule.last().expect("validated schedule");
            csv.push_str("k,value_re,value_im\n");
            for k in grid(r) {
                let v = abel_kernel_eval(&r.family, &r.observable, k, t)?;
                writeln!(csv, "{},{},{}", fmt17(k), fmt17(v.re), fmt17(v.im)).expect("string write");
            }
        }
        ScanWhat::Phases => {
            let (lo, hi) = r.k_range;
            let track = scan_eigenphases(&r.family, lo, hi, r.step)?;
            csv.push('k');
            for j in 1..=track.n_tracks() {
                write!(csv, ",theta_{j}").expect("string write");
            }
            csv.push_str(",abs_det\n");
            for (k, phases, det) in phase_curves(&r.family, &track) {
                csv.push_str(&fmt17(k));
                for p in phases {
                    write!(csv, ",{}", fmt17(p)).expect("string write");
                }
                writeln!(csv, ",{}", fmt17(det)).expect("string write");
            }
        }
        ScanWhat::Newton => {
            csv.push_str("k,partial_sum_re,partial_sum_im,remainder_re,remainder_im,abs_h1\n");
            for k in grid(r) {
                let (abs_h1, partial, rem) = remainder_terms(&r.family.evaluate(k), r.config.newton_n)?;
                writeln!(
                    csv,
                    "{},{},{},{},{},{}",
                    fmt17(k),
                    fmt17(partial.re),
                    fmt17(partial.im),
                    fmt17(rem.re),
                    fmt17(rem.im),
                    fmt17(abs_h1)
                )
                .expect("string write");
            }
        }
    }
    let path = out.join(format!("scan_{}.csv", what.name()));
    write_atomic(&path, csv.as_bytes())?;
    log::info!("wrote {}", path.display());
    Ok(EXIT_OK)
}

/// Points at which the expansion is checked against the direct Abel sum.
const CONSISTENCY_POINTS: usize = 16;

/// Writes `crystalline.json`: the exponential-sum terms up to `m_max`, the
/// atomic measure on `k_range`, and the largest deviation of the Abel-weighted
/// expansion from `2π · abel_sum_direct` over a few k.
pub fn cmd_crystalline(r: &Resolved, m_max: usize, out: &Path) -> Result<i32> {
    if m_max == 0 {
        return Err(Error::Config("--m-max must be positive".into()));
    }
    let terms = crystalline_expand(&r.family, &r.observable, m_max)?;
    let (lo, hi) = r.k_range;
    let mu = build_measure(&r.family, &r.observable, lo, hi)?;
    let t = *r.config.t_schedule.last().expect("validated schedule");
    let params = AbelParams::new(t, m_max)?;
    let mut max_diff: f64 = 0.0;
    for i in 0..CONSISTENCY_POINTS {
        let k = lo + (hi - lo) * i as f64 / (CONSISTENCY_POINTS - 1) as f64;
        let direct = abel_sum_direct(&r.family, &r.observable, k, &params)? * (2.0 * std::f64::consts::PI);
        max_diff = max_diff.max((abel_exp_sum(&terms, k, t) - direct).norm());
    }
    println!("{} term(s), {} atom(s), consistency {:.3e}", terms.len(), mu.len(), max_diff);
    let spec: FamilySpec = r.family.spec();
    let mut doc = serde_json::to_value(measure_document(&mu, &terms, Some(&spec)))?;
    doc["metadata"]["observable"] = serde_json::to_value(&r.observable)?;
    doc["metadata"]["m_max"] = json!(m_max);
    doc["consistency"] = json!({"t": fmt17(t), "points": CONSISTENCY_POINTS, "max_abs_diff": fmt17(max_diff)});
    write_json(&out.join("crystalline.json"), &doc)?;
    Ok(EXIT_OK)
}
