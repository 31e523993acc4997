//! Command-line driver: parses a [`RunConfig`], runs the requested
//! verification and renders the report as JSON or CSV.

mod report;
pub mod selftest;

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use zeta_reciprocity::calibration::{calibrate, Calibration, DESK_HEIGHTS, DESK_PAIRS};
use zeta_reciprocity::characters::check_odd_prime;
use zeta_reciprocity::moments::{verify_corollary, verify_theorem, ReciprocityInstance};
use zeta_reciprocity::numerics::QuadraturePlan;
use zeta_reciprocity::oracles::{decomposition_check, residue_main_term_check};
use zeta_reciprocity::Error;

pub use report::{Invariant, Report};

/// Environment variable naming the directory reports go to when `--output`
/// is absent.
pub const OUT_DIR_ENV: &str = "ZETA_RECIPROCITY_OUT_DIR";

/// Tolerance for quantities that vanish identically.
pub const EXACT_TOL: f64 = 1e-9;

pub mod exit {
    pub const PASS: i32 = 0;
    pub const INVALID_INPUT: i32 = 2;
    pub const TOLERANCE: i32 = 3;
    pub const IO: i32 = 4;
}

#[derive(Debug, Parser)]
#[command(name = "zeta-reciprocity", version, about = "Numerical verification of the twisted second moment reciprocity")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArgs,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Compare the twisted moment with main term plus dual moment.
    VerifyTheorem(InstanceArgs),
    /// Compare D(p,q) with D(q,p).
    VerifyCorollary(InstanceArgs),
    /// Ledger of every intermediate quantity of the proof at s = 0.
    Intermediates(InstanceArgs),
    /// Theorem reports over all valid (p, q, T) combinations.
    Sweep(SweepArgs),
    /// Runs the invariant suite and prints a pass/fail table.
    Selftest(SelftestArgs),
    /// Recomputes the calibration constants over the desk grid.
    Calibrate(CalibrateArgs),
}

#[derive(Debug, Args)]
pub struct InstanceArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub q: u64,
    #[arg(long = "T")]
    pub big_t: f64,
    #[command(flatten)]
    pub plan: PlanArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub p: Vec<u64>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub q: Vec<u64>,
    #[arg(long = "T", value_delimiter = ',', required = true)]
    pub big_t: Vec<f64>,
    #[command(flatten)]
    pub plan: PlanArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    /// Deliberately corrupt one routine to confirm the suite notices.
    #[arg(long, value_enum)]
    pub inject_fault: Option<Fault>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    #[command(flatten)]
    pub plan: PlanArgs,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Negates every Gauss sum.
    GaussSumSign,
}

#[derive(Debug, Clone, Default, Args)]
pub struct PlanArgs {
    #[arg(long)]
    pub lhs_cutoff_factor: Option<f64>,
    #[arg(long)]
    pub dual_cutoff: Option<f64>,
    #[arg(long)]
    pub panel_width: Option<f64>,
    #[arg(long)]
    pub nodes_per_panel: Option<usize>,
    #[arg(long)]
    pub em_start: Option<usize>,
    #[arg(long)]
    pub em_bernoulli_terms: Option<usize>,
    #[arg(long)]
    pub sum_cutoff_multiplier: Option<f64>,
    #[arg(long)]
    pub y_max: Option<f64>,
    #[arg(long)]
    pub target_abs_tol: Option<f64>,
}

impl PlanArgs {
    pub fn apply(&self, mut plan: QuadraturePlan) -> QuadraturePlan {
        macro_rules! set {
            ($($f:ident),*) => { $(if let Some(v) = self.$f { plan.$f = v; })* };
        }
        set!(
            lhs_cutoff_factor,
            dual_cutoff,
            panel_width,
            nodes_per_panel,
            em_start,
            em_bernoulli_terms,
            sum_cutoff_multiplier,
            y_max,
            target_abs_tol
        );
        plan
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    VerifyTheorem,
    VerifyCorollary,
    Intermediates,
    Sweep,
    Selftest,
    Calibrate,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::VerifyTheorem => "verify-theorem",
            Command::VerifyCorollary => "verify-corollary",
            Command::Intermediates => "intermediates",
            Command::Sweep => "sweep",
            Command::Selftest => "selftest",
            Command::Calibrate => "calibrate",
        }
    }
}

/// Everything a run depends on. Serialized verbatim into the report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub p: Vec<u64>,
    pub q: Vec<u64>,
    #[serde(rename = "T")]
    pub big_t: Vec<f64>,
    pub plan: QuadraturePlan,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub fault: Option<Fault>,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> RunConfig {
        let base = QuadraturePlan::default();
        let single = |command, a: InstanceArgs| RunConfig {
            command,
            p: vec![a.p],
            q: vec![a.q],
            big_t: vec![a.big_t],
            plan: a.plan.apply(base),
            output: a.output.output,
            format: a.output.format,
            fault: None,
        };
        match cli.command {
            CommandArgs::VerifyTheorem(a) => single(Command::VerifyTheorem, a),
            CommandArgs::VerifyCorollary(a) => single(Command::VerifyCorollary, a),
            CommandArgs::Intermediates(a) => single(Command::Intermediates, a),
            CommandArgs::Sweep(a) => RunConfig {
                command: Command::Sweep,
                p: a.p,
                q: a.q,
                big_t: a.big_t,
                plan: a.plan.apply(base),
                output: a.output.output,
                format: a.output.format,
                fault: None,
            },
            CommandArgs::Selftest(a) => RunConfig {
                command: Command::Selftest,
                p: vec![],
                q: vec![],
                big_t: vec![],
                plan: base,
                output: a.output.output,
                format: a.output.format,
                fault: a.inject_fault,
            },
            CommandArgs::Calibrate(a) => RunConfig {
                command: Command::Calibrate,
                p: DESK_PAIRS.iter().map(|x| x.0).collect(),
                q: DESK_PAIRS.iter().map(|x| x.1).collect(),
                big_t: DESK_HEIGHTS.to_vec(),
                plan: a.plan.apply(base),
                output: a.output,
                format: Format::Json,
                fault: None,
            },
        }
    }

    /// Instances in `(p, q, T)` order. Lists are combined as a grid and
    /// pairs with `p = q` are skipped.
    pub fn instances(&self) -> Result<Vec<ReciprocityInstance>, Error> {
        if self.p.is_empty() || self.q.is_empty() || self.big_t.is_empty() {
            return Err(Error::InvalidInstance("p, q and T lists must be nonempty".into()));
        }
        for &n in self.p.iter().chain(&self.q) {
            check_odd_prime(n)?;
        }
        let mut out = Vec::new();
        for &p in &self.p {
            for &q in &self.q {
                if p == q {
                    continue;
                }
                for &t in &self.big_t {
                    out.push(ReciprocityInstance::new(p, q, t)?);
                }
            }
        }
        if out.is_empty() {
            return Err(Error::InvalidInstance("no instance with p != q".into()));
        }
        out.sort_by(|a, b| {
            (a.p(), a.q())
                .cmp(&(b.p(), b.q()))
                .then(a.big_t().total_cmp(&b.big_t()))
        });
        out.dedup();
        Ok(out)
    }
}

/// Outcome of a run: the exit status and the report (absent when the input
/// was rejected before any computation).
#[derive(Debug)]
pub struct Outcome {
    pub status: i32,
    pub report: Option<Report>,
    pub message: Option<String>,
}

pub fn status_for(error: &Error) -> i32 {
    match error {
        Error::ToleranceNotMet { .. } | Error::NonFinite(_) => exit::TOLERANCE,
        _ => exit::INVALID_INPUT,
    }
}

fn failed(error: Error) -> Outcome {
    Outcome {
        status: status_for(&error),
        report: None,
        message: Some(error.to_string()),
    }
}

/// Runs the configured command, writes the artifact and returns the status.
pub fn run(config: &RunConfig) -> Outcome {
    if let Err(e) = config.plan.validate() {
        return failed(e);
    }
    let report = match compute(config) {
        Ok(r) => r,
        Err(e) => return failed(e),
    };
    let status = if report.passed() { exit::PASS } else { exit::TOLERANCE };
    let message = if config.command == Command::Selftest {
        Some(report.table())
    } else {
        None
    };
    let outcome = Outcome {
        status,
        report: Some(report),
        message,
    };
    match emit(config, outcome.report.as_ref().expect("set above")) {
        Ok(()) => outcome,
        Err(e) => Outcome {
            status: exit::IO,
            message: Some(format!("io failure: {e}")),
            ..outcome
        },
    }
}

fn compute(config: &RunConfig) -> Result<Report, Error> {
    let plan = &config.plan;
    let mut report = Report::new(config);
    let cal = Calibration::stored();
    match config.command {
        Command::VerifyTheorem | Command::Sweep => {
            let instances = config.instances()?;
            let reports = instances
                .par_iter()
                .map(|inst| verify_theorem(inst, plan))
                .collect::<Result<Vec<_>, _>>()?;
            for r in &reports {
                let tag = format!("[{},{},{:?}]", r.p, r.q, r.big_t);
                report.check(format!("normalized_residual{tag}"), r.normalized_residual.abs(), cal.theorem_bound());
                report.check(format!("dual_imag_residual{tag}"), r.dual_imag_residual, EXACT_TOL);
                report.check(format!("quadrature_error{tag}"), r.quadrature_error_estimate, plan.target_abs_tol);
                report.add_result(r);
            }
            report.set_rows(reports.iter().map(report::theorem_row).collect(), report::THEOREM_COLUMNS);
        }
        Command::VerifyCorollary => {
            let inst = single(config)?;
            let r = verify_corollary(inst.p(), inst.q(), inst.big_t(), plan)?;
            report.check("normalized_difference", r.normalized_difference.abs(), cal.corollary_bound());
            report.check("imag_residual", r.imag_residual, EXACT_TOL);
            report.add_result(&r);
            report.set_rows(vec![report::corollary_row(&r)], report::COROLLARY_COLUMNS);
        }
        Command::Intermediates => {
            let inst = single(config)?;
            let ledger = decomposition_check(&inst, plan)?;
            let residue = residue_main_term_check(&inst)?;
            let root = (inst.p() as f64 / inst.q() as f64).sqrt();
            report.check("decomposition_residual", ledger.decomposition_residual, 1e-6);
            report.check("approx_gap", ledger.approx_gap, cal.approx_gap_bound() * root);
            report.check("f1_0", ledger.f1_0.abs(), cal.f1_bound() * root);
            report.check("f3_0", ledger.f3_0.abs(), cal.f3_bound() * root);
            report.check("pole_correction", ledger.pole_correction().norm(), cal.pole_bound());
            report.check("f0_imag", ledger.f0_direct_im.abs(), EXACT_TOL);
            report.check("residue_main_term", residue.diff, 1e-8);
            report.add_result(&ledger);
            report.add_result(&residue);
            report.set_rows(vec![report::ledger_row(&ledger)], report::LEDGER_COLUMNS);
        }
        Command::Selftest => selftest::run_checks(&mut report, config.fault)?,
        Command::Calibrate => {
            let c = calibrate(&DESK_PAIRS, &DESK_HEIGHTS, plan)?;
            report.add_result(&c);
        }
    }
    Ok(report)
}

fn single(config: &RunConfig) -> Result<ReciprocityInstance, Error> {
    let all = config.instances()?;
    match all.as_slice() {
        [one] => Ok(*one),
        _ => Err(Error::InvalidInstance("expected exactly one instance".into())),
    }
}

/// Destination of the artifact: `--output`, else the environment directory,
/// else standard output (`None`).
pub fn destination(config: &RunConfig) -> Option<PathBuf> {
    if let Some(path) = &config.output {
        return Some(path.clone());
    }
    let dir = std::env::var_os(OUT_DIR_ENV)?;
    let ext = match config.format {
        Format::Json => "json",
        Format::Csv => "csv",
    };
    Some(PathBuf::from(dir).join(format!("{}.{ext}", config.command.name())))
}

fn emit(config: &RunConfig, report: &Report) -> std::io::Result<()> {
    let body = if config.command == Command::Calibrate {
        // the calibration file itself, loadable by `Calibration::stored`
        let mut s = serde_json::to_string_pretty(&report.results()[0]).map_err(std::io::Error::other)?;
        s.push('\n');
        s
    } else {
        match config.format {
            Format::Json => report.to_json(),
            Format::Csv => report.to_csv()?,
        }
    };
    match destination(config) {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent)?;
            }
            fs::write(path, body)
        }
        None if config.command == Command::Selftest => Ok(()),
        None => std::io::stdout().write_all(body.as_bytes()),
    }
}
