//! Command-line front end.
//!
//! Exit codes: 0 success, 1 domain error (parse, validation, failed
//! checks), 2 numeric failure during integration.

pub mod parse;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::checks::{run_checks, SampleSizes};
use crate::flow::{energy_drift, integrate, FlowError, IntegratorConfig, Method, Trajectory};
use crate::hamilton::{emit_equations, solve_hamiltonian_field, EquationSet};
use crate::lifts::{lift_function, lift_one_form, lift_vector_field, LiftKind, LiftTag};
use crate::manifold::{CoordSystem, OneForm, VectorField};
use crate::symcore::{Coord, Expr};

pub use parse::{parse_bindings, parse_expression, ParseError};

const MAX_M: u32 = 8;
const MAX_K: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Lift,
    Derive,
    Integrate,
    Check,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindArg {
    Vertical,
    Complete,
}

impl From<KindArg> for LiftTag {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Vertical => LiftTag::Vertical,
            KindArg::Complete => LiftTag::Complete,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Rk4,
    Euler,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Rk4 => Method::Rk4,
            MethodArg::Euler => Method::Euler,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// A fully resolved invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub command: Command,
    pub m: u32,
    pub k: u32,
    pub kind: LiftTag,
    pub h: Option<String>,
    /// Treat `h` as already living on `^kN` instead of lifting it.
    pub lifted: bool,
    pub field: Option<String>,
    pub form: Option<String>,
    pub init: Option<String>,
    pub method: Method,
    pub dt: f64,
    pub t_start: f64,
    pub t_end: f64,
    pub out: Option<PathBuf>,
    pub summary: Option<PathBuf>,
    pub format: Option<Format>,
    pub seed: u64,
}

impl RunSpec {
    pub fn new(command: Command) -> Self {
        RunSpec {
            command,
            m: 1,
            k: 0,
            kind: LiftTag::Complete,
            h: None,
            lifted: false,
            field: None,
            form: None,
            init: None,
            method: Method::Rk4,
            dt: 1e-3,
            t_start: 0.0,
            t_end: 10.0,
            out: None,
            summary: None,
            format: None,
            seed: 1,
        }
    }

    pub fn chart(&self) -> Result<CoordSystem, RunError> {
        if self.m == 0 || self.m > MAX_M {
            return Err(RunError::Domain(format!("m must be in 1..={MAX_M}, got {}", self.m)));
        }
        if self.k > MAX_K {
            return Err(RunError::Domain(format!("k must be in 0..={MAX_K}, got {}", self.k)));
        }
        Ok(CoordSystem::new(self.m, self.k).expect("m >= 1"))
    }

    fn lift_kind(&self) -> LiftKind {
        LiftKind { tag: self.kind, order: self.k }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunError {
    Domain(String),
    Numeric(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Domain(_) => 1,
            RunError::Numeric(_) => 2,
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Domain(m) => write!(f, "error[domain]: {m}"),
            RunError::Numeric(m) => write!(f, "error[numeric]: {m}"),
        }
    }
}

impl std::error::Error for RunError {}

fn domain(e: impl fmt::Display) -> RunError {
    RunError::Domain(e.to_string())
}

impl From<FlowError> for RunError {
    fn from(e: FlowError) -> Self {
        match e {
            FlowError::InvalidConfig(_) | FlowError::MissingInitial(_) => RunError::Domain(e.to_string()),
            FlowError::EvaluationFailure { .. } | FlowError::NonFiniteState { .. } => {
                RunError::Numeric(e.to_string())
            }
        }
    }
}

/// Files produced by a successful run, keyed by path (`None` is stdout).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub path: Option<PathBuf>,
    pub contents: String,
}

/// Result of a run: the artifacts that were written and the exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: i32,
    pub artifacts: Vec<Artifact>,
}

/// Computes every artifact in memory first; files are written only after
/// the whole computation succeeded, and removed again if writing fails.
pub fn run(spec: &RunSpec) -> Result<Outcome, RunError> {
    let (exit_code, artifacts) = match spec.command {
        Command::Lift => (0, run_lift(spec)?),
        Command::Derive => (0, run_derive(spec)?),
        Command::Integrate => (0, run_integrate(spec)?),
        Command::Check => run_check(spec)?,
    };
    write_artifacts(&artifacts)?;
    Ok(Outcome { exit_code, artifacts })
}

fn write_artifacts(artifacts: &[Artifact]) -> Result<(), RunError> {
    let mut written: Vec<&Path> = Vec::new();
    for a in artifacts {
        let result = match &a.path {
            Some(p) => fs::write(p, &a.contents).map(|_| written.push(p)),
            None => std::io::stdout().lock().write_all(a.contents.as_bytes()),
        };
        if let Err(e) = result {
            for p in written {
                let _ = fs::remove_file(p);
            }
            if let Some(p) = &a.path {
                let _ = fs::remove_file(p);
            }
            return Err(RunError::Domain(format!("cannot write output: {e}")));
        }
    }
    Ok(())
}

fn expect_format(spec: &RunSpec, allowed: &[Format], default: Format) -> Result<Format, RunError> {
    let f = spec.format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(RunError::Domain(format!(
            "format {f:?} is not available for {:?}",
            spec.command
        )))
    }
}

fn hamiltonian(spec: &RunSpec, chart: CoordSystem) -> Result<Expr, RunError> {
    let text = spec.h.as_deref().ok_or_else(|| domain("--H is required"))?;
    if spec.lifted {
        parse_expression(text, chart).map_err(domain)
    } else {
        let base = parse_expression(text, chart.base()).map_err(domain)?;
        lift_function(&base, spec.lift_kind(), chart).map_err(domain)
    }
}

fn run_lift(spec: &RunSpec) -> Result<Vec<Artifact>, RunError> {
    expect_format(spec, &[Format::Text], Format::Text)?;
    let chart = spec.chart()?;
    let base = chart.base();
    let kind = spec.lift_kind();
    let given = [spec.h.is_some(), spec.field.is_some(), spec.form.is_some()];
    if given.iter().filter(|g| **g).count() != 1 {
        return Err(domain("lift needs exactly one of --H, --field, --form"));
    }
    let text = if let Some(h) = &spec.h {
        let f = parse_expression(h, base).map_err(domain)?;
        format!("{}\n", lift_function(&f, kind, chart).map_err(domain)?)
    } else if let Some(field) = &spec.field {
        let z = VectorField::from_components(base, parse_bindings(field, base).map_err(domain)?)
            .map_err(domain)?;
        let lifted = lift_vector_field(&z, kind, chart).map_err(domain)?;
        lines(lifted.components(), "d/d")
    } else {
        let form = spec.form.as_deref().unwrap_or_default();
        let w = OneForm::from_components(base, parse_bindings(form, base).map_err(domain)?)
            .map_err(domain)?;
        let lifted = lift_one_form(&w, kind, chart).map_err(domain)?;
        lines(lifted.components(), "d")
    };
    Ok(vec![Artifact { path: spec.out.clone(), contents: text }])
}

fn lines<'a>(items: impl Iterator<Item = (&'a Coord, &'a Expr)>, prefix: &str) -> String {
    let mut s = String::new();
    for (c, e) in items {
        s.push_str(&format!("{prefix}{c} : {e}\n"));
    }
    if s.is_empty() {
        s.push_str("0\n");
    }
    s
}

#[derive(Serialize)]
struct ChartDoc {
    m: u32,
    k: u32,
}

#[derive(Serialize)]
struct EquationDoc {
    coord: String,
    rhs: String,
}

#[derive(Serialize)]
struct ObstructionDoc {
    coord: String,
    expr: String,
}

#[derive(Serialize)]
struct DeriveDoc {
    chart: ChartDoc,
    kind: String,
    equations: Vec<EquationDoc>,
    unconstrained: Vec<String>,
    obstructions: Vec<ObstructionDoc>,
}

impl From<&EquationSet> for DeriveDoc {
    fn from(eqs: &EquationSet) -> Self {
        DeriveDoc {
            chart: ChartDoc { m: eqs.chart.m(), k: eqs.chart.k() },
            kind: eqs.kind.tag.to_string(),
            equations: eqs
                .equations
                .iter()
                .map(|e| EquationDoc { coord: e.coord.to_string(), rhs: e.rhs.to_string() })
                .collect(),
            unconstrained: eqs.unconstrained.iter().map(Coord::to_string).collect(),
            obstructions: eqs
                .obstructions
                .iter()
                .map(|(c, e)| ObstructionDoc { coord: c.to_string(), expr: e.to_string() })
                .collect(),
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn run_derive(spec: &RunSpec) -> Result<Vec<Artifact>, RunError> {
    expect_format(spec, &[Format::Json], Format::Json)?;
    let chart = spec.chart()?;
    let h = hamiltonian(spec, chart)?;
    let sys = solve_hamiltonian_field(&h, chart, spec.lift_kind()).map_err(domain)?;
    let doc = DeriveDoc::from(&emit_equations(&sys));
    Ok(vec![Artifact { path: spec.out.clone(), contents: to_json(&doc) }])
}

fn initial_state(spec: &RunSpec, chart: CoordSystem) -> Result<BTreeMap<Coord, Complex64>, RunError> {
    let text = spec.init.as_deref().ok_or_else(|| domain("--init is required"))?;
    let bindings = parse_bindings(text, chart).map_err(domain)?;
    let mut out = BTreeMap::new();
    for (c, e) in bindings {
        if c.is_time() {
            return Err(domain("t cannot be bound by --init; use --t-start"));
        }
        let v = e
            .as_constant()
            .ok_or_else(|| domain(format!("initial value of {c} is not a constant: {e}")))?;
        out.insert(c, v.to_complex64());
    }
    let missing: Vec<String> = chart
        .fiber()
        .into_iter()
        .filter(|c| !out.contains_key(c))
        .map(|c| c.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(domain(format!("--init does not bind {}", missing.join(", "))));
    }
    Ok(out)
}

fn csv_number(x: f64) -> String {
    format!("{x:?}")
}

fn trajectory_csv(traj: &Trajectory) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["t".to_string()];
    for c in &traj.coords()[1..] {
        header.push(format!("re({c})"));
        header.push(format!("im({c})"));
    }
    header.push("re(H)".into());
    header.push("im(H)".into());
    w.write_record(&header).expect("in-memory write");
    for (j, state) in traj.states().iter().enumerate() {
        let mut row = vec![csv_number(traj.times()[j])];
        for v in &state[1..] {
            row.push(csv_number(v.re));
            row.push(csv_number(v.im));
        }
        let h = traj.energies()[j];
        row.push(csv_number(h.re));
        row.push(csv_number(h.im));
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

#[derive(Serialize)]
struct ValueDoc {
    coord: String,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct SummaryDoc {
    chart: ChartDoc,
    kind: String,
    method: String,
    hamiltonian: String,
    dt: f64,
    t_start: f64,
    t_end: f64,
    steps: usize,
    energy_drift: f64,
    final_state: Vec<ValueDoc>,
}

fn summary_path(spec: &RunSpec) -> Option<PathBuf> {
    spec.summary.clone().or_else(|| {
        spec.out.as_ref().map(|p| {
            let mut s = p.clone().into_os_string();
            s.push(".summary.json");
            PathBuf::from(s)
        })
    })
}

fn run_integrate(spec: &RunSpec) -> Result<Vec<Artifact>, RunError> {
    expect_format(spec, &[Format::Csv], Format::Csv)?;
    let chart = spec.chart()?;
    let h = hamiltonian(spec, chart)?;
    let sys = solve_hamiltonian_field(&h, chart, spec.lift_kind()).map_err(domain)?;
    let initial = initial_state(spec, chart)?;
    let cfg = IntegratorConfig::new(spec.method, spec.dt, spec.t_start, spec.t_end)?;
    let traj = integrate(&sys, &initial, &cfg)?;
    let summary = SummaryDoc {
        chart: ChartDoc { m: chart.m(), k: chart.k() },
        kind: spec.kind.to_string(),
        method: spec.method.to_string(),
        hamiltonian: sys.h.to_string(),
        dt: spec.dt,
        t_start: spec.t_start,
        t_end: spec.t_end,
        steps: traj.len() - 1,
        energy_drift: energy_drift(&traj),
        final_state: traj
            .final_state()
            .expect("nonempty trajectory")
            .into_iter()
            .map(|(c, v)| ValueDoc { coord: c.to_string(), re: v.re, im: v.im })
            .collect(),
    };
    let mut artifacts = vec![Artifact { path: spec.out.clone(), contents: trajectory_csv(&traj) }];
    match summary_path(spec) {
        Some(p) => artifacts.push(Artifact { path: Some(p), contents: to_json(&summary) }),
        None => eprint!("{}", to_json(&summary)),
    }
    Ok(artifacts)
}

fn run_check(spec: &RunSpec) -> Result<(i32, Vec<Artifact>), RunError> {
    let format = expect_format(spec, &[Format::Json, Format::Text], Format::Json)?;
    let chart = spec.chart()?;
    let report = run_checks(chart, spec.seed, SampleSizes::default());
    let contents = match format {
        Format::Json => to_json(&report),
        _ => {
            let mut s = String::new();
            for c in &report.checks {
                let status = if c.passed() { "PASS" } else { "FAIL" };
                s.push_str(&format!("{status} {} ({}/{} failed)\n", c.name, c.failures, c.cases));
                for x in &c.counterexamples {
                    s.push_str(&format!("    {x}\n"));
                }
            }
            s.push_str(if report.passed { "all checks passed\n" } else { "some checks failed\n" });
            s
        }
    };
    let code = if report.passed { 0 } else { 1 };
    Ok((code, vec![Artifact { path: spec.out.clone(), contents }]))
}

#[derive(Debug, Parser)]
#[command(name = "hamlift", version, about = "Lifts, Hamiltonian equations and flows on extended complex product manifolds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Lift a function (--H), vector field (--field) or 1-form (--form).
    Lift(CommonArgs),
    /// Derive the Hamiltonian equations as JSON.
    Derive(CommonArgs),
    /// Integrate the Hamiltonian flow; writes a CSV trajectory and a JSON summary.
    Integrate(CommonArgs),
    /// Run the lift, contact and Hamiltonian verification suites.
    Check(CommonArgs),
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct CommonArgs {
    /// TOML file supplying defaults for any of the other flags.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Number of complex fiber coordinates.
    #[arg(long)]
    pub m: Option<u32>,
    /// Extension order.
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,
    /// Hamiltonian (or function to lift) on the base chart.
    #[arg(long = "H")]
    #[serde(rename = "H")]
    pub h: Option<String>,
    /// Read --H as an expression on the k-th extension and do not lift it.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub lifted: Option<bool>,
    /// Vector field components, e.g. "t=1,z0_1=zb0_1".
    #[arg(long)]
    pub field: Option<String>,
    /// 1-form components, e.g. "t=1,z0_1=zb0_1".
    #[arg(long)]
    pub form: Option<String>,
    /// Initial values, e.g. "z0_1=1+0i,zb0_1=1-0i".
    #[arg(long)]
    pub init: Option<String>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long = "t-start", allow_hyphen_values = true)]
    pub t_start: Option<f64>,
    #[arg(long = "t-end", allow_hyphen_values = true)]
    pub t_end: Option<f64>,
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Summary path for `integrate` (default: <out>.summary.json).
    #[arg(long)]
    pub summary: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Seed for the `check` corpus.
    #[arg(long)]
    pub seed: Option<u64>,
}

impl CommonArgs {
    /// Fills unset fields from `defaults`.
    fn or(self, defaults: CommonArgs) -> CommonArgs {
        CommonArgs {
            config: self.config,
            m: self.m.or(defaults.m),
            k: self.k.or(defaults.k),
            kind: self.kind.or(defaults.kind),
            h: self.h.or(defaults.h),
            lifted: self.lifted.or(defaults.lifted),
            field: self.field.or(defaults.field),
            form: self.form.or(defaults.form),
            init: self.init.or(defaults.init),
            dt: self.dt.or(defaults.dt),
            t_start: self.t_start.or(defaults.t_start),
            t_end: self.t_end.or(defaults.t_end),
            method: self.method.or(defaults.method),
            out: self.out.or(defaults.out),
            summary: self.summary.or(defaults.summary),
            format: self.format.or(defaults.format),
            seed: self.seed.or(defaults.seed),
        }
    }
}

/// Parses a config file body.
pub fn parse_config(text: &str) -> Result<CommonArgs, RunError> {
    toml::from_str(text).map_err(|e| domain(format!("invalid config: {e}")))
}

/// Resolves flags plus an optional config file into a [`RunSpec`].
pub fn resolve(command: Command, args: CommonArgs) -> Result<RunSpec, RunError> {
    let args = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| domain(format!("cannot read config {}: {e}", path.display())))?;
            let defaults = parse_config(&text)?;
            args.or(defaults)
        }
        None => args,
    };
    let d = RunSpec::new(command);
    Ok(RunSpec {
        command,
        m: args.m.unwrap_or(d.m),
        k: args.k.unwrap_or(d.k),
        kind: args.kind.map(LiftTag::from).unwrap_or(d.kind),
        h: args.h,
        lifted: args.lifted.unwrap_or(d.lifted),
        field: args.field,
        form: args.form,
        init: args.init,
        method: args.method.map(Method::from).unwrap_or(d.method),
        dt: args.dt.unwrap_or(d.dt),
        t_start: args.t_start.unwrap_or(d.t_start),
        t_end: args.t_end.unwrap_or(d.t_end),
        out: args.out,
        summary: args.summary,
        format: args.format,
        seed: args.seed.unwrap_or(d.seed),
    })
}

/// Entry point used by the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (command, args) = match cli.command {
        CliCommand::Lift(a) => (Command::Lift, a),
        CliCommand::Derive(a) => (Command::Derive, a),
        CliCommand::Integrate(a) => (Command::Integrate, a),
        CliCommand::Check(a) => (Command::Check, a),
    };
    match resolve(command, args).and_then(|spec| run(&spec)) {
        Ok(outcome) => outcome.exit_code,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derive_oscillator_json() {
        let mut spec = RunSpec::new(Command::Derive);
        spec.h = Some("z_1*zb_1".into());
        let dir = tempfile::tempdir().unwrap();
        spec.out = Some(dir.path().join("eq.json"));
        run(&spec).unwrap();
        let doc: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join("eq.json")).unwrap()).unwrap();
        assert_eq!(doc["chart"]["m"], 1);
        assert_eq!(doc["equations"][0]["coord"], "t");
        assert_eq!(doc["equations"][1]["coord"], "z0_1");
        assert_eq!(doc["equations"][1]["rhs"], "(-i)*z0_1");
        assert_eq!(doc["equations"][2]["rhs"], "i*zb0_1");
    }

    #[test]
    fn vertical_unconstrained_count() {
        let mut spec = RunSpec::new(Command::Derive);
        spec.h = Some("z_1*zb_1".into());
        spec.kind = LiftTag::Vertical;
        spec.k = 2;
        let dir = tempfile::tempdir().unwrap();
        spec.out = Some(dir.path().join("eq.json"));
        run(&spec).unwrap();
        let doc: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join("eq.json")).unwrap()).unwrap();
        assert_eq!(doc["unconstrained"].as_array().unwrap().len(), 4);
    }

    #[test]
    fn errors_map_to_exit_codes() {
        let mut spec = RunSpec::new(Command::Derive);
        spec.h = Some("z1_1".into());
        assert_eq!(run(&spec).unwrap_err().exit_code(), 1);

        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("traj.csv");
        let mut spec = RunSpec::new(Command::Integrate);
        spec.h = Some("i*z_1^4*zb_1".into());
        spec.init = Some("z_1=10,zb_1=10".into());
        spec.method = Method::Euler;
        spec.dt = 0.5;
        spec.out = Some(out.clone());
        assert_eq!(run(&spec).unwrap_err().exit_code(), 2);
        assert!(!out.exists());
    }

    #[test]
    fn config_file_supplies_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("run.toml");
        fs::write(&cfg, "m = 2\nk = 1\nkind = \"vertical\"\nH = \"z_1*zb_2\"\n").unwrap();
        let args = CommonArgs { config: Some(cfg), k: Some(2), ..Default::default() };
        let spec = resolve(Command::Derive, args).unwrap();
        assert_eq!((spec.m, spec.k, spec.kind), (2, 2, LiftTag::Vertical));
        assert_eq!(spec.h.as_deref(), Some("z_1*zb_2"));
        assert!(parse_config("bogus = 1").is_err());
    }

    #[test]
    fn lift_outputs() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("lift.txt");
        let mut spec = RunSpec::new(Command::Lift);
        spec.k = 1;
        spec.h = Some("z_1*zb_1".into());
        spec.out = Some(out.clone());
        run(&spec).unwrap();
        assert_eq!(fs::read_to_string(&out).unwrap(), "z0_1*zb1_1 + zb0_1*z1_1\n");

        spec.h = None;
        spec.field = Some("t=1,z_1=z_1".into());
        run(&spec).unwrap();
        assert_eq!(fs::read_to_string(&out).unwrap(), "d/dt : 1\nd/dz0_1 : z0_1\nd/dz1_1 : z1_1\n");
    }
}
