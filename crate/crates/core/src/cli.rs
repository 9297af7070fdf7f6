//! Command-line surface: configuration, result documents, raw digit files and
//! the command drivers behind the `hpse` binary.
//!
//! Every numeric input that reaches the multiprecision code is a decimal
//! string; nothing is routed through binary floating point.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::bigreal::{ExactDecimal, PrecisionCtx};
use crate::eigensolver::{
    locate, obtainable_precision_scan, BoundaryCondition, EigResult, ScanRow, SolveOptions, Solver,
};
use crate::error::{Error, Result};
use crate::estimator::{build_plan_with_margin, default_max_terms, PrecisionPlan, DEFAULT_MARGIN};
use crate::potential::{PotentialSpec, StateIndex};
use crate::series::sum_series;
use crate::splitting::{run_splitting, SplittingReport};

pub const RESULT_SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
/// Environment variable overriding the series term cap.
pub const MAX_TERMS_ENV: &str = "HPSE_MAX_TERMS";
/// Digits per line of a raw digit file.
pub const DIGITS_PER_LINE: usize = 100;
pub const SCAN_HEADER: &str = "x,p_obtained,p_est";
pub const BENCH_HEADER: &str = "P,N,delta_d_obs,wall_ms";

// ---------------------------------------------------------------------------
// configuration

/// Potential config file: `M = 2`, `s = "1"`, `v = ["0", "0"]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialFile {
    #[serde(rename = "M")]
    pub m: usize,
    pub s: String,
    pub v: Vec<String>,
}

impl PotentialFile {
    pub fn into_spec(self) -> Result<PotentialSpec> {
        PotentialSpec::new(self.m, &self.s, &self.v)
    }
}

pub fn load_potential_file(path: &Path) -> Result<PotentialSpec> {
    let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let file: PotentialFile = toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    file.into_spec()
}

/// The potential, from a config file or inline `--M --s --v`.
#[derive(Args, Clone, Debug, Default)]
pub struct PotentialArgs {
    /// Potential config file (`M`, `s`, `v`).
    #[arg(long, conflicts_with_all = ["m", "s", "v"])]
    pub config: Option<PathBuf>,
    /// Degree M of the leading term x^{2M}.
    #[arg(long = "M", id = "m")]
    pub m: Option<usize>,
    /// The parameter s (decimal).
    #[arg(long)]
    pub s: Option<String>,
    /// Coefficients v_0,…,v_{M−1} (comma-separated decimals).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub v: Vec<String>,
}

impl PotentialArgs {
    pub fn resolve(&self) -> Result<PotentialSpec> {
        if let Some(path) = &self.config {
            return load_potential_file(path);
        }
        let m = self.m.ok_or_else(|| Error::Config("give --config or --M/--s/--v".into()))?;
        let s = self.s.as_deref().ok_or_else(|| Error::Config("missing --s".into()))?;
        PotentialSpec::new(m, s, &self.v)
    }
}

/// Term cap from `HPSE_MAX_TERMS`, if set.
pub fn max_terms_override() -> Result<Option<u64>> {
    match std::env::var(MAX_TERMS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::Config(format!("{MAX_TERMS_ENV} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(None),
    }
}

// ---------------------------------------------------------------------------
// documents

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanEcho {
    pub eval_x: String,
    pub working_digits: u64,
    pub delta_d_est: f64,
    pub pest_at_x: f64,
    pub n_terms_est: u64,
}

impl From<&PrecisionPlan> for PlanEcho {
    fn from(p: &PrecisionPlan) -> Self {
        PlanEcho {
            eval_x: p.eval_x.clone(),
            working_digits: p.working_digits,
            delta_d_est: p.delta_d_est,
            pest_at_x: p.pest_at_x,
            n_terms_est: p.n_terms_est,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TelemetryRow {
    pub run: String,
    pub stage: usize,
    pub eval_x: String,
    pub working_digits: u64,
    pub n_terms: u64,
    pub delta_d_observed: f64,
    pub wall_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub schema_version: u32,
    pub tool_version: String,
    pub potential: String,
    pub epsilon: String,
    pub n: u64,
    pub parity: String,
    pub bc: BoundaryCondition,
    pub digits_requested: u64,
    pub digits_certified: u64,
    pub plan: PlanEcho,
    pub certification_x: Option<String>,
    pub telemetry: Vec<TelemetryRow>,
}

impl ResultDocument {
    pub fn from_result(pot: &PotentialSpec, r: &EigResult) -> Self {
        ResultDocument {
            schema_version: RESULT_SCHEMA_VERSION,
            tool_version: TOOL_VERSION.to_string(),
            potential: pot.canonical(),
            epsilon: r.epsilon.clone(),
            n: r.index.n,
            parity: r.index.parity_name().to_string(),
            bc: r.bc,
            digits_requested: r.digits_requested,
            digits_certified: r.digits_certified,
            plan: PlanEcho::from(&r.plan),
            certification_x: r.certification.as_ref().map(|c| c.eval_x.clone()),
            telemetry: r
                .telemetry
                .iter()
                .map(|t| TelemetryRow {
                    run: t.run.clone(),
                    stage: t.stage,
                    eval_x: t.eval_x.clone(),
                    working_digits: t.working_digits,
                    n_terms: t.n_terms,
                    delta_d_observed: t.delta_d_observed,
                    wall_ms: t.wall_time_ms,
                })
                .collect(),
        }
    }

    /// The epsilon cut to the certified digits.
    pub fn certified_epsilon(&self) -> Result<String> {
        truncate_significant(&self.epsilon, self.digits_certified as usize)
    }
}

pub fn to_document<T: Serialize>(value: &T) -> Result<String> {
    toml::to_string(value).map_err(|e| Error::Config(format!("cannot serialise document: {e}")))
}

pub fn from_document<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| Error::Config(format!("unreadable document: {e}")))
}

// ---------------------------------------------------------------------------
// raw digit files

/// Positional form of a decimal literal (`1.5e-7` → `0.00000015`).
pub fn positional(text: &str) -> Result<String> {
    let d = ExactDecimal::parse(text)?;
    let neg = d.mantissa < 0;
    let digits = rug::Integer::from(d.mantissa.abs_ref()).to_string();
    let (int, frac) = if d.exponent >= 0 {
        (format!("{digits}{}", "0".repeat(d.exponent as usize)), String::new())
    } else {
        let k = (-d.exponent) as usize;
        if digits.len() > k {
            (digits[..digits.len() - k].to_string(), digits[digits.len() - k..].to_string())
        } else {
            ("0".to_string(), format!("{}{digits}", "0".repeat(k - digits.len())))
        }
    };
    let sign = if neg && d.mantissa != 0 { "-" } else { "" };
    Ok(format!("{sign}{int}.{frac}"))
}

/// Raw digit layout: line 1 is the integer part, the point and the first 100
/// decimals; every further line holds the next 100 decimals.
pub fn format_digit_file(epsilon: &str) -> Result<String> {
    let text = positional(epsilon)?;
    let (int, frac) = text.split_once('.').expect("positional always has a point");
    let mut out = String::with_capacity(text.len() + text.len() / DIGITS_PER_LINE + 2);
    out.push_str(int);
    out.push('.');
    let frac = frac.as_bytes();
    for (i, chunk) in frac.chunks(DIGITS_PER_LINE).enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(std::str::from_utf8(chunk).expect("ascii digits"));
    }
    out.push('\n');
    Ok(out)
}

pub fn write_digit_file(path: &Path, epsilon: &str) -> Result<()> {
    fs::write(path, format_digit_file(epsilon)?)?;
    Ok(())
}

/// Reassemble a raw digit file into one decimal literal.
pub fn parse_digit_file(text: &str) -> Result<String> {
    if let Some(c) = text.chars().find(|c| !(c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | '\n' | '\r'))) {
        return Err(Error::Parse(format!("unexpected character {c:?} in digit file")));
    }
    let joined: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    ExactDecimal::parse(&joined)?;
    Ok(joined)
}

/// Keep the first `digits` significant digits of a rendered decimal (no
/// rounding: a prefix of the certified expansion).
pub fn truncate_significant(text: &str, digits: usize) -> Result<String> {
    let d = ExactDecimal::parse(text)?;
    let all = rug::Integer::from(d.mantissa.abs_ref()).to_string();
    if digits >= all.len() {
        return Ok(text.to_string());
    }
    let drop = all.len() - digits;
    let kept = d.mantissa.clone() / rug::Integer::from(rug::Integer::u_pow_u(10, drop as u32));
    // keep the exponent of the least significant retained digit
    Ok(ExactDecimal { mantissa: kept, exponent: d.exponent + drop as i64 }.render())
}

// ---------------------------------------------------------------------------
// command drivers (pure functions; the clap layer below only wires them up)

pub fn cmd_plan(pot: &PotentialSpec, idx: StateIndex, digits: u64, margin: u64) -> Result<(f64, PrecisionPlan)> {
    let loc = locate(pot, idx)?;
    let mut plan = build_plan_with_margin(pot, idx, digits, loc.approx, margin)?;
    if let Some(cap) = max_terms_override()? {
        plan.max_terms = cap;
    }
    Ok((loc.approx, plan))
}

pub fn render_plan(pot: &PotentialSpec, idx: StateIndex, approx: f64, plan: &PrecisionPlan) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "potential       {}", pot.canonical());
    let _ = writeln!(s, "state           n = {} ({})", idx.n, idx.parity_name());
    let _ = writeln!(s, "epsilon approx  {approx:.12e}");
    let _ = writeln!(s, "digits P        {}", plan.target_digits);
    let _ = writeln!(s, "x               {}", plan.eval_x);
    let _ = writeln!(s, "P_est(x)        {:.1}", plan.pest_at_x);
    let _ = writeln!(s, "delta_D_est     {:.1}", plan.delta_d_est);
    let _ = writeln!(s, "working D       {}", plan.working_digits);
    let _ = writeln!(s, "N_est           {}", plan.n_terms_est);
    let _ = writeln!(s, "max terms       {}", plan.max_terms);
    s
}

pub fn cmd_solve(pot: &PotentialSpec, idx: StateIndex, opts: &SolveOptions) -> Result<(EigResult, ResultDocument)> {
    let mut opts = opts.clone();
    if opts.max_terms.is_none() {
        opts.max_terms = max_terms_override()?;
    }
    let result = Solver::new(pot.clone(), opts).solve(idx)?;
    let doc = ResultDocument::from_result(pot, &result);
    Ok((result, doc))
}

pub fn cmd_split(s: &str, opts: &SolveOptions) -> Result<SplittingReport> {
    let mut opts = opts.clone();
    if opts.max_terms.is_none() {
        opts.max_terms = max_terms_override()?;
    }
    run_splitting(s, &opts)
}

pub fn scan_csv(rows: &[ScanRow]) -> String {
    let mut out = format!("{SCAN_HEADER}\n");
    for r in rows {
        let _ = writeln!(out, "{},{:.3},{:.3}", r.x, r.p_obtained, r.p_est);
    }
    out
}

/// Obtainable precision on a grid of boundary points. Without a reference,
/// one is computed at `reference_digits`.
pub fn cmd_scan_x(
    pot: &PotentialSpec,
    idx: StateIndex,
    grid: &[String],
    reference: Option<&str>,
    reference_digits: u64,
) -> Result<(Vec<ScanRow>, Vec<String>)> {
    if grid.is_empty() {
        return Ok((Vec::new(), Vec::new()));
    }
    let mut opts = SolveOptions::new(reference_digits);
    opts.max_terms = max_terms_override()?;
    let reference = match reference {
        Some(r) => r.to_string(),
        None => {
            let mut o = opts.clone();
            o.certify = false;
            Solver::new(pot.clone(), o).solve(idx)?.epsilon
        }
    };
    obtainable_precision_scan(pot, idx, grid, &reference, &opts)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub p: u64,
    pub n_terms: u64,
    pub delta_d_obs: f64,
    pub delta_d_est: f64,
    pub wall_ms: f64,
}

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut out = format!("{BENCH_HEADER}\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{:.2},{:.1}", r.p, r.n_terms, r.delta_d_obs, r.wall_ms);
    }
    out
}

/// One full-precision wavefunction evaluation per `P`, at the planned point
/// and an eigenvalue accurate to all `P` digits (so the observed roundoff is
/// the one of a converged solve).
pub fn cmd_bench(pot: &PotentialSpec, ps: &[u64], reference: Option<&str>) -> Result<Vec<BenchRow>> {
    let idx = StateIndex::new(0);
    let Some(&pmax) = ps.iter().max() else { return Ok(Vec::new()) };
    let reference = match reference {
        Some(r) => r.to_string(),
        None => {
            let mut o = SolveOptions::new(pmax);
            o.certify = false;
            o.max_terms = max_terms_override()?;
            Solver::new(pot.clone(), o).solve(idx)?.epsilon
        }
    };
    let loc = locate(pot, idx)?;
    let cap = max_terms_override()?;
    let mut rows = Vec::with_capacity(ps.len());
    for &p in ps {
        let plan = build_plan_with_margin(pot, idx, p, loc.approx, DEFAULT_MARGIN)?;
        let ctx = PrecisionCtx::new(plan.working_digits)?;
        let eps = ctx.parse(&reference)?;
        let x = ctx.parse(&plan.eval_x)?;
        let t0 = Instant::now();
        let se = sum_series(pot, &eps, idx.sigma, &x, &ctx, cap.unwrap_or(plan.max_terms))?;
        let wall_ms = t0.elapsed().as_secs_f64() * 1e3;
        rows.push(BenchRow {
            p,
            n_terms: se.n_terms,
            delta_d_obs: se.delta_d_observed,
            delta_d_est: plan.delta_d_est,
            wall_ms,
        });
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalOutput {
    pub psi: String,
    pub dpsi: String,
    pub n_terms: u64,
    pub peak_index: u64,
    pub delta_d_observed: f64,
    pub converged: bool,
}

/// Sum the series once at `(ε, x)` with `digits` working digits.
pub fn cmd_eval(pot: &PotentialSpec, eps: &str, x: &str, sigma: u8, digits: u64, out_digits: usize) -> Result<EvalOutput> {
    let ctx = PrecisionCtx::new(digits)?;
    let e = ctx.parse(eps)?;
    let xv = ctx.parse(x)?;
    let cap = max_terms_override()?.unwrap_or_else(|| default_max_terms(digits, 0));
    let se = sum_series(pot, &e, sigma, &xv, &ctx, cap)?;
    let nd = out_digits.clamp(1, digits as usize);
    Ok(EvalOutput {
        psi: se.psi.render(nd)?,
        dpsi: se.dpsi.render(nd)?,
        n_terms: se.n_terms,
        peak_index: se.peak_index,
        delta_d_observed: se.delta_d_observed,
        converged: se.converged,
    })
}

// ---------------------------------------------------------------------------
// clap layer

#[derive(Parser, Debug)]
#[command(name = "hpse", version, about = "High-precision Schrödinger eigenvalues by Taylor-series shooting")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct StateArgs {
    /// State index n (0 = ground state).
    #[arg(long, default_value_t = 0)]
    pub n: u64,
    /// Requested significant digits P.
    #[arg(long)]
    pub digits: u64,
    /// Safety margin in digits added to P when choosing x.
    #[arg(long, default_value_t = DEFAULT_MARGIN)]
    pub margin: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the precision plan (x, D, ΔD, N) without high-precision work.
    Plan {
        #[command(flatten)]
        pot: PotentialArgs,
        #[command(flatten)]
        state: StateArgs,
    },
    /// Compute and certify one eigenvalue.
    Solve {
        #[command(flatten)]
        pot: PotentialArgs,
        #[command(flatten)]
        state: StateArgs,
        /// Boundary condition at x: dirichlet or robin.
        #[arg(long, default_value = "dirichlet")]
        bc: BoundaryCondition,
        /// Override the evaluation point x (decimal).
        #[arg(long)]
        x: Option<String>,
        /// Result document path (TOML); printed to stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Raw digit file path.
        #[arg(long)]
        digits_file: Option<PathBuf>,
        /// Checkpoint file, rewritten as the refinement proceeds.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Continue from --checkpoint.
        #[arg(long, requires = "checkpoint")]
        resume: bool,
        /// Skip the certification rerun.
        #[arg(long)]
        no_certify: bool,
    },
    /// Double-well splitting against the Zinn-Justin formula.
    Split {
        /// The parameter s (decimal).
        #[arg(long)]
        s: String,
        #[arg(long)]
        digits: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        no_certify: bool,
    },
    /// Obtainable precision P(x) against P_est(x) (CSV).
    ScanX {
        #[command(flatten)]
        pot: PotentialArgs,
        #[arg(long, default_value_t = 0)]
        n: u64,
        /// Comma-separated decimal x values.
        #[arg(long, value_delimiter = ',')]
        grid: Vec<String>,
        /// Reference eigenvalue: a raw digit file.
        #[arg(long)]
        reference: Option<PathBuf>,
        /// Digits of the reference computed when none is given.
        #[arg(long, default_value_t = 600)]
        reference_digits: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cost sweep over P on the ground state (CSV).
    Bench {
        #[command(flatten)]
        pot: PotentialArgs,
        /// Comma-separated list of P.
        #[arg(long, value_delimiter = ',', default_value = "500,1000,2000,4000")]
        p: Vec<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sum the series once at given ε, x, D (debugging).
    Eval {
        #[command(flatten)]
        pot: PotentialArgs,
        #[arg(long, allow_hyphen_values = true)]
        eps: String,
        #[arg(long)]
        x: String,
        /// Parity σ (0 even, 1 odd).
        #[arg(long, default_value_t = 0)]
        sigma: u8,
        /// Working digits D.
        #[arg(long)]
        digits: u64,
        /// Digits printed for ψ and ψ′.
        #[arg(long, default_value_t = 30)]
        show: usize,
    },
}

/// Exit code contract: 0 ok, 2 configuration, 3 convergence, 4 certification.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CertificationFailure { .. } => 4,
        Error::NonConvergence(_)
        | Error::BracketFailure(_)
        | Error::SignAnomaly(_)
        | Error::Pole
        | Error::Interrupted(_) => 3,
        _ => 2,
    }
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Execute one parsed command, writing human output to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Plan { pot, state } => {
            let pot = pot.resolve()?;
            let idx = StateIndex::new(state.n);
            let (approx, plan) = cmd_plan(&pot, idx, state.digits, state.margin)?;
            out.write_all(render_plan(&pot, idx, approx, &plan).as_bytes())?;
        }
        Command::Solve { pot, state, bc, x, out: doc_path, digits_file, checkpoint, resume, no_certify } => {
            let pot = pot.resolve()?;
            let idx = StateIndex::new(state.n);
            let mut opts = SolveOptions::new(state.digits);
            opts.bc = bc;
            opts.margin = state.margin;
            opts.eval_x = x;
            opts.certify = !no_certify;
            opts.checkpoint = checkpoint;
            opts.resume = resume;
            let (result, doc) = cmd_solve(&pot, idx, &opts)?;
            if let Some(p) = &digits_file {
                write_digit_file(p, &result.epsilon)?;
            }
            emit(out, doc_path.as_deref(), &to_document(&doc)?)?;
            if doc_path.is_some() {
                writeln!(out, "{}", result.epsilon)?;
            }
            if result.digits_certified < state.digits {
                return Err(Error::CertificationFailure {
                    agreed: result.digits_certified as usize,
                    first: result.epsilon.clone(),
                    second: result.certification.map(|c| c.epsilon).unwrap_or_default(),
                });
            }
        }
        Command::Split { s, digits, out: path, no_certify } => {
            let mut opts = SolveOptions::new(digits);
            opts.certify = !no_certify;
            let report = cmd_split(&s, &opts)?;
            emit(out, path.as_deref(), &to_document(&report)?)?;
            if report.beyond_asymptotic_validity {
                writeln!(out, "warning: s = {s} is beyond asymptotic validity of the Zinn-Justin formula")?;
            }
        }
        Command::ScanX { pot, n, grid, reference, reference_digits, out: path } => {
            let pot = pot.resolve()?;
            let reference = reference.map(|p| fs::read_to_string(&p).map_err(Error::from).and_then(|t| parse_digit_file(&t)));
            let reference = reference.transpose()?;
            let (rows, notes) = cmd_scan_x(&pot, StateIndex::new(n), &grid, reference.as_deref(), reference_digits)?;
            for note in notes {
                eprintln!("note: {note}");
            }
            emit(out, path.as_deref(), &scan_csv(&rows))?;
        }
        Command::Bench { pot, p, out: path } => {
            let pot = if pot.config.is_none() && pot.m.is_none() { PotentialSpec::quartic("1")? } else { pot.resolve()? };
            let rows = cmd_bench(&pot, &p, None)?;
            emit(out, path.as_deref(), &bench_csv(&rows))?;
        }
        Command::Eval { pot, eps, x, sigma, digits, show } => {
            let pot = pot.resolve()?;
            let r = cmd_eval(&pot, &eps, &x, sigma, digits, show)?;
            out.write_all(to_document(&r)?.as_bytes())?;
        }
    }
    Ok(())
}

/// Parse arguments, run, and map the outcome to an exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_file_grammar() {
        let f: PotentialFile = toml::from_str("M = 2\ns = \"0.05\"\nv = [\"1\", \"-2\"]\n").unwrap();
        assert_eq!(f.clone().into_spec().unwrap(), PotentialSpec::double_well("0.05").unwrap());
        assert!(toml::from_str::<PotentialFile>("M = 2\ns = 0.05\nv = []\n").is_err(), "s must be a string");
        assert!(toml::from_str::<PotentialFile>("M = 1\ns = \"1\"\nv = [\"0\"]\nx = 1\n").is_err());
    }

    #[test]
    fn inline_potential() {
        let a = PotentialArgs { config: None, m: Some(2), s: Some("1".into()), v: vec!["0".into(), "0".into()] };
        assert_eq!(a.resolve().unwrap(), PotentialSpec::quartic("1").unwrap());
        let bad = PotentialArgs { m: Some(2), s: None, ..Default::default() };
        assert!(matches!(bad.resolve(), Err(Error::Config(_))));
    }

    #[test]
    fn digit_file_layout() {
        let eps = format!("1.{}", "0123456789".repeat(25));
        let text = format_digit_file(&eps).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0].len(), 2 + 100);
        assert_eq!(lines[1].len(), 100);
        assert_eq!(lines[2].len(), 50);
        assert_eq!(parse_digit_file(&text).unwrap(), eps);
        assert!(text.chars().all(|c| c.is_ascii_digit() || c == '.' || c == '\n'));
    }

    #[test]
    fn positional_forms() {
        assert_eq!(positional("3.99e-5").unwrap(), "0.0000399");
        assert_eq!(positional("-1.5").unwrap(), "-1.5");
        assert_eq!(positional("12e2").unwrap(), "1200.");
        assert_eq!(format_digit_file("-2.5e-3").unwrap(), "-0.0025\n");
        assert!(parse_digit_file("1.2x3").is_err());
    }

    #[test]
    fn truncation_keeps_prefix() {
        assert_eq!(truncate_significant("1.0603620904", 5).unwrap(), "1.0603");
        assert_eq!(truncate_significant("0.00012345", 3).unwrap(), "0.000123");
        assert_eq!(truncate_significant("7.0", 10).unwrap(), "7.0");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Config("x".into())), 2);
        assert_eq!(exit_code(&Error::NonConvergence("x".into())), 3);
        assert_eq!(exit_code(&Error::CertificationFailure { agreed: 1, first: String::new(), second: String::new() }), 4);
    }

    #[test]
    fn result_document_roundtrip() {
        let q = PotentialSpec::quartic("1").unwrap();
        let (r, doc) = cmd_solve(&q, StateIndex::new(0), &SolveOptions::new(30)).unwrap();
        let text = to_document(&doc).unwrap();
        assert!(text.contains("schema_version = 1"));
        let back: ResultDocument = from_document(&text).unwrap();
        assert_eq!(back, doc);
        assert!(back.certified_epsilon().unwrap().starts_with("1.06036209048418289964704601669"));
        assert_eq!(back.epsilon, r.epsilon);
    }

    #[test]
    fn scan_and_bench_empty() {
        let q = PotentialSpec::quartic("1").unwrap();
        let (rows, _) = cmd_scan_x(&q, StateIndex::new(0), &[], None, 100).unwrap();
        assert_eq!(scan_csv(&rows), "x,p_obtained,p_est\n");
        assert_eq!(bench_csv(&cmd_bench(&q, &[], None).unwrap()), "P,N,delta_d_obs,wall_ms\n");
    }

    #[test]
    fn clap_surface() {
        let mut buf = Vec::new();
        let code = main_with_args(["hpse", "plan", "--M", "2", "--s", "1", "--v", "0,0", "--digits", "1000"], &mut buf);
        assert_eq!(code, 0);
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("x               15.2"), "{text}");
        let mut buf = Vec::new();
        assert_eq!(main_with_args(["hpse", "plan", "--M", "2", "--digits", "10"], &mut buf), 2);
        assert_eq!(main_with_args(["hpse", "frobnicate"], &mut buf), 2);
        let code = main_with_args(["hpse", "eval", "--M", "1", "--s", "1", "--v", "0", "--eps", "1", "--x", "1", "--digits", "30"], &mut buf);
        assert_eq!(code, 0);
    }
}
