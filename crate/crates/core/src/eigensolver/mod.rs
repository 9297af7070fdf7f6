//! Locating and refining eigenvalues.
//!
//! A state is first located in double precision (WKB estimate plus Prüfer
//! state counting, which fixes the index), then refined by a precision
//! ladder on the boundary mismatch at the planned point, and finally
//! certified by an independent rerun at a larger evaluation point.

pub mod bracket;
mod ladder;

use std::path::PathBuf;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::bigreal::{BigReal, PrecisionCtx};
use crate::checkpoint::{self, Checkpoint, Phase, CHECKPOINT_VERSION};
use crate::error::{Error, Result};
use crate::estimator::{
    absolute_digits, build_plan_with_margin, choose_x, pest, plan_at_x, PrecisionPlan, DEFAULT_MARGIN,
};
use crate::potential::{PotentialSpec, StateIndex};

pub use bracket::{count_below, locate, low_precision_estimate, Located};
pub use ladder::mismatch;
use ladder::{LadderRun, StageState, GUARD_DIGITS};

/// Extra digits of the certification rerun's evaluation point.
pub const CERTIFY_EXTRA_DIGITS: u64 = 20;

/// Boundary condition imposed at the evaluation point.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    /// ψ(x) = 0.
    #[default]
    Dirichlet,
    /// −sψ′/ψ = √(V(x) − ε), the leading-order decaying log-derivative.
    Robin,
}

impl std::str::FromStr for BoundaryCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dirichlet" => Ok(BoundaryCondition::Dirichlet),
            "robin" => Ok(BoundaryCondition::Robin),
            other => Err(Error::Config(format!("unknown boundary condition {other:?} (dirichlet|robin)"))),
        }
    }
}

/// One full-precision mismatch evaluation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalTelemetry {
    /// `primary` or `certify`.
    pub run: String,
    pub stage: usize,
    pub eval_x: String,
    pub working_digits: u64,
    pub n_terms: u64,
    pub delta_d_observed: f64,
    pub wall_time_ms: f64,
    /// Leading digits of the ε at which the mismatch was evaluated.
    pub eps_sample: String,
}

/// Serialised collector shared by concurrent evaluations.
#[derive(Clone, Debug, Default)]
pub struct TelemetrySink(Arc<Mutex<Vec<EvalTelemetry>>>);

impl TelemetrySink {
    pub fn push(&self, t: EvalTelemetry) {
        self.0.lock().expect("telemetry lock").push(t);
    }

    pub fn snapshot(&self) -> Vec<EvalTelemetry> {
        self.0.lock().expect("telemetry lock").clone()
    }

    pub fn len(&self) -> usize {
        self.0.lock().expect("telemetry lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Outcome of the certification rerun.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certification {
    pub eval_x: String,
    pub working_digits: u64,
    pub epsilon: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigResult {
    /// The eigenvalue, `P` significant digits plus guard digits.
    pub epsilon: String,
    pub index: StateIndex,
    pub digits_requested: u64,
    /// Leading digits shared with the certification rerun (equal to the
    /// rendered length when certification is skipped).
    pub digits_certified: u64,
    pub certification: Option<Certification>,
    pub plan: PrecisionPlan,
    pub bc: BoundaryCondition,
    pub telemetry: Vec<EvalTelemetry>,
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Requested significant digits `P`.
    pub digits: u64,
    pub bc: BoundaryCondition,
    pub margin: u64,
    /// Override of the series term cap.
    pub max_terms: Option<u64>,
    /// Evaluation point override (plain decimal); the plan is built around it.
    pub eval_x: Option<String>,
    pub certify: bool,
    pub checkpoint: Option<PathBuf>,
    pub resume: bool,
    /// Stop (with [`Error::Interrupted`]) once this many evaluations have
    /// been checkpointed; simulates a killed job.
    pub stop_after_evaluations: Option<u64>,
}

impl SolveOptions {
    pub fn new(digits: u64) -> Self {
        SolveOptions {
            digits,
            bc: BoundaryCondition::Dirichlet,
            margin: DEFAULT_MARGIN,
            max_terms: None,
            eval_x: None,
            certify: true,
            checkpoint: None,
            resume: false,
            stop_after_evaluations: None,
        }
    }
}

/// Solver for one potential; collects telemetry across all its runs.
pub struct Solver {
    pot: PotentialSpec,
    opts: SolveOptions,
    sink: TelemetrySink,
}

impl Solver {
    pub fn new(pot: PotentialSpec, opts: SolveOptions) -> Self {
        Solver { pot, opts, sink: TelemetrySink::default() }
    }

    pub fn potential(&self) -> &PotentialSpec {
        &self.pot
    }

    pub fn options(&self) -> &SolveOptions {
        &self.opts
    }

    pub fn telemetry(&self) -> Vec<EvalTelemetry> {
        self.sink.snapshot()
    }

    /// Locate the state and plan the primary run, without high-precision work.
    pub fn plan(&self, idx: StateIndex) -> Result<(Located, PrecisionPlan)> {
        let loc = locate(&self.pot, idx)?;
        let plan = match &self.opts.eval_x {
            Some(x) => {
                let xv: f64 = x.parse().map_err(|_| Error::Parse(x.clone()))?;
                plan_at_x(&self.pot, idx, self.opts.digits, loc.approx, xv, self.opts.margin)?
            }
            None => build_plan_with_margin(&self.pot, idx, self.opts.digits, loc.approx, self.opts.margin)?,
        };
        Ok((loc, self.with_term_cap(plan)))
    }

    fn with_term_cap(&self, mut plan: PrecisionPlan) -> PrecisionPlan {
        if let Some(cap) = self.opts.max_terms {
            plan.max_terms = cap;
        }
        plan
    }

    /// Plan of the certification rerun: same target, point for `P + 20`.
    pub fn certification_plan(&self, idx: StateIndex, loc: &Located) -> Result<PrecisionPlan> {
        let p = self.opts.digits;
        let x = choose_x(
            &self.pot,
            loc.approx,
            absolute_digits(p + CERTIFY_EXTRA_DIGITS, loc.approx),
            self.opts.margin,
        );
        Ok(self.with_term_cap(plan_at_x(&self.pot, idx, p, loc.approx, x, self.opts.margin)?))
    }

    fn ladder<'a>(&'a self, idx: StateIndex, loc: &Located, plan: &PrecisionPlan, label: &'static str) -> LadderRun<'a> {
        LadderRun {
            pot: &self.pot,
            sigma: idx.sigma,
            bc: self.opts.bc,
            max_terms: plan.max_terms,
            stages: ladder::stages(&self.pot, plan, loc.approx),
            label,
            sink: &self.sink,
            approx: loc.approx,
            gap: loc.gap(),
            seed: None,
        }
    }

    /// Refine to the plan and render `P + 5` significant digits.
    fn run_phase(
        &self,
        idx: StateIndex,
        loc: &Located,
        plan: &PrecisionPlan,
        phase: Phase,
        primary_epsilon: Option<&str>,
        resume: Option<StageState>,
        evaluations: &mut u64,
    ) -> Result<String> {
        let label = match phase {
            Phase::Primary => "primary",
            Phase::Certify => "certify",
        };
        let run = self.ladder(idx, loc, plan, label);
        let base_evals = *evaluations;
        let base_sink = self.sink.len() as u64;
        let mut on_state = |st: &StageState| -> Result<()> {
            let done = base_evals + self.sink.len() as u64 - base_sink;
            if let Some(path) = &self.opts.checkpoint {
                let cp = Checkpoint {
                    format_version: CHECKPOINT_VERSION,
                    potential_hash: self.pot.hash_hex(),
                    potential: self.pot.canonical(),
                    n: idx.n,
                    digits: self.opts.digits,
                    bc: self.opts.bc,
                    phase,
                    evaluations: done,
                    primary_epsilon: primary_epsilon.map(str::to_string),
                    plan: plan.clone(),
                    ladder: Some(st.snapshot()),
                };
                checkpoint::save(path, &cp)?;
            }
            match self.opts.stop_after_evaluations {
                Some(limit) if done >= limit => Err(Error::Interrupted(done as usize)),
                _ => Ok(()),
            }
        };
        // The certification run starts from a tight bracket around the primary
        // root: a sign change of its own mismatch there confirms the digits
        // independently. If there is none, it falls back to a full ladder.
        let seeded = match (phase, primary_epsilon) {
            (Phase::Certify, Some(first)) => {
                let last = run.stages.last().expect("at least one stage").clone();
                let ctx = PrecisionCtx::new(last.digits)?;
                let resumable = resume.as_ref().map_or(true, |st| st.stage == 0 && st.lo.ctx() == ctx);
                resumable.then(|| -> Result<LadderRun<'_>> {
                    Ok(LadderRun { stages: vec![last], seed: Some((ctx.parse(first)?, self.opts.digits)), ..run.clone() })
                })
            }
            _ => None,
        };
        let root = match seeded {
            Some(seeded) => match seeded?.run(resume.clone(), &mut on_state) {
                Err(Error::SignAnomaly(_)) => run.run(None, &mut on_state)?,
                other => other?,
            },
            None => run.run(resume, &mut on_state)?,
        };
        *evaluations = base_evals + self.sink.len() as u64 - base_sink;
        root.render((self.opts.digits + GUARD_DIGITS) as usize)
    }

    /// Solve for state `idx`: locate, refine, certify.
    pub fn solve(&self, idx: StateIndex) -> Result<EigResult> {
        let (loc, plan) = self.plan(idx)?;
        let mut evaluations = 0u64;
        let mut primary: Option<String> = None;
        let mut resume_primary = None;
        let mut resume_certify = None;

        if self.opts.resume {
            let path = self.opts.checkpoint.as_ref().ok_or_else(|| Error::Config("resume needs a checkpoint path".into()))?;
            let cp = checkpoint::load(path, &self.pot)?;
            if cp.n != idx.n || cp.digits != self.opts.digits || cp.bc != self.opts.bc {
                return Err(Error::Checkpoint {
                    path: path.clone(),
                    reason: format!("written for n = {}, P = {}, {:?}", cp.n, cp.digits, cp.bc),
                });
            }
            evaluations = cp.evaluations;
            let restored = cp.ladder.as_ref().map(StageState::restore).transpose()?;
            match cp.phase {
                Phase::Primary => {
                    if cp.plan != plan {
                        return Err(Error::Checkpoint { path: path.clone(), reason: "plan differs from this run".into() });
                    }
                    resume_primary = restored;
                }
                Phase::Certify => {
                    primary = cp.primary_epsilon.clone();
                    resume_certify = restored;
                }
            }
        }

        let epsilon = match primary {
            Some(e) => e,
            None => self.run_phase(idx, &loc, &plan, Phase::Primary, None, resume_primary, &mut evaluations)?,
        };

        let mut certification = None;
        let digits_certified = if self.opts.certify {
            let cplan = self.certification_plan(idx, &loc)?;
            let second =
                self.run_phase(idx, &loc, &cplan, Phase::Certify, Some(&epsilon), resume_certify, &mut evaluations)?;
            let agreed = common_prefix_digits(&epsilon, &second);
            certification =
                Some(Certification { eval_x: cplan.eval_x.clone(), working_digits: cplan.working_digits, epsilon: second.clone() });
            if (agreed as u64) + 20 < self.opts.digits {
                return Err(Error::CertificationFailure { agreed, first: epsilon, second });
            }
            agreed as u64
        } else {
            significant_digits(&epsilon) as u64
        };

        Ok(EigResult {
            epsilon,
            index: idx,
            digits_requested: self.opts.digits,
            digits_certified,
            certification,
            plan,
            bc: self.opts.bc,
            telemetry: self.sink.snapshot(),
        })
    }

    /// Solve with the boundary at a fixed `x`, to `target` digits.
    pub fn solve_at(&self, idx: StateIndex, loc: &Located, x: f64, target: u64) -> Result<String> {
        let plan = self.with_term_cap(plan_at_x(&self.pot, idx, target, loc.approx, x, self.opts.margin)?);
        let run = self.ladder(idx, loc, &plan, "scan");
        let root = run.run(None, &mut |_| Ok(()))?;
        root.render((target + GUARD_DIGITS) as usize)
    }
}

/// Significant digits of a rendered decimal: the digit string without sign,
/// point, leading zeros and exponent, plus the decimal exponent of its first
/// digit.
fn digit_string(text: &str) -> (String, i64) {
    let text = text.trim().trim_start_matches(['+', '-']);
    let (mant, exp) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i64>().unwrap_or(0)),
        None => (text, 0),
    };
    let int_len = mant.find('.').unwrap_or(mant.len()) as i64;
    let all: String = mant.chars().filter(char::is_ascii_digit).collect();
    let lead = all.chars().take_while(|&c| c == '0').count();
    let digits = all[lead..].to_string();
    (digits, exp + int_len - 1 - lead as i64)
}

/// Number of significant digits in a rendered decimal.
pub fn significant_digits(text: &str) -> usize {
    digit_string(text).0.len()
}

/// Count of leading significant digits two rendered decimals share.
pub fn common_prefix_digits(a: &str, b: &str) -> usize {
    let neg = |t: &str| t.trim().starts_with('-');
    if neg(a) != neg(b) {
        return 0;
    }
    let (da, ea) = digit_string(a);
    let (db, eb) = digit_string(b);
    if ea != eb {
        return 0;
    }
    da.bytes().zip(db.bytes()).take_while(|(x, y)| x == y).count()
}

/// Recompute at `x′ = choose_x(P + 20)` and count the shared leading digits.
pub fn certify_digits(pot: &PotentialSpec, idx: StateIndex, result: &EigResult, opts: &SolveOptions) -> Result<usize> {
    let solver = Solver::new(pot.clone(), SolveOptions { certify: false, checkpoint: None, resume: false, ..opts.clone() });
    let loc = locate(pot, idx)?;
    let cplan = solver.certification_plan(idx, &loc)?;
    let mut evals = 0;
    let second = solver.run_phase(idx, &loc, &cplan, Phase::Certify, None, None, &mut evals)?;
    let agreed = common_prefix_digits(&result.epsilon, &second);
    if (agreed as u64) + 20 < result.digits_requested {
        return Err(Error::CertificationFailure { agreed, first: result.epsilon.clone(), second });
    }
    Ok(agreed)
}

/// `log₁₀ |∂ψ(x; ε)/∂ε|` at the plan's point, by central difference with
/// step `10^{−P/2}`.
pub fn sensitivity(pot: &PotentialSpec, idx: StateIndex, epsilon: &str, plan: &PrecisionPlan) -> Result<f64> {
    let ctx = PrecisionCtx::new(plan.working_digits)?;
    let eps = ctx.parse(epsilon)?;
    let x = ctx.parse(&plan.eval_x)?;
    let h = ctx.parse(&format!("1e-{}", plan.target_digits / 2))?;
    let eval = |e: &BigReal| -> Result<BigReal> {
        Ok(mismatch(pot, idx.sigma, e, &x, &ctx, plan.max_terms, BoundaryCondition::Dirichlet)?.0)
    };
    let (fp, fm) = std::thread::scope(|scope| {
        let up = &eps + &h;
        let down = &eps - &h;
        let t = scope.spawn(move || eval(&up));
        let fm = eval(&down);
        (t.join().expect("evaluation thread panicked"), fm)
    });
    let diff = &fp? - &fm?;
    Ok(diff.log10_abs() - h.log10_abs() - std::f64::consts::LOG10_2)
}

/// One row of an obtainable-precision scan.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub x: String,
    /// `−log₁₀ |ε(x) − ε|`.
    pub p_obtained: f64,
    pub p_est: f64,
}

/// For each grid point, solve with the boundary there and record how many
/// digits agree with a reference eigenvalue, next to `P_est(x)`.
///
/// Points at or below the turning point are skipped. The reference must be
/// more precise than every `P_est` on the grid.
pub fn obtainable_precision_scan(
    pot: &PotentialSpec,
    idx: StateIndex,
    x_grid: &[String],
    eps_reference: &str,
    opts: &SolveOptions,
) -> Result<(Vec<ScanRow>, Vec<String>)> {
    let solver = Solver::new(pot.clone(), SolveOptions { certify: false, checkpoint: None, resume: false, ..opts.clone() });
    let loc = locate(pot, idx)?;
    let ref_digits = significant_digits(eps_reference) as u64;
    let mut rows = Vec::new();
    let mut notes = Vec::new();
    for xs in x_grid {
        let x: f64 = xs.parse().map_err(|_| Error::Parse(xs.clone()))?;
        let p_est = match pest(pot, loc.approx, x) {
            Ok(p) => p,
            Err(_) => {
                notes.push(format!("x = {xs} is not beyond the turning point; skipped"));
                continue;
            }
        };
        // resolve the root well past the digits the boundary can support
        let target = p_est.max(1.0).ceil() as u64 + 20;
        if target + 5 > ref_digits {
            return Err(Error::Config(format!(
                "reference has {ref_digits} digits but x = {xs} needs more than {}",
                target + 5
            )));
        }
        let eps_x = solver.solve_at(idx, &loc, x, target)?;
        let d = ref_digits.max(target) + 10;
        let ctx = PrecisionCtx::new(d)?;
        let diff = &ctx.parse(&eps_x)? - &ctx.parse(eps_reference)?;
        let p_obtained = if diff.is_zero() { target as f64 } else { -diff.log10_abs() };
        rows.push(ScanRow { x: xs.clone(), p_obtained, p_est });
    }
    Ok((rows, notes))
}
