//! Precision ladder: successive root refinements of the boundary mismatch at
//! increasing target digits, each stage at its own evaluation point and
//! working precision.

use std::time::Instant;

use crate::bigreal::{BigReal, PrecisionCtx};
use crate::checkpoint::LadderSnapshot;
use crate::error::{Error, Result};
use crate::estimator::{absolute_digits, choose_x, delta_d_estimate, PrecisionPlan};
use crate::potential::{eval_potential, PotentialSpec};
use crate::series::sum_series;

use super::{BoundaryCondition, EvalTelemetry, TelemetrySink};

/// First stage target; later stages roughly double it.
const FIRST_STAGE_DIGITS: u64 = 24;
/// A low stage is dropped if it would already cost this fraction of the
/// final working precision.
const COLLAPSE_FRACTION: f64 = 0.75;
/// Digits resolved beyond the requested precision in the final stage.
pub(crate) const GUARD_DIGITS: u64 = 5;

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Stage {
    /// Significant digits this stage resolves the root to.
    pub target: u64,
    pub x: String,
    pub digits: u64,
}

/// Stage schedule ending at the plan's point and precision.
pub(crate) fn stages(pot: &PotentialSpec, plan: &PrecisionPlan, eps_approx: f64) -> Vec<Stage> {
    let p = plan.target_digits;
    let margin = plan.margin_digits;
    let mut out = Vec::new();
    let mut t = FIRST_STAGE_DIGITS.min(p);
    while t < p {
        // never beyond the final point: a stage more accurate than the last
        // one would not be reproducible there
        let x = choose_x(pot, eps_approx, absolute_digits(t, eps_approx), margin).min(plan.eval_x_f64());
        let d = absolute_digits(t, eps_approx) + delta_d_estimate(pot, eps_approx, x).max(0.0).ceil() as u64 + margin;
        if d as f64 > COLLAPSE_FRACTION * plan.working_digits as f64 {
            break;
        }
        out.push(Stage { target: t, x: crate::estimator::format_x(x), digits: d });
        t = p.min(2 * t + 20);
    }
    out.push(Stage { target: p + GUARD_DIGITS, x: plan.eval_x.clone(), digits: plan.working_digits });
    out
}

/// Everything a ladder run needs besides its mutable state.
#[derive(Clone)]
pub(crate) struct LadderRun<'a> {
    pub pot: &'a PotentialSpec,
    pub sigma: u8,
    pub bc: BoundaryCondition,
    pub max_terms: u64,
    pub stages: Vec<Stage>,
    pub label: &'static str,
    pub sink: &'a TelemetrySink,
    /// Approximate eigenvalue and the distance to the nearest sector neighbour.
    pub approx: f64,
    pub gap: f64,
    /// Independent root of the same problem to `digits` significant digits:
    /// the first stage is bracketed tightly around it instead of starting
    /// from the double-precision location.
    pub seed: Option<(BigReal, u64)>,
}

/// Mutable root-finding state of one stage.
#[derive(Clone, Debug)]
pub(crate) struct StageState {
    pub stage: usize,
    pub lo: BigReal,
    pub hi: BigReal,
    pub f_lo: BigReal,
    pub f_hi: BigReal,
    pub retained: i8,
    pub iterations: u64,
    pub stale: u32,
    pub width_ref: BigReal,
}

impl StageState {
    fn new(stage: usize, lo: BigReal, hi: BigReal, f_lo: BigReal, f_hi: BigReal) -> Self {
        let width_ref = &hi - &lo;
        StageState { stage, lo, hi, f_lo, f_hi, retained: 0, iterations: 0, stale: 0, width_ref }
    }

    pub fn snapshot(&self) -> LadderSnapshot {
        LadderSnapshot {
            stage: self.stage,
            stage_digits: self.lo.ctx().decimal_digits(),
            lo: self.lo.render_exact(),
            hi: self.hi.render_exact(),
            f_lo: self.f_lo.render_exact(),
            f_hi: self.f_hi.render_exact(),
            retained: self.retained,
            iterations: self.iterations,
            stale: self.stale,
            width_ref: self.width_ref.render_exact(),
        }
    }

    pub fn restore(snap: &LadderSnapshot) -> Result<Self> {
        let ctx = PrecisionCtx::new(snap.stage_digits)?;
        Ok(StageState {
            stage: snap.stage,
            lo: ctx.parse(&snap.lo)?,
            hi: ctx.parse(&snap.hi)?,
            f_lo: ctx.parse(&snap.f_lo)?,
            f_hi: ctx.parse(&snap.f_hi)?,
            retained: snap.retained,
            iterations: snap.iterations,
            stale: snap.stale,
            width_ref: ctx.parse(&snap.width_ref)?,
        })
    }
}

/// The boundary functional whose ε-root is sought.
///
/// Dirichlet: ψ(x; ε). Robin: −sψ′ − Rψ with `R = √(V(x) − ε)`, the product
/// form of `−sψ′/ψ = R` (no pole where ψ vanishes).
pub fn mismatch(
    pot: &PotentialSpec,
    sigma: u8,
    eps: &BigReal,
    x: &BigReal,
    ctx: &PrecisionCtx,
    max_terms: u64,
    bc: BoundaryCondition,
) -> Result<(BigReal, crate::series::SeriesEval)> {
    let se = sum_series(pot, eps, sigma, x, ctx, max_terms)?;
    if !se.converged {
        return Err(Error::NonConvergence(format!(
            "series at x = {x} did not converge within {max_terms} terms (raise HPSE_MAX_TERMS)"
        )));
    }
    let value = match bc {
        BoundaryCondition::Dirichlet => se.psi.clone(),
        BoundaryCondition::Robin => {
            let x = x.to_ctx(ctx);
            let q = &eval_potential(pot, &x) - &eps.to_ctx(ctx);
            if q.signum() <= 0 {
                return Err(Error::Domain(format!("Robin condition needs V(x) > ε at x = {x}")));
            }
            let s = pot.coefficients(ctx).s;
            let r = q.sqrt();
            -&(&(&s * &se.dpsi) + &(&r * &se.psi))
        }
    };
    Ok((value, se))
}

fn pow10(ctx: &PrecisionCtx, e: i64) -> BigReal {
    ctx.parse(&format!("1e{e}")).expect("valid literal")
}

fn same_sign(a: &BigReal, b: &BigReal) -> bool {
    a.signum() == b.signum()
}

impl LadderRun<'_> {
    fn ctx(&self, stage: usize) -> Result<PrecisionCtx> {
        PrecisionCtx::new(self.stages[stage].digits)
    }

    fn x(&self, stage: usize, ctx: &PrecisionCtx) -> Result<BigReal> {
        ctx.parse(&self.stages[stage].x)
    }

    /// One full mismatch evaluation, recorded in the telemetry sink.
    fn eval(&self, stage: usize, eps: &BigReal) -> Result<BigReal> {
        let ctx = self.ctx(stage)?;
        let x = self.x(stage, &ctx)?;
        let t0 = Instant::now();
        let (value, se) = mismatch(self.pot, self.sigma, eps, &x, &ctx, self.max_terms, self.bc)?;
        self.sink.push(EvalTelemetry {
            run: self.label.to_string(),
            stage,
            eval_x: self.stages[stage].x.clone(),
            working_digits: ctx.decimal_digits(),
            n_terms: se.n_terms,
            delta_d_observed: se.delta_d_observed,
            wall_time_ms: t0.elapsed().as_secs_f64() * 1e3,
            eps_sample: eps.render(24.min(ctx.decimal_digits() as usize)).unwrap_or_default(),
        });
        Ok(value)
    }

    /// Both ends of a candidate bracket, evaluated concurrently.
    fn eval_pair(&self, stage: usize, a: &BigReal, b: &BigReal) -> Result<(BigReal, BigReal)> {
        std::thread::scope(|scope| {
            let h = scope.spawn(|| self.eval(stage, b));
            let fa = self.eval(stage, a);
            let fb = h.join().expect("evaluation thread panicked");
            Ok((fa?, fb?))
        })
    }

    /// Bracket for the first stage from the double-precision location.
    fn initial_bracket(&self) -> Result<StageState> {
        let ctx = self.ctx(0)?;
        let center = ctx.parse(&format!("{:e}", self.approx))?;
        let limit = 0.5 * self.gap;
        let mut delta = (1e-7 * self.approx.abs()).max(1e-9 * self.gap).min(0.25 * limit);
        loop {
            let d = ctx.parse(&format!("{delta:e}"))?;
            let lo = &center - &d;
            let hi = &center + &d;
            let (f_lo, f_hi) = self.eval_pair(0, &lo, &hi)?;
            if !same_sign(&f_lo, &f_hi) || f_lo.is_zero() || f_hi.is_zero() {
                return Ok(StageState::new(0, lo, hi, f_lo, f_hi));
            }
            if delta >= limit {
                return Err(Error::BracketFailure(format!(
                    "no sign change of the mismatch within ±{delta:.3e} of {:.12e}",
                    self.approx
                )));
            }
            delta = (8.0 * delta).min(limit);
        }
    }

    /// Bracket for `stage` around the previous stage's root.
    fn next_bracket(&self, stage: usize, root: &BigReal) -> Result<StageState> {
        self.bracket_around(stage, root, self.stages[stage - 1].target as i64 - 1)
    }

    /// Bracket `root ± 10^{−digits}|root|`, widened ×100 up to four times.
    fn bracket_around(&self, stage: usize, root: &BigReal, digits: i64) -> Result<StageState> {
        let ctx = self.ctx(stage)?;
        let center = root.to_ctx(&ctx);
        let scale = if center.is_zero() { ctx.one() } else { center.abs() };
        let mut w = &pow10(&ctx, -digits) * &scale;
        let hundred = ctx.from_u64(100);
        for _ in 0..4 {
            let lo = &center - &w;
            let hi = &center + &w;
            let (f_lo, f_hi) = self.eval_pair(stage, &lo, &hi)?;
            if !same_sign(&f_lo, &f_hi) || f_lo.is_zero() || f_hi.is_zero() {
                return Ok(StageState::new(stage, lo, hi, f_lo, f_hi));
            }
            w = &w * &hundred;
        }
        Err(Error::SignAnomaly(format!(
            "stage {stage} (D = {}): mismatch keeps one sign around {}",
            self.stages[stage].digits,
            root.render(30.min(root.ctx().decimal_digits() as usize)).unwrap_or_default()
        )))
    }

    /// Refine within one stage until the bracket is below the stage tolerance.
    /// `on_state` is called after every consistent state.
    fn refine_stage(
        &self,
        st: &mut StageState,
        budget: &mut u64,
        on_state: &mut dyn FnMut(&StageState) -> Result<()>,
    ) -> Result<BigReal> {
        let stage = st.stage;
        let ctx = self.ctx(stage)?;
        let target = self.stages[stage].target as i64;
        let two = ctx.from_u64(2);
        loop {
            if st.f_lo.is_zero() {
                return Ok(st.lo.clone());
            }
            if st.f_hi.is_zero() {
                return Ok(st.hi.clone());
            }
            let width = &st.hi - &st.lo;
            let mid = &(&st.lo + &st.hi) / &two;
            let scale = if mid.is_zero() { ctx.one() } else { mid.abs() };
            let tol = &pow10(&ctx, -target) * &scale;
            if width <= tol {
                return Ok(mid);
            }
            if *budget == 0 {
                return Err(Error::NonConvergence(format!(
                    "root-finding budget exhausted at stage {stage}, bracket width {}",
                    width.render(6).unwrap_or_default()
                )));
            }
            *budget -= 1;

            // Illinois regula falsi, with a bisection step whenever the
            // bracket has failed to halve for three steps
            let mut c = if st.stale >= 3 {
                st.stale = 0;
                st.width_ref = width.clone();
                mid.clone()
            } else {
                &(&(&st.lo * &st.f_hi) - &(&st.hi * &st.f_lo)) / &(&st.f_hi - &st.f_lo)
            };
            let quarter = &tol / &ctx.from_u64(4);
            let lo_guard = &st.lo + &quarter;
            let hi_guard = &st.hi - &quarter;
            if c < lo_guard {
                c = lo_guard;
            } else if c > hi_guard {
                c = hi_guard;
            }

            let fc = self.eval(stage, &c)?;
            if fc.is_zero() {
                st.lo = c.clone();
                st.hi = c.clone();
                st.f_lo = fc.clone();
                st.f_hi = fc;
            } else if same_sign(&fc, &st.f_lo) {
                st.lo = c;
                st.f_lo = fc;
                if st.retained == 1 {
                    st.f_hi = &st.f_hi / &two;
                }
                st.retained = 1;
            } else {
                st.hi = c;
                st.f_hi = fc;
                if st.retained == -1 {
                    st.f_lo = &st.f_lo / &two;
                }
                st.retained = -1;
            }
            st.iterations += 1;
            let new_width = &st.hi - &st.lo;
            if &new_width * &two <= st.width_ref {
                st.width_ref = new_width;
                st.stale = 0;
            } else {
                st.stale += 1;
            }
            on_state(st)?;
        }
    }

    /// Run all stages (optionally resuming from a saved state) and return the
    /// final-stage root.
    pub fn run(
        &self,
        resume: Option<StageState>,
        on_state: &mut dyn FnMut(&StageState) -> Result<()>,
    ) -> Result<BigReal> {
        let p = self.stages.last().expect("at least one stage").target;
        // 8·log₂(10^P) bisection-equivalent steps
        let mut budget = (8.0 * p as f64 * std::f64::consts::LOG2_10).ceil() as u64 + 64;
        let mut st = match resume {
            Some(st) => st,
            None => {
                let st = match &self.seed {
                    Some((root, digits)) => self.bracket_around(0, root, *digits as i64 - 2)?,
                    None => self.initial_bracket()?,
                };
                on_state(&st)?;
                st
            }
        };
        loop {
            let root = self.refine_stage(&mut st, &mut budget, on_state)?;
            let next = st.stage + 1;
            if next == self.stages.len() {
                return Ok(root);
            }
            st = self.next_bracket(next, &root)?;
            on_state(&st)?;
        }
    }
}
