//! Level splitting of the symmetric double well `V = (x² − 1)²`.
//!
//! The lowest even and odd states are solved independently (the parity
//! sectors never mix), their difference is taken by exact decimal
//! subtraction and compared with the instanton (Zinn-Justin) asymptotics
//!
//! ```text
//!   Δε ≈ 16 √(2s/π) e^{−4/(3s)} e^{L(s)},   L(s) = −71s/96 + O(s²)
//! ```

use serde::{Deserialize, Serialize};

use crate::bigreal::{exact_decimal_difference, PrecisionCtx};
use crate::eigensolver::{locate, EigResult, SolveOptions, Solver};
use crate::error::{Error, Result};
use crate::potential::{PotentialSpec, StateIndex};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Above this size of the first correction `71s/96` the asymptotic formula
/// is not expected to describe the splitting.
pub const ASYMPTOTIC_LIMIT: f64 = 0.1;

/// Digits of Δε the precheck insists on resolving.
const DELTA_DIGITS: u64 = 5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplittingReport {
    pub schema_version: u32,
    pub s: String,
    pub digits: u64,
    /// Even ground state ε₀⁽⁺⁾.
    pub eps_plus: String,
    /// Odd ground state ε₀⁽⁻⁾.
    pub eps_minus: String,
    pub certified_plus: u64,
    pub certified_minus: u64,
    /// `ε₀⁽⁻⁾ − ε₀⁽⁺⁾`, exact difference of the two decimal strings.
    pub delta: String,
    pub zj_estimate: Option<String>,
    /// `(Δε^{ZJ} − Δε)/Δε`.
    pub rel_dev: Option<f64>,
    /// True when `71s/96 ≥ 0.1`: the comparison is outside the regime where
    /// the truncated asymptotic series means anything.
    pub beyond_asymptotic_validity: bool,
}

/// `log₁₀` of the Zinn-Justin splitting, in double precision.
pub fn zinn_justin_log10(s: f64) -> f64 {
    let ln = (16.0f64).ln() + 0.5 * (2.0 * s / std::f64::consts::PI).ln() - 4.0 / (3.0 * s) - 71.0 * s / 96.0;
    ln / std::f64::consts::LN_10
}

/// The Zinn-Justin splitting with `L` truncated at order `s`, to `digits`
/// significant digits.
pub fn zinn_justin(s: &str, digits: u64) -> Result<String> {
    let ctx = PrecisionCtx::new(digits + 10)?;
    let sv = ctx.parse(s)?;
    if sv.signum() <= 0 {
        return Err(Error::Domain(format!("s must be positive, got {s}")));
    }
    let two = ctx.from_u64(2);
    let prefactor = &ctx.from_u64(16) * &(&(&two * &sv) / &ctx.pi()).sqrt();
    let instanton = -&(&ctx.from_u64(4) / &(&ctx.from_u64(3) * &sv));
    let l = -&(&(&ctx.from_u64(71) * &sv) / &ctx.from_u64(96));
    let value = &prefactor * &(&instanton + &l).exp();
    value.render(digits as usize)
}

/// Smallest `P` at which the pair resolves the splitting to a few digits.
pub fn required_digits(s: f64, eps_approx: f64) -> u64 {
    let magnitude = zinn_justin_log10(s);
    ((eps_approx.abs().log10() - magnitude).ceil().max(0.0)) as u64 + DELTA_DIGITS
}

/// Solve the even/odd ground-state pair at `opts.digits` and subtract.
pub fn solve_pair(s: &str, opts: &SolveOptions) -> Result<(SplittingReport, EigResult, EigResult)> {
    let pot = PotentialSpec::double_well(s)?;
    let sv = pot.s_f64();
    let approx = locate(&pot, StateIndex::new(0))?.approx;
    let required = required_digits(sv, approx);
    if opts.digits < required {
        return Err(Error::ResolutionTooLow {
            requested: opts.digits,
            required,
            magnitude: zinn_justin_log10(sv),
        });
    }

    let run = |n: u64| -> Result<EigResult> {
        let mut o = opts.clone();
        // one checkpoint per parity run
        o.checkpoint = opts.checkpoint.as_ref().map(|p| p.with_extension(format!("n{n}.ckpt")));
        Solver::new(pot.clone(), o).solve(StateIndex::new(n))
    };
    let (plus, minus) = std::thread::scope(|scope| {
        let odd = scope.spawn(|| run(1));
        let even = run(0);
        (even, odd.join().expect("solver thread panicked"))
    });
    let (plus, minus) = (plus?, minus?);
    let delta = exact_decimal_difference(&minus.epsilon, &plus.epsilon)?;
    let report = SplittingReport {
        schema_version: REPORT_SCHEMA_VERSION,
        s: s.to_string(),
        digits: opts.digits,
        eps_plus: plus.epsilon.clone(),
        eps_minus: minus.epsilon.clone(),
        certified_plus: plus.digits_certified,
        certified_minus: minus.digits_certified,
        delta,
        zj_estimate: None,
        rel_dev: None,
        beyond_asymptotic_validity: 71.0 * sv / 96.0 >= ASYMPTOTIC_LIMIT,
    };
    Ok((report, plus, minus))
}

/// `(Δε^{ZJ} − Δε)/Δε` for a report with both fields present.
pub fn compare(report: &SplittingReport) -> Result<f64> {
    let zj = report
        .zj_estimate
        .as_deref()
        .ok_or_else(|| Error::Domain("report has no Zinn-Justin estimate".into()))?;
    let ctx = PrecisionCtx::new(40)?;
    let delta = ctx.parse(&report.delta)?;
    if delta.is_zero() {
        return Err(Error::Domain("splitting is zero; nothing to compare".into()));
    }
    let zj = ctx.parse(zj)?;
    Ok((&(&zj - &delta) / &delta).to_f64())
}

/// The full experiment: pair, asymptotic estimate, comparison.
pub fn run_splitting(s: &str, opts: &SolveOptions) -> Result<SplittingReport> {
    let (mut report, _, _) = solve_pair(s, opts)?;
    report.zj_estimate = Some(zinn_justin(s, 30)?);
    report.rel_dev = Some(compare(&report)?);
    Ok(report)
}
