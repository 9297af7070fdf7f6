//! A-priori planning: obtainable precision, roundoff loss, evaluation point
//! and working precision.
//!
//! All quantities here are engineering estimates in `f64`; they decide how
//! much work the multiprecision stages do, and the certification rerun in the
//! eigensolver checks that the plan was adequate.

use std::f64::consts::{FRAC_PI_2, LN_10};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::{largest_turning_point, PotentialSpec, StateIndex};
use crate::quadrature::integrate;

/// Default safety margin, in decimal digits, on top of the requested precision.
pub const DEFAULT_MARGIN: u64 = 10;

/// Grid spacing of evaluation points.
pub const X_STEP: f64 = 0.1;

/// How a run at a given target precision is to be carried out.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrecisionPlan {
    /// Requested significant digits `P`.
    pub target_digits: u64,
    /// Evaluation point `x`, as the decimal string the series is summed at.
    pub eval_x: String,
    /// Working precision `D` in decimal digits.
    pub working_digits: u64,
    pub sigma: u8,
    /// Estimated roundoff loss `ΔD`.
    pub delta_d_est: f64,
    /// `P_est(x)`.
    pub pest_at_x: f64,
    /// Estimated number of series terms `N`.
    pub n_terms_est: u64,
    /// Hard cap on the number of series terms.
    pub max_terms: u64,
    pub margin_digits: u64,
}

impl PrecisionPlan {
    pub fn eval_x_f64(&self) -> f64 {
        self.eval_x.parse().expect("plan x is a plain decimal")
    }
}

/// ε is dropped from the WKB integrals when it is small against `V(x)`, as
/// in the closed forms; the dropped problem has its turning point at the
/// minimum of V (or where V crosses zero).
fn effective_eps(pot: &PotentialSpec, eps: f64, x: f64) -> f64 {
    if eps >= 0.0 && eps < pot.eval_f64(x) / 100.0 {
        pot.min_f64().max(0.0)
    } else {
        eps
    }
}

/// `P_est(x) = (2/(s ln 10)) ∫_{x₀}^{x} √(V(y) − ε) dy`, in decimal digits.
pub fn pest(pot: &PotentialSpec, eps_approx: f64, x: f64) -> Result<f64> {
    let eps = effective_eps(pot, eps_approx, x);
    let x0 = largest_turning_point(pot, eps)?;
    if x <= x0 {
        return Err(Error::Domain(format!("x = {x} is not beyond the turning point x₀ = {x0:.6}")));
    }
    // y = x₀ + t² removes the square-root singularity at the turning point
    let tmax = (x - x0).sqrt();
    let integral = integrate(
        |t| {
            let y = x0 + t * t;
            2.0 * t * (pot.eval_f64(y) - eps).max(0.0).sqrt()
        },
        0.0,
        tmax,
        1e-12,
        0.0,
    );
    Ok(2.0 * integral / (pot.s_f64() * LN_10))
}

/// `Re (1/s) ∫_0^{x e^{iφ}} √(V(z) − ε) dz`, following one branch of the root
/// continuously along the ray.
fn ray_exponent(pot: &PotentialSpec, eps: f64, x: f64, phi: f64) -> f64 {
    const STEPS: usize = 2000;
    let dir = Complex64::from_polar(1.0, phi);
    let poly = pot.poly_u();
    let integrand = |r: f64, prev: Option<Complex64>| {
        let z = dir * r;
        let z2 = z * z;
        let v = poly.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z2 + c);
        let w = (v - eps).sqrt();
        match prev {
            Some(p) if (w - p).norm() > (w + p).norm() => -w,
            _ => w,
        }
    };
    let h = x / STEPS as f64;
    let mut prev = integrand(0.0, None);
    let mut acc = prev;
    for i in 1..=STEPS {
        let w = integrand(i as f64 * h, Some(prev));
        let weight = if i == STEPS {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc += w * weight;
        prev = w;
    }
    (acc * dir * (h / 3.0)).re / pot.s_f64()
}

/// `ΔD ≈ log₁₀ max_φ |ψ(x e^{iφ})|`, from the WKB exponent maximised over
/// the quarter circle of radius `x`.
pub fn delta_d_estimate(pot: &PotentialSpec, eps_approx: f64, x: f64) -> f64 {
    delta_d_with_angle(pot, eps_approx, x).0
}

/// [`delta_d_estimate`] together with the maximising angle.
pub fn delta_d_with_angle(pot: &PotentialSpec, eps_approx: f64, x: f64) -> (f64, f64) {
    if x <= 0.0 {
        return (0.0, 0.0);
    }
    let eps = effective_eps(pot, eps_approx, x);
    let value = |phi: f64| ray_exponent(pot, eps, x, phi).abs();
    const GRID: usize = 90;
    let step = FRAC_PI_2 / GRID as f64;
    let (mut best_phi, mut best) = (0.0, value(0.0));
    for i in 1..=GRID {
        let phi = i as f64 * step;
        let v = value(phi);
        if v > best {
            best = v;
            best_phi = phi;
        }
    }
    // golden-section refinement within one grid step either side
    let (mut a, mut b) = ((best_phi - step).max(0.0), (best_phi + step).min(FRAC_PI_2));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..30 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if value(c) > value(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let mid = 0.5 * (a + b);
    let refined = value(mid);
    if refined > best {
        best = refined;
        best_phi = mid;
    }
    (best / LN_10, best_phi)
}

/// Smallest grid point `x` with `P_est(x) ≥ P + margin`.
///
/// The grid has step 0.1; where one step moves `P_est` by much more than the
/// margin (very small `s`), the bracketing step is subdivided decimally so
/// that the working precision is not inflated by the grid.
pub fn choose_x(pot: &PotentialSpec, eps_approx: f64, p: u64, margin: u64) -> f64 {
    let target = (p + margin) as f64;
    let pest_or_zero = |x: f64| pest(pot, eps_approx, x).unwrap_or(0.0);
    // pest_or_zero is non-decreasing in x, zero up to the turning point
    let mut step = X_STEP;
    let mut k_lo: i64 = 0;
    let mut k_hi: i64 = 1;
    while pest_or_zero(k_hi as f64 * step) < target {
        let jump = (k_hi - k_lo).max(1);
        k_lo = k_hi;
        k_hi += 2 * jump;
    }
    loop {
        while k_hi - k_lo > 1 {
            let mid = k_lo + (k_hi - k_lo) / 2;
            if pest_or_zero(mid as f64 * step) >= target {
                k_hi = mid;
            } else {
                k_lo = mid;
            }
        }
        let overshoot = pest_or_zero(k_hi as f64 * step) - target;
        if overshoot <= (margin as f64).max(0.05 * target) || step <= 1e-6 {
            return round_to_step(k_hi as f64 * step, step);
        }
        k_lo *= 10;
        k_hi *= 10;
        step /= 10.0;
    }
}

fn round_to_step(x: f64, step: f64) -> f64 {
    let decimals = (-step.log10()).round() as i32;
    let scale = 10f64.powi(decimals);
    (x * scale).round() / scale
}

/// Plain decimal text for a grid point.
pub fn format_x(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0');
    s.trim_end_matches('.').to_string()
}

/// Estimated number of series terms at working precision `d`.
///
/// Runs the coefficient recurrence on magnitudes in log space (a majorant of
/// the true terms) until `M+2` consecutive terms fall `d` digits below the
/// largest one.
pub fn n_terms_est(pot: &PotentialSpec, eps: f64, sigma: u8, x: f64, d: u64) -> u64 {
    let m = pot.m();
    let s2 = pot.s_f64().powi(2);
    let lx2 = 2.0 * x.ln();
    let v = pot.v_f64();
    let lw: Vec<f64> = (0..=m)
        .map(|k| {
            let c = if k == 0 {
                v[0] - eps
            } else if k < m {
                v[k]
            } else {
                1.0
            };
            if c == 0.0 {
                f64::NEG_INFINITY
            } else {
                c.abs().ln() + (k + 1) as f64 * lx2 - s2.ln()
            }
        })
        .collect();
    let floor = d as f64 * LN_10;
    let sig = f64::from(sigma);
    let mut hist = vec![f64::NEG_INFINITY; m + 1];
    hist[0] = 0.0;
    let (mut best, mut misses) = (0.0f64, 0usize);
    const CAP: u64 = 200_000_000;
    for n in 0..CAP {
        let terms = (0..=m).filter(|&j| j as u64 <= n).map(|j| lw[j] + hist[(n as usize - j) % (m + 1)]);
        let top = terms.clone().fold(f64::NEG_INFINITY, f64::max);
        let next = if top == f64::NEG_INFINITY {
            top
        } else {
            top + terms.map(|t| (t - top).exp()).sum::<f64>().ln()
        };
        let nf = n as f64;
        let next = next - ((2.0 * nf + 2.0 + sig) * (2.0 * nf + 1.0 + sig)).ln();
        hist[(n as usize + 1) % (m + 1)] = next;
        best = best.max(next);
        misses = if next <= best - floor { misses + 1 } else { 0 };
        if misses >= m + 2 {
            return n + 2;
        }
    }
    CAP
}

/// Term cap for a plan: generous against the estimate, never below `100·P`.
pub fn default_max_terms(p: u64, n_est: u64) -> u64 {
    (100 * p).max(3 * n_est).max(1000)
}

/// Decimal places needed for `p` significant digits of a value of size `eps`:
/// values below one need their leading zeros resolved as well.
pub fn absolute_digits(p: u64, eps: f64) -> u64 {
    if eps != 0.0 && eps.abs() < 1.0 {
        p + (-eps.abs().log10()).ceil() as u64
    } else {
        p
    }
}

/// Plan a run for state `idx` to `p` significant digits around `eps_approx`.
pub fn build_plan(pot: &PotentialSpec, idx: StateIndex, p: u64, eps_approx: f64) -> Result<PrecisionPlan> {
    build_plan_with_margin(pot, idx, p, eps_approx, DEFAULT_MARGIN)
}

pub fn build_plan_with_margin(
    pot: &PotentialSpec,
    idx: StateIndex,
    p: u64,
    eps_approx: f64,
    margin: u64,
) -> Result<PrecisionPlan> {
    if p == 0 {
        return Err(Error::InvalidPrecision(0));
    }
    let x = choose_x(pot, eps_approx, absolute_digits(p, eps_approx), margin);
    plan_at_x(pot, idx, p, eps_approx, x, margin)
}

/// Plan with a fixed evaluation point (scans, deliberately perturbed plans).
pub fn plan_at_x(
    pot: &PotentialSpec,
    idx: StateIndex,
    p: u64,
    eps_approx: f64,
    x: f64,
    margin: u64,
) -> Result<PrecisionPlan> {
    let x = round_to_step(x, 1e-6);
    let pest_at_x = pest(pot, eps_approx, x)?;
    let delta_d_est = delta_d_estimate(pot, eps_approx, x);
    let working_digits = absolute_digits(p, eps_approx) + delta_d_est.max(0.0).ceil() as u64 + margin;
    let n_est = n_terms_est(pot, eps_approx, idx.sigma, x, working_digits);
    Ok(PrecisionPlan {
        target_digits: p,
        eval_x: format_x(x),
        working_digits,
        sigma: idx.sigma,
        delta_d_est,
        pest_at_x,
        n_terms_est: n_est,
        max_terms: default_max_terms(p, n_est),
        margin_digits: margin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quartic() -> PotentialSpec {
        PotentialSpec::quartic("1").unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn quartic_pest_closed_form() {
        let q = quartic();
        for x in [10.0, 15.2, 25.0, 40.0, 152.0] {
            let want = 2.0 * x * x * x / (3.0 * LN_10);
            assert!(rel(pest(&q, 1.06, x).unwrap(), want) < 0.01, "x={x}");
        }
        assert!((pest(&q, 1.06, 15.2).unwrap() - 1017.0).abs() < 2.0);
        assert!(rel(pest(&q, 1.06, 152.0).unwrap(), 1.0168e6) < 1e-3);
    }

    #[test]
    fn double_well_pest_caption_formula() {
        let dw = PotentialSpec::double_well("0.05").unwrap();
        let x: f64 = 2.51;
        let want = 2.0 * (x - 1.0).powi(2) * (x + 2.0) / (3.0 * 0.05 * LN_10);
        let got = pest(&dw, 0.05, x).unwrap();
        assert!(rel(got, want) < 1e-6, "{got} vs {want}");
        assert!((got - 60.0).abs() < 1.0);
    }

    #[test]
    fn pest_with_full_quadrature_for_excited_states() {
        // harmonic: ∫_{x₀}^{x} √(y² − ε) dy in closed form
        let h = PotentialSpec::harmonic("1").unwrap();
        let (eps, x): (f64, f64) = (21.0, 8.0);
        let x0 = eps.sqrt();
        let anti = |y: f64| 0.5 * (y * (y * y - eps).sqrt() - eps * (y + (y * y - eps).sqrt()).ln());
        let want = 2.0 * (anti(x) - anti(x0)) / LN_10;
        assert!(rel(pest(&h, eps, x).unwrap(), want) < 1e-8);
        assert!(matches!(pest(&h, eps, 4.0), Err(Error::Domain(_))));
    }

    #[test]
    fn pest_is_monotone() {
        let q = quartic();
        let mut last = 0.0;
        for i in 1..60 {
            let v = pest(&q, 1.06, 0.5 * i as f64 + 1.1).unwrap();
            assert!(v > last);
            last = v;
        }
    }

    #[test]
    fn quartic_delta_d_closed_form() {
        let q = quartic();
        for x in [10.0, 15.2, 25.0, 40.0] {
            let want = x * x * x / (3.0 * LN_10);
            assert!(rel(delta_d_estimate(&q, 1.06, x), want) < 0.01, "x={x}");
        }
        let (d, phi) = delta_d_with_angle(&q, 1.06, 15.2);
        assert!((d - 508.0).abs() < 2.0, "{d}");
        assert!((phi - std::f64::consts::FRAC_PI_3).abs() < 0.02, "{phi}");
        assert!(rel(delta_d_estimate(&q, 1.06, 152.0), 508_386.0) < 1e-3);
    }

    #[test]
    fn compensation_ratio() {
        let q = quartic();
        for x in [10.0, 20.0, 30.0, 40.0] {
            let r = delta_d_estimate(&q, 1.06, x) / pest(&q, 1.06, x).unwrap();
            assert!((0.45..=0.55).contains(&r), "x={x}: {r}");
        }
    }

    #[test]
    fn double_well_delta_d_formula() {
        let dw = PotentialSpec::double_well("0.02").unwrap();
        for x in [2.0, 3.0] {
            let want = (x * x * x / 3.0 + x / 2.0) / (0.02 * LN_10);
            let got = delta_d_estimate(&dw, 0.02, x);
            assert!((got - want).abs() < 2.0, "x={x}: {got} vs {want}");
        }
        assert!((delta_d_estimate(&dw, 0.02, 3.0) - 228.0).abs() < 2.0);
    }

    #[test]
    fn harmonic_delta_d_is_gaussian_maximum() {
        let h = PotentialSpec::harmonic("1").unwrap();
        // ε negligible: max of Re z²/2 on the circle
        let got = delta_d_estimate(&h, 1.0, 16.0);
        assert!((got - 128.0 / LN_10).abs() < 0.01, "{got}");
        // ε kept (ε = V(x)/100): imaginary axis, ∫₀ˣ √(r² + 1) dr
        let x: f64 = 10.0;
        let want = 0.5 * (x * (x * x + 1.0).sqrt() + x.asinh()) / LN_10;
        let got = delta_d_estimate(&h, 1.0, x);
        assert!((got - want).abs() < 1e-3, "{got} vs {want}");
    }

    #[test]
    fn choose_x_examples() {
        let q = quartic();
        assert!((choose_x(&q, 1.06, 1000, 10) - 15.2).abs() < 1e-9);
        let big = choose_x(&q, 1.06, 1_000_000, 10);
        assert!((big - 152.0).abs() < 1.0, "{big}");
        // the returned point is minimal on its grid
        let p = pest(&q, 1.06, 15.1).unwrap();
        assert!(p < 1010.0);
    }

    #[test]
    fn choose_x_refines_steep_grids() {
        let dw = PotentialSpec::double_well("0.00002").unwrap();
        let x = choose_x(&dw, 4.0e-5, 30_000, 10);
        let p = pest(&dw, 4.0e-5, x).unwrap();
        assert!(p >= 30_010.0 && p < 30_010.0 * 1.05 + 10.0, "x={x}, pest={p}");
    }

    #[test]
    fn plan_invariants_and_ratio() {
        let q = quartic();
        let plan = build_plan(&q, StateIndex::new(0), 1000, 1.06).unwrap();
        assert_eq!(plan.eval_x, "15.2");
        assert!(plan.pest_at_x >= (plan.target_digits + plan.margin_digits) as f64);
        assert!(plan.working_digits >= plan.target_digits + plan.delta_d_est.ceil() as u64 + plan.margin_digits);
        let ratio = plan.working_digits as f64 / 1000.0;
        assert!((ratio - 1.52).abs() < 0.03, "{ratio}");
        assert_eq!(plan.sigma, 0);
        assert!(plan.n_terms_est > 1000 && plan.max_terms >= 100_000);
    }

    #[test]
    fn harmonic_plan() {
        let h = PotentialSpec::harmonic("1").unwrap();
        let plan = build_plan(&h, StateIndex::new(0), 100, 1.0).unwrap();
        let x = plan.eval_x_f64();
        // P_est = x²/ln10 with ε neglected
        assert!((x - 16.0).abs() < 0.2, "{x}");
        let want_d = 100 + (x * x / (2.0 * LN_10)).ceil() as u64 + 10;
        assert!((plan.working_digits as i64 - want_d as i64).abs() <= 1);
    }

    #[test]
    fn term_estimate_tracks_observed_count() {
        // observed: 271 terms for the harmonic ground state at x=10, D=100
        let h = PotentialSpec::harmonic("1").unwrap();
        let n = n_terms_est(&h, 1.0, 0, 10.0, 100);
        assert!((230..=330).contains(&n), "{n}");
    }

    #[test]
    fn small_eigenvalues_need_leading_zeros() {
        assert_eq!(absolute_digits(60, 4.0e-5), 65);
        assert_eq!(absolute_digits(60, 0.0975), 62);
        assert_eq!(absolute_digits(60, 1.06), 60);
        assert_eq!(absolute_digits(60, 4.0e6), 60);
    }

    #[test]
    fn format_is_plain_decimal() {
        assert_eq!(format_x(15.2), "15.2");
        assert_eq!(format_x(1.745), "1.745");
        assert_eq!(format_x(16.0), "16");
    }
}
