//! Low-precision location of the n-th state: WKB quantization and
//! modified-Prüfer state counting in double precision.
//!
//! The counting is what guarantees the index: with `ψ = r sinθ/√k` and
//! `sψ′ = r√k cosθ` every zero of ψ is an upward crossing of a multiple of π,
//! so `⌊θ(x_b)/π⌋` is the number of states of the parity sector below ε.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::estimator::choose_x;
use crate::potential::{largest_turning_point, PotentialSpec, StateIndex};
use crate::quadrature::integrate;

/// Result of the double-precision search for one state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Located {
    /// Approximate eigenvalue (about 8–12 significant digits).
    pub approx: f64,
    /// Approximate next lower state in the same parity sector (or `min V`).
    pub below: f64,
    /// Approximate next higher state in the same parity sector.
    pub above: f64,
}

impl Located {
    /// Distance to the nearest neighbour in the sector.
    pub fn gap(&self) -> f64 {
        (self.approx - self.below).min(self.above - self.approx)
    }
}

/// Leading-order WKB estimate: `∫ √(ε − V) dy = (n + ½)πs` over the whole line.
pub fn low_precision_estimate(pot: &PotentialSpec, idx: StateIndex) -> f64 {
    let target = (idx.n as f64 + 0.5) * PI * pot.s_f64();
    let action = |eps: f64| -> f64 {
        pot.allowed_intervals(eps)
            .into_iter()
            .map(|(a, b)| {
                // y = a + (b − a)(1 − cos t)/2 removes both endpoint square roots
                let h = 0.5 * (b - a);
                integrate(
                    |t| {
                        let y = a + h * (1.0 - t.cos());
                        (eps - pot.eval_f64(y)).max(0.0).sqrt() * h * t.sin()
                    },
                    0.0,
                    PI,
                    1e-12,
                    0.0,
                )
            })
            .sum::<f64>()
            * 2.0
    };
    let mut lo = pot.min_f64();
    let mut hi = lo.abs().max(1.0);
    while action(hi) < target {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if action(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi.abs() {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Number of states of parity `sigma` below `eps`, from the Prüfer angle.
pub fn count_below(pot: &PotentialSpec, sigma: u8, eps: f64) -> u64 {
    let s = pot.s_f64();
    let x0 = largest_turning_point(pot, eps).unwrap_or(0.0);
    // integrate far enough into the forbidden region that no further zero
    // can appear within double precision
    let xb = choose_x(pot, eps, 20, 0).max(x0 + 1e-3);
    let q0 = (s * pot.deriv_f64(x0).abs()).powf(2.0 / 3.0) + s;

    let rhs = |x: f64, th: f64| -> f64 {
        let q = eps - pot.eval_f64(x);
        let k2 = (q * q + q0 * q0).sqrt();
        let k = k2.sqrt();
        // k′/k with k² = √(q² + q0²), q′ = −V′
        let dlogk = -q * pot.deriv_f64(x) / (2.0 * k2 * k2);
        let (sn, cs) = th.sin_cos();
        dlogk * sn * cs + (k * cs * cs + q / k * sn * sn) / s
    };
    let step_at = |x: f64| -> f64 {
        let q = eps - pot.eval_f64(x);
        let k = (q * q + q0 * q0).sqrt().sqrt();
        (0.05 * s / k).min(0.01 * xb.max(1e-3))
    };

    let mut th = if sigma == 0 { 0.5 * PI } else { 0.0 };
    let mut x = 0.0;
    while x < xb {
        let h = step_at(x).min(xb - x);
        let k1 = rhs(x, th);
        let k2 = rhs(x + 0.5 * h, th + 0.5 * h * k1);
        let k3 = rhs(x + 0.5 * h, th + 0.5 * h * k2);
        let k4 = rhs(x + h, th + h * k3);
        th += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        x += h;
    }
    (th / PI).floor().max(0.0) as u64
}

/// Smallest ε (to within `tol`) with more than `k` states of parity `sigma`
/// below it: the k-th state of the sector. The search starts from a bracket
/// around `guess` that is widened geometrically until it encloses the level.
fn sector_level(pot: &PotentialSpec, sigma: u8, k: u64, guess: f64, tol: f64) -> Result<f64> {
    let vmin = pot.min_f64();
    let scale = pot.s_f64().max(1e-300);
    let guess = guess.max(vmin);
    let mut d = (1e-6 * guess.abs()).max(1e-3 * scale).max(2.0 * tol);
    let mut lo = (guess - d).max(vmin);
    let mut hi = guess + d;
    let mut widenings = 0;
    loop {
        if count_below(pot, sigma, hi) <= k {
            lo = hi;
            hi += d;
        } else if lo > vmin && count_below(pot, sigma, lo) > k {
            hi = lo;
            lo = (lo - d).max(vmin);
        } else {
            break;
        }
        d *= 4.0;
        widenings += 1;
        if widenings > 80 {
            return Err(Error::BracketFailure(format!("no bracket found for sector state {k}")));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= tol {
            break;
        }
        if count_below(pot, sigma, mid) <= k {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Locate state `idx` and its sector neighbours in double precision.
///
/// The state itself is resolved to about 11 significant digits, the
/// neighbours only well enough to know the gap.
pub fn locate(pot: &PotentialSpec, idx: StateIndex) -> Result<Located> {
    let k = idx.k();
    let s = pot.s_f64();
    let guess = low_precision_estimate(pot, idx);
    let approx = sector_level(pot, idx.sigma, k, guess, 1e-11 * guess.abs().max(s))?;
    let below = if k == 0 {
        pot.min_f64()
    } else {
        let g = low_precision_estimate(pot, StateIndex::new(idx.n - 2));
        sector_level(pot, idx.sigma, k - 1, g, 1e-4 * (approx - g).abs().max(1e-3 * s))?
    };
    let g = low_precision_estimate(pot, StateIndex::new(idx.n + 2));
    let above = sector_level(pot, idx.sigma, k + 1, g, 1e-4 * (g - approx).abs().max(1e-3 * s))?;
    Ok(Located { approx, below, above })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wkb_exact_for_harmonic() {
        for s in ["1", "0.1", "3"] {
            let h = PotentialSpec::harmonic(s).unwrap();
            let sv: f64 = s.parse().unwrap();
            for n in [0u64, 1, 5, 10] {
                let e = low_precision_estimate(&h, StateIndex::new(n));
                let want = sv * (2 * n + 1) as f64;
                assert!(((e - want) / want).abs() < 1e-9, "s={s} n={n}: {e}");
            }
        }
    }

    #[test]
    fn wkb_quartic() {
        let q = PotentialSpec::quartic("1").unwrap();
        let e0 = low_precision_estimate(&q, StateIndex::new(0));
        assert!((e0 - 0.87).abs() < 0.01, "{e0}");
        let e = low_precision_estimate(&q, StateIndex::new(50_000));
        assert!(((e - 4_024_985.73) / 4_024_985.73).abs() < 5e-4, "{e}");
    }

    #[test]
    fn counting_harmonic() {
        let h = PotentialSpec::harmonic("1").unwrap();
        // even sector: states 1, 5, 9, …; odd: 3, 7, 11, …
        assert_eq!(count_below(&h, 0, 0.5), 0);
        assert_eq!(count_below(&h, 0, 1.5), 1);
        assert_eq!(count_below(&h, 0, 6.0), 2);
        assert_eq!(count_below(&h, 1, 2.9), 0);
        assert_eq!(count_below(&h, 1, 3.1), 1);
        assert_eq!(count_below(&h, 1, 12.0), 3);
    }

    #[test]
    fn locate_harmonic_states() {
        let h = PotentialSpec::harmonic("1").unwrap();
        for n in 0..8u64 {
            let loc = locate(&h, StateIndex::new(n)).unwrap();
            let want = (2 * n + 1) as f64;
            assert!((loc.approx - want).abs() < 1e-7 * want, "n={n}: {loc:?}");
            assert!(loc.gap() > 0.9);
        }
    }

    #[test]
    fn locate_quartic_ground_and_excited() {
        let q = PotentialSpec::quartic("1").unwrap();
        let loc = locate(&q, StateIndex::new(0)).unwrap();
        assert!((loc.approx - 1.0603620904841829).abs() < 1e-7, "{loc:?}");
        let loc = locate(&q, StateIndex::new(1)).unwrap();
        assert!((loc.approx - 3.7996730298013941).abs() < 1e-6, "{loc:?}");
    }

    #[test]
    fn locate_double_well_pair_small_s() {
        let dw = PotentialSpec::double_well("0.05").unwrap();
        let even = locate(&dw, StateIndex::new(0)).unwrap();
        let odd = locate(&dw, StateIndex::new(1)).unwrap();
        assert!(even.approx < odd.approx);
        assert!((even.approx - 0.0975).abs() < 0.002, "{even:?}");
        assert!(even.gap() > 0.05);
    }
}
