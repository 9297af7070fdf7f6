//! Taylor-series evaluation of ψ(x; ε) and ψ′(x; ε).
//!
//! With `ψ(x) = x^σ Σ_m a_m x^{2m}` and `A_m(x) = a_m x^{2m}`, substituting
//! into `−s²ψ″ + (V − ε)ψ = 0` and matching the coefficient of `x^{2n+σ}`
//! gives
//!
//! ```text
//!   s²(2n+2+σ)(2n+1+σ) a_{n+1} = a_{n−M} + Σ_{k<M} v_k a_{n−k} − ε a_n
//! ```
//!
//! and hence, after multiplying by `x^{2n+2}`,
//!
//! ```text
//!   A_{n+1} = [A_{n−M} x^{2(M+1)} + Σ_{k<M} v_k A_{n−k} x^{2(k+1)} − ε A_n x²]
//!             / [s² (2n+2+σ)(2n+1+σ)]
//! ```
//!
//! Only the last `M+1` terms are needed, so the sum runs in a fixed ring
//! buffer no matter how many terms it takes.

use crate::bigreal::{BigReal, PrecisionCtx, Ratio};
use crate::error::{Error, Result};
use crate::potential::PotentialSpec;

/// Result of one summation of the series at a point `x`.
#[derive(Clone, Debug)]
pub struct SeriesEval {
    /// ψ(x; ε), normalised by `A₀ = 1`.
    pub psi: BigReal,
    /// ψ′(x; ε).
    pub dpsi: BigReal,
    /// Running maximum of `|A_m(x)|`.
    pub max_abs_term: BigReal,
    /// Number of terms generated, including `A₀`.
    pub n_terms: u64,
    /// Index `m` at which the largest term occurred.
    pub peak_index: u64,
    /// `log₁₀ max_m |A_m(x)|`: decimal digits lost to cancellation.
    pub delta_d_observed: f64,
    /// Whether the stopping rule fired before the term cap.
    pub converged: bool,
    /// Number of multiprecision values the summation kept alive. Depends on
    /// `M` only, never on the number of terms.
    pub retained_values: usize,
}

/// One step of the coefficient recurrence, written out literally.
///
/// `window` holds `A_{n−M}, …, A_n` (oldest first; use zeros for negative
/// indices) and `xpowers` holds `x², x⁴, …, x^{2(M+1)}`.
pub fn recurrence_step(
    pot: &PotentialSpec,
    eps: &BigReal,
    sigma: u8,
    n: u64,
    window: &[BigReal],
    xpowers: &[BigReal],
) -> BigReal {
    let m = pot.m();
    assert_eq!(window.len(), m + 1, "window must hold M+1 terms");
    assert_eq!(xpowers.len(), m + 1, "need x², …, x^(2(M+1))");
    let ctx = eps.ctx();
    let coeffs = pot.coefficients(&ctx);
    // window[m − j] = A_{n−j}
    let a = |j: usize| &window[m - j];

    let mut num = a(m) * &xpowers[m];
    for (k, vk) in coeffs.v.iter().enumerate() {
        if !vk.is_zero() {
            num += &(&(vk * a(k)) * &xpowers[k]);
        }
    }
    num -= &(&(eps * a(0)) * &xpowers[0]);

    let sig = u64::from(sigma);
    let mut out = &num / &coeffs.s2;
    out.div_u64((2 * n + 2 + sig) * (2 * n + 1 + sig));
    out
}

/// One lag weight of the recurrence. Weights that are ratios of short
/// integers (short decimal `v_k`, `x`, `s`) are applied in time linear in the
/// precision; only the ε-dependent weight needs a full multiplication.
enum Weight {
    Zero,
    Full(BigReal),
    Exact(Ratio),
    /// `w · r` with `w` full precision and `r` exact.
    Scaled(BigReal, Ratio),
}

impl Weight {
    fn is_full(&self) -> bool {
        matches!(self, Weight::Full(_) | Weight::Scaled(..))
    }
}

/// Largest integer size (bits) still treated as short.
const SHORT_RATIO_BITS: u32 = 512;

fn fold_weights(pot: &PotentialSpec, eps: &BigReal, x: &BigReal, ctx: &PrecisionCtx) -> Vec<Weight> {
    let m = pot.m();
    let coeffs = pot.coefficients(ctx);
    let short = |r: &Ratio| r.bits() <= SHORT_RATIO_BITS.min(ctx.mantissa_bits() / 16);
    // exact x²/s² and v_k when every input is a short decimal
    let exact: Option<(Ratio, Vec<Ratio>)> = (|| {
        let x = Ratio::recognise(x, 40)?;
        let s = Ratio::from_decimal(pot.s_text()).ok()?;
        let x2s2 = x.mul(&x).div(&s.mul(&s)).ok()?;
        let x2 = x.mul(&x);
        let mut out = Vec::with_capacity(m + 1);
        let mut xp = x2s2.clone();
        for k in 0..=m {
            let v = if k == 0 {
                Ratio::from_integer(1)
            } else if k < m {
                Ratio::from_decimal(&pot.v_text()[k]).ok()?
            } else {
                Ratio::from_integer(1)
            };
            out.push(v.mul(&xp));
            xp = xp.mul(&x2);
        }
        out.iter().all(short).then_some((x2s2, out))
    })();

    let x2 = x * x;
    let mut xp = x2.clone();
    let mut weights = Vec::with_capacity(m + 1);
    for k in 0..=m {
        let coef = if k == 0 {
            &coeffs.v[0] - eps
        } else if k < m {
            coeffs.v[k].clone()
        } else {
            ctx.one()
        };
        let w = if coef.is_zero() {
            Weight::Zero
        } else {
            match &exact {
                Some((x2s2, _)) if k == 0 => Weight::Scaled(coef, x2s2.clone()),
                Some((_, rs)) => Weight::Exact(rs[k].clone()),
                None => Weight::Full(&(&coef * &xp) / &coeffs.s2),
            }
        };
        weights.push(w);
        if k < m {
            xp = &xp * &x2;
        }
    }
    weights
}

/// Sum the series for ψ(x; ε) and ψ′(x; ε) at precision `ctx`.
///
/// Summation stops once `M+2` consecutive terms have fallen below one unit in
/// the last place of the largest term seen so far, or after `max_terms`
/// terms (then `converged` is false).
pub fn sum_series(
    pot: &PotentialSpec,
    eps: &BigReal,
    sigma: u8,
    x: &BigReal,
    ctx: &PrecisionCtx,
    max_terms: u64,
) -> Result<SeriesEval> {
    let m = pot.m();
    if x.signum() <= 0 {
        return Err(Error::Domain(format!("series evaluation point must be positive, got {x}")));
    }
    if max_terms < m as u64 + 2 {
        return Err(Error::Domain(format!("max_terms must be at least M+2 = {}, got {max_terms}", m + 2)));
    }
    assert!(sigma <= 1, "parity must be 0 or 1");

    let x = x.to_ctx(ctx);
    let eps = eps.to_ctx(ctx);
    let sig = u64::from(sigma);
    let prec_bits = ctx.mantissa_bits() as i64;

    // Fold the potential into per-lag weights: A_{n+1}·(2n+2+σ)(2n+1+σ)
    //   = Σ_j w_j A_{n−j},  w_0 = (v_0 − ε)x²/s², w_k = v_k x^{2(k+1)}/s²,
    //   w_M = x^{2(M+1)}/s².
    let weights = fold_weights(pot, &eps, &x, ctx);
    // ring[i mod (M+1)] = A_i for the most recent M+1 indices
    let mut ring: Vec<BigReal> = (0..=m).map(|_| ctx.zero()).collect();
    ring[0] = ctx.one();
    let mut next = ctx.zero();
    let mut scratch = ctx.zero();
    let mut sum = ctx.one();
    let mut dsum = ctx.from_u64(sig);
    let mut max_term = ctx.one();
    let mut max_exp: i64 = 1; // binary exponent of 1
    let mut peak_index = 0u64;
    let retained_values = ring.len() + weights.iter().filter(|w| w.is_full()).count() + 5;

    let mut misses = 0usize;
    let mut n_terms = 1u64;
    let mut converged = false;
    let period = m + 1;

    for n in 0..max_terms - 1 {
        // next = Σ_j w_j A_{n−j}
        let mut first = true;
        for (j, w) in weights.iter().enumerate() {
            if (j as u64) > n {
                continue; // A at negative index is zero
            }
            let a = &ring[((n - j as u64) % period as u64) as usize];
            let target = if first { &mut next } else { &mut scratch };
            match w {
                Weight::Zero => continue,
                Weight::Full(w) => target.set_mul(w, a),
                Weight::Exact(r) => {
                    target.assign(a);
                    target.mul_ratio(r);
                }
                Weight::Scaled(w, r) => {
                    target.set_mul(w, a);
                    target.mul_ratio(r);
                }
            }
            if first {
                first = false;
            } else {
                next += &scratch;
            }
        }
        if first {
            next.assign(&ctx.zero());
        }
        next.div_u64((2 * n + 2 + sig) * (2 * n + 1 + sig));

        let idx = n + 1;
        sum += &next;
        scratch.assign(&next);
        scratch.mul_u64(2 * idx + sig);
        dsum += &scratch;

        let below_floor = match next.exponent2() {
            None => true,
            Some(e) => {
                let e = i64::from(e);
                if e >= max_exp && next.cmp_abs(&max_term).is_gt() {
                    max_term.assign(&next.abs());
                    max_exp = e;
                    peak_index = idx;
                }
                e <= max_exp - prec_bits
            }
        };
        // the oldest slot holds A_{n−M}, which is no longer needed
        std::mem::swap(&mut ring[(idx % period as u64) as usize], &mut next);
        n_terms += 1;

        misses = if below_floor { misses + 1 } else { 0 };
        if misses >= m + 2 {
            converged = true;
            break;
        }
    }

    // ψ = x^σ Σ A_m,  ψ′ = x^{σ−1} Σ (2m+σ) A_m
    let (psi, dpsi) = if sigma == 0 { (sum, &dsum / &x) } else { (&sum * &x, dsum) };
    let delta_d_observed = max_term.log10_abs();
    Ok(SeriesEval {
        psi,
        dpsi,
        max_abs_term: max_term,
        n_terms,
        peak_index,
        delta_d_observed,
        converged,
        retained_values,
    })
}

/// Robin log-derivative `−s ψ′/ψ`.
pub fn log_derivative(se: &SeriesEval, pot: &PotentialSpec) -> Result<BigReal> {
    if se.psi.is_zero() {
        return Err(Error::Pole);
    }
    let s = pot.coefficients(&se.psi.ctx()).s;
    Ok(-&(&(&s * &se.dpsi) / &se.psi))
}

/// Re-sum at `D + 50` digits and report how many leading decimal digits of
/// ψ agree with the `D`-digit result; measures actual roundoff loss.
pub fn roundoff_check(
    pot: &PotentialSpec,
    eps: &BigReal,
    sigma: u8,
    x: &BigReal,
    ctx: &PrecisionCtx,
    max_terms: u64,
) -> Result<f64> {
    let lo = sum_series(pot, eps, sigma, x, ctx, max_terms)?;
    let wide = PrecisionCtx::new(ctx.decimal_digits() + 50)?;
    let hi = sum_series(pot, eps, sigma, x, &wide, max_terms)?;
    let diff = &lo.psi.to_ctx(&wide) - &hi.psi;
    if diff.is_zero() {
        return Ok(ctx.decimal_digits() as f64);
    }
    Ok(hi.psi.log10_abs() - diff.log10_abs())
}
