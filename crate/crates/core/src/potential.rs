//! Even polynomial potentials `V(x) = x^{2M} + Σ_{m<M} v_m x^{2m}`.
//!
//! Coefficients are kept as the decimal strings they were given in and are
//! materialised at whatever working precision a caller asks for. Moderate
//! precision queries (turning points, WKB estimates) run in `f64`; they only
//! feed planning and bracketing, never final digits.

use sha2::{Digest, Sha256};

use crate::bigreal::{BigReal, PrecisionCtx};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct PotentialSpec {
    m: usize,
    s_text: String,
    v_text: Vec<String>,
    s: f64,
    v: Vec<f64>,
}

/// Coefficients of a [`PotentialSpec`] materialised at one working precision.
#[derive(Clone, Debug)]
pub struct Coefficients {
    pub s: BigReal,
    pub s2: BigReal,
    pub v: Vec<BigReal>,
}

impl PotentialSpec {
    pub fn new<S: AsRef<str>>(m: usize, s: &str, v: &[S]) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidPotential("M must be a positive integer".into()));
        }
        if v.len() != m {
            return Err(Error::InvalidPotential(format!(
                "expected {m} coefficients v_0..v_{}, got {}",
                m - 1,
                v.len()
            )));
        }
        // validate every literal at a small precision; zero/negative s is rejected
        let probe = PrecisionCtx::new(30)?;
        let s_big = probe.parse(s)?;
        if s_big.signum() <= 0 {
            return Err(Error::InvalidPotential(format!("s must be positive, got {s}")));
        }
        let v_text: Vec<String> = v.iter().map(|t| t.as_ref().trim().to_string()).collect();
        let mut v_f = Vec::with_capacity(m);
        for t in &v_text {
            v_f.push(probe.parse(t)?.to_f64());
        }
        Ok(PotentialSpec { m, s_text: s.trim().to_string(), v_text, s: s_big.to_f64(), v: v_f })
    }

    /// `V = x²`.
    pub fn harmonic(s: &str) -> Result<Self> {
        Self::new(1, s, &["0"])
    }

    /// `V = x⁴`.
    pub fn quartic(s: &str) -> Result<Self> {
        Self::new(2, s, &["0", "0"])
    }

    /// `V = (x² − 1)² = x⁴ − 2x² + 1`.
    pub fn double_well(s: &str) -> Result<Self> {
        Self::new(2, s, &["1", "-2"])
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn s_text(&self) -> &str {
        &self.s_text
    }

    pub fn v_text(&self) -> &[String] {
        &self.v_text
    }

    pub fn s_f64(&self) -> f64 {
        self.s
    }

    pub fn v_f64(&self) -> &[f64] {
        &self.v
    }

    pub fn coefficients(&self, ctx: &PrecisionCtx) -> Coefficients {
        let s = ctx.parse(&self.s_text).expect("validated at construction");
        let s2 = &s * &s;
        let v = self.v_text.iter().map(|t| ctx.parse(t).expect("validated at construction")).collect();
        Coefficients { s, s2, v }
    }

    /// Stable text form, used for hashing.
    pub fn canonical(&self) -> String {
        format!("M={};s={};v=[{}]", self.m, self.s_text, self.v_text.join(","))
    }

    /// Hex SHA-256 of [`Self::canonical`].
    pub fn hash_hex(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// `p(u) = u^M + Σ v_m u^m`, so that `V(x) = p(x²)`.
    pub(crate) fn poly_u(&self) -> Vec<f64> {
        let mut c = self.v.clone();
        c.push(1.0);
        c
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        horner(&self.poly_u(), x * x)
    }

    /// `V'(x)`.
    pub fn deriv_f64(&self, x: f64) -> f64 {
        let p = self.poly_u();
        2.0 * x * horner(&derivative(&p), x * x)
    }

    /// Minimum of `V` over the real line.
    pub fn min_f64(&self) -> f64 {
        let p = self.poly_u();
        let upper = self.u_bound(0.0);
        let mut best = horner(&p, 0.0);
        for c in real_roots(&derivative(&p), 0.0, upper) {
            best = best.min(horner(&p, c));
        }
        best
    }

    /// Upper bound in `u = x²` for any root of `p(u) = eps`.
    fn u_bound(&self, eps: f64) -> f64 {
        let r = 1.0 + eps.abs().powf(1.0 / (2.0 * self.m as f64)) + self.v.iter().map(|v| v.abs()).sum::<f64>();
        r * r
    }

    /// Maximal intervals `[a, b] ⊂ [0, ∞)` on which `V(x) < eps`.
    pub fn allowed_intervals(&self, eps: f64) -> Vec<(f64, f64)> {
        let p = self.poly_u();
        let shifted = shifted(&p, eps);
        let upper = self.u_bound(eps);
        let mut cuts = vec![0.0];
        cuts.extend(real_roots(&shifted, 0.0, upper));
        cuts.push(upper);
        let mut out: Vec<(f64, f64)> = Vec::new();
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b <= a {
                continue;
            }
            if horner(&shifted, 0.5 * (a + b)) < 0.0 {
                let (xa, xb) = (a.sqrt(), b.sqrt());
                match out.last_mut() {
                    Some(last) if last.1 >= xa => last.1 = xb,
                    _ => out.push((xa, xb)),
                }
            }
        }
        out
    }

    /// Largest `x ≥ 0` with `V(x) ≤ eps`, or `None` if `V > eps` everywhere.
    pub(crate) fn sup_below(&self, eps: f64) -> Option<f64> {
        let p = self.poly_u();
        let shifted = shifted(&p, eps);
        let upper = self.u_bound(eps);
        let tol = 1e-12 * (1.0 + eps.abs());
        let mut best: Option<f64> = None;
        let mut consider = |u: f64| best = Some(best.map_or(u, |b: f64| b.max(u)));
        if horner(&shifted, 0.0) <= tol {
            consider(0.0);
        }
        for r in real_roots(&shifted, 0.0, upper) {
            consider(r);
        }
        for c in real_roots(&derivative(&p), 0.0, upper) {
            if horner(&shifted, c) <= tol {
                consider(c);
            }
        }
        best.map(f64::sqrt)
    }
}

/// Global eigenvalue index `n` and its parity exponent `σ = n mod 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct StateIndex {
    pub n: u64,
    pub sigma: u8,
}

impl StateIndex {
    pub fn new(n: u64) -> Self {
        StateIndex { n, sigma: (n % 2) as u8 }
    }

    /// Position of the state within its parity sector.
    pub fn k(&self) -> u64 {
        self.n / 2
    }

    pub fn parity_name(&self) -> &'static str {
        if self.sigma == 0 {
            "even"
        } else {
            "odd"
        }
    }
}

/// `V(x)` by Horner's scheme in `x²`, at the precision of `x`.
pub fn eval_potential(pot: &PotentialSpec, x: &BigReal) -> BigReal {
    let ctx = x.ctx();
    let coeffs = pot.coefficients(&ctx);
    let x2 = x * x;
    let mut acc = ctx.one();
    for v in coeffs.v.iter().rev() {
        acc *= &x2;
        acc += v;
    }
    acc
}

/// `V(y) − ε`; negative inside the classically allowed region.
pub fn classical_momentum_sq(pot: &PotentialSpec, eps: &BigReal, y: &BigReal) -> BigReal {
    &eval_potential(pot, y) - eps
}

/// Largest root `x₀ ≥ 0` of `V(x) = ε`.
pub fn largest_turning_point(pot: &PotentialSpec, eps: f64) -> Result<f64> {
    let min = pot.min_f64();
    if eps < min - 1e-14 * (1.0 + min.abs()) {
        return Err(Error::NoTurningPoint { eps, min });
    }
    pot.sup_below(eps).ok_or(Error::NoTurningPoint { eps, min })
}

pub(crate) fn horner(c: &[f64], u: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ck| acc * u + ck)
}

pub(crate) fn derivative(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(k, &ck)| k as f64 * ck).collect()
}

fn shifted(c: &[f64], eps: f64) -> Vec<f64> {
    let mut s = c.to_vec();
    s[0] -= eps;
    s
}

/// All sign-changing real roots of the polynomial `c` in `(a, b)`, sorted.
///
/// Roots of the derivative split `[a, b]` into monotone pieces, each of which
/// holds at most one root; those are found by bisection.
pub(crate) fn real_roots(c: &[f64], a: f64, b: f64) -> Vec<f64> {
    let mut c = c.to_vec();
    while c.len() > 1 && *c.last().unwrap() == 0.0 {
        c.pop();
    }
    if c.len() <= 1 {
        return Vec::new();
    }
    let mut cuts = vec![a];
    cuts.extend(real_roots(&derivative(&c), a, b));
    cuts.push(b);
    let mut roots = Vec::new();
    for w in cuts.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        let (flo, fhi) = (horner(&c, lo), horner(&c, hi));
        if flo == 0.0 && lo > a {
            if roots.last() != Some(&lo) {
                roots.push(lo);
            }
            continue;
        }
        if flo.signum() == fhi.signum() || fhi == 0.0 {
            continue;
        }
        let neg_lo = flo < 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if (horner(&c, mid) < 0.0) == neg_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        roots.push(0.5 * (lo + hi));
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx() -> PrecisionCtx {
        PrecisionCtx::new(40).unwrap()
    }

    #[test]
    fn construction_rules() {
        assert!(PotentialSpec::new(0, "1", &[] as &[&str]).is_err());
        assert!(PotentialSpec::new(2, "1", &["0"]).is_err());
        assert!(PotentialSpec::new(1, "0", &["0"]).is_err());
        assert!(PotentialSpec::new(1, "-1", &["0"]).is_err());
        assert!(PotentialSpec::new(1, "1", &["x"]).is_err());
        let p = PotentialSpec::double_well("0.05").unwrap();
        assert_eq!(p.canonical(), "M=2;s=0.05;v=[1,-2]");
        assert_eq!(p.hash_hex().len(), 64);
        assert_ne!(p.hash_hex(), PotentialSpec::double_well("0.050").unwrap().hash_hex());
    }

    #[test]
    fn eval_examples() {
        let c = ctx();
        let quartic = PotentialSpec::quartic("1").unwrap();
        assert_eq!(eval_potential(&quartic, &c.from_u64(2)), c.from_u64(16));
        let dw = PotentialSpec::double_well("1").unwrap();
        assert!(eval_potential(&dw, &c.one()).is_zero());
        let harm = PotentialSpec::harmonic("1").unwrap();
        assert_eq!(eval_potential(&harm, &c.from_u64(3)), c.from_u64(9));
    }

    #[test]
    fn momentum_examples() {
        let c = ctx();
        let dw = PotentialSpec::double_well("1").unwrap();
        assert!(classical_momentum_sq(&dw, &c.zero(), &c.one()).is_zero());
        let quartic = PotentialSpec::quartic("1").unwrap();
        let eps = c.parse("1.0603620904841828996470460166926635455152").unwrap();
        let got = classical_momentum_sq(&quartic, &eps, &c.from_u64(2));
        let want = c.parse("14.9396379095158171003529539833073364544848").unwrap();
        assert!((&got - &want).abs().log10_abs() < -38.0);
        let harm = PotentialSpec::harmonic("1").unwrap();
        assert_eq!(classical_momentum_sq(&harm, &c.one(), &c.zero()), c.from_i64(-1));
    }

    #[test]
    fn turning_points() {
        let harm = PotentialSpec::harmonic("1").unwrap();
        assert!((largest_turning_point(&harm, 1.0).unwrap() - 1.0).abs() < 1e-12);
        let quartic = PotentialSpec::quartic("1").unwrap();
        let e0 = 1.060362090484183;
        let x0 = largest_turning_point(&quartic, e0).unwrap();
        assert!((x0 - e0.powf(0.25)).abs() < 1e-12);
        assert!((x0 - 1.01476).abs() < 1e-5);
        let dw = PotentialSpec::double_well("1").unwrap();
        let x0 = largest_turning_point(&dw, 0.00004).unwrap();
        // oracle: plain bisection of (x²−1)² − ε on [1, 2]
        let (mut lo, mut hi) = (1.0f64, 2.0f64);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if (mid * mid - 1.0).powi(2) < 0.00004 {
                lo = mid
            } else {
                hi = mid
            }
        }
        assert!((x0 - lo).abs() < 1e-12);
        assert!((x0 - (1.0 + 0.00004f64.sqrt() / 2.0)).abs() < 1e-5);
        assert!((x0 - 1.00316).abs() < 1e-5);
        // touching minimum of the double well
        assert!((largest_turning_point(&dw, 0.0).unwrap() - 1.0).abs() < 1e-6);
        assert!(matches!(largest_turning_point(&harm, -0.5), Err(Error::NoTurningPoint { .. })));
    }

    #[test]
    fn allowed_region_of_double_well_splits_below_the_barrier() {
        let dw = PotentialSpec::double_well("1").unwrap();
        let below = dw.allowed_intervals(0.5);
        assert_eq!(below.len(), 1);
        assert!(below[0].0 > 0.0);
        let above = dw.allowed_intervals(2.0);
        assert_eq!(above.len(), 1);
        assert_eq!(above[0].0, 0.0);
        assert!((dw.min_f64()).abs() < 1e-12);
    }

    #[test]
    fn state_index_parity() {
        assert_eq!(StateIndex::new(0), StateIndex { n: 0, sigma: 0 });
        assert_eq!(StateIndex::new(5).sigma, 1);
        assert_eq!(StateIndex::new(5).k(), 2);
        assert_eq!(StateIndex::new(50000).k(), 25000);
    }

    proptest! {
        #[test]
        fn potential_is_even(x in -20.0f64..20.0, v0 in -5.0f64..5.0, v1 in -5.0f64..5.0) {
            let c = ctx();
            let pot = PotentialSpec::new(2, "1", &[format!("{v0}"), format!("{v1}")]).unwrap();
            let xp = c.parse(&format!("{x}")).unwrap();
            let xm = -&xp;
            prop_assert_eq!(eval_potential(&pot, &xp), eval_potential(&pot, &xm));
        }

        #[test]
        fn double_well_identity(k in -640i64..640, x in -10.0f64..10.0) {
            let c = PrecisionCtx::new(60).unwrap();
            let dw = PotentialSpec::double_well("1").unwrap();
            // dyadic points: every operation is exact
            let xb = &c.from_i64(k) / &c.from_u64(64);
            let t = &(&xb * &xb) - &c.one();
            prop_assert_eq!(eval_potential(&dw, &xb), &t * &t);
            let xb = c.parse(&format!("{x}")).unwrap();
            let t = &(&xb * &xb) - &c.one();
            let want = &t * &t;
            let diff = (&eval_potential(&dw, &xb) - &want).abs();
            prop_assert!(diff.is_zero() || diff.log10_abs() < -55.0 + want.log10_abs().max(0.0) + 2.0);
        }

        #[test]
        fn turning_point_is_a_root(eps in 0.01f64..1000.0, v0 in -3.0f64..3.0, v1 in -3.0f64..3.0) {
            let pot = PotentialSpec::new(2, "1", &[format!("{v0}"), format!("{v1}")]).unwrap();
            prop_assume!(eps > pot.min_f64() + 1e-6);
            let x0 = largest_turning_point(&pot, eps).unwrap();
            let scale = eps.abs().max(1.0);
            prop_assert!((pot.eval_f64(x0) - eps).abs() < 1e-9 * scale);
            for d in [1e-5, 1.0, 10.0] {
                prop_assert!(pot.eval_f64(x0 + d) > eps);
            }
        }
    }
}
