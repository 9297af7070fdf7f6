//! Arbitrary-precision reals bound to a decimal working precision.
//!
//! All high-precision arithmetic in the crate goes through [`BigReal`]; the
//! backend (MPFR via `rug`) is not visible outside this module. Rounding is
//! always to nearest, ties to even.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::{Constant, Round};
use rug::{Float, Integer};

use crate::error::{Error, Result};

/// Guard bits added on top of the decimal→binary conversion.
pub const DEFAULT_GUARD_BITS: u32 = 32;

/// Immutable description of a working precision of `D` decimal digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrecisionCtx {
    decimal_digits: u64,
    guard_bits: u32,
    mantissa_bits: u32,
}

impl PrecisionCtx {
    pub fn new(decimal_digits: u64) -> Result<Self> {
        Self::with_guard_bits(decimal_digits, DEFAULT_GUARD_BITS)
    }

    pub fn with_guard_bits(decimal_digits: u64, guard_bits: u32) -> Result<Self> {
        if decimal_digits == 0 {
            return Err(Error::InvalidPrecision(0));
        }
        let bits = u64::from(decimal_bits(decimal_digits)) + u64::from(guard_bits);
        let mantissa_bits = u32::try_from(bits)
            .ok()
            .filter(|&b| b <= rug::float::prec_max())
            .ok_or(Error::InvalidPrecision(decimal_digits as i64))?;
        Ok(PrecisionCtx { decimal_digits, guard_bits, mantissa_bits })
    }

    pub fn decimal_digits(&self) -> u64 {
        self.decimal_digits
    }

    pub fn guard_bits(&self) -> u32 {
        self.guard_bits
    }

    pub fn mantissa_bits(&self) -> u32 {
        self.mantissa_bits
    }

    pub fn zero(&self) -> BigReal {
        BigReal::wrap(*self, Float::new(self.mantissa_bits))
    }

    pub fn one(&self) -> BigReal {
        self.from_u64(1)
    }

    pub fn from_u64(&self, n: u64) -> BigReal {
        BigReal::wrap(*self, Float::with_val(self.mantissa_bits, n))
    }

    pub fn from_i64(&self, n: i64) -> BigReal {
        BigReal::wrap(*self, Float::with_val(self.mantissa_bits, n))
    }

    pub fn pi(&self) -> BigReal {
        BigReal::wrap(*self, Float::with_val(self.mantissa_bits, Constant::Pi))
    }

    pub fn ln10(&self) -> BigReal {
        let mut v = Float::with_val(self.mantissa_bits, 10);
        v.ln_mut();
        BigReal::wrap(*self, v)
    }

    pub fn parse(&self, text: &str) -> Result<BigReal> {
        parse_decimal(text, self)
    }
}

/// `ceil(D · log₂ 10)`, computed exactly as the bit length of `10^D`.
fn decimal_bits(decimal_digits: u64) -> u32 {
    let d = u32::try_from(decimal_digits).unwrap_or(u32::MAX);
    Integer::from(Integer::u_pow_u(10, d)).significant_bits()
}

/// Constructor from a signed digit count: rejects non-positive values.
pub fn make_context(decimal_digits: i64) -> Result<PrecisionCtx> {
    if decimal_digits < 1 {
        return Err(Error::InvalidPrecision(decimal_digits));
    }
    PrecisionCtx::new(decimal_digits as u64)
}

/// A real number carried at the precision of its [`PrecisionCtx`].
#[derive(Clone)]
pub struct BigReal {
    ctx: PrecisionCtx,
    val: Float,
}

impl BigReal {
    fn wrap(ctx: PrecisionCtx, val: Float) -> Self {
        BigReal { ctx, val }
    }

    pub fn parse(text: &str, ctx: &PrecisionCtx) -> Result<Self> {
        parse_decimal(text, ctx)
    }

    pub fn ctx(&self) -> PrecisionCtx {
        self.ctx
    }

    /// The same value rounded (or exactly extended) to another precision.
    pub fn to_ctx(&self, ctx: &PrecisionCtx) -> BigReal {
        let (val, _) = Float::with_val_round(ctx.mantissa_bits, &self.val, Round::Nearest);
        BigReal::wrap(*ctx, val)
    }

    pub fn is_zero(&self) -> bool {
        self.val.is_zero()
    }

    /// -1, 0 or +1.
    pub fn signum(&self) -> i8 {
        match self.val.cmp0() {
            Some(Ordering::Less) => -1,
            Some(Ordering::Greater) => 1,
            _ => 0,
        }
    }

    pub fn abs(&self) -> BigReal {
        BigReal::wrap(self.ctx, self.val.clone().abs())
    }

    pub fn sqrt(&self) -> BigReal {
        BigReal::wrap(self.ctx, self.val.clone().sqrt())
    }

    pub fn cbrt(&self) -> BigReal {
        BigReal::wrap(self.ctx, self.val.clone().cbrt())
    }

    pub fn exp(&self) -> BigReal {
        BigReal::wrap(self.ctx, self.val.clone().exp())
    }

    pub fn ln(&self) -> BigReal {
        BigReal::wrap(self.ctx, self.val.clone().ln())
    }

    pub fn powu(&self, n: u32) -> BigReal {
        use rug::ops::Pow;
        BigReal::wrap(self.ctx, self.val.clone().pow(n))
    }

    pub fn cmp_abs(&self, other: &BigReal) -> Ordering {
        self.val.cmp_abs(&other.val).unwrap_or(Ordering::Equal)
    }

    /// Binary exponent `e` with `2^(e-1) ≤ |v| < 2^e`; `None` for zero.
    pub fn exponent2(&self) -> Option<i32> {
        self.val.get_exp()
    }

    /// `log₁₀ |v|` as a double; `-inf` for zero. Valid far outside the f64
    /// exponent range.
    pub fn log10_abs(&self) -> f64 {
        if self.val.is_zero() {
            return f64::NEG_INFINITY;
        }
        let (mant, exp) = self.val.to_f64_exp();
        mant.abs().log10() + f64::from(exp) * std::f64::consts::LOG10_2
    }

    pub fn to_f64(&self) -> f64 {
        self.val.to_f64()
    }

    /// Correctly rounded rendering with exactly `digits` significant digits.
    pub fn render(&self, digits: usize) -> Result<String> {
        render_decimal(self, digits)
    }

    /// Shortest decimal string that parses back to exactly this value at the
    /// same precision.
    pub fn render_exact(&self) -> String {
        let (neg, digits, exp) = self.val.to_sign_string_exp(10, None);
        match exp {
            None => "0".to_string(),
            Some(e) => format_significand(neg, &digits, i64::from(e) - 1),
        }
    }

    // In-place kernels for hot loops. Results are rounded to `self`'s precision.

    /// `self = a · b`
    #[inline]
    pub fn set_mul(&mut self, a: &BigReal, b: &BigReal) {
        self.val.assign_round_mul(&a.val, &b.val);
    }

    /// `self += a · b` with a single rounding.
    #[inline]
    pub fn add_mul(&mut self, a: &BigReal, b: &BigReal) {
        self.val.add_mul_round(&a.val, &b.val);
    }

    #[inline]
    pub fn mul_u64(&mut self, n: u64) {
        self.val *= n;
    }

    #[inline]
    pub fn div_u64(&mut self, n: u64) {
        self.val /= n;
    }

    #[inline]
    pub fn assign(&mut self, other: &BigReal) {
        use rug::Assign;
        self.val.assign(&other.val);
    }

    pub fn halve(&mut self) {
        self.val >>= 1;
    }

    /// `self *= r`, two roundings, cost linear in the precision when `r` is
    /// a ratio of short integers.
    #[inline]
    pub fn mul_ratio(&mut self, r: &Ratio) {
        self.val *= &r.num;
        if r.den != 1 {
            self.val /= &r.den;
        }
    }
}

/// Exact rational `num/den` (`den > 0`, lowest terms).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ratio {
    num: Integer,
    den: Integer,
}

impl Ratio {
    fn reduced(num: Integer, den: Integer) -> Ratio {
        let g = Integer::from(num.gcd_ref(&den));
        let (mut num, mut den) = if g > 1 { (num / &g, den / &g) } else { (num, den) };
        if den < 0 {
            num = -num;
            den = -den;
        }
        Ratio { num, den }
    }

    pub fn from_integer(n: i64) -> Ratio {
        Ratio { num: Integer::from(n), den: Integer::from(1) }
    }

    /// The exact value of a decimal literal.
    pub fn from_decimal(text: &str) -> Result<Ratio> {
        let d = ExactDecimal::parse(text)?;
        let shift = u32::try_from(d.exponent.unsigned_abs()).map_err(|_| Error::Parse(text.to_string()))?;
        let p = Integer::from(Integer::u_pow_u(10, shift));
        Ok(if d.exponent >= 0 { Ratio::reduced(d.mantissa * p, Integer::from(1)) } else { Ratio::reduced(d.mantissa, p) })
    }

    /// A short decimal whose rounding to `x`'s precision is exactly `x`, if
    /// one with at most `max_digits` significant digits exists.
    pub fn recognise(x: &BigReal, max_digits: usize) -> Option<Ratio> {
        let text = x.render(max_digits.min(x.ctx.decimal_digits as usize)).ok()?;
        let r = Ratio::from_decimal(&text).ok()?;
        (r.to_big(&x.ctx) == *x).then_some(r)
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn mul(&self, other: &Ratio) -> Ratio {
        Ratio::reduced(Integer::from(&self.num * &other.num), Integer::from(&self.den * &other.den))
    }

    pub fn div(&self, other: &Ratio) -> Result<Ratio> {
        if other.is_zero() {
            return Err(Error::Domain("division of a ratio by zero".into()));
        }
        Ok(Ratio::reduced(Integer::from(&self.num * &other.den), Integer::from(&self.den * &other.num)))
    }

    /// Bit length of the larger of numerator and denominator.
    pub fn bits(&self) -> u32 {
        self.num.significant_bits().max(self.den.significant_bits())
    }

    /// Correctly rounded value at `ctx`.
    pub fn to_big(&self, ctx: &PrecisionCtx) -> BigReal {
        let q = rug::Rational::from((self.num.clone(), self.den.clone()));
        let (val, _) = Float::with_val_round(ctx.mantissa_bits, &q, Round::Nearest);
        BigReal::wrap(*ctx, val)
    }
}

// Small local extension so the kernels above read naturally.
trait FloatKernels {
    fn assign_round_mul(&mut self, a: &Float, b: &Float);
    fn add_mul_round(&mut self, a: &Float, b: &Float);
}

impl FloatKernels for Float {
    #[inline]
    fn assign_round_mul(&mut self, a: &Float, b: &Float) {
        use rug::Assign;
        self.assign(a * b);
    }

    #[inline]
    fn add_mul_round(&mut self, a: &Float, b: &Float) {
        *self += a * b;
    }
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = (self.ctx.decimal_digits as usize).min(30);
        match self.render(digits) {
            Ok(s) => write!(f, "BigReal({s}; D={})", self.ctx.decimal_digits),
            Err(_) => write!(f, "BigReal(?; D={})", self.ctx.decimal_digits),
        }
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20).min(self.ctx.decimal_digits as usize).max(1);
        f.write_str(&self.render(digits).map_err(|_| fmt::Error)?)
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.val == other.val
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.val.partial_cmp(&other.val)
    }
}

fn wider(a: &PrecisionCtx, b: &PrecisionCtx) -> PrecisionCtx {
    if a.mantissa_bits >= b.mantissa_bits {
        *a
    } else {
        *b
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $assign_trait:ident, $assign:ident) => {
        impl<'a> $trait<&'a BigReal> for &'a BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &'a BigReal) -> BigReal {
                let ctx = wider(&self.ctx, &rhs.ctx);
                let val = Float::with_val(ctx.mantissa_bits, (&self.val).$method(&rhs.val));
                BigReal::wrap(ctx, val)
            }
        }

        impl $trait<BigReal> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: BigReal) -> BigReal {
                (&self).$method(&rhs)
            }
        }

        impl<'a> $assign_trait<&'a BigReal> for BigReal {
            fn $assign(&mut self, rhs: &'a BigReal) {
                self.val.$assign(&rhs.val);
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign);
binop!(Sub, sub, SubAssign, sub_assign);
binop!(Mul, mul, MulAssign, mul_assign);
binop!(Div, div, DivAssign, div_assign);

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal::wrap(self.ctx, -self.val)
    }
}

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal::wrap(self.ctx, Float::with_val(self.ctx.mantissa_bits, -&self.val))
    }
}

/// Accepts `[+-]digits[.digits][e[+-]digits]`, also `.5` and `5.`.
fn is_decimal_literal(text: &str) -> bool {
    let b = text.as_bytes();
    let mut i = 0;
    if i < b.len() && (b[i] == b'+' || b[i] == b'-') {
        i += 1;
    }
    let int_start = i;
    while i < b.len() && b[i].is_ascii_digit() {
        i += 1;
    }
    let mut mantissa_digits = i - int_start;
    if i < b.len() && b[i] == b'.' {
        i += 1;
        let frac_start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        mantissa_digits += i - frac_start;
    }
    if mantissa_digits == 0 {
        return false;
    }
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        i += 1;
        if i < b.len() && (b[i] == b'+' || b[i] == b'-') {
            i += 1;
        }
        let exp_start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        if i == exp_start {
            return false;
        }
    }
    i == b.len()
}

/// Parses a decimal literal, rounding to nearest-even at `ctx` precision.
pub fn parse_decimal(text: &str, ctx: &PrecisionCtx) -> Result<BigReal> {
    let text = text.trim();
    if !is_decimal_literal(text) {
        return Err(Error::Parse(text.to_string()));
    }
    let parsed = Float::parse(text).map_err(|_| Error::Parse(text.to_string()))?;
    let (val, _) = Float::with_val_round(ctx.mantissa_bits, parsed, Round::Nearest);
    Ok(BigReal::wrap(*ctx, val))
}

/// Correctly rounded decimal rendering with exactly `digits` significant
/// digits. Values with decimal exponent in `[-6, digits)` are written
/// positionally, others in scientific notation (`1.928749848e-22`).
pub fn render_decimal(v: &BigReal, digits: usize) -> Result<String> {
    if digits == 0 || digits as u64 > v.ctx.decimal_digits {
        return Err(Error::DigitsExceedPrecision { requested: digits, available: v.ctx.decimal_digits });
    }
    let (neg, mant, exp) = v.val.to_sign_string_exp(10, Some(digits));
    match exp {
        None => {
            let zeros = "0".repeat(digits - 1);
            Ok(format_significand(false, &format!("0{zeros}"), 0))
        }
        Some(e) => Ok(format_significand(neg, &mant, i64::from(e) - 1)),
    }
}

/// Formats `0.d₁d₂… × 10^(exp10+1)`, i.e. `d₁.d₂… × 10^exp10`.
pub(crate) fn format_significand(neg: bool, digits: &str, exp10: i64) -> String {
    let n = digits.len() as i64;
    let mut out = String::with_capacity(digits.len() + 12);
    if neg {
        out.push('-');
    }
    if (-6..n.max(1)).contains(&exp10) {
        if exp10 < 0 {
            out.push_str("0.");
            for _ in 0..(-exp10 - 1) {
                out.push('0');
            }
            out.push_str(digits);
        } else {
            let int_len = (exp10 + 1) as usize;
            out.push_str(&digits[..int_len]);
            if int_len < digits.len() {
                out.push('.');
                out.push_str(&digits[int_len..]);
            }
        }
    } else {
        out.push_str(&digits[..1]);
        if digits.len() > 1 {
            out.push('.');
            out.push_str(&digits[1..]);
        }
        out.push('e');
        out.push_str(&exp10.to_string());
    }
    out
}

/// Exact decimal value `mantissa · 10^exponent`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactDecimal {
    pub mantissa: Integer,
    pub exponent: i64,
}

impl ExactDecimal {
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if !is_decimal_literal(text) {
            return Err(Error::Parse(text.to_string()));
        }
        let (body, exp) = match text.find(['e', 'E']) {
            Some(p) => {
                let e: i64 = text[p + 1..].parse().map_err(|_| Error::Parse(text.to_string()))?;
                (&text[..p], e)
            }
            None => (text, 0),
        };
        let (int, frac) = body.split_once('.').unwrap_or((body, ""));
        let joined = format!("{int}{frac}");
        let mantissa = Integer::from_str_radix(
            if joined == "+" || joined == "-" { "0" } else { joined.as_str() },
            10,
        )
        .map_err(|_| Error::Parse(text.to_string()))?;
        Ok(ExactDecimal { mantissa, exponent: exp - frac.len() as i64 })
    }

    /// Renders every significant digit (trailing zeros of the mantissa kept).
    pub fn render(&self) -> String {
        if self.mantissa == 0 {
            return "0".to_string();
        }
        let neg = self.mantissa < 0;
        let digits = Integer::from(self.mantissa.abs_ref()).to_string();
        let exp10 = self.exponent + digits.len() as i64 - 1;
        format_significand(neg, &digits, exp10)
    }
}

impl Sub for &ExactDecimal {
    type Output = ExactDecimal;
    fn sub(self, rhs: &ExactDecimal) -> ExactDecimal {
        let e = self.exponent.min(rhs.exponent);
        let scale = |d: &ExactDecimal| {
            let shift = u32::try_from(d.exponent - e).expect("exponent gap fits in u32");
            Integer::from(&d.mantissa * Integer::from(Integer::u_pow_u(10, shift)))
        };
        ExactDecimal { mantissa: scale(self) - scale(rhs), exponent: e }
    }
}

/// `a − b` computed exactly on the decimal strings.
pub fn exact_decimal_difference(a: &str, b: &str) -> Result<String> {
    let a = ExactDecimal::parse(a)?;
    let b = ExactDecimal::parse(b)?;
    Ok((&a - &b).render())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn context_bits() {
        let ctx = make_context(10).unwrap();
        assert_eq!(ctx.mantissa_bits(), 34 + DEFAULT_GUARD_BITS);
        assert!(ctx.mantissa_bits() >= 34);
        let big = make_context(1_500_000).unwrap();
        assert_eq!(big.mantissa_bits() - DEFAULT_GUARD_BITS, 4_982_893);
        assert!(matches!(make_context(0), Err(Error::InvalidPrecision(0))));
        assert!(make_context(-3).is_err());
    }

    #[test]
    fn parse_exact_and_rounded() {
        let ctx = PrecisionCtx::new(50).unwrap();
        let v = ctx.parse("1.5").unwrap();
        assert_eq!(v, &ctx.from_u64(3) / &ctx.from_u64(2));
        let tenth = ctx.parse("0.1").unwrap();
        assert_eq!(tenth.render(50).unwrap(), format!("0.1{}", "0".repeat(49)));
        let tiny = PrecisionCtx::new(100).unwrap().parse("1e-30000").unwrap();
        assert!(tiny.signum() > 0);
        assert_eq!(tiny.render(5).unwrap(), "1.0000e-30000");
        assert!((tiny.log10_abs() + 30000.0).abs() < 1e-9);
        let huge = ctx.parse("-2.5e10000000").unwrap();
        assert_eq!(huge.render(3).unwrap(), "-2.50e10000000");
    }

    #[test]
    fn malformed_literals() {
        let ctx = PrecisionCtx::new(20).unwrap();
        for bad in ["", "abc", "1.2.3", "--1", "1e", "e5", ".", "inf", "nan", "0x10", "1,5"] {
            assert!(matches!(ctx.parse(bad), Err(Error::Parse(_))), "{bad:?}");
        }
        for good in ["5.", ".5", "+1", "-0.0", "1E+3", "007"] {
            assert!(ctx.parse(good).is_ok(), "{good:?}");
        }
    }

    #[test]
    fn render_examples() {
        let ctx = PrecisionCtx::new(20).unwrap();
        let third = &ctx.one() / &ctx.from_u64(3);
        assert_eq!(third.render(10).unwrap(), "0.3333333333");
        let text = "1.060362090484182899";
        assert_eq!(ctx.parse(text).unwrap().render(19).unwrap(), text);
        assert!(matches!(third.render(21), Err(Error::DigitsExceedPrecision { .. })));
        assert_eq!(ctx.from_u64(7).render(4).unwrap(), "7.000");
        assert_eq!(ctx.zero().render(3).unwrap(), "0.00");
        assert_eq!(ctx.parse("4024985.73").unwrap().render(9).unwrap(), "4024985.73");
        assert_eq!(ctx.parse("0.0000399998").unwrap().render(6).unwrap(), "0.0000399998");
    }

    #[test]
    fn exponential_by_series_renders_correctly() {
        // e^{-50} = 1 / Σ 50^k/k!, summed here term by term; the reference
        // digits come from MPFR's own exp, an independent algorithm.
        let ctx = PrecisionCtx::new(100).unwrap();
        let fifty = ctx.from_u64(50);
        let mut term = ctx.one();
        let mut sum = ctx.one();
        for k in 1..400u64 {
            term *= &fifty;
            term.div_u64(k);
            sum += &term;
        }
        let v = &ctx.one() / &sum;
        assert_eq!(v.render(10).unwrap(), "1.928749848e-22");
        let oracle = (-fifty).exp();
        assert_eq!(v.render(95).unwrap(), oracle.render(95).unwrap());
    }

    #[test]
    fn exact_render_roundtrips() {
        let ctx = PrecisionCtx::new(60).unwrap();
        let v = &ctx.pi() / &ctx.from_u64(7);
        let back = ctx.parse(&v.render_exact()).unwrap();
        assert_eq!(v, back);
    }

    #[test]
    fn exact_difference() {
        assert_eq!(exact_decimal_difference("0.0975001", "0.0975").unwrap(), "1e-7");
        assert_eq!(exact_decimal_difference("1.25", "1.3").unwrap(), "-0.05");
        assert_eq!(exact_decimal_difference("4e2", "1").unwrap(), "399");
        assert_eq!(exact_decimal_difference("2", "2.000").unwrap(), "0");
    }

    #[test]
    fn precision_of_mixed_operands_is_the_wider() {
        let lo = PrecisionCtx::new(20).unwrap();
        let hi = PrecisionCtx::new(200).unwrap();
        let v = &lo.one() + &hi.pi();
        assert_eq!(v.ctx(), hi);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;
        use rug::Rational;

        fn value(d: &ExactDecimal) -> Rational {
            let p = Rational::from(Integer::u_pow_u(10, d.exponent.unsigned_abs() as u32));
            let m = Rational::from(&d.mantissa);
            if d.exponent >= 0 { m * p } else { m / p }
        }

        proptest! {
            #[test]
            fn exact_difference_is_exact(m1 in -10i64.pow(12)..10i64.pow(12), e1 in -30i64..30,
                                         m2 in -10i64.pow(12)..10i64.pow(12), e2 in -30i64..30) {
                let a = format!("{m1}e{e1}");
                let b = format!("{m2}e{e2}");
                let diff = ExactDecimal::parse(&exact_decimal_difference(&a, &b).unwrap()).unwrap();
                let want = value(&ExactDecimal::parse(&a).unwrap()) - value(&ExactDecimal::parse(&b).unwrap());
                prop_assert_eq!(value(&diff), want);
            }

            #[test]
            fn exact_render_parse_roundtrip(m in -10i64.pow(15)..10i64.pow(15), e in -40i64..40) {
                let d = ExactDecimal::parse(&format!("{m}e{e}")).unwrap();
                let back = ExactDecimal::parse(&d.render()).unwrap();
                prop_assert_eq!(value(&back), value(&d));
            }

            #[test]
            fn short_decimals_are_recognised(m in 1i64..10_000_000, scale in 0u32..6) {
                let text = format!("{}e-{scale}", m);
                let ctx = PrecisionCtx::new(80).unwrap();
                let x = ctx.parse(&text).unwrap();
                let r = Ratio::recognise(&x, 40).expect("short decimal");
                prop_assert_eq!(r.to_big(&ctx), x.clone());
                let mut y = ctx.one();
                y.mul_ratio(&r);
                prop_assert_eq!(y, x);
            }

            #[test]
            fn binary_render_roundtrip(a in 1u64..u64::MAX, b in 1u64..u64::MAX) {
                let ctx = PrecisionCtx::new(50).unwrap();
                let v = &ctx.from_u64(a) / &ctx.from_u64(b);
                prop_assert_eq!(ctx.parse(&v.render_exact()).unwrap(), v);
            }
        }
    }
}
