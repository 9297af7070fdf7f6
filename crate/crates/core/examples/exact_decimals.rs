//! Decimal-parameterised multiprecision arithmetic and exact decimal
//! subtraction (used for level splittings far below the working precision).

use hpse::bigreal::exact_decimal_difference;
use hpse::PrecisionCtx;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for digits in [20u64, 60, 200] {
        let ctx = PrecisionCtx::new(digits)?;
        let pi = ctx.pi();
        println!("D = {digits:>3}: π = {}", pi.render(digits as usize)?);
        println!("         e^π − π = {}", (&pi.exp() - &pi).render(20)?);
    }
    let a = "0.0000399997990905404";
    let b = "0.0000399997984723697";
    println!("{a} − {b} = {}", exact_decimal_difference(a, b)?);
    Ok(())
}
