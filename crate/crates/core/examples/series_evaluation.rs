//! One summation of the Taylor series: the harmonic ground state
//! ψ = exp(−x²/2) at x = 10, and the digits lost to cancellation.

use hpse::estimator::delta_d_estimate;
use hpse::series::sum_series;
use hpse::{PotentialSpec, PrecisionCtx};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let pot = PotentialSpec::harmonic("1")?;
    let ctx = PrecisionCtx::new(80)?;
    let eps = ctx.one();
    let x = ctx.parse("10")?;
    let se = sum_series(&pot, &eps, 0, &x, &ctx, 10_000)?;

    println!("ψ(10)       = {}", se.psi.render(30)?);
    println!("exp(−50)    = {}", (-&ctx.from_u64(50)).exp().render(30)?);
    println!("terms       = {} (largest at m = {})", se.n_terms, se.peak_index);
    println!("ΔD observed = {:.2} digits", se.delta_d_observed);
    println!("ΔD estimate = {:.2} digits", delta_d_estimate(&pot, 1.0, 10.0));
    println!("values kept = {} (independent of the number of terms)", se.retained_values);
    Ok(())
}
