//! Substituting x = s^{1/3}y maps −s²ψ″ + x⁴ψ onto s^{4/3}(−ψ″ + y⁴ψ), so
//! ε(s=8) = 16·ε(s=1) exactly.

use hpse::bigreal::PrecisionCtx;
use hpse::eigensolver::common_prefix_digits;
use hpse::{PotentialSpec, SolveOptions, Solver, StateIndex};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = 100;
    let one = Solver::new(PotentialSpec::quartic("1")?, SolveOptions::new(p)).solve(StateIndex::new(0))?;
    let eight = Solver::new(PotentialSpec::quartic("8")?, SolveOptions::new(p)).solve(StateIndex::new(0))?;
    let ctx = PrecisionCtx::new(p + 20)?;
    let scaled = (&ctx.parse(&one.epsilon)? * &ctx.from_u64(16)).render(p as usize)?;
    println!("16·ε(1) = {scaled}");
    println!("  ε(8)  = {}", eight.epsilon);
    println!("agreeing digits: {}", common_prefix_digits(&scaled, &eight.epsilon));
    Ok(())
}
