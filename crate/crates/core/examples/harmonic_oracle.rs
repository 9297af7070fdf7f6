//! The harmonic oscillator has ε_n = s(2n+1) exactly: a check of every
//! layer at hundreds of digits.

use hpse::bigreal::PrecisionCtx;
use hpse::{PotentialSpec, SolveOptions, Solver, StateIndex};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let digits = 200;
    let ctx = PrecisionCtx::new(digits + 20)?;
    for s in ["1", "0.1"] {
        let solver = Solver::new(PotentialSpec::harmonic(s)?, SolveOptions::new(digits));
        for n in [0u64, 1, 5, 10] {
            let r = solver.solve(StateIndex::new(n))?;
            let exact = &ctx.parse(s)? * &ctx.from_u64(2 * n + 1);
            let err = (&(&ctx.parse(&r.epsilon)? - &exact) / &exact).abs();
            let shown = &r.epsilon[..24.min(r.epsilon.len())];
            if err.is_zero() {
                println!("s = {s:>3}  n = {n:>2}  ε = {shown}…  exact to {digits} digits");
            } else {
                println!("s = {s:>3}  n = {n:>2}  ε = {shown}…  relative error 1e{:.0}", err.log10_abs());
            }
        }
    }
    Ok(())
}
