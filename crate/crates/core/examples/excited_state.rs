//! A highly excited state of the quartic oscillator. The state index is
//! guaranteed by counting nodes in double precision before any
//! high-precision work starts.
//!
//! ```bash
//! cargo run --release --example excited_state -- 2000 60
//! ```

use hpse::{PotentialSpec, SolveOptions, Solver, StateIndex};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: u64 = args.next().map(|a| a.parse()).transpose()?.unwrap_or(2000);
    let digits: u64 = args.next().map(|a| a.parse()).transpose()?.unwrap_or(60);

    let solver = Solver::new(PotentialSpec::quartic("1")?, SolveOptions::new(digits));
    let idx = StateIndex::new(n);
    let (loc, plan) = solver.plan(idx)?;
    println!("n = {n} ({}), double precision: {:.10}", idx.parity_name(), loc.approx);
    println!("neighbours in the parity sector: {:.4} below, {:.4} above", loc.below, loc.above);
    println!("plan: x = {}, D = {}, N_est = {}", plan.eval_x, plan.working_digits, plan.n_terms_est);

    let t = std::time::Instant::now();
    let r = solver.solve(idx)?;
    println!("ε_{n} = {}", r.epsilon);
    println!("{} digits certified, {} evaluations, {:.1?}", r.digits_certified, r.telemetry.len(), t.elapsed());
    Ok(())
}
