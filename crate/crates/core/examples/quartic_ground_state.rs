//! Ground state of the pure quartic oscillator −ψ″ + x⁴ψ = εψ to 1000+ digits.
//!
//! ```bash
//! cargo run --release --example quartic_ground_state -- 1040
//! ```

use hpse::{PotentialSpec, SolveOptions, Solver, StateIndex};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let digits: u64 = std::env::args().nth(1).map(|a| a.parse()).transpose()?.unwrap_or(1040);
    let pot = PotentialSpec::quartic("1")?;
    let solver = Solver::new(pot, SolveOptions::new(digits));

    let t = std::time::Instant::now();
    let r = solver.solve(StateIndex::new(0))?;
    println!("solved in {:.2?}: {} digits requested, {} certified", t.elapsed(), digits, r.digits_certified);
    println!("plan: x = {}, D = {}, ΔD_est = {:.1}", r.plan.eval_x, r.plan.working_digits, r.plan.delta_d_est);

    let (int, frac) = r.epsilon.split_once('.').unwrap();
    println!("ε₀ = {int}.{}…", &frac[..100.min(frac.len())]);
    if frac.len() >= 1033 {
        println!("decimals 1000–1032: {}", &frac[999..1032]);
    }
    Ok(())
}
