//! Dirichlet ψ(x) = 0 versus the WKB Robin condition −sψ′/ψ = √(V − ε) at the
//! same finite x: the Robin condition mimics decay at infinity and gains
//! digits at a fixed boundary point.

use hpse::eigensolver::common_prefix_digits;
use hpse::{BoundaryCondition, PotentialSpec, SolveOptions, Solver, StateIndex};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let pot = PotentialSpec::quartic("1")?;
    let reference = Solver::new(pot.clone(), SolveOptions::new(80)).solve(StateIndex::new(0))?.epsilon;
    for x in ["3", "4", "5"] {
        let mut row = format!("x = {x}:");
        for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Robin] {
            let mut o = SolveOptions::new(60);
            o.bc = bc;
            o.eval_x = Some(x.into());
            o.certify = false;
            let r = Solver::new(pot.clone(), o).solve(StateIndex::new(0))?;
            row += &format!("  {bc:?} {:>3} digits", common_prefix_digits(&r.epsilon, &reference));
        }
        println!("{row}");
    }
    Ok(())
}
