//! A long solve interrupted after a few evaluations and resumed from its
//! checkpoint gives exactly the digits of an uninterrupted run.

use hpse::{Error, PotentialSpec, SolveOptions, Solver, StateIndex};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("hpse-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("quartic.ckpt");
    let pot = PotentialSpec::quartic("1")?;

    let mut opts = SolveOptions::new(500);
    opts.checkpoint = Some(path.clone());
    opts.stop_after_evaluations = Some(12);
    match Solver::new(pot.clone(), opts.clone()).solve(StateIndex::new(0)) {
        Err(Error::Interrupted(k)) => println!("interrupted after {k} evaluations"),
        other => println!("unexpected: {other:?}"),
    }
    println!("checkpoint:\n{}", std::fs::read_to_string(&path)?.lines().take(12).collect::<Vec<_>>().join("\n"));

    opts.stop_after_evaluations = None;
    opts.resume = true;
    let resumed = Solver::new(pot.clone(), opts).solve(StateIndex::new(0))?;
    let direct = Solver::new(pot, SolveOptions::new(500)).solve(StateIndex::new(0))?;
    println!("resumed == uninterrupted: {}", resumed.epsilon == direct.epsilon);
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
