//! Obtainable precision P(x) of the quartic ground state when the boundary
//! condition is imposed at x, next to the estimate P_est(x). Prints CSV.

use hpse::cli::{cmd_scan_x, scan_csv};
use hpse::{PotentialSpec, StateIndex};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let pot = PotentialSpec::quartic("1")?;
    let grid: Vec<String> = (3..=12).map(|x| x.to_string()).collect();
    let (rows, notes) = cmd_scan_x(&pot, StateIndex::new(0), &grid, None, 600)?;
    for n in notes {
        eprintln!("{n}");
    }
    print!("{}", scan_csv(&rows));
    Ok(())
}
