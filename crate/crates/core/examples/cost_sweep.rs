//! Cost of one wavefunction evaluation versus requested digits P: the number
//! of terms N and the cancellation ΔD both grow linearly. Prints CSV.
//!
//! ```bash
//! cargo run --release --example cost_sweep -- 500,1000,2000,4000
//! ```

use hpse::cli::{bench_csv, cmd_bench};
use hpse::PotentialSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ps: Vec<u64> = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "250,500,1000,2000".into())
        .split(',')
        .map(str::parse)
        .collect::<Result<_, _>>()?;
    let rows = cmd_bench(&PotentialSpec::quartic("1")?, &ps, None)?;
    print!("{}", bench_csv(&rows));
    for r in &rows {
        eprintln!("P = {:>5}: ΔD/P = {:.3}, ΔD − ΔD_est = {:+.2}", r.p, r.delta_d_obs / r.p as f64, r.delta_d_obs - r.delta_d_est);
    }
    Ok(())
}
