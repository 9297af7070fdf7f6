//! Tunnelling splitting of (x² − 1)² against the Zinn-Justin formula
//! 16√(2s/π) e^{−4/(3s)} e^{−71s/96}. The relative deviation shrinks like s².
//!
//! ```bash
//! cargo run --release --example double_well_splitting
//! ```

use hpse::splitting::{run_splitting, zinn_justin_log10};
use hpse::SolveOptions;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut previous: Option<f64> = None;
    for s in ["0.2", "0.1", "0.05", "0.025"] {
        let rep = run_splitting(s, &SolveOptions::new(60))?;
        let dev = rep.rel_dev.unwrap_or(f64::NAN);
        let shrink = previous.map(|p| format!("{:.2}", p.abs() / dev.abs())).unwrap_or_default();
        let zj: f64 = rep.zj_estimate.as_deref().unwrap_or("NaN").parse()?;
        println!(
            "s = {s:<6} Δε = {:.12e}  Z-J = {zj:.12e}  rel_dev = {dev:+.4e}  shrink {shrink}{}",
            rep.delta.parse::<f64>()?,
            if rep.beyond_asymptotic_validity { "  (beyond asymptotic validity)" } else { "" }
        );
        previous = Some(dev);
    }
    println!("log10 Δε_ZJ(s = 1/50000) = {:.2}", zinn_justin_log10(1.0 / 50_000.0));
    Ok(())
}
