//! Double-precision location of states: the WKB quantization condition gives
//! a guess, modified-Prüfer node counting pins the index.

use hpse::eigensolver::{count_below, locate, low_precision_estimate};
use hpse::{PotentialSpec, StateIndex};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let q = PotentialSpec::quartic("1")?;
    println!("{:>6}{:>20}{:>20}{:>14}", "n", "WKB", "counted", "gap");
    for n in [0u64, 1, 2, 3, 10, 100, 1000] {
        let idx = StateIndex::new(n);
        let wkb = low_precision_estimate(&q, idx);
        let loc = locate(&q, idx)?;
        println!("{n:>6}{wkb:>20.10}{:>20.10}{:>14.4}", loc.approx, loc.gap());
    }
    let e = 20.0;
    println!(
        "states below ε = {e}: {} even, {} odd",
        count_below(&q, 0, e),
        count_below(&q, 1, e)
    );

    let dw = PotentialSpec::double_well("0.05")?;
    let even = locate(&dw, StateIndex::new(0))?;
    let odd = locate(&dw, StateIndex::new(1))?;
    println!("double well s = 0.05: ε₀⁺ ≈ {:.12}, ε₀⁻ ≈ {:.12}", even.approx, odd.approx);
    Ok(())
}
