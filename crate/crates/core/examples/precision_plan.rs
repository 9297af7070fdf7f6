//! Evaluation point, working precision and term count chosen a priori from
//! WKB estimates, before any high-precision work.

use hpse::eigensolver::locate;
use hpse::estimator::build_plan;
use hpse::{PotentialSpec, StateIndex};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cases = [
        ("quartic", PotentialSpec::quartic("1")?, 0u64, 1000u64),
        ("quartic", PotentialSpec::quartic("1")?, 0, 1_000_000),
        ("quartic", PotentialSpec::quartic("1")?, 50_000, 60),
        ("harmonic", PotentialSpec::harmonic("1")?, 0, 100),
        ("double well s=1/50000", PotentialSpec::double_well("0.00002")?, 0, 30_000),
    ];
    println!("{:<24}{:>8}{:>10}{:>9}{:>12}{:>10}{:>12}", "potential", "n", "P", "x", "ΔD_est", "D", "N_est");
    for (name, pot, n, p) in cases {
        let idx = StateIndex::new(n);
        let approx = locate(&pot, idx)?.approx;
        let plan = build_plan(&pot, idx, p, approx)?;
        println!(
            "{name:<24}{n:>8}{p:>10}{:>9}{:>12.1}{:>10}{:>12}",
            plan.eval_x, plan.delta_d_est, plan.working_digits, plan.n_terms_est
        );
    }
    Ok(())
}
