//! Double-well level splitting against the instanton asymptotics.

mod common;

use common::{double_well_oracle, f};
use hpse::splitting::{run_splitting, solve_pair, zinn_justin, zinn_justin_log10};
use hpse::{Error, SolveOptions};

#[test]
fn splitting_at_s_005_matches_zinn_justin() {
    let rep = run_splitting("0.05", &SolveOptions::new(60)).unwrap();
    assert!(f(&rep.eps_plus) < f(&rep.eps_minus));
    let delta = f(&rep.delta);
    assert!(delta > 0.0);
    assert!((delta.log10() + 11.5).abs() < 0.5, "split {delta:e}");
    let dev = rep.rel_dev.unwrap();
    assert!(dev.abs() < 0.1, "rel_dev {dev}");
    assert!(!rep.beyond_asymptotic_validity);
    // the pair agrees with the basis diagonalization
    let (even, odd) = double_well_oracle(0.05);
    assert!((f(&rep.eps_plus) - even).abs() < 5e-12);
    assert!((f(&rep.eps_minus) - odd).abs() < 5e-12);
}

#[test]
fn deviation_shrinks_like_s_squared() {
    let devs: Vec<f64> = ["0.1", "0.05", "0.025"]
        .iter()
        .map(|s| run_splitting(s, &SolveOptions::new(60)).unwrap().rel_dev.unwrap())
        .collect();
    for w in devs.windows(2) {
        let ratio = w[0].abs() / w[1].abs();
        assert!((2.5..=6.0).contains(&ratio), "ratio {ratio}: {devs:?}");
    }
}

#[test]
fn delta_is_exact_difference_of_the_pair() {
    let (rep, plus, minus) = solve_pair("0.1", &SolveOptions::new(40)).unwrap();
    assert_eq!(rep.eps_plus, plus.epsilon);
    assert_eq!(rep.eps_minus, minus.epsilon);
    let (again, _, _) = solve_pair("0.1", &SolveOptions::new(40)).unwrap();
    assert_eq!(again.delta, rep.delta);
    // Δε ≈ 6.03e-6 at s = 0.1
    assert!((f(&rep.delta) - 6.028e-6).abs() < 1e-8, "{}", rep.delta);
}

#[test]
fn large_s_is_flagged() {
    let rep = run_splitting("1", &SolveOptions::new(30)).unwrap();
    assert!(rep.beyond_asymptotic_validity);
    assert!(f(&rep.eps_plus) < f(&rep.eps_minus));
}

#[test]
fn refuses_unresolvable_precision() {
    match solve_pair("0.025", &SolveOptions::new(20)) {
        Err(Error::ResolutionTooLow { requested, required, .. }) => {
            assert_eq!(requested, 20);
            assert!(required > 20);
        }
        other => panic!("expected refusal, got {other:?}"),
    }
}

#[test]
fn paper_scale_magnitude() {
    let l = zinn_justin_log10(1.0 / 50_000.0);
    assert!((l + 28_954.0).abs() <= 1.0, "{l}");
    let high = zinn_justin("0.00002", 40).unwrap();
    let (mant, exp) = high.split_once('e').unwrap();
    let lg = exp.parse::<f64>().unwrap() + f(mant).log10();
    assert!((lg - l).abs() < 1e-6);
}
