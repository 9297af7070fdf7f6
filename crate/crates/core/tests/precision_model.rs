//! The a-priori precision model against what the solver observes:
//! sensitivity compensation, obtainable precision P(x), and the cost sweep.

use hpse::cli::{cmd_bench, cmd_scan_x, scan_csv};
use hpse::eigensolver::{obtainable_precision_scan, sensitivity};
use hpse::estimator::build_plan;
use hpse::{PotentialSpec, SolveOptions, Solver, StateIndex};

#[test]
fn sensitivity_compensates_half_the_digits() {
    let q = PotentialSpec::quartic("1").unwrap();
    let solver = Solver::new(q.clone(), SolveOptions::new(200));
    let r = solver.solve(StateIndex::new(0)).unwrap();
    let lg = sensitivity(&q, StateIndex::new(0), &r.epsilon, &r.plan).unwrap();
    assert!((lg - 100.0).abs() <= 5.0, "log10|dpsi/deps| = {lg}");
}

#[test]
fn obtainable_precision_tracks_estimate_on_quartic() {
    let q = PotentialSpec::quartic("1").unwrap();
    let grid: Vec<String> = ["6", "8", "10", "12"].iter().map(|s| s.to_string()).collect();
    let (rows, notes) = cmd_scan_x(&q, StateIndex::new(0), &grid, None, 600).unwrap();
    assert!(notes.is_empty(), "{notes:?}");
    assert_eq!(rows.len(), 4);
    let diffs: Vec<f64> = rows.iter().map(|r| r.p_obtained - r.p_est).collect();
    let mean = diffs.iter().sum::<f64>() / diffs.len() as f64;
    let sd = (diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / diffs.len() as f64).sqrt();
    assert!(sd < 3.0, "spread {sd}: {rows:?}");
    // P(x) grows with x
    assert!(rows.windows(2).all(|w| w[1].p_obtained > w[0].p_obtained), "{rows:?}");
    let csv = scan_csv(&rows);
    assert!(csv.starts_with("x,p_obtained,p_est\n6,"));
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn harmonic_obtainable_precision_grows_quadratically() {
    let h = PotentialSpec::harmonic("1").unwrap();
    let grid: Vec<String> = ["3", "5", "7"].iter().map(|s| s.to_string()).collect();
    // the exact eigenvalue 1, written to enough digits to serve as reference
    let reference = format!("1.{}", "0".repeat(120));
    let (rows, _) = obtainable_precision_scan(&h, StateIndex::new(0), &grid, &reference, &SolveOptions::new(100)).unwrap();
    // P ≈ x²/ln 10 for the ground state: second differences ≈ 2·4/ln 10
    let p: Vec<f64> = rows.iter().map(|r| r.p_obtained).collect();
    let second = p[2] - 2.0 * p[1] + p[0];
    assert!((second - 8.0 / std::f64::consts::LN_10).abs() < 1.0, "{rows:?}");
    for r in &rows {
        assert!((r.p_obtained - r.p_est).abs() < 3.0, "{r:?}");
    }
}

#[test]
fn scan_refuses_insufficient_reference() {
    let q = PotentialSpec::quartic("1").unwrap();
    let grid = vec!["10".to_string()];
    let e = obtainable_precision_scan(&q, StateIndex::new(0), &grid, "1.0603620904841828996", &SolveOptions::new(50));
    assert!(e.is_err());
}

#[test]
fn scan_skips_points_inside_the_well() {
    let q = PotentialSpec::quartic("1").unwrap();
    let grid = vec!["0.5".to_string(), "6".to_string()];
    let (rows, notes) = cmd_scan_x(&q, StateIndex::new(0), &grid, None, 200).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(notes.len(), 1);
}

#[test]
fn cost_sweep_scales_with_p() {
    let q = PotentialSpec::quartic("1").unwrap();
    let rows = cmd_bench(&q, &[500, 1000, 2000], None).unwrap();
    for w in rows.windows(2) {
        let ratio = w[1].n_terms as f64 / w[0].n_terms as f64;
        assert!((1.7..=2.3).contains(&ratio), "N ratio {ratio}: {rows:?}");
    }
    for r in &rows {
        let frac = r.delta_d_obs / r.p as f64;
        assert!((0.45..=0.55).contains(&frac), "{r:?}");
        assert!((r.delta_d_obs - r.delta_d_est).abs() <= 5.0, "{r:?}");
    }
}

#[test]
fn plan_matches_observed_roundoff() {
    let q = PotentialSpec::quartic("1").unwrap();
    let r = Solver::new(q.clone(), SolveOptions::new(300)).solve(StateIndex::new(0)).unwrap();
    let last = r.telemetry.iter().filter(|t| t.run == "primary").last().unwrap();
    assert_eq!(last.eval_x, r.plan.eval_x);
    assert!((last.delta_d_observed - r.plan.delta_d_est).abs() < 5.0, "{last:?} vs {:?}", r.plan);
    let plan = build_plan(&q, StateIndex::new(0), 300, 1.06).unwrap();
    assert_eq!(plan, r.plan);
}
