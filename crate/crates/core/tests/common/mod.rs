//! Shared oracles for the integration tests.
#![allow(dead_code)]

use nalgebra::DMatrix;

/// Eigenvalues of `−s² d²/dx² + Σ c_k x^k` (`poly[k] = c_k`) in the basis of
/// the first `n` eigenfunctions of `−d²/dx² + ω² x²`, restricted to one parity
/// (`Some(0)` even, `Some(1)` odd) or both (`None`). Ascending.
pub fn basis_eigenvalues(s: f64, poly: &[f64], omega: f64, n: usize, parity: Option<usize>) -> Vec<f64> {
    // build x on a larger space so that its powers are exact on the first n states
    let big = n + poly.len() + 2;
    let mut x = DMatrix::<f64>::zeros(big, big);
    let c = 1.0 / (2.0 * omega).sqrt();
    for k in 0..big - 1 {
        let v = c * ((k + 1) as f64).sqrt();
        x[(k, k + 1)] = v;
        x[(k + 1, k)] = v;
    }
    let mut h = DMatrix::<f64>::zeros(big, big);
    let mut xp = DMatrix::<f64>::identity(big, big);
    for (k, &ck) in poly.iter().enumerate() {
        if k > 0 {
            xp = &xp * &x;
        }
        if ck != 0.0 {
            h += &xp * ck;
        }
    }
    // p² = (ω/2)[(2k+1)δ_{k,k'} − √((k+1)(k+2)) (δ_{k+2,k'} + δ_{k,k'+2})]
    let s2 = s * s;
    for k in 0..big {
        h[(k, k)] += s2 * 0.5 * omega * (2 * k + 1) as f64;
        if k + 2 < big {
            let v = -s2 * 0.5 * omega * (((k + 1) * (k + 2)) as f64).sqrt();
            h[(k, k + 2)] += v;
            h[(k + 2, k)] += v;
        }
    }
    let keep: Vec<usize> = (0..n).filter(|k| parity.map_or(true, |p| k % 2 == p)).collect();
    let sub = DMatrix::from_fn(keep.len(), keep.len(), |i, j| h[(keep[i], keep[j])]);
    let mut ev: Vec<f64> = sub.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

/// Quartic `x⁴` with `s = 1`: 200 basis states.
pub fn quartic_oracle() -> Vec<f64> {
    basis_eigenvalues(1.0, &[0.0, 0.0, 0.0, 0.0, 1.0], 3.0, 200, None)
}

/// Lowest even and odd level of `(x² − 1)²`: 400 basis states split by parity.
pub fn double_well_oracle(s: f64) -> (f64, f64) {
    let omega = 8.0 / (10.0 * s).sqrt();
    let poly = [1.0, 0.0, -2.0, 0.0, 1.0];
    let even = basis_eigenvalues(s, &poly, omega, 400, Some(0))[0];
    let odd = basis_eigenvalues(s, &poly, omega, 400, Some(1))[0];
    (even, odd)
}

/// The leading part of a decimal string as f64.
pub fn f(text: &str) -> f64 {
    text.parse().expect("decimal")
}
