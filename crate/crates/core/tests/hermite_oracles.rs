//! Independent oracles for the basis evaluation: a coefficient-expansion
//! evaluator built from the raw polynomial recurrence, plus end-to-end
//! verification of the transform-eigenvalue and orthonormality gates.

use uniq_core::hermite::{hermite_columns, transform_eigenvalue, underflow_cutoff};
use uniq_core::{hermite_h, verify_basis, BasisSpec};

/// Evaluate element k by expanding the polynomial factor in monomials:
/// integer-coefficient recurrence P_{k+1} = 2t·P_k - 2k·P_{k-1}, Horner
/// evaluation, closed-form normalization. Shares nothing with the library's
/// streaming recurrence except the definition.
fn eval_by_coefficients(k: u32, x: f64) -> f64 {
    let mut coeffs: Vec<Vec<i128>> = vec![vec![1], vec![0, 2]];
    for m in 1..k as usize {
        let prev = &coeffs[m];
        let prev2 = &coeffs[m - 1];
        let mut next = vec![0i128; m + 2];
        for (i, &c) in prev.iter().enumerate() {
            next[i + 1] += 2 * c;
        }
        for (i, &c) in prev2.iter().enumerate() {
            next[i] -= 2 * m as i128 * c;
        }
        coeffs.push(next);
    }
    let t = (2.0 * std::f64::consts::PI).sqrt() * x;
    let poly = coeffs[k as usize]
        .iter()
        .rev()
        .fold(0.0f64, |acc, &c| acc * t + c as f64);
    let ln_norm = 0.25 * (2.0 * std::f64::consts::PI).ln()
        - 0.5
            * (k as f64 * 2f64.ln()
                + (1..=k as u64).map(|i| (i as f64).ln()).sum::<f64>()
                + 0.5 * std::f64::consts::PI.ln());
    poly * (ln_norm - 0.5 * t * t).exp()
}

#[test]
fn streaming_recurrence_matches_coefficient_expansion() {
    for k in 0..=12u32 {
        for i in 0..30 {
            let x = 0.05 + 0.1 * i as f64;
            let want = eval_by_coefficients(k, x);
            let got = hermite_h(k, x);
            assert!(
                (got - want).abs() <= 1e-10,
                "k={k} x={x}: {got} vs {want}"
            );
        }
    }
}

#[test]
fn parity_alternates_with_order() {
    for k in 0..60u32 {
        for &x in &[0.17, 0.9, 2.3, 4.8] {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let l = hermite_h(k, -x);
            let r = sign * hermite_h(k, x);
            assert!(
                (l - r).abs() <= 1e-14 * r.abs().max(1e-300),
                "k={k} x={x}"
            );
        }
    }
}

#[test]
fn columns_agree_with_single_evaluations() {
    let cols = hermite_columns(25, 1.3);
    assert_eq!(cols.len(), 26);
    for (k, &v) in cols.iter().enumerate() {
        let single = hermite_h(k as u32, 1.3);
        assert!((v - single).abs() <= 1e-13 * single.abs().max(1e-300), "k={k}");
    }
}

#[test]
fn basis_verification_passes_both_parities_at_n20() {
    for spec in [BasisSpec::even(20), BasisSpec::all(20)] {
        let check = verify_basis(&spec, 1024).unwrap();
        assert!(check.max_transform_deviation < 1e-8, "{:?}", spec.parity);
        assert!(check.max_gram_deviation < 1e-10, "{:?}", spec.parity);
        assert!(check.quadrature_shift < 1e-11);
        // Measured eigenvalues sit on the unit circle at multiples of 90°.
        for (i, &(re, im)) in check.eigenvalues.iter().enumerate() {
            let k = spec.orders()[i];
            let (ere, eim) = transform_eigenvalue(k);
            assert!(
                (re - ere).abs() < 1e-7 && (im - eim).abs() < 1e-7,
                "k={k}: measured ({re}, {im}) vs ({ere}, {eim})"
            );
        }
    }
}

#[test]
fn eigenvalue_cycle_has_period_four() {
    for k in 0..32u32 {
        let (re, im) = transform_eigenvalue(k);
        let (re4, im4) = transform_eigenvalue(k + 4);
        assert_eq!((re, im), (re4, im4));
        assert!((re * re + im * im - 1.0).abs() < 1e-15);
    }
    assert_eq!(transform_eigenvalue(0), (1.0, 0.0));
    assert_eq!(transform_eigenvalue(1), (0.0, 1.0));
    assert_eq!(transform_eigenvalue(2), (-1.0, 0.0));
    assert_eq!(transform_eigenvalue(3), (0.0, -1.0));
}

#[test]
fn underflow_cutoff_brackets_the_tail() {
    for &order in &[4u32, 40] {
        let cut = underflow_cutoff(order);
        assert!(hermite_columns(order, cut).iter().all(|v| v.abs() < 1e-300));
        assert!(
            hermite_columns(order, 0.98 * cut)
                .iter()
                .any(|v| v.abs() >= 1e-300),
            "cutoff for order {order} is not tight"
        );
    }
}
