//! Property tests for the exponent engine: region geometry, recursion
//! convergence, and the closed-form constants.

use proptest::prelude::*;
use uniq_core::exponents::{
    analytic_order_from_decay, consistent_b0, diagonal_threshold, epsilon_f_forms,
    epsilon_fhat_forms, generalized_sequence_check, hadamard_divergence_check,
    omega_fixed_point, omega_for_full_range, recursion_trace,
};
use uniq_core::{derive_constants, region_a_membership, ExponentPair, Limit};

fn pair(a: f64, b: f64) -> ExponentPair {
    ExponentPair::new(a, b).unwrap()
}

fn exponent() -> impl Strategy<Value = f64> {
    0.01f64..0.99
}

proptest! {
    #[test]
    fn membership_is_swap_symmetric(a in exponent(), b in exponent()) {
        let r1 = region_a_membership(pair(a, b));
        let r2 = region_a_membership(pair(b, a));
        prop_assert_eq!(r1.in_region, r2.in_region);
        prop_assert_eq!(r1.hadamard_contradiction, r2.hadamard_contradiction);
        prop_assert_eq!(r1.branch_alpha, r2.branch_beta);
    }

    /// The two one-sided branches OR together into the single relabeled
    /// condition the report carries as `hadamard_contradiction`.
    #[test]
    fn or_branch_collapses_to_relabeled_condition(a in exponent(), b in exponent()) {
        let r = region_a_membership(pair(a, b));
        prop_assert_eq!(r.in_region, r.sum_ok && r.hadamard_contradiction);
    }

    /// Shrinking either exponent never leaves the region.
    #[test]
    fn region_is_downward_closed(a in exponent(), b in exponent(), fa in 0.05f64..1.0, fb in 0.05f64..1.0) {
        if region_a_membership(pair(a, b)).in_region {
            prop_assert!(region_a_membership(pair(a * fa, b * fb)).in_region);
        }
    }

    /// In-region pairs admit the zero-counting contradiction through the
    /// order bound: exponent · order < 1 strictly.
    #[test]
    fn order_bound_feeds_divergence_check(a in exponent(), b in exponent()) {
        let r = region_a_membership(pair(a, b));
        if !r.in_region {
            return Ok(());
        }
        let order = match r.order_bound {
            Limit::Finite(v) => v,
            Limit::Infinite => return Err(TestCaseError::fail("in-region pair with infinite order bound")),
        };
        prop_assert!(hadamard_divergence_check(order, a.max(b)));
    }

    #[test]
    fn trace_contracts_to_fixed_point(a in 0.02f64..0.9, b in 0.02f64..0.9, a0 in -5.0f64..20.0) {
        let s = a + b;
        prop_assume!(s < 0.93);
        let p = pair(a, b);
        let c = derive_constants(p);
        let l1 = c.l1.finite().unwrap();
        let l2 = c.l2.finite().unwrap();
        // Two extra steps absorb the q·|a0 - l1| prefactor of the b-error.
        let steps = ((1e-12f64.ln() / c.gamma.ln()).ceil() as usize).max(1) + 2;
        let trace = recursion_trace(p, a0, consistent_b0(p, a0, 1.0), steps, 1.0);
        let (an, bn) = *trace.last().unwrap();
        prop_assert!((an - l1).abs() <= 1e-10, "a: {an} vs {l1}");
        prop_assert!((bn - l2).abs() <= 1e-10, "b: {bn} vs {l2}");
    }

    /// The nested and expanded forms of the stretched-decay thresholds are
    /// the same rational function written twice.
    #[test]
    fn epsilon_forms_agree(a in 0.02f64..0.9, b in 0.02f64..0.9) {
        prop_assume!(a + b < 0.98);
        let (n1, e1) = epsilon_fhat_forms(pair(a, b));
        let (n2, e2) = epsilon_f_forms(pair(a, b));
        prop_assert!((n1 - e1).abs() <= 1e-9 * (1.0 + n1.abs()), "fhat: {n1} vs {e1}");
        prop_assert!((n2 - e2).abs() <= 1e-9 * (1.0 + n2.abs()), "f: {n2} vs {e2}");
    }

    /// The full-range root satisfies its quadratic and drives the ω-trace to
    /// the scaled fixed point.
    #[test]
    fn omega_root_and_trace_are_consistent(a in 0.02f64..0.9, b in 0.02f64..0.9) {
        prop_assume!(a + b < 0.93);
        let p = pair(a, b);
        let root = omega_for_full_range(p).unwrap();
        prop_assert!(root.omega > 0.0);
        prop_assert!(root.residual.abs() <= 1e-12);
        let (la, lb) = omega_fixed_point(p, root.omega).unwrap();
        let gamma = derive_constants(p).gamma;
        let steps = ((1e-12f64.ln() / gamma.ln()).ceil() as usize).max(1) + 2;
        let trace = recursion_trace(p, 10.0, consistent_b0(p, 10.0, root.omega), steps, root.omega);
        let (an, bn) = *trace.last().unwrap();
        prop_assert!((an - la).abs() <= 1e-10, "a: {an} vs {la}");
        prop_assert!((bn - lb).abs() <= 1e-10, "b: {bn} vs {lb}");
    }

    /// Generalized admissibility agrees with plain membership of the induced
    /// pair plus the product condition, and the product condition is exactly
    /// subcriticality of the induced pair.
    #[test]
    fn generalized_check_matches_region(eta in 0.1f64..20.0, omega in 0.1f64..20.0) {
        let g = generalized_sequence_check(eta, omega).unwrap();
        prop_assert_eq!(g.admissible, g.product_ok && g.region.in_region);
        prop_assert_eq!(g.product_ok, g.pair.is_subcritical());
    }
}

#[test]
fn threshold_value_and_diagonal_flip() {
    let t = diagonal_threshold();
    assert!((t - (1.0 - std::f64::consts::SQRT_2 / 2.0)).abs() < 1e-15);
    // Quadratic root check: the diagonal membership condition degenerates to
    // 2a² - 4a + 1 > 0 below the threshold.
    assert!((2.0 * t * t - 4.0 * t + 1.0).abs() < 1e-14);
    let eps = 1e-9;
    assert!(region_a_membership(pair(t - eps, t - eps)).in_region);
    assert!(!region_a_membership(pair(t + eps, t + eps)).in_region);
}

#[test]
fn analytic_order_inverts_decay_exponent() {
    // A/(A-1) is an involution: order of the order is the original exponent.
    for &a in &[1.2, 1.5, 2.0, 3.0, 10.0] {
        let rho = analytic_order_from_decay(a).unwrap();
        let back = analytic_order_from_decay(rho).unwrap();
        assert!((back - a).abs() < 1e-12 * a);
    }
    assert!(analytic_order_from_decay(1.0).is_err());
    assert!(analytic_order_from_decay(0.5).is_err());
}

#[test]
fn supercritical_pairs_have_no_finite_constants() {
    let c = derive_constants(pair(0.6, 0.5));
    assert!(!c.l1.is_finite());
    assert!(!c.tau.is_finite());
    assert!(omega_for_full_range(pair(0.6, 0.5)).is_err());
    assert!(omega_fixed_point(pair(0.6, 0.5), 1.0).is_err());
}
