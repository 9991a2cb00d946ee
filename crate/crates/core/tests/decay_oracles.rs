//! Oracle tests for the decay-bound machinery: quadrature cross-checks of
//! the closed-form moment, factorial-constant identities, and structural
//! properties of the cascade.

mod common;

use proptest::prelude::*;
use uniq_core::decay::{
    cascade_growth_fit, derivative_zero_intervals, gamma_moment_bound, log_decay_certificate,
    log_node_constant, moment_cascade, optimized_log_node_bound, power_decay_certificate,
    recursion_floor, seed_moments_from_witness, CascadeConfig, Envelope, MomentValue,
};
use uniq_core::special::{ln_factorial, ln_gamma};
use uniq_core::{derive_constants, ExponentPair, NodeFamily, Side};

fn pair(a: f64, b: f64) -> ExponentPair {
    ExponentPair::new(a, b).unwrap()
}

/// Two-sided moment of the stretched-exponential envelope by adaptive
/// Simpson on the raw integrand, no Γ anywhere.
fn moment_by_quadrature(delta: f64, theta: f64, k: u32) -> f64 {
    let c = 1.0 - theta;
    let f = move |x: f64| x.powi(k as i32) * (-c * x.powf(1.0 / delta)).exp();
    // Cut where the exponent reaches 90: the integrand tail is below
    // e^-90 · poly, invisible at the 1e-9 tolerances used here.
    let cut = (90.0 / c).powf(delta);
    let total = common::adaptive_simpson(&f, 0.0, cut.min(1.0), 1e-13)
        + if cut > 1.0 { common::adaptive_simpson(&f, 1.0, cut, 1e-11 * cut) } else { 0.0 };
    2.0 * total
}

#[test]
fn gamma_moment_matches_quadrature_on_grid() {
    // 4 × 3 × 3 grid of shape, shift and moment order.
    for &delta in &[0.5, 1.0, 1.5, 2.0] {
        for &theta in &[0.0, 0.3, 0.6] {
            for k in 0..3u32 {
                let closed = gamma_moment_bound(delta, theta, k).unwrap();
                let quad = moment_by_quadrature(delta, theta, k);
                let rel = (closed.value - quad).abs() / quad;
                assert!(
                    rel <= 1e-6,
                    "delta={delta} theta={theta} k={k}: closed {} vs quad {quad} (rel {rel:.2e})",
                    closed.value
                );
            }
        }
    }
}

#[test]
fn gamma_moment_exact_integer_cases() {
    // delta = 1, theta = 0: plain exponential; moments are 2·k!.
    let m0 = gamma_moment_bound(1.0, 0.0, 0).unwrap();
    assert!((m0.value - 2.0).abs() < 1e-12);
    let m3 = gamma_moment_bound(1.0, 0.0, 3).unwrap();
    assert!((m3.value - 12.0).abs() < 1e-11);
    // Large k overflows the linear value but keeps the log finite.
    let big = gamma_moment_bound(2.0, 0.5, 400).unwrap();
    assert!(big.overflowed && big.value.is_infinite() && big.log_value.is_finite());
}

#[test]
fn witness_seed_moments_match_gaussian_closed_form() {
    // For e^{-pi y²} the k-th absolute moment is pi^{-(k+1)/2} Γ((k+1)/2).
    let f = |y: f64| (-std::f64::consts::PI * y * y).exp();
    let seeds = seed_moments_from_witness(&f, 6);
    for (k, &log_got) in seeds.iter().enumerate() {
        let kf = k as f64;
        let want = -0.5 * (kf + 1.0) * std::f64::consts::PI.ln() + ln_gamma(0.5 * (kf + 1.0));
        assert!(
            (log_got - want).abs() < 1e-8,
            "k={k}: log moment {log_got} vs {want}"
        );
    }
}

proptest! {
    /// ln B_m satisfies the first-order recurrence that defines the product
    /// form (m+1)!·(2^{2-s}π)^{m+1}·s^m.
    #[test]
    fn node_constant_recurrence(s in 0.05f64..0.95, m in 1u32..300) {
        let base = (2.0f64).powf(2.0 - s) * std::f64::consts::PI;
        let diff = log_node_constant(s, m) - log_node_constant(s, m - 1);
        let want = ((m + 1) as f64).ln() + base.ln() + s.ln();
        prop_assert!((diff - want).abs() <= 1e-9 * (1.0 + want.abs()));
    }

    /// Zero intervals: consistent with the node family, nested in k, and
    /// shifted intervals overlap while staying ordered.
    #[test]
    fn zero_intervals_nest_and_advance(alpha in 0.1f64..0.9, k in 0u32..30, m in 0u64..10_000) {
        let nodes = NodeFamily::power(alpha).unwrap();
        let z = derivative_zero_intervals(&nodes, k, m).unwrap();
        prop_assert_eq!(z.lo, nodes.value(m).unwrap());
        prop_assert_eq!(z.hi, nodes.value(m + k as u64 + 1).unwrap());
        prop_assert!(z.gap >= 0.0);
        let wider = derivative_zero_intervals(&nodes, k + 1, m).unwrap();
        prop_assert!(wider.lo == z.lo && wider.hi >= z.hi);
        let shifted = derivative_zero_intervals(&nodes, k, m + 1).unwrap();
        prop_assert!(shifted.lo > z.lo && shifted.hi > z.hi);
        prop_assert!(shifted.lo <= z.hi, "consecutive intervals must overlap");
    }

    /// Every cascade step strictly descends and the chain bottoms out at or
    /// below the advertised floor.
    #[test]
    fn cascade_steps_descend(a in 0.05f64..0.45, b in 0.05f64..0.45, k in 30u32..250) {
        let p = pair(a, b);
        prop_assume!(p.is_subcritical());
        let floor = recursion_floor(p).unwrap();
        prop_assume!(k > floor);
        let bound = moment_cascade(&CascadeConfig::new(p), k).unwrap();
        prop_assert!(bound.log_bound.is_finite());
        prop_assert_eq!(bound.steps.first().unwrap().k, k);
        for step in &bound.steps {
            prop_assert!(step.rho < step.k, "no descent at k = {}", step.k);
        }
        for w in bound.steps.windows(2) {
            prop_assert_eq!(w[0].rho, w[1].k);
        }
        prop_assert!(bound.seed_index <= floor);
    }

    /// The optimized log-node bound never beats any single admissible k by
    /// definition, and matches a direct scan on small ranges.
    #[test]
    fn optimized_bound_is_pointwise_minimum(x in 1.5f64..8.0) {
        let log_i = |k: u32| 0.1 * k as f64; // arbitrary mild growth
        let (best_k, best) = optimized_log_node_bound(x, &log_i).unwrap();
        let cap = x.exp_m1().floor() as u32;
        prop_assert!(best_k >= 1 && best_k <= cap);
        let mut scan = f64::INFINITY;
        for k in 1..=cap {
            let kf = k as f64;
            let obj = kf.ln()
                + kf * (2.0 * std::f64::consts::PI).ln()
                + 3.0 * ln_factorial(k as u64 + 1)
                + log_i(k)
                - kf * x;
            scan = scan.min(obj);
        }
        prop_assert!((best - scan).abs() <= 1e-12 * (1.0 + scan.abs()));
    }
}

#[test]
fn certificates_decay_beyond_validity() {
    let alpha = 0.4;
    let i5 = MomentValue::unit(5, Side::Transform);
    let power = power_decay_certificate(alpha, 5, &i5).unwrap();
    let log = log_decay_certificate(5, &i5).unwrap();
    for cert in [&power, &log] {
        let mut prev = f64::INFINITY;
        let mut x = cert.valid_from;
        for _ in 0..40 {
            let lb = cert.log_bound(x);
            let b = cert.bound(x);
            assert!(b <= prev, "envelope must not grow with |x|");
            if lb > -700.0 {
                // Linear and log domain agree wherever exp() is exact.
                assert!(b.is_finite() && b > 0.0);
                assert!((lb - b.ln()).abs() < 1e-12 * (1.0 + lb.abs()));
            } else {
                // Underflow region: the log bound stays finite and keeps
                // shrinking even after the linear value degrades.
                assert!(lb.is_finite());
                assert!(b < 1e-300);
            }
            prev = b;
            x *= 1.3;
        }
    }
    assert!(matches!(power.envelope, Envelope::Polynomial { .. }));
    assert!(matches!(log.envelope, Envelope::ExpLinear { .. }));
}

#[test]
fn cascade_slope_stays_under_tau_at_symmetric_pair() {
    let p = pair(0.2, 0.2);
    let tau = derive_constants(p).tau.finite().unwrap();
    let ks: Vec<u32> = (10..=100).step_by(5).collect();
    let (c1, _c2) = cascade_growth_fit(&CascadeConfig::new(p), &ks).unwrap();
    assert!(
        c1 <= tau + 0.1,
        "k·ln k coefficient {c1} exceeds tau + 0.1 = {}",
        tau + 0.1
    );
    assert!(c1 > 0.0, "moment bounds should genuinely grow");
}

#[test]
fn divergence_message_is_stable() {
    let p = pair(0.7, 0.5);
    let err = moment_cascade(&CascadeConfig::new(p), 50).unwrap_err();
    assert_eq!(err.to_string(), "cascade diverges: α+β ≥ 1");
}
