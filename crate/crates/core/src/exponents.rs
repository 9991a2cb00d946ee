//! Exponent pairs, the admissible region, and the coupled gap recursion.
//!
//! A pair of exponents `(alpha, beta)` in (0,1)² drives everything else in
//! this crate: direct-side nodes sit at `±n^alpha`, transform-side nodes at
//! `±n^beta`. This module holds the closed-form layer — the derived
//! constants, the admissible region where the node pattern forces a
//! zero-counting contradiction (hence uniqueness), and the affine
//! recursion whose fixed point is the best attainable moment-growth rate.
//! All of it is plain f64 arithmetic; identities that become ill-conditioned
//! as `alpha + beta → 1` are tested with relative tolerances there.

use crate::error::{Error, Result};
use std::fmt;

/// A value that is either a finite real or exactly "infinite".
///
/// Limits such as `L1 = alpha / (1 - alpha - beta)` stop being meaningful
/// once `alpha + beta ≥ 1`; an explicit variant keeps that case from leaking
/// into arithmetic as a NaN or a negative sentinel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Limit {
    Finite(f64),
    Infinite,
}

impl Limit {
    pub fn is_finite(self) -> bool {
        matches!(self, Limit::Finite(_))
    }

    /// The finite value, if any.
    pub fn finite(self) -> Option<f64> {
        match self {
            Limit::Finite(v) => Some(v),
            Limit::Infinite => None,
        }
    }

    /// Collapse to f64, mapping `Infinite` to `f64::INFINITY`.
    pub fn as_f64(self) -> f64 {
        match self {
            Limit::Finite(v) => v,
            Limit::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for Limit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Limit::Finite(v) => write!(f, "{v}"),
            Limit::Infinite => write!(f, "inf"),
        }
    }
}

/// Which side of the transform a bound refers to: the function itself or
/// its Fourier transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Direct,
    Transform,
}

/// A pair of node exponents, each strictly inside (0, 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentPair {
    alpha: f64,
    beta: f64,
}

impl ExponentPair {
    /// Build a pair, rejecting anything outside the open unit interval
    /// (including NaN and the endpoints themselves).
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let check = |name: &'static str, v: f64| -> Result<()> {
            if v.is_finite() && v > 0.0 && v < 1.0 {
                Ok(())
            } else {
                Err(Error::BadParameter { name, value: v, expected: "open interval (0, 1)" })
            }
        };
        check("alpha", alpha)?;
        check("beta", beta)?;
        Ok(ExponentPair { alpha, beta })
    }

    pub fn alpha(self) -> f64 {
        self.alpha
    }

    pub fn beta(self) -> f64 {
        self.beta
    }

    /// The pair with the two exponents exchanged.
    pub fn swapped(self) -> Self {
        ExponentPair { alpha: self.beta, beta: self.alpha }
    }

    /// `alpha + beta < 1`, the subcritical condition behind every finite limit.
    pub fn is_subcritical(self) -> bool {
        self.alpha + self.beta < 1.0
    }
}

/// Closed-form constants derived from an exponent pair.
///
/// `gamma` is the contraction factor of the coupled recursion; `l1`/`l2` its
/// fixed point; `theta1`/`theta2` the affine offsets; `lambda`, `delta` and
/// `tau` the moment-growth rates; `epsilon_*` the stretched-exponential
/// thresholds reachable after one full bounding pass on each side. Only the
/// quantities with a `1/(1-alpha-beta)` pole are `Limit`-valued.
#[derive(Debug, Clone, Copy)]
pub struct DerivedConstants {
    pub gamma: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub lambda: f64,
    pub delta: f64,
    pub l1: Limit,
    pub l2: Limit,
    pub tau: Limit,
    pub epsilon_f: Limit,
    pub epsilon_fhat: Limit,
}

/// Compute every derived constant for a pair.
pub fn derive_constants(pair: ExponentPair) -> DerivedConstants {
    let a = pair.alpha();
    let b = pair.beta();
    let s = a + b;
    let p = a / (1.0 - a);
    let q = b / (1.0 - b);
    let gamma = p * q;
    let theta1 = a / ((1.0 - a) * (1.0 - b));
    let theta2 = b / ((1.0 - a) * (1.0 - b));
    let lambda = (1.0 + b) * a / (1.0 - a);
    let delta = theta1; // alpha/(1-alpha) + gamma collapses to theta1
    if s >= 1.0 {
        return DerivedConstants {
            gamma,
            theta1,
            theta2,
            lambda,
            delta,
            l1: Limit::Infinite,
            l2: Limit::Infinite,
            tau: Limit::Infinite,
            epsilon_f: Limit::Infinite,
            epsilon_fhat: Limit::Infinite,
        };
    }
    let l1 = a / (1.0 - s);
    let l2 = b / (1.0 - s);
    let tau = (lambda + delta) / (1.0 - gamma);
    // One-pass stretched-decay thresholds; each is (1 + tau-of-the-other-side)
    // times the own-side gap ratio, written in its fully expanded form.
    let epsilon_fhat = (1.0 + a - b * (1.0 + a * b)) / (1.0 - s) * q;
    let epsilon_f = (1.0 + b - a * (1.0 + a * b)) / (1.0 - s) * p;
    DerivedConstants {
        gamma,
        theta1,
        theta2,
        lambda,
        delta,
        l1: Limit::Finite(l1),
        l2: Limit::Finite(l2),
        tau: Limit::Finite(tau),
        epsilon_f: Limit::Finite(epsilon_f),
        epsilon_fhat: Limit::Finite(epsilon_fhat),
    }
}

/// The two algebraically equivalent ways of writing the transform-side
/// stretched-decay threshold: once as `1 + (lambda + delta)/(1 - gamma)`
/// times the gap ratio, once in the fully expanded polynomial form used by
/// `derive_constants`. Exposed so reports can print both and tests can pin
/// their agreement; they differ only by floating-point rounding.
pub fn epsilon_fhat_forms(pair: ExponentPair) -> (f64, f64) {
    let a = pair.alpha();
    let b = pair.beta();
    let s = a + b;
    let q = b / (1.0 - b);
    let c = derive_constants(pair);
    let nested = (1.0 + (c.lambda + c.delta) / (1.0 - c.gamma)) * q;
    let expanded = (1.0 + a - b * (1.0 + a * b)) / (1.0 - s) * q;
    (nested, expanded)
}

/// Same as [`epsilon_fhat_forms`] with the roles of the exponents exchanged.
pub fn epsilon_f_forms(pair: ExponentPair) -> (f64, f64) {
    let (n, e) = epsilon_fhat_forms(pair.swapped());
    (n, e)
}

/// Membership report for the admissible region.
#[derive(Debug, Clone, Copy)]
pub struct RegionReport {
    /// In the admissible region: subcritical and at least one branch holds.
    pub in_region: bool,
    /// `alpha + beta < 1`.
    pub sum_ok: bool,
    /// `alpha < 1 - beta/(1 - alpha - beta)` (only meaningful when `sum_ok`).
    pub branch_alpha: bool,
    /// `beta < 1 - alpha/(1 - alpha - beta)` (only meaningful when `sum_ok`).
    pub branch_beta: bool,
    /// After relabeling so that alpha ≤ beta: `beta < 1 - L1`, i.e. the
    /// zero-counting series of the continued function diverges.
    pub hadamard_contradiction: bool,
    /// `1 / (1 - min(L1, L2))` when that is meaningful, else infinite.
    pub order_bound: Limit,
}

/// Decide whether a pair lies in the admissible region and assemble the
/// full report. All inequalities are strict; the boundary itself is out.
pub fn region_a_membership(pair: ExponentPair) -> RegionReport {
    let a = pair.alpha();
    let b = pair.beta();
    let s = a + b;
    let sum_ok = s < 1.0;
    let branch_alpha = a < 1.0 - b / (1.0 - s);
    let branch_beta = b < 1.0 - a / (1.0 - s);
    let in_region = sum_ok && (branch_alpha || branch_beta);
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let (hadamard_contradiction, order_bound) = if sum_ok {
        let l_min = lo / (1.0 - s);
        let contraction = hi < 1.0 - l_min;
        let order = if l_min < 1.0 { Limit::Finite(1.0 / (1.0 - l_min)) } else { Limit::Infinite };
        (contraction, order)
    } else {
        (false, Limit::Infinite)
    };
    RegionReport { in_region, sum_ok, branch_alpha, branch_beta, hadamard_contradiction, order_bound }
}

/// Where the admissible region crosses the diagonal alpha = beta: the root of
/// 2a² - 4a + 1 in (0, 1/2), which is exactly 1 - √2/2.
pub fn diagonal_threshold() -> f64 {
    1.0 - std::f64::consts::SQRT_2 / 2.0
}

/// Trace of the coupled gap recursion.
///
/// Starting from the caller-supplied `(a0, b0)`, iterates
///
/// ```text
/// a_{n+1} = (omega + b_n) * alpha / (1 - alpha)
/// b_{n+1} = (omega + a_{n+1}) * beta / (1 - beta)
/// ```
///
/// and returns the `steps + 1` pairs including the seed. With `omega = 1`
/// this is the plain bounding recursion; eliminating `b` gives the affine
/// law `a_{n+1} = theta1 + gamma * a_n`, so the error contracts by exactly
/// `gamma` per step. Entry 0 is `(a0, b0)` verbatim — `b0` is the caller's
/// independent seed and is not recomputed from `a0`.
pub fn recursion_trace(
    pair: ExponentPair,
    a0: f64,
    b0: f64,
    steps: usize,
    omega: f64,
) -> Vec<(f64, f64)> {
    let p = pair.alpha() / (1.0 - pair.alpha());
    let q = pair.beta() / (1.0 - pair.beta());
    let mut out = Vec::with_capacity(steps + 1);
    out.push((a0, b0));
    let mut b = b0;
    for _ in 0..steps {
        let a = (omega + b) * p;
        b = (omega + a) * q;
        out.push((a, b));
    }
    out
}

/// The consistent companion seed for `a0`: `b0 = (omega + a0) * beta/(1-beta)`.
///
/// Seeding the trace with this value puts the very first entry on the affine
/// orbit, so `|a_n - limit| = gamma^n * |a0 - limit|` holds from n = 0.
pub fn consistent_b0(pair: ExponentPair, a0: f64, omega: f64) -> f64 {
    (omega + a0) * pair.beta() / (1.0 - pair.beta())
}

/// Exact fixed point of the ω-recursion, `(omega*L1, omega*L2)`.
///
/// Solving `a = (omega + b) p`, `b = (omega + a) q` with `p = alpha/(1-alpha)`,
/// `q = beta/(1-beta)` gives `a = omega * alpha/(1-alpha-beta)` and the
/// symmetric expression for `b`; both scale linearly in omega and reduce to
/// `(L1, L2)` at omega = 1. Errors when `alpha + beta ≥ 1` (no attracting
/// fixed point: gamma ≥ 1).
pub fn omega_fixed_point(pair: ExponentPair, omega: f64) -> Result<(f64, f64)> {
    if !pair.is_subcritical() {
        return Err(Error::SupercriticalSum { alpha: pair.alpha(), beta: pair.beta() });
    }
    let s = pair.alpha() + pair.beta();
    Ok((omega * pair.alpha() / (1.0 - s), omega * pair.beta() / (1.0 - s)))
}

/// Result of [`omega_for_full_range`]: the root plus its verification data.
#[derive(Debug, Clone, Copy)]
pub struct OmegaRoot {
    /// The positive root of `beta·ω² + (1-beta)·ω - (1-alpha-beta) = 0`.
    pub omega: f64,
    /// Residual of the defining equation `ω(1 + (ω-1)beta) - (1-alpha-beta)`.
    pub residual: f64,
}

/// The gap-growth exponent ω that would extend the contradiction to the
/// whole subcritical range.
///
/// Solves `ω (1 + (ω-1) β) = 1 - α - β` for its unique positive root, after
/// relabeling the pair so that alpha ≤ beta. Requires a subcritical pair;
/// at or above the critical line the quadratic has no positive root and the
/// discriminant is reported in the error.
pub fn omega_for_full_range(pair: ExponentPair) -> Result<OmegaRoot> {
    let (a, b) = if pair.alpha() <= pair.beta() {
        (pair.alpha(), pair.beta())
    } else {
        (pair.beta(), pair.alpha())
    };
    // beta*w^2 + (1-beta)*w - (1-a-b) = 0
    let ca = b;
    let cb = 1.0 - b;
    let cc = -(1.0 - a - b);
    let disc = cb * cb - 4.0 * ca * cc;
    if disc < 0.0 || a + b >= 1.0 {
        return Err(Error::NoPositiveRoot { discriminant: disc });
    }
    // Stable quadratic: q = -(cb + sign(cb)·√disc)/2, roots q/ca and cc/q.
    let sq = disc.sqrt();
    let qq = -0.5 * (cb + sq); // cb > 0 always here
    let r1 = qq / ca;
    let r2 = cc / qq;
    let omega = if r1 > 0.0 { r1 } else { r2 };
    if omega <= 0.0 {
        return Err(Error::NoPositiveRoot { discriminant: disc });
    }
    let residual = omega * (1.0 + (omega - 1.0) * b) - (1.0 - a - b);
    debug_assert!(residual.abs() < 1e-12, "quadratic root residual {residual}");
    Ok(OmegaRoot { omega, residual })
}

/// Analytic order of an entire continuation built from decay `e^{-c|x|^A}`:
/// `A / (A - 1)`. Only defined for `A > 1`.
pub fn analytic_order_from_decay(a: f64) -> Result<f64> {
    if !(a > 1.0) {
        return Err(Error::OrderNotAboveOne { value: a });
    }
    Ok(a / (a - 1.0))
}

/// Zero-counting contradiction test: an entire function of order `order`
/// cannot vanish on all `±n^node_exponent` if the exponent sum
/// `node_exponent * order` stays below 1 — the series Σ n^{-node_exponent·(order+ε)}
/// then diverges for small ε > 0 while convergence is forced. Strict at the
/// boundary: equality gives no contradiction.
pub fn hadamard_divergence_check(order: f64, node_exponent: f64) -> bool {
    node_exponent * order < 1.0
}

/// Report for [`generalized_sequence_check`].
#[derive(Debug, Clone, Copy)]
pub struct GeneralizedCheck {
    /// The exponent pair `(1/(1+eta), 1/(1+omega))` induced by the gap rates.
    pub pair: ExponentPair,
    /// `eta * omega`.
    pub product: f64,
    /// `eta * omega > 1`.
    pub product_ok: bool,
    /// Region membership of the induced pair.
    pub region: RegionReport,
    /// Both conditions together.
    pub admissible: bool,
}

/// Admissibility of a generalized node-sequence pair described by its gap
/// decay rates `eta` (direct side) and `omega` (transform side): the induced
/// exponents must multiply to something subcritical (`eta * omega > 1`) and
/// the induced pair must lie in the admissible region.
pub fn generalized_sequence_check(eta: f64, omega: f64) -> Result<GeneralizedCheck> {
    if !(eta > 0.0) || !eta.is_finite() {
        return Err(Error::BadParameter { name: "eta", value: eta, expected: "positive real" });
    }
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::BadParameter { name: "omega", value: omega, expected: "positive real" });
    }
    let pair = ExponentPair::new(1.0 / (1.0 + eta), 1.0 / (1.0 + omega))?;
    let product = eta * omega;
    let product_ok = product > 1.0;
    let region = region_a_membership(pair);
    Ok(GeneralizedCheck { pair, product, product_ok, region, admissible: product_ok && region.in_region })
}
