//! Decay certificates and moment bounds.
//!
//! The machinery here turns "the k-th derivative vanishes somewhere in every
//! node gap" into quantitative decay: explicit envelopes for a function whose
//! transform has many vanishing moments, a closed-form bound for the moments
//! of a stretched-exponential envelope, and the self-improving cascade that
//! feeds moment bounds on one side of the transform back into the other.
//! Every constant of factorial size is carried in the log domain; nothing
//! here overflows before k ≈ 300.

use crate::error::{Error, Result};
use crate::exponents::{derive_constants, ExponentPair, Side};
use crate::nodes::NodeFamily;
use crate::quad::integrate_half_line;
use crate::special::{ln_factorial, ln_gamma, log_add_exp, LN_2PI};

/// A weighted absolute moment `I_k = ∫ |f(y)| |y|^k dy`, stored as its log.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentValue {
    pub k: u32,
    /// `ln I_k`; `NEG_INFINITY` encodes a vanishing moment.
    pub log_value: f64,
    /// Which side of the transform the integrand lives on.
    pub side: Side,
}

impl MomentValue {
    pub fn new(k: u32, side: Side, log_value: f64) -> Self {
        MomentValue { k, log_value, side }
    }

    /// The normalized moment `I_k = 1`.
    pub fn unit(k: u32, side: Side) -> Self {
        MomentValue { k, log_value: 0.0, side }
    }

    pub fn value(&self) -> f64 {
        self.log_value.exp()
    }
}

/// Shape of a decay envelope; the certificate's constant is kept separately.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Envelope {
    /// `|x|^exponent` with `exponent ≤ 0` (0 only for the degenerate k = 0).
    Polynomial { exponent: f64 },
    /// `e^{-rate |x|}` with `rate ≥ 1`.
    ExpLinear { rate: f64 },
    /// `e^{-margin |x|^exponent}` with `exponent > 0` and `margin ∈ (0, 1)`.
    StretchedExp { exponent: f64, margin: f64 },
}

/// A verified pointwise bound `|f(x)| ≤ C · envelope(|x|)` for `|x| ≥ valid_from`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayCertificate {
    /// `ln C`.
    pub log_constant: f64,
    pub envelope: Envelope,
    /// The bound is only claimed from this radius outward.
    pub valid_from: f64,
}

impl DecayCertificate {
    fn checked(log_constant: f64, envelope: Envelope, valid_from: f64) -> Result<Self> {
        if !log_constant.is_finite() {
            return Err(Error::BadParameter {
                name: "log_constant",
                value: log_constant,
                expected: "finite",
            });
        }
        if !(valid_from >= 0.0) || !valid_from.is_finite() {
            return Err(Error::BadParameter {
                name: "valid_from",
                value: valid_from,
                expected: "finite and nonnegative",
            });
        }
        match envelope {
            Envelope::Polynomial { exponent } => {
                if !(exponent <= 0.0) {
                    return Err(Error::BadParameter {
                        name: "exponent",
                        value: exponent,
                        expected: "≤ 0",
                    });
                }
            }
            Envelope::ExpLinear { rate } => {
                if !(rate >= 1.0) {
                    return Err(Error::BadParameter { name: "rate", value: rate, expected: "≥ 1" });
                }
            }
            Envelope::StretchedExp { exponent, margin } => {
                if !(exponent > 0.0) || !exponent.is_finite() {
                    return Err(Error::BadParameter {
                        name: "exponent",
                        value: exponent,
                        expected: "positive and finite",
                    });
                }
                if !(margin > 0.0 && margin < 1.0) {
                    return Err(Error::BadParameter {
                        name: "margin",
                        value: margin,
                        expected: "open interval (0, 1)",
                    });
                }
            }
        }
        Ok(DecayCertificate { log_constant, envelope, valid_from })
    }

    /// Log of the certified bound at `x` (uses `|x|`; does not check
    /// `valid_from` — callers decide where the claim applies).
    pub fn log_bound(&self, x: f64) -> f64 {
        let r = x.abs();
        self.log_constant
            + match self.envelope {
                Envelope::Polynomial { exponent } => exponent * r.ln(),
                Envelope::ExpLinear { rate } => -rate * r,
                Envelope::StretchedExp { exponent, margin } => -margin * r.powf(exponent),
            }
    }

    /// The certified bound at `x` in the linear domain (may underflow to 0).
    pub fn bound(&self, x: f64) -> f64 {
        self.log_bound(x).exp()
    }
}

/// Interval guaranteed to contain a zero of the k-th derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroInterval {
    pub lo: f64,
    pub hi: f64,
    pub gap: f64,
}

/// Repeated Rolle: if a function vanishes at the nodes `a_m, …, a_{m+k+1}`,
/// its k-th derivative vanishes somewhere in `[a_m, a_{m+k+1}]`. Returns
/// that interval and its width.
pub fn derivative_zero_intervals(nodes: &NodeFamily, k: u32, m: u64) -> Result<ZeroInterval> {
    let lo = nodes.value(m)?;
    let hi = nodes.value(m + k as u64 + 1)?;
    Ok(ZeroInterval { lo, hi, gap: hi - lo })
}

/// Mean-value bound extracted from the inversion formula: if the (k+1)-st
/// transform-side moment is `i_next` and the k-th derivative vanishes within
/// `gap` of `x`, then `|f^{(k)}(x)| ≤ (2π)^{k+1} · i_next · gap`.
pub fn inversion_gap_bound(i_next: f64, gap: f64, k: u32) -> f64 {
    (log_inversion_gap_bound(i_next.ln(), gap, k)).exp()
}

/// Log-domain version of [`inversion_gap_bound`] for large k.
pub fn log_inversion_gap_bound(log_i_next: f64, gap: f64, k: u32) -> f64 {
    (k as f64 + 1.0) * LN_2PI + log_i_next + gap.ln()
}

/// `ln B_m` for the factorial node constant
/// `B_m = (m+1)! · (2^{2-s} π)^{m+1} · s^m` attached to node exponent `s`.
///
/// This is the constant a function with `m+2` vanishing derivatives-worth of
/// node gaps picks up before its `|x|^{m(s-1)/s}` envelope.
pub fn log_node_constant(exponent: f64, m: u32) -> f64 {
    let base = (2.0f64).powf(2.0 - exponent) * std::f64::consts::PI;
    ln_factorial(m as u64 + 1) + (m as f64 + 1.0) * base.ln() + m as f64 * exponent.ln()
}

/// Polynomial-envelope decay certificate for a function vanishing on the
/// power nodes `±n^alpha` whose transform has k-th moment `i_k`:
///
/// `|f(x)| ≤ (k+1)! (2^{2-alpha} π)^{k+1} alpha^k · I_k · |x|^{k(alpha-1)/alpha}`
///
/// valid for `|x| ≥ (k+1)^alpha`.
pub fn power_decay_certificate(alpha: f64, k: u32, i_k: &MomentValue) -> Result<DecayCertificate> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::BadParameter { name: "alpha", value: alpha, expected: "open interval (0, 1)" });
    }
    if i_k.k != k {
        return Err(Error::DimensionMismatch { expected: k as usize, got: i_k.k as usize });
    }
    let log_constant = log_node_constant(alpha, k) + i_k.log_value;
    let exponent = k as f64 * (alpha - 1.0) / alpha;
    DecayCertificate::checked(
        log_constant,
        Envelope::Polynomial { exponent },
        (k as f64 + 1.0).powf(alpha),
    )
}

/// Exponential-envelope certificate for a function vanishing on the
/// logarithmic nodes `±log(n+1)`:
///
/// `|f(x)| ≤ k (2π)^k ((k+1)!)^3 · I_k · e^{-k|x|}`  for `|x| ≥ log(k+1)`.
///
/// Needs `k ≥ 1` (the k = 0 envelope would not decay).
pub fn log_decay_certificate(k: u32, i_k: &MomentValue) -> Result<DecayCertificate> {
    if k == 0 {
        return Err(Error::BadParameter { name: "k", value: 0.0, expected: "k ≥ 1" });
    }
    if i_k.k != k {
        return Err(Error::DimensionMismatch { expected: k as usize, got: i_k.k as usize });
    }
    let log_constant =
        (k as f64).ln() + k as f64 * LN_2PI + 3.0 * ln_factorial(k as u64 + 1) + i_k.log_value;
    DecayCertificate::checked(
        log_constant,
        Envelope::ExpLinear { rate: k as f64 },
        (k as f64 + 1.0).ln(),
    )
}

/// Optimize the log-node certificate over k at a fixed radius `x`.
///
/// Minimizes `ln(k (2π)^k ((k+1)!)^3 I_k) - k x` over `1 ≤ k ≤ e^x - 1`
/// (the range where `|x| ≥ log(k+1)` keeps each certificate applicable),
/// with the caller supplying `ln I_k`. Returns the minimizing k and the
/// optimized log bound, or `None` when no k is admissible. The scan stops
/// once the objective has been rising for a long stretch, so the cost stays
/// proportional to the optimal k rather than the cap.
pub fn optimized_log_node_bound(x: f64, log_i: &dyn Fn(u32) -> f64) -> Option<(u32, f64)> {
    if !(x > 0.0) {
        return None;
    }
    let cap = x.exp_m1().floor().min(200_000.0);
    if cap < 1.0 {
        return None;
    }
    let cap = cap as u32;
    let mut best: Option<(u32, f64)> = None;
    let mut since_best = 0u32;
    for k in 1..=cap {
        let kf = k as f64;
        let obj = kf.ln() + kf * LN_2PI + 3.0 * ln_factorial(k as u64 + 1) + log_i(k) - kf * x;
        match best {
            Some((_, b)) if obj >= b => {
                since_best += 1;
                if since_best > 64 {
                    break;
                }
            }
            _ => {
                best = Some((k, obj));
                since_best = 0;
            }
        }
    }
    best
}

/// Closed-form moment of a stretched-exponential envelope:
///
/// `∫_ℝ e^{-(1-θ)|x|^{1/δ}} |x|^k dx  =  2δ / (1-θ)^{δ(k+1)} · Γ(δ(k+1))`.
#[derive(Debug, Clone, Copy)]
pub struct GammaMomentBound {
    /// `ln` of the moment; always finite.
    pub log_value: f64,
    /// The moment in the linear domain; `+∞` when it overflows f64.
    pub value: f64,
    /// True iff `value` overflowed and only `log_value` is usable.
    pub overflowed: bool,
}

/// Evaluate the stretched-exponential moment identity above.
///
/// `delta` is the reciprocal decay exponent (envelope `e^{-(1-θ)|x|^{1/δ}}`),
/// `theta ∈ [0, 1)` the margin slack, `k` the moment order.
pub fn gamma_moment_bound(delta: f64, theta: f64, k: u32) -> Result<GammaMomentBound> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::BadParameter { name: "delta", value: delta, expected: "positive real" });
    }
    if !(0.0..1.0).contains(&theta) {
        return Err(Error::BadParameter {
            name: "theta",
            value: theta,
            expected: "half-open interval [0, 1)",
        });
    }
    let z = delta * (k as f64 + 1.0);
    let log_value = (2.0 * delta).ln() - z * (1.0 - theta).ln() + ln_gamma(z);
    let value = log_value.exp();
    Ok(GammaMomentBound { log_value, value, overflowed: !value.is_finite() })
}

/// Seed moments for the cascade's recursion floor.
#[derive(Debug, Clone, PartialEq)]
pub enum SeedMoments {
    /// Abstract mode: every moment at or below the floor is normalized to 1.
    Unit,
    /// Explicit log-domain moments for `k = 0, 1, …`; must reach the floor.
    Values(Vec<f64>),
}

/// Configuration of the moment cascade.
///
/// Index-rounding is fixed: the descent targets `ĵ(k) = ⌈(k+2)·alpha/(1-alpha)⌉`
/// and `j(m) = ⌈(m+2)·beta/(1-beta)⌉` (ceilings keep the tail integrals
/// convergent), so one full round trip contracts the index by roughly the
/// factor `gamma`, reaching the floor after about `log k / log(1/gamma)`
/// rounds.
#[derive(Debug, Clone, PartialEq)]
pub struct CascadeConfig {
    pub pair: ExponentPair,
    /// Sup bound on both `|f|` and `|f̂|`; multiplies the direct term of G.
    pub sup_bound: f64,
    pub seeds: SeedMoments,
    /// When true (the default), the outer absorbed constant is 1; otherwise
    /// a crude explicit `(2 max(1, sup_bound))²` is charged per round trip.
    pub normalized: bool,
}

impl CascadeConfig {
    pub fn new(pair: ExponentPair) -> Self {
        CascadeConfig { pair, sup_bound: 1.0, seeds: SeedMoments::Unit, normalized: true }
    }
}

/// One round trip of the cascade at index `k`.
#[derive(Debug, Clone, Copy)]
pub struct CascadeStep {
    pub k: u32,
    /// Transform-side index `ĵ(k)`.
    pub j_hat: u32,
    /// Next direct-side index `ρ(k) = j(ĵ(k))`.
    pub rho: u32,
    pub log_g: f64,
    pub log_h: f64,
}

/// Result of [`moment_cascade`].
#[derive(Debug, Clone)]
pub struct CascadeBound {
    pub k: u32,
    /// `ln` of the certified bound on `I_k`.
    pub log_bound: f64,
    /// The round trips taken, outermost first.
    pub steps: Vec<CascadeStep>,
    /// Index at which the recursion bottomed out into the seeds.
    pub seed_index: u32,
}

fn j_hat_index(alpha: f64, k: u32) -> u32 {
    (((k as f64 + 2.0) * alpha / (1.0 - alpha)).ceil() as u32).max(1)
}

/// Smallest index at which the cascade is guaranteed to keep descending:
/// for all `k` above the returned floor, `ρ(k) < k`. Always at least 4.
/// Errors when `gamma ≥ 1` (no descent anywhere).
pub fn recursion_floor(pair: ExponentPair) -> Result<u32> {
    let gamma = derive_constants(pair).gamma;
    if gamma >= 1.0 {
        return Err(Error::CascadeDiverges);
    }
    let q = pair.beta() / (1.0 - pair.beta());
    // ρ(k) ≤ γk + 2γ + 3q + 1, so stalls are confined below this bound.
    let scan_to = ((2.0 * gamma + 3.0 * q + 1.0) / (1.0 - gamma)).ceil() as u32 + 4;
    let mut floor = 4u32;
    for k in 5..=scan_to {
        let rho = j_hat_index(pair.beta(), j_hat_index(pair.alpha(), k));
        if rho >= k {
            floor = k;
        }
    }
    Ok(floor)
}

/// Certified bound on the k-th direct-side moment via the two-sided cascade
///
/// `I_k ≤ G(k) + H(k) · I_{ρ(k)}`,
///
/// iterated down to the recursion floor and seeded there. `G` combines the
/// sup-bound term `D·k^{alpha(k+1)-1}` with the transform side's own direct
/// term; `H` is the product of the two factorial node constants divided by
/// `k² ĵ(k)²`. All arithmetic is in the log domain. Errors with
/// "cascade diverges" when `alpha + beta ≥ 1`.
pub fn moment_cascade(config: &CascadeConfig, k: u32) -> Result<CascadeBound> {
    let pair = config.pair;
    let gamma = derive_constants(pair).gamma;
    if gamma >= 1.0 || !pair.is_subcritical() {
        return Err(Error::CascadeDiverges);
    }
    if !(config.sup_bound > 0.0) || !config.sup_bound.is_finite() {
        return Err(Error::BadParameter {
            name: "sup_bound",
            value: config.sup_bound,
            expected: "positive real",
        });
    }
    let floor = recursion_floor(pair)?;
    let alpha = pair.alpha();
    let beta = pair.beta();
    let log_a = if config.normalized { 0.0 } else { 2.0 * (2.0 * config.sup_bound.max(1.0)).ln() };
    let log_d = config.sup_bound.ln();

    let mut steps = Vec::new();
    let mut idx = k;
    while idx > floor {
        let j_hat = j_hat_index(alpha, idx);
        let rho = j_hat_index(beta, j_hat);
        let kf = idx as f64;
        let jf = j_hat as f64;
        let log_b_j = log_node_constant(alpha, j_hat);
        let log_b_rho = log_node_constant(beta, rho);
        let direct = log_d + (alpha * (kf + 1.0) - 1.0) * kf.ln();
        let relayed = log_b_j + log_d + (beta * (jf + 1.0) - 1.0) * jf.ln() - 2.0 * kf.ln();
        let log_g = log_a + log_add_exp(direct, relayed);
        let log_h = log_a + log_b_j + log_b_rho - 2.0 * kf.ln() - 2.0 * jf.ln();
        steps.push(CascadeStep { k: idx, j_hat, rho, log_g, log_h });
        idx = rho;
    }

    let seed_index = idx;
    let mut log_bound = match &config.seeds {
        SeedMoments::Unit => 0.0,
        SeedMoments::Values(v) => *v.get(idx as usize).ok_or(Error::BadParameter {
            name: "seeds",
            value: idx as f64,
            expected: "seed list reaching the recursion floor",
        })?,
    };
    for step in steps.iter().rev() {
        log_bound = log_add_exp(step.log_g, step.log_h + log_bound);
    }
    Ok(CascadeBound { k, log_bound, steps, seed_index })
}

/// Least-squares fit `ln I_k ≈ c₁ · k ln k + c₂ · k` over the given indices.
///
/// Returns `(c₁, c₂)`. This is how the cascade's growth rate is compared
/// against the closed-form `tau`: the `k ln k` coefficient is the headline,
/// the linear coefficient absorbs every O(k) error term.
pub fn cascade_growth_fit(config: &CascadeConfig, ks: &[u32]) -> Result<(f64, f64)> {
    if ks.len() < 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: ks.len() });
    }
    let (mut s11, mut s12, mut s22, mut b1, mut b2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &k in ks {
        let y = moment_cascade(config, k)?.log_bound;
        let x1 = k as f64 * (k as f64).ln();
        let x2 = k as f64;
        s11 += x1 * x1;
        s12 += x1 * x2;
        s22 += x2 * x2;
        b1 += x1 * y;
        b2 += x2 * y;
    }
    let det = s11 * s22 - s12 * s12;
    if det.abs() < 1e-30 {
        return Err(Error::BadParameter { name: "ks", value: det, expected: "non-degenerate index set" });
    }
    Ok(((s22 * b1 - s12 * b2) / det, (s11 * b2 - s12 * b1) / det))
}

/// Stretched-exponential certificate reachable once the moment growth rate
/// on the opposite side is known.
///
/// With `ln I_j ≤ tau · j ln j + O(j)` on the opposite side, the bound
/// `e^{-(1-θ)|x|^{1/ε}}` holds for any `ε > (1 + tau) · r` where `r` is this
/// side's gap ratio (`beta/(1-beta)` for the transform, `alpha/(1-alpha)`
/// for the function). This constructor takes the threshold with a 1% safety
/// margin. Defaults: θ = 0.1, margin = 1%. Errors on supercritical pairs.
pub fn stretched_envelope(
    pair: ExponentPair,
    moment_growth: f64,
    side: Side,
) -> Result<DecayCertificate> {
    stretched_envelope_with(pair, moment_growth, side, 0.1, 0.01)
}

/// [`stretched_envelope`] with explicit θ and relative margin.
pub fn stretched_envelope_with(
    pair: ExponentPair,
    moment_growth: f64,
    side: Side,
    theta: f64,
    margin: f64,
) -> Result<DecayCertificate> {
    if !pair.is_subcritical() {
        return Err(Error::SupercriticalSum { alpha: pair.alpha(), beta: pair.beta() });
    }
    if !(moment_growth >= 0.0) || !moment_growth.is_finite() {
        return Err(Error::BadParameter {
            name: "moment_growth",
            value: moment_growth,
            expected: "nonnegative real",
        });
    }
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::BadParameter { name: "theta", value: theta, expected: "open interval (0, 1)" });
    }
    if !(margin > 0.0) || !margin.is_finite() {
        return Err(Error::BadParameter { name: "margin", value: margin, expected: "positive real" });
    }
    let (ratio, node_exponent) = match side {
        Side::Transform => (pair.beta() / (1.0 - pair.beta()), pair.beta()),
        Side::Direct => (pair.alpha() / (1.0 - pair.alpha()), pair.alpha()),
    };
    let eps = (1.0 + moment_growth) * ratio * (1.0 + margin);
    // Smallest radius at which some node gap (k = 1) sits inside the bound's
    // construction: |x| ≥ 3^exponent.
    let valid_from = 3.0f64.powf(node_exponent);
    DecayCertificate::checked(
        0.0,
        Envelope::StretchedExp { exponent: 1.0 / eps, margin: 1.0 - theta },
        valid_from,
    )
}

/// Log-domain seed moments `ln I_k`, `k < count`, of a witness function,
/// computed by quadrature on the half line (the integrand is folded:
/// `|f(y)| + |f(-y)|`).
pub fn seed_moments_from_witness<F: Fn(f64) -> f64>(f: &F, count: usize) -> Vec<f64> {
    (0..count)
        .map(|k| {
            let g = |y: f64| (f(y).abs() + f(-y).abs()) * y.powi(k as i32);
            let (v, _) = integrate_half_line(&g, 1e-12);
            v.ln()
        })
        .collect()
}
