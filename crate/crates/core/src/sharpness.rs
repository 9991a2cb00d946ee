//! Adversarial derivative-zero sequences and the gap extremal problem.
//!
//! A function vanishing at `±n^alpha` forces each derivative order k to have
//! zeros `a^(k)_n ∈ [n^alpha, (n+k+1)^alpha]`, which caps consecutive gaps at
//! `C (k+1) |a|^{-(1-alpha)/alpha}`. This module builds explicit sequences
//! that nearly saturate that cap — one engineered big gap per dyadic block,
//! or (blocked variant) one per sub-block of k_max+1 indices — and solves the
//! capped sum-of-squares extremal that controls what such gaps can do to
//! block averages.
//!
//! # Floating-point honesty
//!
//! The construction's nominal perturbation budget `2^{-10k(1-alpha)j/alpha}`
//! is far below one ULP of the node values for every interesting (j, k), and
//! the restart points converge geometrically toward interval endpoints. Both
//! are unrepresentable in f64 as stated, so the builder floors the budget at
//! a few ULPs of the block scale and reserves a strictly decreasing ULP
//! ladder for the restart points. The *effective* budgets are recorded on
//! the result and all constraint checks use them; the flooring slack is ~1e5
//! times smaller than any gap the experiments measure. When even the ladder
//! does not fit (enormous j), construction refuses rather than fudge.

use crate::error::{Error, Result};

/// Window cap: how many leading indices of a block are materialized per
/// level. Full blocks reach ~1e9 indices, which is pointless to store; every
/// measured quantity lives within a few thousand indices of the block start.
pub const DEFAULT_WINDOW: usize = 4096;

/// Constant for the consecutive-gap upper bound
/// `|a^(k)_{n+1} - a^(k)_n| ≤ GAP_BOUND_CONSTANT · (k+1) · |a^(k)_{n+1}|^{-(1-alpha)/alpha}`;
/// 2.0 dominates the worst admissible placement for every alpha ∈ (0,1)
/// (see [`gap_bound_ratio`]).
pub const GAP_BOUND_CONSTANT: f64 = 2.0;

/// First index of the dyadic block: least n with `n^alpha ≥ 2^j`.
pub fn block_start_index(alpha: f64, j: u32) -> u64 {
    let target = 2f64.powi(j as i32);
    let mut n = 2f64.powf(j as f64 / alpha).ceil().max(1.0) as u64;
    while n > 1 && ((n - 1) as f64).powf(alpha) >= target {
        n -= 1;
    }
    while (n as f64).powf(alpha) < target {
        n += 1;
    }
    n
}

/// Worst-case ratio of an admissible consecutive gap to
/// `(k+1) |a^(k)_{n+1}|^{-(1-alpha)/alpha}`, maximized over all placements
/// with `a^(k)_n ≥ n^alpha` and `a^(k)_{n+1} ≤ (n+k+2)^alpha`.
///
/// The ratio `(t^alpha - n^alpha) t^{1-alpha} / (k+1)` is increasing in
/// `t = (a^(k)_{n+1})^{1/alpha}`, so the supremum sits at `t = n+k+2`.
pub fn gap_bound_ratio(alpha: f64, k: u32, n: u64) -> f64 {
    let t = (n + k as u64 + 2) as f64;
    let nf = n as f64;
    (t - nf.powf(alpha) * t.powf(1.0 - alpha)) / (k as f64 + 1.0)
}

/// The certified gap cap `GAP_BOUND_CONSTANT · (k+1) · a_next^{-(1-alpha)/alpha}`.
pub fn gap_upper_bound(alpha: f64, k: u32, a_next: f64) -> f64 {
    GAP_BOUND_CONSTANT * (k as f64 + 1.0) * a_next.powf(-(1.0 - alpha) / alpha)
}

/// A nested family of derivative-zero locations on one dyadic block.
///
/// `levels[k][i]` holds `a^(k)_{block_start + i}`; level k has `window_len - k`
/// entries because each point consumes one index of the level below. Budgets
/// are the *effective* per-level perturbation bounds after the ULP floor.
#[derive(Debug, Clone)]
pub struct GapSequence {
    pub alpha: f64,
    pub j: u32,
    pub k_max: u32,
    pub blocked: bool,
    /// Least n with `n^alpha ≥ 2^j`.
    pub block_start: u64,
    /// Least n with `n^alpha ≥ 2^{j+1}` (one past the block).
    pub block_end: u64,
    /// Number of level-0 indices materialized.
    pub window_len: usize,
    /// True when the block extends beyond the materialized window.
    pub truncated: bool,
    levels: Vec<Vec<f64>>,
    /// Effective chase budget per level (index 0 unused).
    pub budgets: Vec<f64>,
    /// True when any effective budget exceeds its nominal value.
    pub budget_floored: bool,
}

impl GapSequence {
    /// The materialized level-k points, starting at index `block_start`.
    pub fn level(&self, k: u32) -> &[f64] {
        &self.levels[k as usize]
    }

    /// Nominal chase budget `2^{-10k(1-alpha)j/alpha}` before flooring.
    pub fn nominal_budget(&self, k: u32) -> f64 {
        2f64.powf(-10.0 * k as f64 * (1.0 - self.alpha) * self.j as f64 / self.alpha)
    }

    /// The engineered gap `a^(k)_{n_j+1} - a^(k)_{n_j}` at the block start.
    pub fn first_gap(&self, k: u32) -> f64 {
        let lvl = self.level(k);
        lvl[1] - lvl[0]
    }

    /// Width of the sub-blocks used by the blocked variant.
    pub fn sub_block(&self) -> usize {
        self.k_max as usize + 1
    }

    /// Check every structural claim: strict increase within each level,
    /// per-index interlacing `a^(k-1)_n ≤ a^(k)_n ≤ a^(k-1)_{n+1}`, and the
    /// construction constraints against the recorded effective budgets.
    pub fn verify(&self) -> Result<()> {
        let fail = |k: u32, i: usize| Error::InfeasibleConstraint {
            k,
            n: self.block_start + i as u64,
        };
        for (k, lvl) in self.levels.iter().enumerate() {
            for i in 1..lvl.len() {
                if !(lvl[i] > lvl[i - 1]) {
                    return Err(fail(k as u32, i));
                }
            }
            if k == 0 {
                continue;
            }
            let below = &self.levels[k - 1];
            for i in 0..lvl.len() {
                if !(below[i] <= lvl[i] && lvl[i] <= below[i + 1]) {
                    return Err(fail(k as u32, i));
                }
                let restart =
                    if self.blocked { i % self.sub_block() == 0 } else { i == 0 };
                let ok = if restart {
                    let hi = ((self.block_start + i as u64 + 1) as f64).powf(self.alpha);
                    below[i] < lvl[i] && lvl[i] < hi
                } else {
                    let lo = (below[i + 1] - self.budgets[k]).max(below[i]);
                    lo < lvl[i] && lvl[i] < below[i + 1]
                };
                if !ok {
                    return Err(fail(k as u32, i));
                }
            }
        }
        Ok(())
    }
}

/// Build the adversarial sequence on dyadic block j with levels 0..=k_max,
/// materializing at most [`DEFAULT_WINDOW`] indices per level.
///
/// Placement is at interval midpoints: restarts fill
/// `(a^(k-1)_s, (s+1)^alpha)` at the block start (and, when `blocked`, at
/// every sub-block start `n_j + l(k_max+1)`), chase points fill
/// `(max(a^(k-1)_{n+1} - budget, a^(k-1)_n), a^(k-1)_{n+1})`. Errors:
/// parameter violations, an empty admissible interval (identifying k and n),
/// or f64 resolution exhaustion at absurd block scales.
pub fn build_sharpness_sequence(
    alpha: f64,
    j: u32,
    k_max: u32,
    blocked: bool,
) -> Result<GapSequence> {
    build_sharpness_sequence_windowed(alpha, j, k_max, blocked, DEFAULT_WINDOW)
}

/// [`build_sharpness_sequence`] with an explicit window cap.
pub fn build_sharpness_sequence_windowed(
    alpha: f64,
    j: u32,
    k_max: u32,
    blocked: bool,
    window: usize,
) -> Result<GapSequence> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::BadParameter { name: "alpha", value: alpha, expected: "open interval (0, 1)" });
    }
    if j == 0 {
        return Err(Error::BadParameter { name: "j", value: 0.0, expected: "j ≥ 1" });
    }
    if k_max == 0 {
        return Err(Error::BadParameter { name: "k_max", value: 0.0, expected: "k_max ≥ 1" });
    }
    if !((k_max as f64) < 2f64.powf(j as f64 / alpha)) {
        return Err(Error::BadParameter {
            name: "k_max",
            value: k_max as f64,
            expected: "k_max < 2^{j/alpha}",
        });
    }
    // Index arithmetic lives in u64: blocks starting beyond ~2^63 cannot
    // even be indexed, let alone resolved in f64.
    if (j as f64 + 1.0) / alpha >= 63.0 {
        return Err(Error::ResolutionExhausted { j, alpha });
    }
    let block_start = block_start_index(alpha, j);
    let block_end = block_start_index(alpha, j + 1);
    let block_len = block_end - block_start;
    if block_len < k_max as u64 + 2 {
        return Err(Error::BadParameter {
            name: "k_max",
            value: k_max as f64,
            expected: "block with at least k_max + 2 indices",
        });
    }

    // ULP of the largest value the window can reach; every floor below is
    // expressed in this unit so it dominates the local spacing everywhere.
    let top = ((block_end + k_max as u64 + 2) as f64).powf(alpha);
    let ulp = top.next_up() - top;
    // Restart ladder: level k keeps at least (k_max - k + 2)·2 ULPs of
    // headroom below its interval top, so successive levels stay strictly
    // ordered even after the midpoints collapse.
    let reserve_span = (k_max as f64 + 2.0) * 4.0 * ulp;
    let g0_min = alpha * (block_end as f64).powf(alpha - 1.0);
    if reserve_span >= 0.5 * g0_min {
        return Err(Error::ResolutionExhausted { j, alpha });
    }

    let w0 = (window + k_max as usize).min(block_len as usize);
    let truncated = (w0 as u64) < block_len;

    let mut budgets = vec![0.0f64; k_max as usize + 1];
    let mut budget_floored = false;
    for (k, b) in budgets.iter_mut().enumerate().skip(1) {
        let nominal = 2f64.powf(-10.0 * k as f64 * (1.0 - alpha) * j as f64 / alpha);
        let floor = 8.0 * ulp;
        *b = nominal.max(floor);
        budget_floored |= nominal < floor;
    }

    let mut levels: Vec<Vec<f64>> = Vec::with_capacity(k_max as usize + 1);
    levels.push((0..w0).map(|i| ((block_start + i as u64) as f64).powf(alpha)).collect());
    let sub = k_max as usize + 1;
    for k in 1..=k_max {
        let below = &levels[k as usize - 1];
        let len = w0 - k as usize;
        let mut lvl = Vec::with_capacity(len);
        for i in 0..len {
            let n = block_start + i as u64;
            let restart = if blocked { i % sub == 0 } else { i == 0 };
            let a = if restart {
                let prev = below[i];
                let hi = ((n + 1) as f64).powf(alpha);
                let mid = prev + (hi - prev) / 2.0;
                let floor_dist = 2.0 * ulp * (k_max - k + 2) as f64;
                let cand = mid.min(hi - floor_dist);
                let a = if cand > prev { cand } else { mid };
                if !(a > prev && a < hi) {
                    return Err(Error::InfeasibleConstraint { k, n });
                }
                a
            } else {
                let cur = below[i];
                let next = below[i + 1];
                let lo = (next - budgets[k as usize]).max(cur);
                let a = lo + (next - lo) / 2.0;
                if !(a > lo && a < next) {
                    return Err(Error::InfeasibleConstraint { k, n });
                }
                a
            };
            lvl.push(a);
        }
        levels.push(lvl);
    }

    Ok(GapSequence {
        alpha,
        j,
        k_max,
        blocked,
        block_start,
        block_end,
        window_len: w0,
        truncated,
        levels,
        budgets,
        budget_floored,
    })
}

/// Gap statistics of one level over the materialized window.
#[derive(Debug, Clone, Copy)]
pub struct AverageGapReport {
    pub k: u32,
    /// Mean consecutive gap over the window.
    pub mean_gap: f64,
    /// Sum of squared consecutive gaps over the window.
    pub sum_squares: f64,
    /// Certified mean-gap cap `constant · (k+1) · 2^{-(1-alpha)j/alpha}`.
    pub bound: f64,
    /// The constant reported with the cap (2·alpha).
    pub constant: f64,
    pub gap_count: usize,
    /// Gaps exceeding half the largest one.
    pub big_gap_count: usize,
    pub largest_gap: f64,
    /// Statistics cover only the window, not the whole block.
    pub truncated: bool,
}

/// Measure consecutive gaps of level k: mean, squared sum, the largest gap
/// and how many gaps are within a factor 2 of it, plus the certified cap on
/// the mean. Window statistics only (flagged when the block is truncated);
/// gaps shrink monotonically along a block, so a cap verified on the leading
/// window holds a fortiori for the block mean.
pub fn average_gap_report(seq: &GapSequence, k: u32) -> Result<AverageGapReport> {
    if k > seq.k_max {
        return Err(Error::DimensionMismatch { expected: seq.k_max as usize, got: k as usize });
    }
    let lvl = seq.level(k);
    let gaps: Vec<f64> = lvl.windows(2).map(|w| w[1] - w[0]).collect();
    if gaps.is_empty() {
        return Err(Error::EmptyNodes);
    }
    let mean_gap = (lvl[lvl.len() - 1] - lvl[0]) / gaps.len() as f64;
    let sum_squares = gaps.iter().map(|g| g * g).sum();
    let largest_gap = gaps.iter().cloned().fold(0.0, f64::max);
    let big_gap_count = gaps.iter().filter(|&&g| g > 0.5 * largest_gap).count();
    let constant = 2.0 * seq.alpha;
    let bound = constant
        * (k as f64 + 1.0)
        * 2f64.powf(-(1.0 - seq.alpha) * seq.j as f64 / seq.alpha);
    Ok(AverageGapReport {
        k,
        mean_gap,
        sum_squares,
        bound,
        constant,
        gap_count: gaps.len(),
        big_gap_count,
        largest_gap,
        truncated: seq.truncated,
    })
}

/// Maximize `Σ c_j²` subject to `Σ c_j = A` and `0 < c_j ≤ B`.
#[derive(Debug, Clone, Copy)]
pub struct SquaresProblem {
    n: usize,
    a: f64,
    b: f64,
}

impl SquaresProblem {
    pub fn new(n: usize, a: f64, b: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::BadParameter { name: "n", value: 0.0, expected: "n ≥ 1" });
        }
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::BadParameter { name: "a", value: a, expected: "positive real" });
        }
        if !(b > 0.0) || !b.is_finite() {
            return Err(Error::BadParameter { name: "b", value: b, expected: "positive real" });
        }
        if a > n as f64 * b {
            return Err(Error::InfeasibleMass { total: a, cap: b, terms: n });
        }
        Ok(SquaresProblem { n, a, b })
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
}

/// Solution of the capped sum-of-squares extremal.
#[derive(Debug, Clone)]
pub struct SquaresSolution {
    /// `B²·⌊A/B⌋ + (A - B·⌊A/B⌋)²`.
    pub max_value: f64,
    /// Extremal profile: `⌊A/B⌋` entries at the cap, the remainder mass in
    /// one entry, zeros elsewhere.
    pub argmax: Vec<f64>,
    /// Number of zero entries in the profile. The constraint `0 < c_j` is
    /// open, so whenever `zeros > 0` the value is a supremum attained only
    /// in the closure.
    pub zeros: usize,
    /// True iff the profile itself is feasible (no zero entries).
    pub attained: bool,
}

/// Solve the extremal in closed form: pushing mass to the cap is optimal
/// (for any two entries not at {0, B}, moving mass between them increases
/// the square sum), so the maximum packs `⌊A/B⌋` caps plus one remainder.
pub fn max_sum_squares(problem: &SquaresProblem) -> SquaresSolution {
    let (n, a, b) = (problem.n, problem.a, problem.b);
    let mut full = (a / b).floor();
    let mut remainder = a - b * full;
    if remainder >= b {
        full += 1.0;
        remainder = 0.0;
    }
    if remainder < 0.0 {
        remainder = 0.0;
    }
    let full = full as usize;
    let max_value = b * b * full as f64 + remainder * remainder;
    let mut argmax = vec![b; full];
    if remainder > 0.0 {
        argmax.push(remainder);
    }
    argmax.resize(n, 0.0);
    let zeros = argmax.iter().filter(|&&c| c == 0.0).count();
    SquaresSolution { max_value, argmax, zeros, attained: zeros == 0 }
}
