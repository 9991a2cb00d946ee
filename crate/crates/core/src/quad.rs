//! Numerical integration: adaptive Simpson and composite Gauss–Legendre.
//!
//! Two deliberately different engines. Adaptive Simpson is the generic
//! oracle used to cross-check closed forms (it makes no smoothness
//! assumptions beyond what Simpson needs and refines wherever the local
//! error estimate is large). Composite Gauss–Legendre is the workhorse for
//! the smooth, mildly oscillatory integrands in the basis verification,
//! where fixed panels keep the cost predictable and the result bit-stable.

use std::sync::OnceLock;

/// Adaptive Simpson integration of `f` over `[a, b]`.
///
/// `tol` is an absolute tolerance for the whole interval; the classic
/// Richardson correction `(s2 - s1)/15` is used both as the acceptance test
/// and as the returned refinement. Recursion depth is capped at 60 levels,
/// which bounds the work even on integrands with unbounded derivatives at
/// an endpoint (e.g. |x|^(1/δ) kernels at 0).
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    simpson_rec(f, a, b, fa, fm, fb, whole, tol, 60)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// ∫_0^∞ f, for integrands that eventually decay monotonically.
///
/// Integrates on dyadically growing segments [0,1], [1,2], [2,4], … and
/// stops once two consecutive segments each contribute less than
/// `rel_tol` of the running total. Returns `(value, converged)`; callers
/// that need a hard guarantee should check the flag.
pub fn integrate_half_line<F: Fn(f64) -> f64>(f: &F, rel_tol: f64) -> (f64, bool) {
    let mut total = adaptive_simpson(f, 0.0, 1.0, rel_tol.min(1e-10));
    let mut lo = 1.0f64;
    let mut small_streak = 0u32;
    for _ in 0..64 {
        let hi = 2.0 * lo;
        let scale = total.abs().max(f64::MIN_POSITIVE);
        let seg = adaptive_simpson(f, lo, hi, rel_tol * scale * 0.1);
        total += seg;
        if seg.abs() <= rel_tol * total.abs().max(f64::MIN_POSITIVE) {
            small_streak += 1;
            if small_streak >= 2 {
                return (total, true);
            }
        } else {
            small_streak = 0;
        }
        lo = hi;
    }
    (total, false)
}

/// 16-point Gauss–Legendre nodes and weights on [-1, 1].
///
/// Computed once by Newton iteration on the Legendre recurrence; the nodes
/// are symmetric and the weights sum to 2 to machine precision (asserted in
/// tests, not trusted silently).
pub fn gl16() -> &'static [(f64, f64); 16] {
    static NODES: OnceLock<[(f64, f64); 16]> = OnceLock::new();
    NODES.get_or_init(|| {
        let n = 16usize;
        let mut out = [(0.0f64, 0.0f64); 16];
        for i in 0..n {
            // Chebyshev-flavored initial guess, then Newton on P_n.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_and_derivative(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre_and_derivative(n, x);
            out[i] = (x, 2.0 / ((1.0 - x * x) * dp * dp));
        }
        out
    })
}

/// Legendre polynomial P_n(x) and its derivative via the three-term recurrence.
fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0f64;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Composite 16-point Gauss–Legendre over `panels` equal panels of `[a, b]`.
///
/// Fully deterministic: fixed evaluation order, no adaptivity. For smooth
/// integrands whose oscillation per panel stays below ~5 wavelengths this is
/// accurate to machine precision.
pub fn composite_gl16<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize) -> f64 {
    let nodes = gl16();
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let c = lo + 0.5 * h;
        let r = 0.5 * h;
        let mut acc = 0.0;
        for &(x, w) in nodes.iter() {
            acc += w * f(c + r * x);
        }
        total += acc * r;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl16_weights_sum_to_two() {
        let s: f64 = gl16().iter().map(|&(_, w)| w).sum();
        assert!((s - 2.0).abs() < 1e-14);
        // Nodes are symmetric about 0.
        for &(x, _) in gl16().iter() {
            assert!(gl16().iter().any(|&(y, _)| (x + y).abs() < 1e-14));
        }
    }

    #[test]
    fn gl16_integrates_high_degree_polynomials_exactly() {
        // Degree 31 is the theoretical limit for 16 points.
        let f = |x: f64| x.powi(30) + 3.0 * x.powi(17) + x;
        let got = composite_gl16(&f, -1.0, 1.0, 1);
        let want = 2.0 / 31.0; // odd terms vanish
        assert!((got - want).abs() < 1e-14, "got {got}");
    }

    #[test]
    fn simpson_matches_closed_forms() {
        let got = adaptive_simpson(&|x: f64| x.exp(), 0.0, 1.0, 1e-12);
        assert!((got - (std::f64::consts::E - 1.0)).abs() < 1e-11);

        let got = adaptive_simpson(&|x: f64| (1.0 + x * x).recip(), 0.0, 1.0, 1e-12);
        assert!((got - std::f64::consts::FRAC_PI_4).abs() < 1e-11);
    }

    #[test]
    fn simpson_survives_sqrt_singularity_in_derivative() {
        let got = adaptive_simpson(&|x: f64| x.sqrt(), 0.0, 1.0, 1e-11);
        assert!((got - 2.0 / 3.0).abs() < 1e-9, "got {got}");
    }

    #[test]
    fn half_line_exponential() {
        let (got, ok) = integrate_half_line(&|x: f64| (-x).exp(), 1e-10);
        assert!(ok);
        assert!((got - 1.0).abs() < 1e-8, "got {got}");
    }

    #[test]
    fn half_line_gaussian_moment() {
        // ∫_0^∞ x² e^{-x²} dx = √π / 4
        let (got, ok) = integrate_half_line(&|x: f64| x * x * (-x * x).exp(), 1e-10);
        assert!(ok);
        let want = std::f64::consts::PI.sqrt() / 4.0;
        assert!((got - want).abs() < 1e-8 * want);
    }

    #[test]
    fn gl_matches_simpson_on_oscillatory_integrand() {
        let f = |x: f64| (10.0 * x).sin() * (-x * x).exp();
        let a = composite_gl16(&f, 0.0, 4.0, 32);
        let b = adaptive_simpson(&f, 0.0, 4.0, 1e-12);
        assert!((a - b).abs() < 1e-10);
    }
}
