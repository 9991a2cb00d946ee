//! Shared helpers for the integration suites.
//!
//! The singular-value oracle here is deliberately primitive: a cyclic Jacobi
//! eigensolver applied to the Gram matrix. It shares no code with the SVD
//! used by the library, which is the point — agreement between the two is a
//! real check, not a tautology.

#![allow(dead_code)]

use nalgebra::{Complex, DMatrix};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "Jacobi oracle needs a square matrix");
    let mut a = m.clone();
    let scale = a.iter().fold(0.0f64, |acc, v| acc + v * v).sqrt().max(1e-300);
    for _sweep in 0..200 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)] * a[(p, q)];
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.abs() <= 1e-18 * scale {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// (σ_min, σ_max) of a real matrix via the Gram matrix, with the same
/// convention as the library: a matrix with fewer rows than columns acts on
/// coefficient space with a kernel, so σ_min = 0 falls out of λ_min(AᵀA).
pub fn gram_sigma_extremes(m: &DMatrix<f64>) -> (f64, f64) {
    if m.nrows() == 0 || m.ncols() == 0 {
        return (0.0, 0.0);
    }
    let g = m.transpose() * m;
    let ev = symmetric_eigenvalues(&g);
    (ev[0].max(0.0).sqrt(), ev[ev.len() - 1].max(0.0).sqrt())
}

/// Complex case through the real embedding [[Re, -Im], [Im, Re]], which has
/// the same singular values with doubled multiplicity.
pub fn gram_sigma_extremes_complex(m: &DMatrix<Complex<f64>>) -> (f64, f64) {
    let (r, c) = (m.nrows(), m.ncols());
    if r == 0 || c == 0 {
        return (0.0, 0.0);
    }
    let mut e = DMatrix::zeros(2 * r, 2 * c);
    for i in 0..r {
        for j in 0..c {
            let z = m[(i, j)];
            e[(i, j)] = z.re;
            e[(i, j + c)] = -z.im;
            e[(i + r, j)] = z.im;
            e[(i + r, j + c)] = z.re;
        }
    }
    gram_sigma_extremes(&e)
}

fn simpson_step<F: Fn(f64) -> f64>(
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
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson quadrature with Richardson correction.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 60)
}

/// Brute-force search for  max Σ c_i²  s.t.  Σ c_i = A, 0 < c_i ≤ B,
/// independent of any closed form: a coarse grid scan plus pairwise
/// mass-transfer ascent from random feasible starts. Moving mass from a
/// smaller to a larger coordinate strictly increases the square sum, so the
/// ascent terminates on a vertex of the feasible polytope.
pub fn search_sum_squares(n: usize, a: f64, b: f64, restarts: usize, rng: &mut ChaCha8Rng) -> f64 {
    use rand_chacha::rand_core::RngCore;
    assert!(a > 0.0 && b > 0.0 && a <= n as f64 * b + 1e-12);

    let value = |c: &[f64]| c.iter().map(|v| v * v).sum::<f64>();

    let climb = |start: &[f64]| -> f64 {
        let mut c = start.to_vec();
        for _pass in 0..(4 * n * n + 8) {
            let mut improved = false;
            for i in 0..n {
                for j in (i + 1)..n {
                    let (lo, hi) = if c[i] <= c[j] { (i, j) } else { (j, i) };
                    let room = (b - c[hi]).min(c[lo]);
                    if room > 1e-14 {
                        c[hi] += room;
                        c[lo] -= room;
                        improved = true;
                    }
                }
            }
            if !improved {
                break;
            }
        }
        value(&c)
    };

    // Random feasible starts: rescaled positive weights, then clip-and-
    // redistribute until the cap holds.
    let mut best = f64::NEG_INFINITY;
    let unit = |r: &mut ChaCha8Rng| (r.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
    for _ in 0..restarts {
        let mut c: Vec<f64> = (0..n).map(|_| unit(rng) + 1e-3).collect();
        let s: f64 = c.iter().sum();
        for v in &mut c {
            *v *= a / s;
        }
        for _ in 0..(8 * n) {
            let mut excess = 0.0;
            let mut headroom = 0.0;
            for v in &mut c {
                if *v > b {
                    excess += *v - b;
                    *v = b;
                } else {
                    headroom += b - *v;
                }
            }
            if excess <= 1e-15 {
                break;
            }
            for v in &mut c {
                if *v < b {
                    *v += excess * (b - *v) / headroom;
                }
            }
        }
        best = best.max(climb(&c));
    }

    // Coarse grid scan over the first n-1 coordinates; the last one is fixed
    // by the mass constraint. A pure lower-bound sweep with no structural
    // assumptions at all.
    let grid = match n {
        1 => 1,
        2 => 64,
        3 => 40,
        4 => 20,
        5 => 12,
        _ => 9,
    };
    let mut idx = vec![0usize; n.saturating_sub(1)];
    loop {
        let mut c: Vec<f64> = idx.iter().map(|&i| b * (i as f64 + 1.0) / grid as f64).collect();
        let partial: f64 = c.iter().sum();
        let last = a - partial;
        if last > 0.0 && last <= b {
            c.push(last);
            best = best.max(value(&c));
        }
        // Odometer increment.
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return best;
            }
            idx[pos] += 1;
            if idx[pos] < grid {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}
