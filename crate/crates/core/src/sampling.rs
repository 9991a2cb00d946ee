//! Sampling operators: from basis coefficients to node samples.
//!
//! A candidate function is expanded in the eigenfunction basis; imposing its
//! values at direct nodes and its transform's values at transform nodes is a
//! linear map whose smallest singular value measures how far the node system
//! is from admitting a nonzero function vanishing on all of it. At finite
//! truncation this is strictly an empirical proxy — the exact statements
//! tested here are the linear-algebra ones (monotonicity under row deletion,
//! oracle agreement, symmetry), never the infinite-dimensional limit itself.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::exponents::{region_a_membership, ExponentPair};
use crate::hermite::{ensure_verified, hermite_columns, transform_eigenvalue, BasisSpec, Parity};
use crate::nodes::NodeFamily;

/// Entries below this are treated as numerically indistinguishable from an
/// identically-zero sample; rows where every entry is below it are excluded.
pub const UNDERFLOW_FLOOR: f64 = 1e-300;

/// Dense operator matrix; real in even-parity mode (all eigenvalues ±1),
/// complex otherwise.
#[derive(Debug, Clone)]
pub enum OperatorMatrix {
    Real(DMatrix<f64>),
    Complex(DMatrix<Complex<f64>>),
}

impl OperatorMatrix {
    pub fn nrows(&self) -> usize {
        match self {
            OperatorMatrix::Real(m) => m.nrows(),
            OperatorMatrix::Complex(m) => m.nrows(),
        }
    }

    pub fn ncols(&self) -> usize {
        match self {
            OperatorMatrix::Real(m) => m.ncols(),
            OperatorMatrix::Complex(m) => m.ncols(),
        }
    }
}

/// Assembly options.
#[derive(Debug, Clone, Copy, Default)]
pub struct OperatorOptions {
    /// Scale every retained row to unit Euclidean norm.
    pub row_normalize: bool,
}

/// The sampling map from `basis.size` coefficients to node samples.
///
/// Row layout: all retained direct rows (in node order), then all retained
/// transform rows. `direct_nodes` / `transform_nodes` list the retained node
/// values in that order, so `matrix.nrows() == direct_nodes.len() +
/// transform_nodes.len()` always holds; rows dropped because every basis
/// element underflows at their node are only counted in `excluded_rows`.
#[derive(Debug, Clone)]
pub struct SamplingOperator {
    pub basis: BasisSpec,
    pub matrix: OperatorMatrix,
    pub direct_nodes: Vec<f64>,
    pub transform_nodes: Vec<f64>,
    pub excluded_rows: usize,
    pub row_normalized: bool,
}

/// Sample vectors in the operator's scalar field.
#[derive(Debug, Clone, PartialEq)]
pub enum SampleVector {
    Real(Vec<f64>),
    Complex(Vec<Complex<f64>>),
}

impl SampleVector {
    pub fn len(&self) -> usize {
        match self {
            SampleVector::Real(v) => v.len(),
            SampleVector::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Role {
    Direct,
    Transform,
}

/// Node values sampled from a family: `value(0), …, value(count-1)`, with an
/// exact-duplicate filter; in full-parity mode each nonzero value also
/// contributes its negative.
fn sampled_nodes(family: &NodeFamily, count: usize, parity: Parity) -> Result<Vec<f64>> {
    let mut nodes: Vec<f64> = Vec::new();
    let push = |v: f64, nodes: &mut Vec<f64>| {
        if !nodes.iter().any(|&u| u == v) {
            nodes.push(v);
        }
    };
    for n in 0..count as u64 {
        let v = family.value(n)?;
        match parity {
            Parity::Even => push(v.abs(), &mut nodes),
            Parity::All => {
                push(v, &mut nodes);
                if v != 0.0 {
                    push(-v, &mut nodes);
                }
            }
        }
    }
    Ok(nodes)
}

/// Build the operator for power nodes `±n^alpha` (direct) and `±n^beta`
/// (transform), `n = 0..m-1` on each side.
pub fn build_operator(
    pair: ExponentPair,
    m_direct: usize,
    m_transform: usize,
    basis: BasisSpec,
) -> Result<SamplingOperator> {
    let direct = NodeFamily::power(pair.alpha())?;
    let transform = NodeFamily::power(pair.beta())?;
    build_operator_from_families(
        &direct,
        m_direct,
        &transform,
        m_transform,
        basis,
        OperatorOptions::default(),
    )
}

/// General constructor over arbitrary node families. The basis is verified
/// (once per process for each distinct [`BasisSpec`]) before any assembly.
pub fn build_operator_from_families(
    direct: &NodeFamily,
    m_direct: usize,
    transform: &NodeFamily,
    m_transform: usize,
    basis: BasisSpec,
    options: OperatorOptions,
) -> Result<SamplingOperator> {
    ensure_verified(&basis)?;
    let orders = basis.orders();
    let max_order = basis.max_order();
    let n = basis.size;

    let mut excluded = 0usize;
    let mut direct_nodes = Vec::new();
    let mut transform_nodes = Vec::new();
    let mut real_rows: Vec<f64> = Vec::new();
    let mut complex_rows: Vec<Complex<f64>> = Vec::new();

    let add_rows = |family: &NodeFamily,
                        count: usize,
                        role: Role,
                        kept: &mut Vec<f64>,
                        real_rows: &mut Vec<f64>,
                        complex_rows: &mut Vec<Complex<f64>>,
                        excluded: &mut usize|
     -> Result<()> {
        for x in sampled_nodes(family, count, basis.parity)? {
            let full = hermite_columns(max_order, x);
            let evals: Vec<f64> = orders.iter().map(|&k| full[k as usize]).collect();
            if evals.iter().all(|v| v.abs() < UNDERFLOW_FLOOR) {
                *excluded += 1;
                continue;
            }
            kept.push(x);
            match basis.parity {
                Parity::Even => {
                    let mut row: Vec<f64> = match role {
                        Role::Direct => evals,
                        // Even orders 2i have real eigenvalue (-1)^i.
                        Role::Transform => evals
                            .iter()
                            .enumerate()
                            .map(|(i, &v)| if i % 2 == 0 { v } else { -v })
                            .collect(),
                    };
                    if options.row_normalize {
                        let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
                        for v in &mut row {
                            *v /= norm;
                        }
                    }
                    real_rows.extend(row);
                }
                Parity::All => {
                    let mut row: Vec<Complex<f64>> = match role {
                        Role::Direct => evals.iter().map(|&v| Complex::new(v, 0.0)).collect(),
                        Role::Transform => orders
                            .iter()
                            .zip(&evals)
                            .map(|(&k, &v)| {
                                let (re, im) = transform_eigenvalue(k);
                                Complex::new(re * v, im * v)
                            })
                            .collect(),
                    };
                    if options.row_normalize {
                        let norm = row.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                        for c in &mut row {
                            *c /= norm;
                        }
                    }
                    complex_rows.extend(row);
                }
            }
        }
        Ok(())
    };

    add_rows(direct, m_direct, Role::Direct, &mut direct_nodes, &mut real_rows, &mut complex_rows, &mut excluded)?;
    add_rows(
        transform,
        m_transform,
        Role::Transform,
        &mut transform_nodes,
        &mut real_rows,
        &mut complex_rows,
        &mut excluded,
    )?;

    let rows = direct_nodes.len() + transform_nodes.len();
    let matrix = match basis.parity {
        Parity::Even => OperatorMatrix::Real(DMatrix::from_row_slice(rows, n, &real_rows)),
        Parity::All => OperatorMatrix::Complex(DMatrix::from_row_slice(rows, n, &complex_rows)),
    };
    Ok(SamplingOperator {
        basis,
        matrix,
        direct_nodes,
        transform_nodes,
        excluded_rows: excluded,
        row_normalized: options.row_normalize,
    })
}

/// Smallest and largest singular values of a real matrix. A matrix with
/// fewer rows than columns has a nontrivial kernel as an operator on
/// coefficient space, so its smallest singular value is reported as 0.
pub fn matrix_sigma_min_max(m: &DMatrix<f64>) -> (f64, f64) {
    if m.nrows() == 0 {
        return (0.0, 0.0);
    }
    let sv = m.clone().svd(false, false).singular_values;
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for &s in sv.iter() {
        lo = lo.min(s);
        hi = hi.max(s);
    }
    if m.nrows() < m.ncols() {
        lo = 0.0;
    }
    (lo, hi)
}

/// Complex counterpart of [`matrix_sigma_min_max`].
pub fn matrix_sigma_min_max_complex(m: &DMatrix<Complex<f64>>) -> (f64, f64) {
    if m.nrows() == 0 {
        return (0.0, 0.0);
    }
    let sv = m.clone().svd(false, false).singular_values;
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for &s in sv.iter() {
        lo = lo.min(s);
        hi = hi.max(s);
    }
    if m.nrows() < m.ncols() {
        lo = 0.0;
    }
    (lo, hi)
}

/// Smallest and largest singular values of the operator, by dense SVD.
/// Errors on non-finite entries (reporting the first offending position).
pub fn sigma_min_max(op: &SamplingOperator) -> Result<(f64, f64)> {
    match &op.matrix {
        OperatorMatrix::Real(m) => {
            for r in 0..m.nrows() {
                for c in 0..m.ncols() {
                    if !m[(r, c)].is_finite() {
                        return Err(Error::NonFiniteEntry { row: r, col: c });
                    }
                }
            }
            Ok(matrix_sigma_min_max(m))
        }
        OperatorMatrix::Complex(m) => {
            for r in 0..m.nrows() {
                for c in 0..m.ncols() {
                    let v = m[(r, c)];
                    if !v.re.is_finite() || !v.im.is_finite() {
                        return Err(Error::NonFiniteEntry { row: r, col: c });
                    }
                }
            }
            Ok(matrix_sigma_min_max_complex(m))
        }
    }
}

/// Apply the operator to a real coefficient vector, producing the node
/// samples a function with those coefficients would have.
pub fn apply(op: &SamplingOperator, coefficients: &[f64]) -> Result<SampleVector> {
    if coefficients.len() != op.basis.size {
        return Err(Error::DimensionMismatch { expected: op.basis.size, got: coefficients.len() });
    }
    match &op.matrix {
        OperatorMatrix::Real(m) => {
            let x = DVector::from_column_slice(coefficients);
            Ok(SampleVector::Real((m * x).iter().cloned().collect()))
        }
        OperatorMatrix::Complex(m) => {
            let x = DVector::from_iterator(
                coefficients.len(),
                coefficients.iter().map(|&v| Complex::new(v, 0.0)),
            );
            Ok(SampleVector::Complex((m * x).iter().cloned().collect()))
        }
    }
}

/// Least-squares solution of the sampling system.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    /// Recovered coefficients as `(re, im)`; imaginary parts are ~0 in
    /// even-parity mode.
    pub coefficients: Vec<(f64, f64)>,
    /// `‖matrix·coeffs − samples‖₂ / ‖samples‖₂` (absolute norm when the
    /// sample vector is zero).
    pub residual: f64,
    pub sigma_min: f64,
    pub sigma_max: f64,
}

/// Least-squares reconstruction of basis coefficients from node samples.
/// Refuses rank-deficient operators (σ_min ≤ 1e-12·σ_max), reporting both
/// extremes in the error.
pub fn reconstruct(op: &SamplingOperator, samples: &SampleVector) -> Result<Reconstruction> {
    if samples.len() != op.matrix.nrows() {
        return Err(Error::DimensionMismatch { expected: op.matrix.nrows(), got: samples.len() });
    }
    let (sigma_min, sigma_max) = sigma_min_max(op)?;
    if sigma_min <= 1e-12 * sigma_max || sigma_max == 0.0 {
        return Err(Error::RankDeficient { sigma_min, sigma_max });
    }
    match (&op.matrix, samples) {
        (OperatorMatrix::Real(m), SampleVector::Real(b)) => {
            let b = DVector::from_column_slice(b);
            let svd = m.clone().svd(true, true);
            let x = svd.solve(&b, 0.0).map_err(|detail| Error::BasisVerification {
                detail: format!("SVD solve failed: {detail}"),
            })?;
            let r = m * &x - &b;
            let denom = b.norm();
            let residual = if denom > 0.0 { r.norm() / denom } else { r.norm() };
            Ok(Reconstruction {
                coefficients: x.iter().map(|&v| (v, 0.0)).collect(),
                residual,
                sigma_min,
                sigma_max,
            })
        }
        (OperatorMatrix::Complex(m), samples) => {
            let b: DVector<Complex<f64>> = match samples {
                SampleVector::Complex(v) => DVector::from_column_slice(v),
                SampleVector::Real(v) => {
                    DVector::from_iterator(v.len(), v.iter().map(|&x| Complex::new(x, 0.0)))
                }
            };
            let svd = m.clone().svd(true, true);
            let x = svd.solve(&b, 0.0).map_err(|detail| Error::BasisVerification {
                detail: format!("SVD solve failed: {detail}"),
            })?;
            let r = m * &x - &b;
            let denom = b.norm();
            let residual = if denom > 0.0 { r.norm() / denom } else { r.norm() };
            Ok(Reconstruction {
                coefficients: x.iter().map(|c| (c.re, c.im)).collect(),
                residual,
                sigma_min,
                sigma_max,
            })
        }
        (OperatorMatrix::Real(_), SampleVector::Complex(_)) => Err(Error::BadParameter {
            name: "samples",
            value: f64::NAN,
            expected: "real samples for a real (even-parity) operator",
        }),
    }
}

/// One cell of an (α, β) sweep.
#[derive(Debug, Clone, Copy)]
pub struct SweepCell {
    pub alpha: f64,
    pub beta: f64,
    pub sigma_min: f64,
    pub sigma_max: f64,
    /// `sigma_min / sigma_max` (0 when σ_max = 0).
    pub normalized: f64,
    /// Admissible-region membership of (α, β).
    pub predicted: bool,
    pub excluded_rows: usize,
}

/// Grid of σ extremes over the (α, β) plane, row-major in (alphas × betas).
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    pub basis: BasisSpec,
    pub nodes_per_side: usize,
    pub cells: Vec<SweepCell>,
}

impl SweepResult {
    pub fn cell(&self, i: usize, j: usize) -> &SweepCell {
        &self.cells[i * self.betas.len() + j]
    }
}

/// Sweep the grid: build the power-node operator at every (α, β), record
/// normalized σ_min next to the admissible-region prediction.
pub fn sweep(
    alphas: &[f64],
    betas: &[f64],
    basis: BasisSpec,
    nodes_per_side: usize,
) -> Result<SweepResult> {
    ensure_verified(&basis)?;
    let mut cells = Vec::with_capacity(alphas.len() * betas.len());
    for &a in alphas {
        for &b in betas {
            let pair = ExponentPair::new(a, b)?;
            let op = build_operator(pair, nodes_per_side, nodes_per_side, basis)?;
            let (lo, hi) = sigma_min_max(&op)?;
            cells.push(SweepCell {
                alpha: a,
                beta: b,
                sigma_min: lo,
                sigma_max: hi,
                normalized: if hi > 0.0 { lo / hi } else { 0.0 },
                predicted: region_a_membership(pair).in_region,
                excluded_rows: op.excluded_rows,
            });
        }
    }
    Ok(SweepResult {
        alphas: alphas.to_vec(),
        betas: betas.to_vec(),
        basis,
        nodes_per_side,
        cells,
    })
}
