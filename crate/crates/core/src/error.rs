//! Crate-wide error type.

use std::fmt;

/// Everything that can go wrong in this crate, as plain data.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter that must lie in a specific range was outside it.
    BadParameter { name: &'static str, value: f64, expected: &'static str },
    /// The moment cascade has no contracting index chain.
    CascadeDiverges,
    /// An operation required `alpha + beta < 1` and the pair is not subcritical.
    SupercriticalSum { alpha: f64, beta: f64 },
    /// The full-range quadratic has no positive root.
    NoPositiveRoot { discriminant: f64 },
    /// Decay order must exceed 1 for analytic continuation of the inverse exponent.
    OrderNotAboveOne { value: f64 },
    /// A gap-sequence constraint interval came out empty at level `k`, index `n`.
    InfeasibleConstraint { k: u32, n: u64 },
    /// Consecutive node gaps of the requested block fall below f64 resolution.
    ResolutionExhausted { j: u32, alpha: f64 },
    /// Square-sum budget exceeds what the per-term cap allows.
    InfeasibleMass { total: f64, cap: f64, terms: usize },
    /// A node or config file failed to parse.
    Parse { line: usize, reason: String },
    /// The basis failed its build-time verification.
    BasisVerification { detail: String },
    /// A quadrature did not reach the requested tolerance.
    QuadratureNonConvergence { requested: f64, achieved: f64 },
    /// A matrix entry was NaN or infinite.
    NonFiniteEntry { row: usize, col: usize },
    /// The sampling operator is numerically rank deficient.
    RankDeficient { sigma_min: f64, sigma_max: f64 },
    /// A slice had the wrong length.
    DimensionMismatch { expected: usize, got: usize },
    /// A node list was empty or otherwise unusable.
    EmptyNodes,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::BadParameter { name, value, expected } => {
                write!(f, "parameter `{name}` = {value} out of range (expected {expected})")
            }
            Error::CascadeDiverges => write!(f, "cascade diverges: α+β ≥ 1"),
            Error::SupercriticalSum { alpha, beta } => {
                write!(f, "requires α+β < 1, got α = {alpha}, β = {beta}")
            }
            Error::NoPositiveRoot { discriminant } => {
                write!(f, "no positive root (discriminant = {discriminant})")
            }
            Error::OrderNotAboveOne { value } => {
                write!(f, "decay order must be > 1 for a finite analytic order, got {value}")
            }
            Error::InfeasibleConstraint { k, n } => {
                write!(f, "empty admissible interval at level k = {k}, index n = {n}")
            }
            Error::ResolutionExhausted { j, alpha } => {
                write!(f, "node gaps on block j = {j} (alpha = {alpha}) fall below f64 resolution")
            }
            Error::InfeasibleMass { total, cap, terms } => {
                write!(f, "mass {total} cannot be split into {terms} terms capped at {cap}")
            }
            Error::Parse { line, reason } => write!(f, "parse error on line {line}: {reason}"),
            Error::BasisVerification { detail } => write!(f, "basis verification failed: {detail}"),
            Error::QuadratureNonConvergence { requested, achieved } => {
                write!(f, "quadrature reached {achieved:.3e}, requested {requested:.3e}")
            }
            Error::NonFiniteEntry { row, col } => {
                write!(f, "non-finite matrix entry at ({row}, {col})")
            }
            Error::RankDeficient { sigma_min, sigma_max } => {
                write!(f, "rank-deficient operator: sigma_min = {sigma_min:.3e}, sigma_max = {sigma_max:.3e}")
            }
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::EmptyNodes => write!(f, "node list is empty"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
