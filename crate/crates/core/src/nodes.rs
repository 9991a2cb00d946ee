//! Node families: where the sampled zeros live.
//!
//! A node family is a strictly increasing sequence `a_0 < a_1 < …` of
//! sampling positions. Two closed-form families cover the standard setups —
//! `n^alpha` and `log(n+1)` — and a `Custom` family carries user-supplied
//! positions loaded from a file.

use crate::error::{Error, Result};
use crate::exponents::Limit;

/// A family of node positions, indexed by `n = 0, 1, 2, …`.
#[derive(Debug, Clone, PartialEq)]
pub enum NodeFamily {
    /// `a_n = n^alpha` for an exponent in (0, 1).
    Power { alpha: f64 },
    /// `a_n = log(n + 1)`.
    Log,
    /// Explicit positions; validated strictly increasing and positive.
    Custom { values: Vec<f64> },
}

impl NodeFamily {
    /// Power family with a validated exponent.
    pub fn power(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 0.0 && alpha < 1.0 {
            Ok(NodeFamily::Power { alpha })
        } else {
            Err(Error::BadParameter { name: "alpha", value: alpha, expected: "open interval (0, 1)" })
        }
    }

    /// Custom family from explicit values; rejects empty lists, non-finite
    /// or non-positive entries, and any non-increasing step.
    pub fn custom(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyNodes);
        }
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::BadParameter {
                    name: "node",
                    value: v,
                    expected: "finite positive real",
                });
            }
            if i > 0 && v <= values[i - 1] {
                return Err(Error::Parse {
                    line: i + 1,
                    reason: format!("nodes must be strictly increasing, {} after {}", v, values[i - 1]),
                });
            }
        }
        Ok(NodeFamily::Custom { values })
    }

    /// The n-th node. Closed-form families accept any index; custom families
    /// error past the end of their list.
    pub fn value(&self, n: u64) -> Result<f64> {
        match self {
            NodeFamily::Power { alpha } => Ok((n as f64).powf(*alpha)),
            NodeFamily::Log => Ok(((n + 1) as f64).ln()),
            NodeFamily::Custom { values } => values
                .get(n as usize)
                .copied()
                .ok_or(Error::DimensionMismatch { expected: values.len(), got: n as usize }),
        }
    }

    /// The first `count` nodes.
    pub fn values(&self, count: usize) -> Result<Vec<f64>> {
        (0..count as u64).map(|n| self.value(n)).collect()
    }

    /// Gap-decay exponent η: consecutive gaps shrink like `a_n^(-η)`.
    ///
    /// Closed form `(1-alpha)/alpha` for the power family; the log family's
    /// gaps decay like `e^{-a_n}`, faster than any power, reported as
    /// `Infinite`. For custom families the exponent is fitted by least
    /// squares on `ln(gap)` vs `ln(node)`; `None` when fewer than three
    /// nodes make a fit meaningless.
    pub fn gap_exponent(&self) -> Option<Limit> {
        match self {
            NodeFamily::Power { alpha } => Some(Limit::Finite((1.0 - alpha) / alpha)),
            NodeFamily::Log => Some(Limit::Infinite),
            NodeFamily::Custom { values } => {
                if values.len() < 3 {
                    return None;
                }
                // Slope of ln(gap_n) against ln(a_{n+1}); η is its negation.
                let (mut sx, mut sy, mut sxx, mut sxy, mut m) = (0.0, 0.0, 0.0, 0.0, 0.0);
                for w in values.windows(2) {
                    let x = w[1].ln();
                    let y = (w[1] - w[0]).ln();
                    sx += x;
                    sy += y;
                    sxx += x * x;
                    sxy += x * y;
                    m += 1.0;
                }
                let denom = m * sxx - sx * sx;
                if denom.abs() < 1e-30 {
                    return None;
                }
                let slope = (m * sxy - sx * sy) / denom;
                Some(Limit::Finite(-slope))
            }
        }
    }

    /// Number of nodes available: `None` for unbounded closed-form families.
    pub fn len(&self) -> Option<usize> {
        match self {
            NodeFamily::Custom { values } => Some(values.len()),
            _ => None,
        }
    }
}
