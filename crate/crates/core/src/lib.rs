//! Numerical laboratory for Fourier uniqueness-pair experiments.
//!
//! Suppose a well-behaved function vanishes on `±n^alpha` and its transform
//! vanishes on `±n^beta`. For which exponent pairs does that force the
//! function to vanish identically? This crate implements the quantitative
//! machinery behind that question so it can be stress-tested numerically:
//!
//! - [`exponents`]: the derived-constant algebra, admissible-region
//!   membership, the two-term growth recursion and its fixed points.
//! - [`decay`]: moment-to-decay certificates (polynomial, exponential and
//!   stretched-exponential envelopes), the closed-form stretched-Gaussian
//!   moment, and the two-sided self-improving moment cascade.
//! - [`sharpness`]: adversarial derivative-zero sequences saturating the
//!   node-gap bound, and the capped sum-of-squares extremal behind block
//!   averages.
//! - [`hermite`] / [`sampling`]: a verified transform-eigenfunction basis
//!   and finite sampling operators whose smallest singular values probe
//!   uniqueness empirically.
//! - [`nodes`], [`quad`], [`special`], [`textio`], [`error`]: node families,
//!   quadrature, log-domain special functions, small text formats, and the
//!   crate-wide error type.
//!
//! Everything factorial-sized is carried in the log domain; every numerical
//! claim is either exact linear algebra, a frozen high-precision reference,
//! or explicitly labeled an empirical proxy.

#![forbid(unsafe_code)]

pub mod decay;
pub mod error;
pub mod exponents;
pub mod hermite;
pub mod nodes;
pub mod quad;
pub mod sampling;
pub mod sharpness;
pub mod special;
pub mod textio;

pub use error::{Error, Result};
pub use exponents::{
    derive_constants, diagonal_threshold, region_a_membership, DerivedConstants, ExponentPair,
    Limit, RegionReport, Side,
};
pub use hermite::{hermite_h, verify_basis, BasisSpec, Parity};
pub use nodes::NodeFamily;
pub use sampling::{build_operator, reconstruct, sigma_min_max, sweep, SamplingOperator};
