//! Gauge-measured space-filling constructions.
//!
//! The crate builds continuous surjections from thin subsets of the unit
//! interval onto doubling length spaces, prices covers of those subsets
//! against Hausdorff gauge functions, and demonstrates the reverse
//! phenomenon: curves whose parameter preimages of thin targets collapse.
//!
//! Modules:
//! - [`gauge`]: gauge functions, premeasures, finite-order and ordering checks
//! - [`space`]: ambient spaces, net hierarchies, connector paths
//! - [`cover`]: grid covers, premeasure profiles, box-counting dimension
//! - [`fill`]: ball systems and the limit filling map with its certificates
//! - [`blowup`]: Hilbert-curve exponents, exact preimage bookkeeping, blow-up reports

// Validation deliberately writes `!(x > 0.0)`: unlike `x <= 0.0` it also
// rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod blowup;
pub mod cover;
pub mod error;
pub mod fill;
pub mod gauge;
pub mod space;

pub use error::{Error, Result};
