//! Euclidean distance degrees of Fermat hypersurfaces.
//!
//! The exact route counts vanishing sums of roots of unity in the ring of
//! cyclotomic integers and assembles the projective, affine and scaled
//! ED-degree formulas from them. The numerical route solves the critical
//! equations by total-degree homotopy continuation and counts the finite
//! nonzero endpoints, which gives an independent check of the exact values.

pub mod cli;
pub mod cyclotomic;
pub mod ed_formulas;
pub mod error;
pub mod expcyclo;
pub mod homotopy;
pub mod real_experiments;
pub mod serde_bigint;
pub mod serde_float;
pub mod vanishing_sums;

pub use error::{Error, Result};

/// Default number of tuples `delta` and `delta_scaled` may enumerate.
pub const DEFAULT_WORK_CAP: u64 = 100_000_000;
