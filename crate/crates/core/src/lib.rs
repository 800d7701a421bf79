//! Tree pressure and related diagnostics for smooth interval maps with
//! log-singular potentials.

// `!(a < b)` is used on purpose to also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod exceptional;
pub mod config;
pub mod extended;
pub mod lse;
pub mod maps;
pub mod numeric;
pub mod potentials;
pub mod preimage;
pub mod pressure;
pub mod report;

pub use error::{Error, Result};
pub use extended::ExtendedReal;
pub use maps::{Interval, JuliaStructure, SmoothIntervalMap};
pub use potentials::{Potential, SingularPotential};
pub use preimage::FoldMode;
