//! Numerical evidence for natural boundaries of bounded power series: right
//! limits of the coefficient sequence, non-reflectionless certificates,
//! block recurrence analysis, boundary probes and seeded random series.

mod error;
mod numeric;

pub mod analytic;
pub mod random;
pub mod rightlimit;
pub mod sequence;

pub use error::{Error, Result};
