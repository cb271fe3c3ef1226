//! Two identical one-dimensional anyons with a zero-range interaction, in free
//! space and in a harmonic trap.

pub mod error;
pub mod freespace;
pub mod harmonic;
pub mod momentum_numeric;
pub mod numerics;
pub mod pair;
pub mod properties;
pub mod statistics;
pub mod zerorange;

pub use error::{Error, Result};
