//! Exact decision procedures for multi-split continuity on finite
//! topological spaces.

pub mod error;
pub mod gallery;
pub mod io;
pub mod multifunction;
pub mod multisplit;
pub mod pointset;
pub mod splithomeo;
pub mod suite;
pub mod topology;

pub use error::{Error, Result};
pub use multifunction::{MultiMap, PointMap};
pub use pointset::PointSet;
pub use topology::FinSpace;

/// Exact rationals over machine integers.
pub type Rational = num_rational::Ratio<i64>;
pub type Rational128 = num_rational::Ratio<i128>;
pub use num_rational::BigRational;
