//! Exact verification kernel for WP-Bailey pairs, chains and basic
//! hypergeometric identities.

pub mod chains;
pub mod error;
pub mod expr;
pub mod hyper;
pub mod identities;
pub mod interval;
pub mod monomial;
pub mod pair_check;
pub mod pairs;
pub mod poch;
pub mod point;
pub mod scalar;
pub mod series;

pub use error::{Error, Result};
pub use scalar::ExactScalar;
