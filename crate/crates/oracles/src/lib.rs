//! Reference computations used only by tests.
//!
//! Nothing here depends on the `rtfilter` crate. Distribution functions come
//! from direct numerical integration or from `statrs`, and the filter oracle is
//! a dense grid evaluation of Bayes' rule.

pub mod grid;
pub mod quad;

pub use grid::{DiscountGrid, GridMoments};
