//! Finite categorical models for descent along group actions.
//!
//! The crate builds small categories fibred over the truncated simplex
//! category, classifies set-valued functors that invert the cartesian
//! edges, matches them against equivariant descent data on the underlying
//! action groupoid, and computes classifying-space homology by two
//! independent routes (nerve of the total category, and the fibrewise
//! double complex). Everything is exact integer arithmetic; nothing here
//! uses floating point.

pub mod exodromy;
pub mod fincat;
pub mod finset;
pub mod profin;
pub mod shape;
pub mod setfun;
pub mod simplex;
pub mod snf;
pub mod total;
