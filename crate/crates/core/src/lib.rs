//! Approximate convex hulls of high-dimensional point sets and geometric
//! audits of neural-network activation spaces.
//!
//! - [`geometry`]: the simplex-constrained distance problem and exact primitives
//! - [`hull`]: greedy ε-approximate hull builders
//! - [`nn`]: a small fully connected classifier and activation extraction
//! - [`analysis`]: extremity/inclusion audits and distance statistics
//! - [`classify`]: nearest-convex-hull classification and baselines
//! - [`data`]: datasets, file formats and report emission

pub mod analysis;
pub mod classify;
pub mod data;
pub mod error;
pub mod geometry;
pub mod hull;
pub mod nn;
pub mod rng;

pub use error::{Error, Result};
