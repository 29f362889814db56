//! Radial and river ℝ-tree metrics, their C-set characterizations, tree-metric
//! certification, and Brownian motion indexed by these trees.

pub mod cd_sets;
#[cfg(feature = "cli")]
pub mod cli;
pub mod config;
pub mod error;
pub mod gaussian_field;
pub mod geometry;
pub mod io;
pub mod metrics;
pub mod rng;
pub mod simulation;
pub mod tree_checks;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{Point, Tolerance};
pub use metrics::{distance, Family, MetricKind, TreeShape};
