//! Colored uniformly discrete point sets and their weighted correlations.
//!
//! The crate generates finite window realizations of aperiodic (and periodic)
//! point sets on the line, estimates weighted autocorrelations, higher-order
//! correlations and pattern frequencies, and computes diffraction intensities
//! both from exponential sums and from closed forms.
//!
//! All estimators average over a finite window and use compensated summation
//! in a fixed point order, so identical inputs give bit-identical outputs.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod analysis;
pub mod config;
pub mod correlations;
pub mod diffraction;
pub mod error;
pub mod generators;
pub mod io;
pub mod pointset;
pub mod reproduce;
pub mod sum;

pub use error::{Error, Result};
pub use pointset::{
    count, empirical_intensity, flatten, restrict_color, validate_uniform_discreteness, Color,
    ColoredPoint, ColoredPointSet, IntensityReport, WeightSystem, Window,
};

/// Tolerance used when matching positions and displacements.
pub const MATCH_TOLERANCE: f64 = 1e-9;
