//! Exact-arithmetic laboratory for generalized Zeckendorf decompositions
//! over positive linear recurrence sequences (PLRS): greedy decomposition
//! with oracle verification, exact summand-count distributions and their
//! Gaussian-convergence diagnostics, characteristic-root analysis, and
//! far-difference (signed Fibonacci) representations with bivariate
//! statistics.
//!
//! All counts and raw moments are arbitrary-precision and exact; floating
//! point appears only in standardized views, root finding, and distance
//! metrics. Everything here is a pure function of its inputs and safe for
//! concurrent use.

pub mod distribution;
pub mod error;
pub mod far_difference;
pub mod num_util;
pub mod plrs;
pub mod spectral;
pub mod zeckendorf;

pub use error::{Error, Result};
pub use plrs::{PlrsSequence, PlrsSpec};
