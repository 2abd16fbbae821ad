//! Pair-correlation diagnostics for point sequences on the unit torus.
//!
//! The crate counts near pairs at the scale `s / N^{1/d}`, evaluates the
//! Weyl sums `S_N(l) = sum_k e(<l, x_k>)` over lattice balls, and certifies
//! the exponential-sum bounds that Poissonian pair correlation forces. The
//! convolution kernels behind those bounds (the normalized box indicator `g`
//! and its self-convolution `f = g * g`) are exposed together with a Parseval
//! cross-check that ties the pair sum to the spectrum.
//!
//! Module map:
//!
//! - [`torus`]: points, point sets, wraparound distances.
//! - [`generators`]: seeded sequence families (random, Kronecker, ...).
//! - [`correlation`]: pair counting and the (weak) pair-correlation statistics.
//! - [`spectrum`]: Weyl sums, lattice balls, bound certificates.
//! - [`kernels`]: box/triangle kernels, Fourier coefficients, Parseval check.
//! - [`discrepancy`]: star discrepancy, exact in one dimension.
//! - [`points_file`]: the CSV points-file format.

// `!(x > 0.0)` style checks are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bessel;
pub mod correlation;
pub mod discrepancy;
mod error;
pub mod generators;
pub mod kernels;
pub mod numeric;
pub mod points_file;
pub mod spectrum;
pub mod torus;

pub use error::{Error, Result};
pub use torus::{
    torus_distance, unit_ball_volume, validate_point_set, NormKind, PointSet, TorusPoint,
};
