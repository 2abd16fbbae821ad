//! Helpers shared by the integration tests.

#![allow(dead_code)]

use ppc_core::generators::{generate, GeneratorSpec};
use ppc_core::PointSet;

pub fn random_points(dim: usize, count: usize, seed: u64) -> PointSet {
    generate(&GeneratorSpec::Random { dim, count, seed }).expect("valid random spec")
}
