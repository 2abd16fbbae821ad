//! Points on the unit torus `[0,1)^d` and the wraparound metric.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Which norm measures the wraparound displacement between two points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NormKind {
    /// The l2 norm.
    #[serde(rename = "l2")]
    Euclidean,
    /// The l-infinity norm.
    #[serde(rename = "linf")]
    Sup,
}

impl NormKind {
    /// Largest possible torus distance in dimension `dim`.
    pub fn max_distance(self, dim: usize) -> f64 {
        match self {
            NormKind::Euclidean => (dim as f64).sqrt() / 2.0,
            NormKind::Sup => 0.5,
        }
    }

    /// Volume of the unit ball of this norm in dimension `dim`.
    pub fn unit_ball_volume(self, dim: usize) -> f64 {
        match self {
            NormKind::Euclidean => unit_ball_volume(dim),
            NormKind::Sup => 2f64.powi(dim as i32),
        }
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormKind::Euclidean => "l2",
            NormKind::Sup => "linf",
        })
    }
}

impl FromStr for NormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "l2" | "euclidean" => Ok(NormKind::Euclidean),
            "linf" | "sup" => Ok(NormKind::Sup),
            other => Err(Error::input(format!(
                "unknown norm {other:?} (expected l2 or linf)"
            ))),
        }
    }
}

/// Volume `omega_d` of the Euclidean unit ball in `R^d`.
///
/// Uses `omega_d = omega_{d-2} * 2 pi / d` from `omega_0 = 1`, `omega_1 = 2`.
pub fn unit_ball_volume(dim: usize) -> f64 {
    let mut omega = if dim.is_multiple_of(2) { 1.0 } else { 2.0 };
    let mut k = if dim.is_multiple_of(2) { 2 } else { 3 };
    while k <= dim {
        omega *= 2.0 * std::f64::consts::PI / k as f64;
        k += 2;
    }
    omega
}

/// A single point of the torus with every coordinate in `[0, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusPoint(Vec<f64>);

impl TorusPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::input("a torus point needs at least one coordinate"));
        }
        let coords = coords
            .into_iter()
            .map(reduce_coordinate)
            .collect::<Result<Vec<_>>>()?;
        Ok(TorusPoint(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }
}

impl AsRef<[f64]> for TorusPoint {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

fn reduce_coordinate(c: f64) -> Result<f64> {
    if c == 1.0 {
        Ok(0.0)
    } else if (0.0..1.0).contains(&c) {
        // Normalizes -0.0 as well.
        Ok(c + 0.0)
    } else {
        Err(Error::input(format!("coordinate {c} outside [0, 1)")))
    }
}

/// Ordered, immutable sequence of `N >= 1` torus points of a common
/// dimension. Coordinates are stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
    label: String,
}

impl PointSet {
    /// Builds a point set from flat row-major coordinates, applying the same
    /// checks as [`validate_point_set`].
    pub fn from_flat(dim: usize, coords: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::input("dimension must be at least 1"));
        }
        if coords.is_empty() {
            return Err(Error::input("point set is empty"));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::input(format!(
                "{} coordinates do not split into points of dimension {dim}",
                coords.len()
            )));
        }
        let coords = coords
            .into_iter()
            .map(reduce_coordinate)
            .collect::<Result<Vec<_>>>()?;
        Ok(PointSet {
            dim,
            coords,
            label: label.into(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of points `N`.
    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn point(&self, index: usize) -> &[f64] {
        &self.coords[index * self.dim..(index + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.coords
    }
}

/// Builds a [`PointSet`] from coordinate rows.
///
/// All rows must have the same positive length and every coordinate must lie
/// in `[0, 1)`; an exact `1.0` is identified with `0.0`.
pub fn validate_point_set<R: AsRef<[f64]>>(rows: &[R]) -> Result<PointSet> {
    let first = rows
        .first()
        .ok_or_else(|| Error::input("point set is empty"))?;
    let dim = first.as_ref().len();
    if dim == 0 {
        return Err(Error::input("points must have at least one coordinate"));
    }
    let mut coords = Vec::with_capacity(rows.len() * dim);
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_ref();
        if row.len() != dim {
            return Err(Error::input(format!(
                "ragged input: row {i} has {} coordinates, expected {dim}",
                row.len()
            )));
        }
        coords.extend_from_slice(row);
    }
    PointSet::from_flat(dim, coords, "")
}

#[inline]
pub(crate) fn axis_displacement(a: f64, b: f64) -> f64 {
    let diff = (a - b).abs();
    diff.min(1.0 - diff)
}

/// Wraparound distance without the dimension check.
#[inline]
pub(crate) fn distance_unchecked(p: &[f64], q: &[f64], norm: NormKind) -> f64 {
    match norm {
        NormKind::Euclidean => p
            .iter()
            .zip(q)
            .map(|(&a, &b)| {
                let t = axis_displacement(a, b);
                t * t
            })
            .sum::<f64>()
            .sqrt(),
        NormKind::Sup => p
            .iter()
            .zip(q)
            .map(|(&a, &b)| axis_displacement(a, b))
            .fold(0.0, f64::max),
    }
}

/// Torus distance between two points: the chosen norm of the per-axis
/// displacement `min(|p_i - q_i|, 1 - |p_i - q_i|)`.
pub fn torus_distance(p: &[f64], q: &[f64], norm: NormKind) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::input(format!(
            "dimension mismatch: {} vs {}",
            p.len(),
            q.len()
        )));
    }
    Ok(distance_unchecked(p, q, norm))
}
