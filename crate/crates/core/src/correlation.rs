//! Near-pair counting and the pair-correlation statistics.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::kernels::{triangle_kernel_radial, KernelParams};
use crate::numeric::{compensated_sum, CompensatedSum};
use crate::torus::distance_unchecked;
use crate::{Error, NormKind, PointSet, Result};

/// How [`pair_count`] finds candidate pairs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    /// All `N(N-1)` ordered pairs.
    Brute,
    /// Cell list with neighbor-cell lookup.
    #[default]
    Cells,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Brute => "brute",
            Algorithm::Cells => "cells",
        })
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute" => Ok(Algorithm::Brute),
            "cells" => Ok(Algorithm::Cells),
            other => Err(Error::input(format!(
                "unknown algorithm {other:?} (expected brute or cells)"
            ))),
        }
    }
}

/// One evaluation of the (weak) pair-correlation statistic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairCorrResult {
    pub s: f64,
    /// Scaling exponent; 1 is the standard statistic.
    pub alpha: f64,
    pub norm: NormKind,
    pub n: usize,
    /// Distance threshold `s / N^{alpha/d}`.
    pub radius: f64,
    /// Ordered pairs `m != n` within `radius`.
    pub count: u64,
    /// `count / N^{2 - alpha}`.
    pub normalized: f64,
    /// Limit for i.i.d. uniform points: `omega_d s^d` or `(2s)^d`.
    pub target: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelStatResult {
    pub delta: f64,
    /// `(1/N^2) sum_{m != n} f_delta(x_m - x_n)`.
    pub value: f64,
}

/// Cell list over the torus: `m` congruent cells per axis, each at least as
/// wide as the search radius, so every neighbor of a point lies in the
/// `3^d` cells around its own.
struct CellGrid {
    per_axis: u64,
    dim: usize,
    /// Cell coordinates of every point.
    point_cells: Vec<u64>,
    /// Point indices sorted by linear cell key.
    sorted: Vec<usize>,
    /// Occupied cells: (key, start, end) into `sorted`, ordered by key.
    occupied: Vec<(u64, usize, usize)>,
}

impl CellGrid {
    /// `None` when fewer than three cells fit per axis; the caller then
    /// falls back to brute force.
    fn build(ps: &PointSet, radius: f64) -> Option<Self> {
        let dim = ps.dim();
        // Shave the width slightly so rounding in floor(x * m) can never
        // separate two points within `radius` by more than one cell.
        let mut per_axis = ((1.0 - 1e-9) / radius).floor();
        let max_per_axis = 2f64.powf(62.0 / dim as f64).floor();
        per_axis = per_axis.min(max_per_axis);
        if !(per_axis >= 3.0) {
            return None;
        }
        let per_axis = per_axis as u64;
        let m = per_axis as f64;

        let point_cells: Vec<u64> = ps
            .as_flat()
            .iter()
            .map(|&x| ((x * m).floor() as u64).min(per_axis - 1))
            .collect();
        let key_of = |cells: &[u64]| cells.iter().fold(0u64, |k, &c| k * per_axis + c);
        let keys: Vec<u64> = point_cells.chunks_exact(dim).map(key_of).collect();

        let mut sorted: Vec<usize> = (0..ps.len()).collect();
        sorted.sort_by_key(|&i| (keys[i], i));

        let mut occupied = Vec::new();
        let mut start = 0;
        while start < sorted.len() {
            let key = keys[sorted[start]];
            let mut end = start + 1;
            while end < sorted.len() && keys[sorted[end]] == key {
                end += 1;
            }
            occupied.push((key, start, end));
            start = end;
        }

        Some(CellGrid {
            per_axis,
            dim,
            point_cells,
            sorted,
            occupied,
        })
    }

    fn cell_members(&self, key: u64) -> &[usize] {
        match self.occupied.binary_search_by_key(&key, |&(k, _, _)| k) {
            Ok(pos) => {
                let (_, start, end) = self.occupied[pos];
                &self.sorted[start..end]
            }
            Err(_) => &[],
        }
    }

    /// Calls `visit(j)` for every point `j` in the cells adjacent to point
    /// `i`'s cell (including its own, and `i` itself).
    fn for_each_candidate(&self, i: usize, mut visit: impl FnMut(usize)) {
        let home = &self.point_cells[i * self.dim..(i + 1) * self.dim];
        let m = self.per_axis;
        let neighbors = 3usize.pow(self.dim as u32);
        for code in 0..neighbors {
            let mut rest = code;
            let mut key = 0u64;
            for &c in home {
                let offset = (rest % 3) as u64;
                rest /= 3;
                // offset 0, 1, 2 stands for -1, 0, +1 (mod m).
                let shifted = (c + m + offset - 1) % m;
                key = key * m + shifted;
            }
            for &j in self.cell_members(key) {
                visit(j);
            }
        }
    }
}

fn check_radius(radius: f64) -> Result<()> {
    if radius > 0.0 && radius.is_finite() {
        Ok(())
    } else {
        Err(Error::input(format!(
            "radius must be positive and finite, got {radius}"
        )))
    }
}

/// Number of ordered pairs `(m, n)`, `m != n`, with torus distance at most
/// `radius`. Both algorithms return the same count.
pub fn pair_count(ps: &PointSet, radius: f64, norm: NormKind, algorithm: Algorithm) -> Result<u64> {
    check_radius(radius)?;
    let n = ps.len();
    let grid = match algorithm {
        Algorithm::Cells => CellGrid::build(ps, radius),
        Algorithm::Brute => None,
    };
    let count = match grid {
        Some(grid) => (0..n)
            .into_par_iter()
            .map(|i| {
                let p = ps.point(i);
                let mut c = 0u64;
                grid.for_each_candidate(i, |j| {
                    if j != i && distance_unchecked(p, ps.point(j), norm) <= radius {
                        c += 1;
                    }
                });
                c
            })
            .sum(),
        None => (0..n)
            .into_par_iter()
            .map(|i| {
                let p = ps.point(i);
                (0..n)
                    .filter(|&j| j != i && distance_unchecked(p, ps.point(j), norm) <= radius)
                    .count() as u64
            })
            .sum(),
    };
    Ok(count)
}

fn pair_corr_at(
    ps: &PointSet,
    s: f64,
    alpha: f64,
    norm: NormKind,
    algorithm: Algorithm,
) -> Result<PairCorrResult> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::input(format!(
            "s must be positive and finite, got {s}"
        )));
    }
    let n = ps.len();
    let d = ps.dim();
    let nf = n as f64;
    let radius = s * nf.powf(-alpha / d as f64);
    let count = pair_count(ps, radius, norm, algorithm)?;
    Ok(PairCorrResult {
        s,
        alpha,
        norm,
        n,
        radius,
        count,
        normalized: count as f64 / nf.powf(2.0 - alpha),
        target: norm.unit_ball_volume(d) * s.powi(d as i32),
    })
}

/// `(1/N) #{m != n : |x_m - x_n| <= s / N^{1/d}}` against its Poisson
/// limit.
pub fn ppc_statistic(ps: &PointSet, s: f64, norm: NormKind) -> Result<PairCorrResult> {
    ppc_statistic_with(ps, s, norm, Algorithm::Cells)
}

pub fn ppc_statistic_with(
    ps: &PointSet,
    s: f64,
    norm: NormKind,
    algorithm: Algorithm,
) -> Result<PairCorrResult> {
    pair_corr_at(ps, s, 1.0, norm, algorithm)
}

/// Weak pair correlation in one dimension: threshold `s / N^alpha`,
/// normalization `N^{2 - alpha}`.
pub fn weak_ppc_statistic(ps: &PointSet, s: f64, alpha: f64) -> Result<PairCorrResult> {
    weak_ppc_statistic_with(ps, s, alpha, Algorithm::Cells)
}

pub fn weak_ppc_statistic_with(
    ps: &PointSet,
    s: f64,
    alpha: f64,
    algorithm: Algorithm,
) -> Result<PairCorrResult> {
    if ps.dim() != 1 {
        return Err(Error::input(format!(
            "weak pair correlation is defined in one dimension only (got d = {})",
            ps.dim()
        )));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::input(format!(
            "alpha must lie in (0, 1], got {alpha}"
        )));
    }
    pair_corr_at(ps, s, alpha, NormKind::Euclidean, algorithm)
}

/// `(1/N^2) sum_{m != n} f_delta(x_m - x_n)` with the self-convolved box
/// kernel `f_delta`, whose support is the ball of radius `2 delta`.
pub fn smoothed_pair_statistic(ps: &PointSet, delta: f64) -> Result<KernelStatResult> {
    let kp = KernelParams::new(ps.dim(), delta)?;
    let n = ps.len();
    let support = 2.0 * delta;
    let grid = CellGrid::build(ps, support);

    let row = |i: usize| -> f64 {
        let p = ps.point(i);
        let mut acc = CompensatedSum::new();
        let mut visit = |j: usize| {
            if j != i {
                let r = distance_unchecked(p, ps.point(j), NormKind::Euclidean);
                if r < support {
                    acc.add(triangle_kernel_radial(&kp, r));
                }
            }
        };
        match &grid {
            Some(grid) => grid.for_each_candidate(i, visit),
            None => (0..n).for_each(&mut visit),
        }
        acc.value()
    };
    // Rows in parallel, reduced serially in index order.
    let rows: Vec<f64> = (0..n).into_par_iter().map(row).collect();
    let total = compensated_sum(rows);
    let nf = n as f64;
    Ok(KernelStatResult {
        delta,
        value: total / (nf * nf),
    })
}

/// Largest rescaled gap `max_n (s_{n+1} - s_n) / s_{M+1}` of an increasing
/// scale grid, with `s_0 = 0` prepended.
pub fn s_grid_gap_ratio(svals: &[f64]) -> Result<f64> {
    if svals.len() < 2 {
        return Err(Error::input("need at least two scale values"));
    }
    if !svals.iter().all(|s| s.is_finite()) || svals[0] <= 0.0 {
        return Err(Error::input("scale values must be positive and finite"));
    }
    if svals.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::input("scale values must be strictly increasing"));
    }
    let last = svals[svals.len() - 1];
    let first_gap = svals[0];
    let max_gap = svals
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(first_gap, f64::max);
    Ok(max_gap / last)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, GeneratorSpec};

    fn grid(dim: usize, count: usize) -> PointSet {
        generate(&GeneratorSpec::Grid { dim, count }).unwrap()
    }

    #[test]
    fn pair_count_examples() {
        for algo in [Algorithm::Brute, Algorithm::Cells] {
            assert_eq!(
                pair_count(&grid(1, 10), 0.15, NormKind::Euclidean, algo).unwrap(),
                20
            );
            assert_eq!(
                pair_count(&grid(2, 4), 0.6, NormKind::Euclidean, algo).unwrap(),
                8
            );
            let single = PointSet::from_flat(1, vec![0.3], "").unwrap();
            assert_eq!(pair_count(&single, 0.4, NormKind::Sup, algo).unwrap(), 0);
        }
    }

    #[test]
    fn threshold_is_closed() {
        // Points exactly 0.25 apart on a 4-grid; the cell list also engages
        // here (m = 3 at radius 0.25).
        for algo in [Algorithm::Brute, Algorithm::Cells] {
            assert_eq!(
                pair_count(&grid(1, 4), 0.25, NormKind::Euclidean, algo).unwrap(),
                8
            );
        }
    }

    #[test]
    fn nonpositive_radius_is_rejected() {
        assert!(pair_count(&grid(1, 4), 0.0, NormKind::Sup, Algorithm::Brute).is_err());
        assert!(pair_count(&grid(1, 4), -1.0, NormKind::Sup, Algorithm::Cells).is_err());
        assert!(pair_count(&grid(1, 4), f64::NAN, NormKind::Sup, Algorithm::Cells).is_err());
    }

    #[test]
    fn ppc_on_grid() {
        let r = ppc_statistic(&grid(1, 10), 1.5, NormKind::Euclidean).unwrap();
        assert_eq!(r.count, 20);
        assert_eq!(r.normalized, 2.0);
        assert_eq!(r.target, 3.0);
        let r = ppc_statistic(&grid(2, 4), 1.0, NormKind::Sup).unwrap();
        assert_eq!(r.target, 4.0);
    }

    #[test]
    fn weak_statistic_edge_cases() {
        let single = PointSet::from_flat(1, vec![0.3], "").unwrap();
        assert_eq!(
            weak_ppc_statistic(&single, 1.0, 0.5).unwrap().normalized,
            0.0
        );
        assert!(weak_ppc_statistic(&grid(2, 4), 1.0, 0.5).is_err());
        assert!(weak_ppc_statistic(&grid(1, 4), 1.0, 0.0).is_err());
        assert!(weak_ppc_statistic(&grid(1, 4), 1.0, 1.5).is_err());
    }

    #[test]
    fn smoothed_statistic_identical_points() {
        let n = 7;
        let delta = 0.1;
        let ps = PointSet::from_flat(1, vec![0.4; n], "").unwrap();
        let v = smoothed_pair_statistic(&ps, delta).unwrap().value;
        let expected = (n as f64 - 1.0) / (n as f64 * 2.0 * delta);
        assert!((v - expected).abs() < 1e-13, "{v} vs {expected}");

        let single = PointSet::from_flat(1, vec![0.4], "").unwrap();
        assert_eq!(smoothed_pair_statistic(&single, delta).unwrap().value, 0.0);
        assert!(smoothed_pair_statistic(&single, 0.25).is_err());
        assert!(smoothed_pair_statistic(&single, 0.0).is_err());
    }

    #[test]
    fn gap_ratio_examples() {
        let h = 0.3;
        let m = 9;
        let uniform: Vec<f64> = (1..=m + 1).map(|n| n as f64 * h).collect();
        assert!((s_grid_gap_ratio(&uniform).unwrap() - 1.0 / (m + 1) as f64).abs() < 1e-15);
        for m in 1..20 {
            let dyadic: Vec<f64> = (1..=m + 1).map(|n| 2f64.powi(n)).collect();
            assert_eq!(s_grid_gap_ratio(&dyadic).unwrap(), 0.5);
        }
        assert_eq!(s_grid_gap_ratio(&[1.0, 2.0]).unwrap(), 0.5);
        assert!(s_grid_gap_ratio(&[1.0, 1.0]).is_err());
        assert!(s_grid_gap_ratio(&[2.0, 1.0]).is_err());
        assert!(s_grid_gap_ratio(&[1.0]).is_err());
    }
}
