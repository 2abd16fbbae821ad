//! Star discrepancy: exact in one dimension, bracketed on a grid otherwise.
//!
//! Anchored boxes are half-open, `[0, t_1) x ... x [0, t_d)`, and a point
//! counts when every coordinate is strictly below the corner.

use serde::{Deserialize, Serialize};

use crate::{Error, PointSet, Result};

/// Largest `(m + 1)^d` corner table the grid bracket will allocate.
const MAX_CORNERS: usize = 1 << 27;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyResult {
    pub n: usize,
    pub lower: f64,
    pub upper: f64,
    /// True when `lower == upper` by construction.
    pub exact: bool,
    /// Grid points per axis for the bracketed computation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<usize>,
}

/// `D*_N = 1/(2N) + max_k |x_(k) - (2k - 1)/(2N)|` over the order
/// statistics.
pub fn star_discrepancy_1d(ps: &PointSet) -> Result<DiscrepancyResult> {
    if ps.dim() != 1 {
        return Err(Error::input(format!(
            "exact star discrepancy needs d = 1, got d = {}",
            ps.dim()
        )));
    }
    let mut xs = ps.as_flat().to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let worst = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| (x - (2.0 * i as f64 + 1.0) / (2.0 * n)).abs())
        .fold(0.0, f64::max);
    let d = 1.0 / (2.0 * n) + worst;
    Ok(DiscrepancyResult {
        n: xs.len(),
        lower: d,
        upper: d,
        exact: true,
        resolution: None,
    })
}

/// Grid bracket for the star discrepancy.
///
/// `lower` is the largest local discrepancy over anchored boxes with corners
/// on the grid `{0, 1/m, ..., 1}^d`. `upper` bounds every box whose corner
/// `t` lies in a grid cell `[a, b]` by
/// `max(count[0,b)/N - vol(a), vol(b) - count[0,a)/N)`; it never exceeds
/// `lower + d/m` and never increases when the grid is refined to a multiple
/// of `m`.
pub fn star_discrepancy_box(ps: &PointSet, resolution: usize) -> Result<DiscrepancyResult> {
    let m = resolution;
    if m < 2 {
        return Err(Error::input(format!(
            "resolution must be at least 2, got {m}"
        )));
    }
    let dim = ps.dim();
    let side = m + 1;
    let corners = side
        .checked_pow(dim as u32)
        .filter(|&c| c <= MAX_CORNERS)
        .ok_or_else(|| Error::input(format!("grid {m}^{dim} is too large")))?;
    let grid: Vec<f64> = (0..=m).map(|k| k as f64 / m as f64).collect();

    // counts[k] = #{points with x_j < k_j / m for all j}; start from the
    // histogram of each point's smallest admissible corner, then prefix-sum
    // along every axis.
    let mut counts = vec![0u64; corners];
    for p in ps.points() {
        let mut flat = 0;
        for &x in p {
            flat = flat * side + first_corner_above(x, &grid);
        }
        counts[flat] += 1;
    }
    let mut stride = 1;
    for _ in 0..dim {
        for idx in 0..corners {
            if (idx / stride) % side != 0 {
                counts[idx] += counts[idx - stride];
            }
        }
        stride *= side;
    }

    let n = ps.len() as f64;
    let mut digits = vec![0usize; dim];
    let volume = |digits: &[usize]| digits.iter().map(|&k| grid[k]).product::<f64>();
    let flat_of = |digits: &[usize]| digits.iter().fold(0, |f, &k| f * side + k);

    let mut lower: f64 = 0.0;
    let mut upper: f64 = 0.0;
    let mut lo_corner = vec![0usize; dim];
    let mut hi_corner = vec![0usize; dim];
    for idx in 0..corners {
        let mut rest = idx;
        for slot in digits.iter_mut().rev() {
            *slot = rest % side;
            rest /= side;
        }
        let vol = volume(&digits);
        let frac = counts[idx] as f64 / n;
        lower = lower.max((frac - vol).abs());

        if digits.iter().all(|&k| k < m) {
            for j in 0..dim {
                lo_corner[j] = digits[j];
                hi_corner[j] = digits[j] + 1;
            }
            let count_hi = counts[flat_of(&hi_corner)] as f64 / n;
            let vol_hi = volume(&hi_corner);
            upper = upper.max(count_hi - vol).max(vol_hi - frac);
        }
    }
    let upper = upper.min(lower + dim as f64 / m as f64).min(1.0);

    Ok(DiscrepancyResult {
        n: ps.len(),
        lower,
        upper,
        exact: false,
        resolution: Some(m),
    })
}

/// Smallest `k >= 1` with `x < grid[k]`, using the same grid values as the
/// volume computation.
fn first_corner_above(x: f64, grid: &[f64]) -> usize {
    let m = grid.len() - 1;
    let mut k = ((x * m as f64).floor() as usize + 1).clamp(1, m);
    while k > 1 && x < grid[k - 1] {
        k -= 1;
    }
    while k < m && x >= grid[k] {
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, GeneratorSpec};

    #[test]
    fn one_dimensional_examples() {
        let half = PointSet::from_flat(1, vec![0.5], "").unwrap();
        assert_eq!(star_discrepancy_1d(&half).unwrap().upper, 0.5);

        let n = 10;
        let centered: Vec<f64> = (1..=n)
            .map(|k| (2 * k - 1) as f64 / (2 * n) as f64)
            .collect();
        let ps = PointSet::from_flat(1, centered, "").unwrap();
        assert!((star_discrepancy_1d(&ps).unwrap().upper - 0.05).abs() < 1e-15);

        let origin = PointSet::from_flat(1, vec![0.0], "").unwrap();
        let r = star_discrepancy_1d(&origin).unwrap();
        assert_eq!((r.lower, r.upper, r.exact), (1.0, 1.0, true));

        let two_d = generate(&GeneratorSpec::Grid { dim: 2, count: 4 }).unwrap();
        assert!(star_discrepancy_1d(&two_d).is_err());
    }

    #[test]
    fn all_points_at_origin_in_two_dimensions() {
        let ps = PointSet::from_flat(2, vec![0.0; 10], "").unwrap();
        let r = star_discrepancy_box(&ps, 4).unwrap();
        assert_eq!(r.lower, 0.9375);
        assert_eq!(r.upper, 1.0);
        assert!(!r.exact);
    }

    #[test]
    fn two_by_two_grid_matches_corner_enumeration() {
        let ps = generate(&GeneratorSpec::Grid { dim: 2, count: 4 }).unwrap();
        let r = star_discrepancy_box(&ps, 4).unwrap();
        // Corner (3/4, 3/4) holds all four points against area 9/16.
        assert_eq!(r.lower, 0.4375);
        assert!(r.upper >= r.lower && r.upper <= r.lower + 0.5);
    }

    #[test]
    fn resolution_validation() {
        let ps = PointSet::from_flat(1, vec![0.3], "").unwrap();
        assert!(star_discrepancy_box(&ps, 1).is_err());
        let big = PointSet::from_flat(6, vec![0.3; 6], "").unwrap();
        assert!(star_discrepancy_box(&big, 100).is_err());
    }
}
