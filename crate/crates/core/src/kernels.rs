//! Convolution kernels and their Fourier multipliers.
//!
//! `g` is the normalized indicator of the ball of radius `delta`,
//! `g = chi_{|x| <= delta} / (omega_d delta^d)`, and `f = g * g` is its
//! self-convolution: a radial probability density supported on the ball of
//! radius `2 delta` whose Fourier coefficients `g_hat(l)^2` are nonnegative.
//! Expanding `sum_{m,n} f(x_m - x_n)` in Fourier series gives
//!
//! ```text
//! sum_{m,n} f(x_m - x_n) = N^2 + sum_{l != 0} g_hat(l)^2 |S_N(l)|^2,
//! ```
//!
//! which [`parseval_check`] verifies numerically with a rigorous bound on the
//! truncated tail.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bessel::{ball_fourier_profile, first_profile_zero};
use crate::numeric::compensated_sum;
use crate::spectrum::{lattice_ball, weyl_sum};
use crate::torus::distance_unchecked;
use crate::{unit_ball_volume, Error, NormKind, PointSet, Result};

/// Largest point count accepted by the Parseval oracle (its left side is a
/// direct double sum).
pub const PARSEVAL_MAX_POINTS: usize = 5000;

/// Cap on the (approximate) number of frequencies in the spectral side.
pub const PARSEVAL_MAX_FREQUENCIES: f64 = 2e6;

/// Kernel dimension and width. `delta < 1/4` keeps the support of `f` (a
/// ball of radius `2 delta`) inside one fundamental domain, so torus Fourier
/// coefficients coincide with the Euclidean transform.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelParams {
    dim: usize,
    delta: f64,
}

impl KernelParams {
    pub fn new(dim: usize, delta: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::input("dimension must be at least 1"));
        }
        if dim > 3 {
            return Err(Error::UnsupportedDimension(dim));
        }
        if !(delta > 0.0 && delta < 0.25) {
            return Err(Error::input(format!(
                "delta must lie in (0, 1/4), got {delta}"
            )));
        }
        Ok(KernelParams { dim, delta })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// `1 / (omega_d delta^d)`: the height of `g`, and also `f(0)`.
    pub fn peak(&self) -> f64 {
        1.0 / (unit_ball_volume(self.dim) * self.delta.powi(self.dim as i32))
    }
}

fn check_point(kp: &KernelParams, x: &[f64]) -> Result<f64> {
    if x.len() != kp.dim {
        return Err(Error::input(format!(
            "point has dimension {}, kernel has {}",
            x.len(),
            kp.dim
        )));
    }
    let origin = vec![0.0; kp.dim];
    Ok(distance_unchecked(x, &origin, NormKind::Euclidean))
}

/// `g(x)`: `1/(omega_d delta^d)` inside the closed `delta`-ball around the
/// origin (torus distance), zero outside.
pub fn box_kernel_eval(kp: &KernelParams, x: &[f64]) -> Result<f64> {
    let r = check_point(kp, x)?;
    Ok(if r <= kp.delta { kp.peak() } else { 0.0 })
}

/// `f = g * g` at the point `x` of the torus.
pub fn triangle_kernel_eval(kp: &KernelParams, x: &[f64]) -> Result<f64> {
    let r = check_point(kp, x)?;
    Ok(triangle_kernel_radial(kp, r))
}

/// `f = g * g` as a function of the distance `r` from the origin: the
/// volume of the intersection of two `delta`-balls at center distance `r`,
/// divided by `(omega_d delta^d)^2`.
pub fn triangle_kernel_radial(kp: &KernelParams, r: f64) -> f64 {
    let delta = kp.delta;
    if r >= 2.0 * delta {
        return 0.0;
    }
    match kp.dim {
        1 => 1.0 / (2.0 * delta) - r / (4.0 * delta * delta),
        2 => {
            let lens = 2.0 * delta * delta * (r / (2.0 * delta)).acos()
                - 0.5 * r * (4.0 * delta * delta - r * r).sqrt();
            let ball = PI * delta * delta;
            lens / (ball * ball)
        }
        _ => {
            let lens = PI * (4.0 * delta + r) * (2.0 * delta - r).powi(2) / 12.0;
            let ball = 4.0 * PI * delta.powi(3) / 3.0;
            lens / (ball * ball)
        }
    }
}

/// Euclidean norm of an integer vector, from the exact integer square sum.
pub(crate) fn lattice_norm(ell: &[i64]) -> f64 {
    let sq: i128 = ell.iter().map(|&l| i128::from(l) * i128::from(l)).sum();
    (sq as f64).sqrt()
}

/// `g_hat(l)`, the Fourier coefficient of the box kernel: `sin z / z`,
/// `2 J_1(z)/z` or `3 (sin z - z cos z)/z^3` at `z = 2 pi |l| delta`.
pub fn box_fourier_coeff(kp: &KernelParams, ell: &[i64]) -> Result<f64> {
    if ell.len() != kp.dim {
        return Err(Error::input(format!(
            "frequency has dimension {}, kernel has {}",
            ell.len(),
            kp.dim
        )));
    }
    Ok(box_fourier_at_radius(kp, lattice_norm(ell)))
}

/// `g_hat` at a real frequency radius `rho`.
pub fn box_fourier_at_radius(kp: &KernelParams, rho: f64) -> f64 {
    let z = 2.0 * PI * rho * kp.delta;
    ball_fourier_profile(kp.dim, z).expect("KernelParams restricts dim to 1..=3")
}

/// Dimensionless multiplier scale `c3`: the largest `z / (2 pi)` such that
/// the squared profile stays at or above `c2` on `[0, z]`.
pub fn multiplier_scale(dim: usize, c2: f64) -> Result<f64> {
    if !(c2 > 0.0 && c2 < 1.0) {
        return Err(Error::input(format!("c2 must lie in (0, 1), got {c2}")));
    }
    if dim == 0 {
        return Err(Error::input("dimension must be at least 1"));
    }
    let profile = |z: f64| ball_fourier_profile(dim, z).ok_or(Error::UnsupportedDimension(dim));
    // The profile decreases from 1 to 0 on [0, first zero].
    let mut lo = 0.0;
    let mut hi = first_profile_zero(dim).ok_or(Error::UnsupportedDimension(dim))?;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if profile(mid)?.powi(2) >= c2 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo / (2.0 * PI))
}

/// Largest radius `L` with `g_hat(l)^2 >= c2` for every `|l| <= L`.
pub fn multiplier_radius(kp: &KernelParams, c2: f64) -> Result<f64> {
    let mut l = multiplier_scale(kp.dim, c2)? / kp.delta;
    // Dividing by delta can round past the threshold; back off by ulps.
    while l > 0.0 && box_fourier_at_radius(kp, l).powi(2) < c2 {
        l = f64::from_bits(l.to_bits() - 1);
    }
    Ok(l)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParsevalReport {
    pub dim: usize,
    pub n: usize,
    pub delta: f64,
    /// Frequencies with `|l| <= l_trunc` enter the spectral side.
    pub l_trunc: f64,
    /// `sum_{m,n} f(x_m - x_n)` over all ordered pairs, diagonal included.
    pub lhs: f64,
    /// `N^2 + sum_{0 < |l| <= l_trunc} g_hat(l)^2 |S_N(l)|^2`.
    pub rhs: f64,
    /// Rigorous upper bound on the omitted terms, `N^2 sum_{|l| > l_trunc} g_hat(l)^2`.
    pub tail_bound: f64,
    /// `|lhs - rhs|`.
    pub gap: f64,
}

impl ParsevalReport {
    /// `gap <= tail_bound + rel_tol * |lhs|`.
    pub fn holds(&self, rel_tol: f64) -> bool {
        self.gap <= self.tail_bound + rel_tol * self.lhs.abs()
    }
}

/// Upper bound on `N^2 sum_{|l| > l_trunc} g_hat(l)^2`.
///
/// Envelopes, with `z = 2 pi |l| delta` and `z0 = 2 pi l_trunc delta`:
///
/// - d = 1: `|sin z / z| <= 1/z` and `sum_{l > L} l^-2 <= 1/floor(L)`, giving
///   `N^2 / (2 pi^2 delta^2 floor(L))`.
/// - d = 2: Hankel's expansion with remainders bounded by the first omitted
///   term gives `|J_1(z)| <= sqrt(2/(pi z)) kappa(z)`,
///   `kappa(z) = 1 + 3/(8z) + 15/(128 z^2) + 315/(3072 z^3)`, so
///   `g_hat^2 <= 8 kappa(z0)^2 / (pi z^3)`.
/// - d = 3: `|sin z - z cos z| <= 1 + z`, so `g_hat^2 <= 9 (1 + 1/z0)^2 / z^4`.
///
/// For d >= 2 the lattice sum `sum_{|l| > L} |l|^-p` is bounded by the
/// integral of `(|y| - h)^-p` over `|y| > L - h`, `h = sqrt(d)/2` (each unit
/// cell around `l` lies in that region and `|l| >= |y| - h` inside it).
pub fn parseval_tail_bound(kp: &KernelParams, n: usize, l_trunc: f64) -> Result<f64> {
    if !(l_trunc >= 2.0 && l_trunc.is_finite()) {
        return Err(Error::input(format!(
            "truncation radius must be >= 2, got {l_trunc}"
        )));
    }
    let n2 = (n as f64).powi(2);
    let delta = kp.delta;
    let two_pi_delta = 2.0 * PI * delta;
    let z0 = two_pi_delta * l_trunc;
    let h = (kp.dim as f64).sqrt() / 2.0;
    let u0 = l_trunc - 2.0 * h;
    let sum = match kp.dim {
        1 => 1.0 / (2.0 * PI * PI * delta * delta * l_trunc.floor()),
        2 => {
            let kappa =
                1.0 + 3.0 / (8.0 * z0) + 15.0 / (128.0 * z0 * z0) + 315.0 / (3072.0 * z0.powi(3));
            let amplitude = 8.0 * kappa * kappa / PI;
            let lattice = 2.0 * PI * (1.0 / u0 + h / (2.0 * u0 * u0));
            amplitude / two_pi_delta.powi(3) * lattice
        }
        _ => {
            let amplitude = 9.0 * (1.0 + 1.0 / z0).powi(2);
            let lattice = 4.0 * PI * (1.0 / u0 + h / (u0 * u0) + h * h / (3.0 * u0.powi(3)));
            amplitude / two_pi_delta.powi(4) * lattice
        }
    };
    Ok(n2 * sum)
}

/// Smallest truncation radius whose tail bound is below `trunc_tol`.
pub fn parseval_truncation(kp: &KernelParams, n: usize, trunc_tol: f64) -> Result<f64> {
    if !(trunc_tol > 0.0) {
        return Err(Error::input(format!(
            "trunc_tol must be positive, got {trunc_tol}"
        )));
    }
    let below = |l: f64| parseval_tail_bound(kp, n, l).map(|t| t < trunc_tol);
    let mut hi = 2.0;
    while !below(hi)? {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::input("trunc_tol is too small to reach"));
        }
    }
    if hi == 2.0 {
        return Ok(hi);
    }
    let mut lo = hi / 2.0;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if below(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(if kp.dim == 1 { hi.ceil() } else { hi })
}

/// Parseval identity check with the truncation radius chosen so the
/// analytic tail bound is below `trunc_tol`.
pub fn parseval_check(ps: &PointSet, kp: &KernelParams, trunc_tol: f64) -> Result<ParsevalReport> {
    let l_trunc = parseval_truncation(kp, ps.len(), trunc_tol)?;
    parseval_check_truncated(ps, kp, l_trunc)
}

/// Parseval identity check at a fixed truncation radius `l_trunc >= 2`.
pub fn parseval_check_truncated(
    ps: &PointSet,
    kp: &KernelParams,
    l_trunc: f64,
) -> Result<ParsevalReport> {
    if ps.dim() != kp.dim {
        return Err(Error::input(format!(
            "point set has dimension {}, kernel has {}",
            ps.dim(),
            kp.dim
        )));
    }
    let n = ps.len();
    if n > PARSEVAL_MAX_POINTS {
        return Err(Error::input(format!(
            "the Parseval oracle accepts at most {PARSEVAL_MAX_POINTS} points, got {n}"
        )));
    }
    let tail_bound = parseval_tail_bound(kp, n, l_trunc)?;
    let frequencies = unit_ball_volume(kp.dim) * l_trunc.powi(kp.dim as i32);
    if frequencies > PARSEVAL_MAX_FREQUENCIES {
        return Err(Error::input(format!(
            "truncation radius {l_trunc:.1} needs about {frequencies:.2e} frequencies \
             (limit {PARSEVAL_MAX_FREQUENCIES:.0e}); use a larger tolerance"
        )));
    }

    // Direct side: every ordered pair, diagonal included.
    let rows: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let p = ps.point(i);
            compensated_sum((0..n).map(|j| {
                triangle_kernel_radial(kp, distance_unchecked(p, ps.point(j), NormKind::Euclidean))
            }))
        })
        .collect();
    let lhs = compensated_sum(rows);

    // Spectral side over the half space l > 0 (lexicographically), doubled:
    // g_hat and |S_N| are even in l.
    let half: Vec<Vec<i64>> = lattice_ball(kp.dim, l_trunc)
        .into_iter()
        .filter(|l| l.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0))
        .collect();
    let terms: Vec<f64> = half
        .par_iter()
        .map(|ell| {
            let coeff = box_fourier_at_radius(kp, lattice_norm(ell));
            let s = weyl_sum(ps, ell).expect("dimension checked above");
            coeff * coeff * s.norm_sqr()
        })
        .collect();
    let n2 = (n as f64).powi(2);
    let rhs = n2 + 2.0 * compensated_sum(terms);

    Ok(ParsevalReport {
        dim: kp.dim,
        n,
        delta: kp.delta,
        l_trunc,
        lhs,
        rhs,
        tail_bound,
        gap: (lhs - rhs).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_validation() {
        assert!(KernelParams::new(1, 0.1).is_ok());
        assert!(KernelParams::new(1, 0.25).is_err());
        assert!(KernelParams::new(1, 0.0).is_err());
        assert!(matches!(
            KernelParams::new(4, 0.1),
            Err(Error::UnsupportedDimension(4))
        ));
        assert!(KernelParams::new(0, 0.1).is_err());
    }

    #[test]
    fn box_kernel_examples() {
        let kp = KernelParams::new(1, 0.1).unwrap();
        assert!((box_kernel_eval(&kp, &[0.05]).unwrap() - 5.0).abs() < 1e-12);
        assert_eq!(box_kernel_eval(&kp, &[0.2]).unwrap(), 0.0);
        // Wraparound: 0.95 is 0.05 from the origin.
        assert!((box_kernel_eval(&kp, &[0.95]).unwrap() - 5.0).abs() < 1e-12);
        let kp2 = KernelParams::new(2, 0.1).unwrap();
        let v = box_kernel_eval(&kp2, &[0.0, 0.0]).unwrap();
        assert!((v - 1.0 / (PI * 0.01)).abs() < 1e-12);
        assert!((v - 31.830_988_618_379_07).abs() < 1e-10);
    }

    #[test]
    fn triangle_kernel_examples() {
        let kp = KernelParams::new(1, 0.1).unwrap();
        assert!((triangle_kernel_eval(&kp, &[0.0]).unwrap() - 5.0).abs() < 1e-12);
        assert_eq!(triangle_kernel_eval(&kp, &[0.2]).unwrap(), 0.0);
        for dim in 1..=3 {
            let kp = KernelParams::new(dim, 0.07).unwrap();
            let f0 = triangle_kernel_radial(&kp, 0.0);
            assert!((f0 - kp.peak()).abs() < 1e-12 * kp.peak(), "d={dim}");
            assert_eq!(triangle_kernel_radial(&kp, 0.14), 0.0);
        }
    }

    #[test]
    fn fourier_coefficient_examples() {
        for dim in 1..=3 {
            let kp = KernelParams::new(dim, 0.1).unwrap();
            assert_eq!(box_fourier_coeff(&kp, &vec![0; dim]).unwrap(), 1.0);
        }
        let kp = KernelParams::new(1, 0.125).unwrap();
        let expected = 2.0 * 2f64.sqrt() / PI;
        assert!((box_fourier_coeff(&kp, &[1]).unwrap() - expected).abs() < 1e-14);
        assert!((expected - 0.900_316).abs() < 1e-6);
        assert!(box_fourier_coeff(&kp, &[1, 0]).is_err());
    }

    #[test]
    fn first_sign_change_in_two_dimensions() {
        // First zero of J_1 is 3.831706, so g_hat <= 0 from |l| = 6.0983 on
        // at delta = 0.1; check both sides of the lattice radius threshold.
        let kp = KernelParams::new(2, 0.1).unwrap();
        let threshold = 3.831_705_970_207_512 / (2.0 * PI * 0.1);
        assert!((threshold - 6.098_3).abs() < 1e-3);
        assert!(box_fourier_at_radius(&kp, threshold - 1e-6) > 0.0);
        assert!(box_fourier_at_radius(&kp, threshold + 1e-6) < 0.0);
        // Lattice vectors: (6,0) is inside, (6,1) at 6.083 inside, (5,4) at 6.40 outside.
        assert!(box_fourier_coeff(&kp, &[6, 0]).unwrap() > 0.0);
        assert!(box_fourier_coeff(&kp, &[6, 1]).unwrap() > 0.0);
        assert!(box_fourier_coeff(&kp, &[5, 4]).unwrap() < 0.0);
    }

    #[test]
    fn multiplier_radius_one_dimension() {
        for delta in [0.01, 0.05, 0.1, 0.2] {
            let kp = KernelParams::new(1, delta).unwrap();
            let l = multiplier_radius(&kp, 0.5).unwrap();
            assert!(l >= 1.0 / (8.0 * delta));
            assert!(box_fourier_at_radius(&kp, l).powi(2) >= 0.5);
            assert!(box_fourier_at_radius(&kp, l * (1.0 + 1e-9)).powi(2) < 0.5);
        }
        // At l delta = 1/8 the multiplier is (8/pi^2) = 0.81057.
        let kp = KernelParams::new(1, 0.1).unwrap();
        let at_eighth = box_fourier_at_radius(&kp, 1.25).powi(2);
        assert!((at_eighth - 8.0 / (PI * PI)).abs() < 1e-14);
        assert!((at_eighth - 0.810_57).abs() < 1e-5);
        assert!(multiplier_radius(&kp, 1.0).is_err());
        assert!(multiplier_radius(&kp, 0.0).is_err());
    }

    #[test]
    fn multiplier_radius_post_check_all_dims() {
        for dim in 1..=3 {
            for c2 in [0.1, 0.5, 0.9] {
                let kp = KernelParams::new(dim, 0.05).unwrap();
                let l = multiplier_radius(&kp, c2).unwrap();
                assert!(box_fourier_at_radius(&kp, l).powi(2) >= c2);
                assert!(box_fourier_at_radius(&kp, l * (1.0 + 1e-9)).powi(2) < c2);
            }
        }
    }

    #[test]
    fn parseval_two_points() {
        let ps = PointSet::from_flat(1, vec![0.0, 0.25], "").unwrap();
        let kp = KernelParams::new(1, 0.1).unwrap();
        let report = parseval_check(&ps, &kp, 1e-3).unwrap();
        assert_eq!(report.lhs, 10.0);
        assert!(report.holds(1e-8), "{report:?}");
        assert!(report.rhs <= report.lhs * (1.0 + 1e-12));
    }

    #[test]
    fn parseval_single_point_is_kernel_normalization() {
        let ps = PointSet::from_flat(1, vec![0.3], "").unwrap();
        let kp = KernelParams::new(1, 0.1).unwrap();
        let report = parseval_check(&ps, &kp, 1e-4).unwrap();
        assert_eq!(report.lhs, 5.0);
        assert!(report.holds(1e-8), "{report:?}");
        assert!(report.gap < 1e-4);
    }

    #[test]
    fn tail_bound_matches_one_dimensional_formula() {
        let kp = KernelParams::new(1, 0.1).unwrap();
        let t = parseval_tail_bound(&kp, 10, 100.5).unwrap();
        let expected = 100.0 / (2.0 * PI * PI * 0.01 * 100.0);
        assert!((t - expected).abs() < 1e-12 * expected);
        let l = parseval_truncation(&kp, 10, 1e-2).unwrap();
        assert!(parseval_tail_bound(&kp, 10, l).unwrap() < 1e-2);
        assert!(parseval_tail_bound(&kp, 10, l - 1.0).unwrap() >= 1e-2);
    }

    #[test]
    fn tail_bound_dominates_actual_kernel_tail() {
        // sum_{l} g_hat(l)^2 = f(0), so the true tail of the coefficient
        // sum is computable; the envelope must sit above it.
        for dim in 2..=3 {
            let kp = KernelParams::new(dim, 0.2).unwrap();
            let l_trunc = if dim == 2 { 40.0 } else { 15.0 };
            let inside = compensated_sum(
                lattice_ball(dim, l_trunc)
                    .iter()
                    .map(|l| box_fourier_coeff(&kp, l).unwrap().powi(2)),
            );
            let actual_tail = kp.peak() - 1.0 - inside;
            let bound = parseval_tail_bound(&kp, 1, l_trunc).unwrap();
            assert!(
                actual_tail > 0.0 && actual_tail <= bound,
                "d={dim}: {actual_tail} vs {bound}"
            );
        }
    }
}
