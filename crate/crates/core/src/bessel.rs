//! Bessel-function evaluations behind the ball Fourier transform.
//!
//! The Fourier coefficient of the normalized indicator of a `d`-ball is the
//! radial profile
//!
//! ```text
//! Lambda_nu(z) = Gamma(nu + 1) (2/z)^nu J_nu(z),   nu = d/2,   z = 2 pi |l| delta,
//! ```
//!
//! which is `sin z / z` for `d = 1`, `2 J_1(z) / z` for `d = 2` and
//! `3 (sin z - z cos z) / z^3` for `d = 3`. Small arguments use the power
//! series of `Lambda_nu`; large arguments use the closed trigonometric forms
//! (half-integer orders) or Hankel's asymptotic expansion of `J_1`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// Argument at which evaluation switches from the power series.
pub const SERIES_LIMIT: f64 = 12.0;

/// Power series `sum_k (-1)^k (z/2)^{2k} / (k! (nu+1)_k)`, summed until a
/// term drops below `1e-18` of the partial sum.
pub fn normalized_bessel_series(nu: f64, z: f64) -> f64 {
    let q = 0.25 * z * z;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0.0;
    loop {
        term *= -q / ((k + 1.0) * (k + nu + 1.0));
        sum += term;
        k += 1.0;
        if term.abs() < 1e-18 * sum.abs() || k > 500.0 {
            break;
        }
    }
    sum
}

/// `J_1(x)`: series for `|x| <= 12`, Hankel asymptotics beyond.
pub fn bessel_j1(x: f64) -> f64 {
    if x < 0.0 {
        return -bessel_j1(-x);
    }
    if x <= SERIES_LIMIT {
        0.5 * x * normalized_bessel_series(1.0, x)
    } else {
        j1_asymptotic(x)
    }
}

/// Hankel expansion `J_1(x) ~ sqrt(2/(pi x)) (P cos chi - Q sin chi)`,
/// `chi = x - 3 pi/4`, with `P`, `Q` summed to their smallest term.
fn j1_asymptotic(x: f64) -> f64 {
    let mu = 4.0;
    let eight_x = 8.0 * x;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0f64;
    let mut prev = f64::INFINITY;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        let next = a * (mu - odd * odd) / (k as f64 * eight_x);
        if next.abs() >= prev || next.abs() < 1e-17 {
            break;
        }
        prev = next.abs();
        a = next;
        // a_k enters P (even k) or Q (odd k) with alternating signs.
        match k % 4 {
            1 => q += a,
            2 => p -= a,
            3 => q -= a,
            _ => p += a,
        }
    }
    let (sin, cos) = x.sin_cos();
    // cos(x - 3pi/4) and sin(x - 3pi/4) by the addition formulas.
    let cos_chi = (sin - cos) * FRAC_1_SQRT_2;
    let sin_chi = -(sin + cos) * FRAC_1_SQRT_2;
    (2.0 / (PI * x)).sqrt() * (p * cos_chi - q * sin_chi)
}

/// Radial Fourier profile of the normalized `d`-ball indicator at `z >= 0`.
/// `None` for dimensions other than 1, 2, 3.
pub fn ball_fourier_profile(dim: usize, z: f64) -> Option<f64> {
    let z = z.abs();
    if !(1..=3).contains(&dim) {
        return None;
    }
    if z == 0.0 {
        return Some(1.0);
    }
    if z <= SERIES_LIMIT {
        return Some(normalized_bessel_series(dim as f64 / 2.0, z));
    }
    Some(match dim {
        1 => z.sin() / z,
        2 => 2.0 * bessel_j1(z) / z,
        _ => {
            let (sin, cos) = z.sin_cos();
            3.0 * (sin - z * cos) / (z * z * z)
        }
    })
}

/// First positive zero of the radial profile, by bisection on its sign
/// change inside `[2.5, 5]` (where all three profiles have their first zero).
pub fn first_profile_zero(dim: usize) -> Option<f64> {
    let h = |z: f64| ball_fourier_profile(dim, z);
    let (mut lo, mut hi) = (2.5, 5.0);
    if h(lo)? <= 0.0 || h(hi)? >= 0.0 {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j1_reference_values() {
        // Abramowitz & Stegun table 9.1 / DLMF values.
        let cases = [
            (1.0, 0.440_050_585_744_933_5),
            (5.0, -0.327_579_137_591_465_2),
            (10.0, 0.043_472_746_168_861_44),
            (15.0, 0.205_104_038_613_522_8),
            (30.0, -0.118_751_062_616_623_7),
        ];
        for (x, expected) in cases {
            assert!(
                (bessel_j1(x) - expected).abs() < 1e-13,
                "J1({x}) = {}",
                bessel_j1(x)
            );
        }
    }

    #[test]
    fn series_and_closed_forms_agree_near_switch() {
        for z in [10.0, 11.5, 12.0, 12.5, 14.0] {
            let series1 = normalized_bessel_series(0.5, z);
            assert!((series1 - z.sin() / z).abs() < 1e-12, "d=1 z={z}");
            let (s, c) = z.sin_cos();
            let closed3 = 3.0 * (s - z * c) / (z * z * z);
            assert!(
                (normalized_bessel_series(1.5, z) - closed3).abs() < 1e-12,
                "d=3 z={z}"
            );
            // The asymptotic expansion is only accurate to ~1e-11 near z = 10.
            let tol = if z >= SERIES_LIMIT { 2e-12 } else { 5e-11 };
            let series2 = normalized_bessel_series(1.0, z);
            assert!(
                (series2 - 2.0 * j1_asymptotic(z) / z).abs() < tol,
                "d=2 z={z}"
            );
        }
    }

    #[test]
    fn first_zeros() {
        assert!((first_profile_zero(1).unwrap() - PI).abs() < 1e-12);
        assert!((first_profile_zero(2).unwrap() - 3.831_705_970_207_512).abs() < 1e-12);
        assert!((first_profile_zero(3).unwrap() - 4.493_409_457_909_064).abs() < 1e-12);
        assert!(first_profile_zero(4).is_none());
    }
}
