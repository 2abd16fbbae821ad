//! Reference computations that share no code with `ppc-core`: plain
//! quadrature and brute-force definitions used to check it.

use std::f64::consts::PI;

/// Composite Simpson rule with `n` (rounded up to even) intervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

/// `J_0(x) = (1/pi) int_0^pi cos(x sin theta) d theta` by the trapezoid rule,
/// which converges geometrically for this periodic integrand.
pub fn bessel_j0(x: f64) -> f64 {
    let m = 400;
    let h = PI / m as f64;
    let mut sum = 0.5 * (1.0 + (x * PI.sin()).cos());
    for i in 1..m {
        sum += (x * (i as f64 * h).sin()).cos();
    }
    sum * h / PI
}

/// Fourier coefficient of the normalized ball indicator at `z = 2 pi rho delta`,
/// by slicing the ball perpendicular to the frequency:
/// `(omega_{d-1}/omega_d) int_{-1}^{1} (1 - u^2)^{(d-1)/2} cos(z u) du`.
pub fn ball_coeff_quadrature(dim: usize, z: f64) -> f64 {
    let n = 20_000;
    match dim {
        1 => 0.5 * simpson(|u| (z * u).cos(), -1.0, 1.0, n),
        // u = sin(theta) removes the square-root endpoint singularity.
        2 => {
            2.0 / PI
                * simpson(
                    |th: f64| th.cos().powi(2) * (z * th.sin()).cos(),
                    -PI / 2.0,
                    PI / 2.0,
                    n,
                )
        }
        3 => 0.75 * simpson(|u| (1.0 - u * u) * (z * u).cos(), -1.0, 1.0, n),
        _ => panic!("unsupported dimension {dim}"),
    }
}

/// Radial Fourier transform of a radial function supported on `[0, 2 delta]`,
/// evaluated by quadrature at frequency radius `rho`.
pub fn radial_transform(dim: usize, delta: f64, rho: f64, f: impl Fn(f64) -> f64) -> f64 {
    let k = 2.0 * PI * rho;
    let top = 2.0 * delta;
    match dim {
        1 => 2.0 * simpson(|r| f(r) * (k * r).cos(), 0.0, top, 4000),
        // r = 2 delta cos(phi) keeps the lens-area kernel smooth.
        2 => simpson(
            |phi: f64| {
                let r = top * phi.cos();
                2.0 * PI * f(r) * bessel_j0(k * r) * r * top * phi.sin()
            },
            0.0,
            PI / 2.0,
            2000,
        ),
        3 => simpson(
            |r| {
                let sinc = if k * r == 0.0 {
                    1.0
                } else {
                    (k * r).sin() / (k * r)
                };
                4.0 * PI * f(r) * r * r * sinc
            },
            0.0,
            top,
            4000,
        ),
        _ => panic!("unsupported dimension {dim}"),
    }
}

/// Exact 1-D star discrepancy from its definition: the supremum over
/// `[0, t)` is attained as `t` approaches a point from either side, or at 1.
pub fn star_discrepancy_brute(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mut worst: f64 = 0.0;
    for &t in xs.iter().chain(std::iter::once(&1.0)) {
        let below = xs.iter().filter(|&&x| x < t).count() as f64;
        let at_or_below = xs.iter().filter(|&&x| x <= t).count() as f64;
        // [0, t) just at t, and [0, t + eps) just past it.
        worst = worst.max((below / n - t).abs());
        if t < 1.0 {
            worst = worst.max((at_or_below / n - t).abs());
        }
    }
    worst
}
