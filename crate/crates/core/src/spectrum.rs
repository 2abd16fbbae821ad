//! Weyl sums over lattice balls and the exponential-sum certificates that
//! pair correlation implies.
//!
//! For `d = 1` the certified functional is
//! `(1/N^2) sum_{1 <= l <= N/(8t)} |S_N(l)|^2`, bounded by `1/(2t)` under
//! Poissonian pair correlation and equal to `1/(8t)` in expectation for
//! i.i.d. uniform points. For `d >= 2` the sum runs over the full ball
//! `1 <= |l| <= N^{1/d}/t` and the bound is `c_d / t^d`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::kernels::multiplier_scale;
use crate::numeric::{compensated_sum, fract_mul};
use crate::{unit_ball_volume, Error, PointSet, Result};

/// Default lower bound `c2` on the squared multiplier `g_hat^2` used to
/// derive the `d >= 2` constant.
pub const DEFAULT_MULTIPLIER_THRESHOLD: f64 = 0.5;

/// Default `c_alpha` for weak-correlation certificates. The theory leaves it
/// unspecified; this is an implementation constant.
pub const DEFAULT_WEAK_CONSTANT: f64 = 1.0;

/// Fixed-point scale for accumulating unit-modulus terms.
const PHASE_SCALE: f64 = (1u64 << 62) as f64;

/// `S_N(l) = sum_k e^{2 pi i <l, x_k>}`.
///
/// The phase `<l, x_k> mod 1` is reduced exactly (integer times double)
/// before multiplying by `2 pi`. Each cosine and sine is rounded to a
/// multiple of `2^-62` and summed as an integer, so the result does not
/// depend on the order of the points.
pub fn weyl_sum(ps: &PointSet, ell: &[i64]) -> Result<Complex64> {
    if ell.len() != ps.dim() {
        return Err(Error::input(format!(
            "frequency has dimension {}, points have {}",
            ell.len(),
            ps.dim()
        )));
    }
    let mut re: i128 = 0;
    let mut im: i128 = 0;
    for p in ps.points() {
        let phase: f64 = ell.iter().zip(p).map(|(&l, &x)| fract_mul(l, x)).sum();
        let theta = phase - phase.floor();
        let (sin, cos) = (2.0 * PI * theta).sin_cos();
        re += (cos * PHASE_SCALE).round() as i128;
        im += (sin * PHASE_SCALE).round() as i128;
    }
    Ok(Complex64::new(
        re as f64 / PHASE_SCALE,
        im as f64 / PHASE_SCALE,
    ))
}

/// All `l` in `Z^d` with `1 <= |l|_2 <= radius`, in lexicographic order.
///
/// Membership compares the integer `|l|^2` against `floor(radius^2)`; a
/// `radius^2` within `1e-12` relative of an integer is snapped to it, so
/// `radius = sqrt(2)` includes the vectors of norm exactly `sqrt(2)`.
pub fn lattice_ball(dim: usize, radius: f64) -> Vec<Vec<i64>> {
    if dim == 0 || !(radius >= 1.0) {
        return Vec::new();
    }
    let r2 = radius * radius;
    let nearest = r2.round();
    let max_sq = if (r2 - nearest).abs() <= 1e-12 * nearest.max(1.0) {
        nearest
    } else {
        r2.floor()
    };
    let max_sq = max_sq as i64;
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(dim);
    enumerate_ball(dim, max_sq, &mut current, &mut out);
    out
}

fn enumerate_ball(dim: usize, budget: i64, current: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if current.len() == dim {
        if current.iter().any(|&c| c != 0) {
            out.push(current.clone());
        }
        return;
    }
    let reach = isqrt(budget);
    for c in -reach..=reach {
        current.push(c);
        enumerate_ball(dim, budget - c * c, current, out);
        current.pop();
    }
}

fn isqrt(n: i64) -> i64 {
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// `|S_N(l)|^2` for every `l` in a lattice ball (both signs stored).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeylSpectrum {
    pub dim: usize,
    pub n: usize,
    pub cutoff: f64,
    pub entries: Vec<(Vec<i64>, f64)>,
}

impl WeylSpectrum {
    pub fn total(&self) -> f64 {
        compensated_sum(self.entries.iter().map(|(_, v)| *v))
    }
}

/// Squared Weyl sums over `lattice_ball(d, cutoff)`, each `l` evaluated
/// independently.
pub fn weyl_spectrum(ps: &PointSet, cutoff: f64) -> WeylSpectrum {
    let ball = lattice_ball(ps.dim(), cutoff);
    let entries = squared_sums(ps, ball);
    WeylSpectrum {
        dim: ps.dim(),
        n: ps.len(),
        cutoff,
        entries,
    }
}

fn squared_sums(ps: &PointSet, ells: Vec<Vec<i64>>) -> Vec<(Vec<i64>, f64)> {
    ells.into_par_iter()
        .map(|ell| {
            let s = weyl_sum(ps, &ell).expect("lattice vectors share the point dimension");
            (ell, s.norm_sqr())
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    WithinBound,
    ExceedsBound,
}

/// A computed exponential-sum functional next to its theoretical ceiling.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub t: f64,
    /// 1 for the pair-correlation functional, `alpha` for the weak one.
    pub alpha: f64,
    pub dim: usize,
    pub n: usize,
    /// Frequency cutoff (`N/(8t)` for d = 1, `N^{1/d}/t` for d >= 2,
    /// `N^alpha / t` for the weak functional).
    pub cutoff_used: f64,
    /// Number of frequencies summed.
    pub terms: usize,
    /// Unnormalized `sum |S_N(l)|^2`.
    pub raw_sum: f64,
    /// Normalized sum compared against `bound`.
    pub functional: f64,
    pub bound: f64,
    /// Expected value of `functional` for i.i.d. uniform points, where known.
    pub iid_reference: Option<f64>,
    pub verdict: Verdict,
    pub constants_used: BTreeMap<String, f64>,
}

fn verdict(functional: f64, bound: f64) -> Verdict {
    if functional <= bound {
        Verdict::WithinBound
    } else {
        Verdict::ExceedsBound
    }
}

fn positive_frequencies(limit: f64) -> Vec<Vec<i64>> {
    let top = if limit >= 1.0 {
        limit.floor() as i64
    } else {
        0
    };
    (1..=top).map(|l| vec![l]).collect()
}

/// Constant `c_d` in the `d >= 2` bound `c_d / t^d`.
///
/// At kernel width `delta = c3 t N^{-1/d}` the multiplier satisfies
/// `g_hat^2 >= c2` on the whole summation ball, and comparing both
/// evaluations of `sum f(x_m - x_n)` gives
/// `c2 * functional <= f(0)/N = 1 / (omega_d c3^d t^d)`, hence
/// `c_d = 1 / (omega_d c2 c3^d)`.
pub fn dimension_constant(dim: usize, c2: f64) -> Result<(f64, f64)> {
    let c3 = multiplier_scale(dim, c2)?;
    let c_d = 1.0 / (unit_ball_volume(dim) * c2 * c3.powi(dim as i32));
    Ok((c_d, c3))
}

/// Pair-correlation exponential-sum functional at parameter `t`.
pub fn ppc_functional(ps: &PointSet, t: f64) -> Result<BoundCertificate> {
    ppc_functional_with(ps, t, DEFAULT_MULTIPLIER_THRESHOLD)
}

/// As [`ppc_functional`], with an explicit multiplier threshold `c2` for
/// the `d >= 2` constant.
pub fn ppc_functional_with(ps: &PointSet, t: f64, c2: f64) -> Result<BoundCertificate> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::input(format!(
            "t must be positive and finite, got {t}"
        )));
    }
    let d = ps.dim();
    let n = ps.len();
    let nf = n as f64;
    let n2 = nf * nf;
    let mut constants = BTreeMap::new();

    let (cutoff, ells, bound, iid_reference) = if d == 1 {
        let cutoff = nf / (8.0 * t);
        (
            cutoff,
            positive_frequencies(cutoff),
            1.0 / (2.0 * t),
            Some(1.0 / (8.0 * t)),
        )
    } else {
        let cutoff = nf.powf(1.0 / d as f64) / t;
        let (c_d, c3) = dimension_constant(d, c2)?;
        constants.insert("c2".to_string(), c2);
        constants.insert("c3".to_string(), c3);
        constants.insert("c_d".to_string(), c_d);
        (
            cutoff,
            lattice_ball(d, cutoff),
            c_d / t.powi(d as i32),
            None,
        )
    };

    let terms = ells.len();
    let raw_sum = compensated_sum(squared_sums(ps, ells).into_iter().map(|(_, v)| v));
    let functional = raw_sum / n2;
    Ok(BoundCertificate {
        t,
        alpha: 1.0,
        dim: d,
        n,
        cutoff_used: cutoff,
        terms,
        raw_sum,
        functional,
        bound,
        iid_reference,
        verdict: verdict(functional, bound),
        constants_used: constants,
    })
}

/// Weak-correlation functional `sum_{1 <= l <= N^alpha / t} |S_N(l)|^2`,
/// normalized by `N^{1+alpha} / t` and compared against `c_alpha = 1`.
pub fn weak_functional(ps: &PointSet, t: f64, alpha: f64) -> Result<BoundCertificate> {
    weak_functional_with(ps, t, alpha, DEFAULT_WEAK_CONSTANT)
}

pub fn weak_functional_with(
    ps: &PointSet,
    t: f64,
    alpha: f64,
    c_alpha: f64,
) -> Result<BoundCertificate> {
    if ps.dim() != 1 {
        return Err(Error::input(format!(
            "the weak functional is defined in one dimension only (got d = {})",
            ps.dim()
        )));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::input(format!(
            "alpha must lie in (0, 1], got {alpha}"
        )));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::input(format!(
            "t must be positive and finite, got {t}"
        )));
    }
    let n = ps.len();
    let nf = n as f64;
    let cutoff = nf.powf(alpha) / t;
    let ells = positive_frequencies(cutoff);
    let terms = ells.len();
    let raw_sum = compensated_sum(squared_sums(ps, ells).into_iter().map(|(_, v)| v));
    let scale = nf.powf(1.0 + alpha) / t;
    let functional = raw_sum / scale;
    let mut constants = BTreeMap::new();
    constants.insert("c_alpha".to_string(), c_alpha);
    Ok(BoundCertificate {
        t,
        alpha,
        dim: 1,
        n,
        cutoff_used: cutoff,
        terms,
        raw_sum,
        functional,
        bound: c_alpha,
        // E|S_N(l)|^2 = N for i.i.d. uniform points.
        iid_reference: Some(nf * terms as f64 / scale),
        verdict: verdict(functional, c_alpha),
        constants_used: constants,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanEntry {
    pub ell: Vec<i64>,
    /// `|S_N(l)| / N`.
    pub magnitude: f64,
}

/// Normalized Weyl-sum magnitudes over a lattice ball.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeylScan {
    pub lmax: f64,
    pub n: usize,
    pub entries: Vec<ScanEntry>,
    pub max: f64,
    /// First frequency (in lattice order) attaining `max`.
    pub argmax: Vec<i64>,
}

/// `|S_N(l)| / N` for `1 <= |l| <= lmax`, with the maximum.
pub fn weyl_criterion_scan(ps: &PointSet, lmax: f64) -> Result<WeylScan> {
    if !(lmax >= 1.0 && lmax.is_finite()) {
        return Err(Error::input(format!("lmax must be at least 1, got {lmax}")));
    }
    let spectrum = weyl_spectrum(ps, lmax);
    let nf = ps.len() as f64;
    let entries: Vec<ScanEntry> = spectrum
        .entries
        .into_iter()
        .map(|(ell, sq)| ScanEntry {
            ell,
            magnitude: sq.sqrt() / nf,
        })
        .collect();
    let (max, argmax) = entries.iter().fold((0.0, Vec::new()), |(best, arg), e| {
        if e.magnitude > best || arg.is_empty() {
            (e.magnitude, e.ell.clone())
        } else {
            (best, arg)
        }
    });
    Ok(WeylScan {
        lmax,
        n: ps.len(),
        entries,
        max,
        argmax,
    })
}
