//! Seeded sequence families used to exercise pair correlation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::numeric::fract_mul;
use crate::{Error, PointSet, Result};

/// Stream offset that keeps cluster-center draws apart from per-point draws.
const CENTER_STREAM: u64 = 1 << 63;

/// A sequence family with its parameters. Parameters that a family does not
/// use cannot be expressed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeneratorSpec {
    /// Independent uniform points; point `i`, coordinate `j` depends only on
    /// `(seed, i, j)`.
    Random { dim: usize, count: usize, seed: u64 },
    /// `x_n = (n alpha_1, ..., n alpha_d) mod 1` for `n = 1..N`. Defaults to
    /// `alpha_i = sqrt(p_i)` over the first `d` primes.
    Kronecker {
        dim: usize,
        count: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alpha: Option<Vec<f64>>,
    },
    /// `x_n = n^2 alpha mod 1`, one-dimensional only. Defaults to `sqrt(2)`.
    Quadratic {
        dim: usize,
        count: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alpha: Option<f64>,
    },
    /// Regular lattice with `m` points per axis; requires `count = m^dim`.
    Grid { dim: usize, count: usize },
    /// Radical-inverse sequence `n = 1..N` in pairwise coprime bases.
    /// Defaults to the first `d` primes.
    Halton {
        dim: usize,
        count: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bases: Option<Vec<u64>>,
    },
    /// Every point sits on one of `clusters` uniformly drawn centers.
    Clustered {
        dim: usize,
        count: usize,
        seed: u64,
        clusters: usize,
    },
}

impl GeneratorSpec {
    pub fn dim(&self) -> usize {
        match *self {
            GeneratorSpec::Random { dim, .. }
            | GeneratorSpec::Kronecker { dim, .. }
            | GeneratorSpec::Quadratic { dim, .. }
            | GeneratorSpec::Grid { dim, .. }
            | GeneratorSpec::Halton { dim, .. }
            | GeneratorSpec::Clustered { dim, .. } => dim,
        }
    }

    pub fn count(&self) -> usize {
        match *self {
            GeneratorSpec::Random { count, .. }
            | GeneratorSpec::Kronecker { count, .. }
            | GeneratorSpec::Quadratic { count, .. }
            | GeneratorSpec::Grid { count, .. }
            | GeneratorSpec::Halton { count, .. }
            | GeneratorSpec::Clustered { count, .. } => count,
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            GeneratorSpec::Random { .. } => "random",
            GeneratorSpec::Kronecker { .. } => "kronecker",
            GeneratorSpec::Quadratic { .. } => "quadratic",
            GeneratorSpec::Grid { .. } => "grid",
            GeneratorSpec::Halton { .. } => "halton",
            GeneratorSpec::Clustered { .. } => "clustered",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match *self {
            GeneratorSpec::Random { seed, .. } | GeneratorSpec::Clustered { seed, .. } => {
                Some(seed)
            }
            _ => None,
        }
    }

    /// Same spec with a different seed; `None` for families without one.
    pub fn with_seed(&self, new_seed: u64) -> Option<Self> {
        let mut spec = self.clone();
        match &mut spec {
            GeneratorSpec::Random { seed, .. } | GeneratorSpec::Clustered { seed, .. } => {
                *seed = new_seed;
                Some(spec)
            }
            _ => None,
        }
    }

    /// Spec with every defaulted parameter filled in.
    pub fn resolved(&self) -> Self {
        let mut spec = self.clone();
        match &mut spec {
            GeneratorSpec::Kronecker { dim, alpha, .. } if alpha.is_none() => {
                *alpha = Some(
                    first_primes(*dim)
                        .into_iter()
                        .map(|p| (p as f64).sqrt())
                        .collect(),
                );
            }
            GeneratorSpec::Quadratic { alpha, .. } if alpha.is_none() => {
                *alpha = Some(std::f64::consts::SQRT_2);
            }
            GeneratorSpec::Halton { dim, bases, .. } if bases.is_none() => {
                *bases = Some(first_primes(*dim));
            }
            _ => {}
        }
        spec
    }

    pub fn validate(&self) -> Result<()> {
        let dim = self.dim();
        if dim == 0 {
            return Err(Error::input("dimension must be at least 1"));
        }
        if self.count() == 0 {
            return Err(Error::input("count must be at least 1"));
        }
        match self.resolved() {
            GeneratorSpec::Kronecker {
                alpha: Some(alpha), ..
            } => {
                if alpha.len() != dim {
                    return Err(Error::input(format!(
                        "kronecker needs {dim} alpha values, got {}",
                        alpha.len()
                    )));
                }
                if alpha.iter().any(|a| !a.is_finite()) {
                    return Err(Error::input("alpha must be finite"));
                }
            }
            GeneratorSpec::Quadratic {
                alpha: Some(alpha), ..
            } => {
                if dim != 1 {
                    return Err(Error::input("the quadratic family is one-dimensional"));
                }
                if !alpha.is_finite() {
                    return Err(Error::input("alpha must be finite"));
                }
                if i64::try_from(self.count()).map_or(true, |n| n.checked_mul(n).is_none()) {
                    return Err(Error::input("count too large for exact n^2 reduction"));
                }
            }
            GeneratorSpec::Grid { count, .. } => {
                if dim > 1 && integer_root(count, dim).is_none() {
                    return Err(Error::input(format!(
                        "grid count {count} is not m^{dim} for any integer m"
                    )));
                }
            }
            GeneratorSpec::Halton {
                bases: Some(bases), ..
            } => {
                if bases.len() != dim {
                    return Err(Error::input(format!(
                        "halton needs {dim} bases, got {}",
                        bases.len()
                    )));
                }
                if bases.iter().any(|&b| b < 2) {
                    return Err(Error::input("halton bases must be at least 2"));
                }
                for (i, &a) in bases.iter().enumerate() {
                    for &b in &bases[i + 1..] {
                        if gcd(a, b) != 1 {
                            return Err(Error::input(format!(
                                "halton bases {a} and {b} are not coprime"
                            )));
                        }
                    }
                }
            }
            GeneratorSpec::Clustered { clusters: 0, .. } => {
                return Err(Error::input("clusters must be at least 1"));
            }
            _ => {}
        }
        Ok(())
    }

    fn label(&self) -> String {
        let base = format!("{}(d={},n={}", self.family_name(), self.dim(), self.count());
        let extra = match self {
            GeneratorSpec::Random { seed, .. } => format!(",seed={seed}"),
            GeneratorSpec::Kronecker { alpha: Some(a), .. } => format!(",alpha={a:?}"),
            GeneratorSpec::Quadratic { alpha: Some(a), .. } => format!(",alpha={a:?}"),
            GeneratorSpec::Halton { bases: Some(b), .. } => format!(",bases={b:?}"),
            GeneratorSpec::Clustered { seed, clusters, .. } => {
                format!(",clusters={clusters},seed={seed}")
            }
            _ => String::new(),
        };
        format!("{base}{extra})")
    }
}

/// Builds the point set described by `spec`. Equal specs give bitwise-equal
/// output.
pub fn generate(spec: &GeneratorSpec) -> Result<PointSet> {
    spec.validate()?;
    let spec = spec.resolved();
    let dim = spec.dim();
    let count = spec.count();
    let mut coords = vec![0.0; dim * count];

    match &spec {
        GeneratorSpec::Random { seed, .. } => {
            coords.par_chunks_mut(dim).enumerate().for_each(|(i, row)| {
                let mut rng = point_rng(*seed, i as u64);
                for c in row.iter_mut() {
                    *c = rng.gen::<f64>();
                }
            });
        }
        GeneratorSpec::Kronecker {
            alpha: Some(alpha), ..
        } => {
            coords.par_chunks_mut(dim).enumerate().for_each(|(i, row)| {
                let n = i as i64 + 1;
                for (c, &a) in row.iter_mut().zip(alpha) {
                    *c = fract_mul(n, a);
                }
            });
        }
        GeneratorSpec::Quadratic {
            alpha: Some(alpha), ..
        } => {
            coords.par_iter_mut().enumerate().for_each(|(i, c)| {
                let n = i as i64 + 1;
                *c = fract_mul(n * n, *alpha);
            });
        }
        GeneratorSpec::Grid { .. } => {
            let per_axis = if dim == 1 {
                count
            } else {
                integer_root(count, dim).unwrap_or(1)
            };
            for (i, row) in coords.chunks_mut(dim).enumerate() {
                let mut rest = i;
                for c in row.iter_mut().rev() {
                    *c = (rest % per_axis) as f64 / per_axis as f64;
                    rest /= per_axis;
                }
            }
        }
        GeneratorSpec::Halton {
            bases: Some(bases), ..
        } => {
            coords.par_chunks_mut(dim).enumerate().for_each(|(i, row)| {
                for (c, &b) in row.iter_mut().zip(bases) {
                    *c = radical_inverse(i as u64 + 1, b);
                }
            });
        }
        GeneratorSpec::Clustered { seed, clusters, .. } => {
            let centers: Vec<Vec<f64>> = (0..*clusters as u64)
                .map(|c| {
                    let mut rng = point_rng(*seed, CENTER_STREAM | c);
                    (0..dim).map(|_| rng.gen::<f64>()).collect()
                })
                .collect();
            coords.par_chunks_mut(dim).enumerate().for_each(|(i, row)| {
                let mut rng = point_rng(*seed, i as u64);
                let which = rng.gen_range(0..centers.len());
                row.copy_from_slice(&centers[which]);
            });
        }
        _ => unreachable!("resolved() fills every optional parameter"),
    }

    PointSet::from_flat(dim, coords, spec.label())
}

fn point_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Van der Corput radical inverse of `n` in base `base`, formed as an exact
/// integer ratio before a single division.
pub fn radical_inverse(mut n: u64, base: u64) -> f64 {
    let base128 = u128::from(base);
    let mut numerator: u128 = 0;
    let mut denominator: u128 = 1;
    while n > 0 {
        numerator = numerator * base128 + u128::from(n % base);
        denominator *= base128;
        n /= base;
    }
    numerator as f64 / denominator as f64
}

/// The first `count` primes.
pub fn first_primes(count: usize) -> Vec<u64> {
    let mut primes: Vec<u64> = Vec::with_capacity(count);
    let mut candidate = 2u64;
    while primes.len() < count {
        if primes
            .iter()
            .take_while(|&&p| p * p <= candidate)
            .all(|&p| !candidate.is_multiple_of(p))
        {
            primes.push(candidate);
        }
        candidate += 1;
    }
    primes
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `m` with `m^k = n`, if it exists.
fn integer_root(n: usize, k: usize) -> Option<usize> {
    let guess = (n as f64).powf(1.0 / k as f64).round() as usize;
    (guess.saturating_sub(1)..=guess + 1).find(|&m| m.checked_pow(k as u32) == Some(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronecker_golden_ratio() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let ps = generate(&GeneratorSpec::Kronecker {
            dim: 1,
            count: 3,
            alpha: Some(vec![phi]),
        })
        .unwrap();
        // n * phi - floor(n * phi), evaluated by hand for n = 1, 2, 3.
        let expected = [
            0.618_033_988_749_894_9,
            0.236_067_977_499_789_8,
            0.854_101_966_249_684_7,
        ];
        for (i, e) in expected.iter().enumerate() {
            assert!((ps.point(i)[0] - e).abs() < 1e-15, "n={}", i + 1);
        }
    }

    #[test]
    fn kronecker_zero_alpha_is_degenerate() {
        let ps = generate(&GeneratorSpec::Kronecker {
            dim: 2,
            count: 5,
            alpha: Some(vec![0.0, 0.0]),
        })
        .unwrap();
        assert!(ps.as_flat().iter().all(|&c| c == 0.0));
    }

    #[test]
    fn grid_one_dimensional() {
        let ps = generate(&GeneratorSpec::Grid { dim: 1, count: 4 }).unwrap();
        assert_eq!(ps.as_flat(), &[0.0, 0.25, 0.5, 0.75]);
    }

    #[test]
    fn grid_two_dimensional() {
        let ps = generate(&GeneratorSpec::Grid { dim: 2, count: 9 }).unwrap();
        assert_eq!(ps.point(0), &[0.0, 0.0]);
        assert_eq!(ps.point(1), &[0.0, 1.0 / 3.0]);
        assert_eq!(ps.point(3), &[1.0 / 3.0, 0.0]);
        assert!(generate(&GeneratorSpec::Grid { dim: 2, count: 5 }).is_err());
        assert!(generate(&GeneratorSpec::Grid { dim: 3, count: 27 }).is_ok());
    }

    #[test]
    fn random_is_deterministic() {
        let spec = GeneratorSpec::Random {
            dim: 2,
            count: 100,
            seed: 7,
        };
        assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
        let other = generate(&spec.with_seed(8).unwrap()).unwrap();
        assert_ne!(generate(&spec).unwrap().as_flat(), other.as_flat());
    }

    #[test]
    fn random_prefix_is_stable() {
        // Point i depends on (seed, i) only, so a longer run extends a shorter one.
        let short = generate(&GeneratorSpec::Random {
            dim: 3,
            count: 10,
            seed: 1,
        })
        .unwrap();
        let long = generate(&GeneratorSpec::Random {
            dim: 3,
            count: 50,
            seed: 1,
        })
        .unwrap();
        assert_eq!(short.as_flat(), &long.as_flat()[..30]);
    }

    #[test]
    fn quadratic_matches_exact_rational_reduction() {
        // alpha = 0.75 + 2^-40 has a short binary expansion, so n^2 alpha mod 1
        // can be computed exactly by hand in integers.
        let alpha = 0.75 + 2f64.powi(-40);
        let ps = generate(&GeneratorSpec::Quadratic {
            dim: 1,
            count: 1_000_000,
            alpha: Some(alpha),
        })
        .unwrap();
        for n in [1u128, 1000, 123_457, 1_000_000] {
            let scaled = n * n * ((3u128 << 38) + 1); // n^2 alpha * 2^40
            let expected = (scaled % (1u128 << 40)) as f64 / 2f64.powi(40);
            assert_eq!(ps.point(n as usize - 1)[0], expected, "n={n}");
        }
        assert!(generate(&GeneratorSpec::Quadratic {
            dim: 2,
            count: 4,
            alpha: None
        })
        .is_err());
    }

    #[test]
    fn halton_base_two() {
        let ps = generate(&GeneratorSpec::Halton {
            dim: 2,
            count: 4,
            bases: None,
        })
        .unwrap();
        let xs: Vec<f64> = ps.points().map(|p| p[0]).collect();
        assert_eq!(xs, vec![0.5, 0.25, 0.75, 0.125]);
        let ys: Vec<f64> = ps.points().map(|p| p[1]).collect();
        assert_eq!(ys, vec![1.0 / 3.0, 2.0 / 3.0, 1.0 / 9.0, 4.0 / 9.0]);
        let bad = GeneratorSpec::Halton {
            dim: 2,
            count: 4,
            bases: Some(vec![2, 4]),
        };
        assert!(generate(&bad).is_err());
    }

    #[test]
    fn clustered_points_sit_on_centers() {
        let ps = generate(&GeneratorSpec::Clustered {
            dim: 2,
            count: 200,
            seed: 3,
            clusters: 4,
        })
        .unwrap();
        let mut distinct: Vec<&[f64]> = ps.points().collect();
        distinct.sort_by(|a, b| a.partial_cmp(b).unwrap());
        distinct.dedup();
        assert!(distinct.len() <= 4 && distinct.len() >= 2);
    }

    #[test]
    fn primes() {
        assert_eq!(first_primes(6), vec![2, 3, 5, 7, 11, 13]);
    }
}
