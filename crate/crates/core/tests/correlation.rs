mod common;

use proptest::prelude::*;

use ppc_core::correlation::{pair_count, ppc_statistic, smoothed_pair_statistic, Algorithm};
use ppc_core::kernels::KernelParams;
use ppc_core::{NormKind, PointSet};

use common::random_points;

fn shifted(ps: &PointSet, shift: &[f64]) -> PointSet {
    let d = ps.dim();
    let coords = ps
        .as_flat()
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let y = x + shift[i % d];
            if y >= 1.0 {
                y - 1.0
            } else {
                y
            }
        })
        .collect();
    PointSet::from_flat(d, coords, "").unwrap()
}

fn rotated(ps: &PointSet, by: usize) -> PointSet {
    let d = ps.dim();
    let mut coords = ps.as_flat().to_vec();
    coords.rotate_left((by % ps.len()) * d);
    PointSet::from_flat(d, coords, "").unwrap()
}

fn norm_of(sup: bool) -> NormKind {
    if sup {
        NormKind::Sup
    } else {
        NormKind::Euclidean
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn cells_agree_with_brute_force(
        dim in 1usize..=4,
        n in 2usize..=2000,
        scale in 0.02f64..6.0,
        sup in any::<bool>(),
        seed in any::<u64>(),
    ) {
        let ps = random_points(dim, n, seed);
        let radius = scale * (n as f64).powf(-1.0 / dim as f64);
        let norm = norm_of(sup);
        prop_assert_eq!(
            pair_count(&ps, radius, norm, Algorithm::Brute).unwrap(),
            pair_count(&ps, radius, norm, Algorithm::Cells).unwrap()
        );
    }

    #[test]
    fn count_is_monotone_in_radius(
        dim in 1usize..=3,
        n in 2usize..=400,
        mut radii in proptest::collection::vec(0.001f64..0.6, 2..8),
        seed in any::<u64>(),
    ) {
        let ps = random_points(dim, n, seed);
        radii.sort_by(f64::total_cmp);
        let counts: Vec<u64> = radii
            .iter()
            .map(|&r| pair_count(&ps, r, NormKind::Euclidean, Algorithm::Cells).unwrap())
            .collect();
        prop_assert!(counts.windows(2).all(|w| w[0] <= w[1]), "{counts:?}");
    }

    #[test]
    fn sup_count_dominates_euclidean(
        dim in 1usize..=3,
        n in 2usize..=500,
        radius in 0.001f64..0.4,
        seed in any::<u64>(),
    ) {
        let ps = random_points(dim, n, seed);
        let sup = pair_count(&ps, radius, NormKind::Sup, Algorithm::Cells).unwrap();
        let l2 = pair_count(&ps, radius, NormKind::Euclidean, Algorithm::Cells).unwrap();
        prop_assert!(sup >= l2);
    }

    #[test]
    fn statistic_ignores_translation_and_order(
        dim in 1usize..=3,
        n in 2usize..=500,
        s in 0.1f64..3.0,
        shift in proptest::collection::vec(0.0f64..1.0, 3),
        by in 0usize..500,
        sup in any::<bool>(),
        seed in any::<u64>(),
    ) {
        let ps = random_points(dim, n, seed);
        let norm = norm_of(sup);
        let base = ppc_statistic(&ps, s, norm).unwrap();
        prop_assert_eq!(&ppc_statistic(&rotated(&ps, by), s, norm).unwrap(), &base);
        prop_assert_eq!(ppc_statistic(&shifted(&ps, &shift[..dim]), s, norm).unwrap().count, base.count);
    }

    #[test]
    fn smoothed_statistic_respects_the_kernel_peak(
        dim in 1usize..=3,
        n in 1usize..=400,
        delta in 0.005f64..0.2,
        seed in any::<u64>(),
    ) {
        let ps = random_points(dim, n, seed);
        let peak = KernelParams::new(dim, delta).unwrap().peak();
        let r = smoothed_pair_statistic(&ps, delta).unwrap();
        let nf = n as f64;
        prop_assert!(r.value >= 0.0);
        prop_assert!(r.value <= peak * (nf - 1.0) / nf * (1.0 + 1e-12));
    }
}

#[test]
fn clustered_points_hit_the_kernel_peak() {
    let ps = PointSet::from_flat(2, vec![0.3, 0.7, 0.3, 0.7], "").unwrap();
    let r = smoothed_pair_statistic(&ps, 0.1).unwrap();
    let peak = KernelParams::new(2, 0.1).unwrap().peak();
    assert!((r.value - peak / 2.0).abs() <= 1e-12 * peak);
}
