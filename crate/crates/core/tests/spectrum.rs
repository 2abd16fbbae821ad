mod common;

use proptest::prelude::*;

use ppc_core::spectrum::{ppc_functional, weyl_spectrum, weyl_sum};
use ppc_core::PointSet;

use common::random_points;

fn rotated(ps: &PointSet, by: usize) -> PointSet {
    let d = ps.dim();
    let mut coords = ps.as_flat().to_vec();
    coords.rotate_left((by % ps.len()) * d);
    PointSet::from_flat(d, coords, "").unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn magnitude_and_conjugate_symmetry(
        dim in 1usize..=3,
        n in 1usize..=300,
        seed in any::<u64>(),
    ) {
        let ps = random_points(dim, n, seed);
        let nf = n as f64;
        let spectrum = weyl_spectrum(&ps, 4.0);
        for (ell, sq) in &spectrum.entries {
            prop_assert!(sq.sqrt() <= nf * (1.0 + 1e-12));
            let minus: Vec<i64> = ell.iter().map(|c| -c).collect();
            let s = weyl_sum(&ps, ell).unwrap();
            let t = weyl_sum(&ps, &minus).unwrap();
            prop_assert!((s - t.conj()).norm() <= 1e-12 * nf);
            prop_assert!((s.norm_sqr() - t.norm_sqr()).abs() <= 1e-12 * nf * nf);
        }
    }

    #[test]
    fn relabelling_points_leaves_the_spectrum_unchanged(
        dim in 1usize..=3,
        n in 1usize..=300,
        by in 0usize..300,
        seed in any::<u64>(),
    ) {
        let ps = random_points(dim, n, seed);
        let a = weyl_spectrum(&ps, 5.0);
        let b = weyl_spectrum(&rotated(&ps, by), 5.0);
        prop_assert_eq!(a.entries, b.entries);
    }

    #[test]
    fn functional_is_nonincreasing_in_t(
        dim in 1usize..=2,
        n in 10usize..=400,
        seed in any::<u64>(),
    ) {
        let ps = random_points(dim, n, seed);
        let ts = [0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 8.0];
        let values: Vec<f64> = ts.iter().map(|&t| ppc_functional(&ps, t).unwrap().functional).collect();
        prop_assert!(values.windows(2).all(|w| w[1] <= w[0]), "{values:?}");
    }
}
