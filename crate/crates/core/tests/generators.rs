use proptest::prelude::*;

use ppc_core::generators::{generate, GeneratorSpec};
use ppc_core::validate_point_set;

fn specs() -> impl Strategy<Value = GeneratorSpec> {
    let dim = 1usize..=4;
    let count = 1usize..=400;
    prop_oneof![
        (dim.clone(), count.clone(), any::<u64>())
            .prop_map(|(dim, count, seed)| GeneratorSpec::Random { dim, count, seed }),
        (dim.clone(), count.clone()).prop_map(|(dim, count)| GeneratorSpec::Kronecker {
            dim,
            count,
            alpha: None
        }),
        count.clone().prop_map(|count| GeneratorSpec::Quadratic {
            dim: 1,
            count,
            alpha: None
        }),
        (1usize..=3, 1usize..=8).prop_map(|(dim, side)| GeneratorSpec::Grid {
            dim,
            count: side.pow(dim as u32)
        }),
        (dim.clone(), count.clone()).prop_map(|(dim, count)| GeneratorSpec::Halton {
            dim,
            count,
            bases: None
        }),
        (dim, count, any::<u64>(), 1usize..=10).prop_map(|(dim, count, seed, clusters)| {
            GeneratorSpec::Clustered {
                dim,
                count,
                seed,
                clusters,
            }
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn generation_is_deterministic_and_valid(spec in specs()) {
        let a = generate(&spec).unwrap();
        let b = generate(&spec).unwrap();
        prop_assert_eq!(a.len(), spec.count());
        prop_assert_eq!(a.dim(), spec.dim());
        let bits = |ps: &ppc_core::PointSet| ps.as_flat().iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        prop_assert_eq!(bits(&a), bits(&b));
        let rows: Vec<&[f64]> = a.points().collect();
        let validated = validate_point_set(&rows).unwrap();
        prop_assert_eq!(validated.as_flat(), a.as_flat());
    }

    #[test]
    fn zero_frequency_collapses_to_the_origin(dim in 1usize..=4, count in 1usize..=200) {
        let ps = generate(&GeneratorSpec::Kronecker { dim, count, alpha: Some(vec![0.0; dim]) }).unwrap();
        prop_assert!(ps.as_flat().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn random_points_do_not_depend_on_the_count(
        dim in 1usize..=3,
        count in 1usize..=300,
        extra in 1usize..=300,
        seed in any::<u64>(),
    ) {
        let short = generate(&GeneratorSpec::Random { dim, count, seed }).unwrap();
        let long = generate(&GeneratorSpec::Random { dim, count: count + extra, seed }).unwrap();
        prop_assert_eq!(short.as_flat(), &long.as_flat()[..count * dim]);
    }
}
