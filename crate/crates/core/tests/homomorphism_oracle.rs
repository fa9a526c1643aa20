mod common;

use common::{brute_hom, hypergraph, permutation, relabel};
use hyperlim::homomorphism::map_space_size;
use hyperlim::{disjoint_union, enumerate_hom_images, hom_count, hom_density, UniformHypergraph};
use num_bigint::BigUint;
use num_rational::BigRational;
use proptest::prelude::*;

fn pattern_and_target(k: usize) -> impl Strategy<Value = (UniformHypergraph, UniformHypergraph)> {
    (hypergraph(k, 4), hypergraph(k, 5))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn count_matches_brute_force((k, h) in (1usize..=3).prop_flat_map(pattern_and_target)) {
        prop_assert_eq!(hom_count(&k, &h).unwrap().count, BigUint::from(brute_hom(&k, &h)));
    }

    #[test]
    fn density_is_multiplicative(
        (k1, k2, h) in (1usize..=3).prop_flat_map(|a| (hypergraph(a, 3), hypergraph(a, 3), hypergraph(a, 5)))
    ) {
        let joint = hom_density(&disjoint_union(&k1, &k2).unwrap(), &h).unwrap();
        let product = hom_density(&k1, &h).unwrap().0 * hom_density(&k2, &h).unwrap().0;
        prop_assert_eq!(joint.0, product);
    }

    #[test]
    fn isomorphic_targets_agree(
        (k, h, perm) in (1usize..=3)
            .prop_flat_map(pattern_and_target)
            .prop_flat_map(|(k, h)| { let n = h.n_vertices(); (Just(k), Just(h), permutation(n)) })
    ) {
        prop_assert_eq!(hom_count(&k, &h).unwrap(), hom_count(&k, &relabel(&h, &perm)).unwrap());
    }

    #[test]
    fn isomorphic_patterns_agree(
        (k, h, perm) in (1usize..=3)
            .prop_flat_map(pattern_and_target)
            .prop_flat_map(|(k, h)| { let n = k.n_vertices(); (Just(k), Just(h), permutation(n)) })
    ) {
        prop_assert_eq!(hom_count(&k, &h).unwrap(), hom_count(&relabel(&k, &perm), &h).unwrap());
    }

    #[test]
    fn removing_target_edges_never_increases(
        (k, h, drop) in (1usize..=3)
            .prop_flat_map(pattern_and_target)
            .prop_flat_map(|(k, h)| (Just(k), Just(h), any::<u64>()))
    ) {
        let ids: Vec<usize> = (0..h.edge_count()).filter(|i| drop >> (i % 64) & 1 == 1).collect();
        let smaller = h.without_edges(&ids);
        prop_assert!(hom_count(&k, &smaller).unwrap().count <= hom_count(&k, &h).unwrap().count);
    }

    #[test]
    fn images_cover_exactly_the_homomorphisms((k, h) in (1usize..=3).prop_flat_map(pattern_and_target)) {
        prop_assume!(k.edge_count() > 0);
        let images = enumerate_hom_images(&k, &h, 1 << 20).unwrap();
        prop_assert!(!images.truncated);
        prop_assert_eq!(images.is_empty(), hom_count(&k, &h).unwrap().count == BigUint::from(0u8));
        let mut sorted = images.images.clone();
        sorted.sort();
        sorted.dedup();
        prop_assert_eq!(sorted, images.images.clone());
        // removing one edge of every image kills all homomorphisms
        let mut kill: Vec<usize> = images.images.iter().map(|img| img[0] as usize).collect();
        kill.sort_unstable();
        kill.dedup();
        prop_assert_eq!(hom_count(&k, &h.without_edges(&kill)).unwrap().count, BigUint::from(0u8));
    }
}

#[test]
fn single_edge_in_complete_is_falling_factorial() {
    for k in 1..=3usize {
        let edge = UniformHypergraph::complete(k, k).unwrap();
        for n in 1..=8usize {
            let complete = UniformHypergraph::complete(k, n).unwrap();
            let falling: u64 = (0..k as u64).map(|i| (n as u64).saturating_sub(i)).product();
            let expected = BigRational::new(falling.into(), (n as u64).pow(k as u32).into());
            assert_eq!(hom_density(&edge, &complete).unwrap().0, expected, "k={k} n={n}");
        }
    }
}

#[test]
fn small_fixed_examples() {
    let k2 = UniformHypergraph::complete(2, 2).unwrap();
    let tri = UniformHypergraph::complete(2, 3).unwrap();
    let c = hom_count(&k2, &tri).unwrap();
    assert_eq!(c.count, BigUint::from(6u8));
    assert_eq!(c.domain_size, map_space_size(3, 2));
    assert_eq!(hom_density(&k2, &tri).unwrap().to_string(), "2/3");
    let edgeless = UniformHypergraph::empty(2, 3).unwrap();
    assert_eq!(hom_density(&edgeless, &tri).unwrap().to_string(), "1");
    let triple = UniformHypergraph::complete(3, 3).unwrap();
    assert!(hom_count(&triple, &tri).is_err());
    assert!(hom_density(&k2, &UniformHypergraph::empty(2, 0).unwrap()).is_err());
}

#[test]
fn truncation_keeps_a_prefix() {
    let k2 = UniformHypergraph::complete(2, 2).unwrap();
    let h = UniformHypergraph::complete(2, 6).unwrap();
    let full = enumerate_hom_images(&k2, &h, 100).unwrap();
    assert_eq!(full.len(), 15);
    let cut = enumerate_hom_images(&k2, &h, 4).unwrap();
    assert!(cut.truncated);
    assert_eq!(cut.images[..], full.images[..4]);
}
