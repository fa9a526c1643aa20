mod common;

use common::{hypergraph, k_subsets};
use hyperlim::homomorphism::enumerate_hom_images;
use hyperlim::removal::{exact_hitting_set, greedy_hitting_set, removal_experiment, Method};
use hyperlim::UniformHypergraph;
use num_traits::Zero;
use proptest::prelude::*;

fn brute_minimum(images: &[Vec<u32>]) -> usize {
    let mut universe: Vec<u32> = images.iter().flatten().copied().collect();
    universe.sort_unstable();
    universe.dedup();
    assert!(universe.len() <= 16);
    (0u32..1 << universe.len())
        .filter(|mask| {
            images.iter().all(|img| {
                img.iter()
                    .any(|e| mask >> universe.binary_search(e).unwrap() & 1 == 1)
            })
        })
        .map(|m| m.count_ones() as usize)
        .min()
        .unwrap_or(0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn removal_always_verifies(k in hypergraph(2, 3), h in hypergraph(2, 6), greedy in any::<bool>()) {
        prop_assume!(k.edge_count() > 0);
        let method = if greedy { Method::Greedy } else { Method::Exact };
        let r = removal_experiment(&k, &h, method).unwrap();
        prop_assert!(r.verified);
        prop_assert!(r.residual.is_zero());
        for e in &r.removed {
            prop_assert!(h.edges().any(|x| x == e.as_slice()));
        }
    }

    #[test]
    fn exact_is_minimum_and_no_worse_than_greedy(k in hypergraph(2, 3), h in hypergraph(2, 6)) {
        prop_assume!(k.edge_count() > 0);
        let images = enumerate_hom_images(&k, &h, 1 << 16).unwrap();
        prop_assume!(images.edge_universe().len() <= 12);
        let exact = exact_hitting_set(&images, 1 << 20).unwrap();
        prop_assert!(exact.optimal);
        prop_assert_eq!(exact.edges.len(), brute_minimum(&images.images));
        prop_assert!(exact.edges.len() <= greedy_hitting_set(&images).unwrap().len());
    }
}

#[test]
fn single_edge_in_triangle_needs_every_edge() {
    let k2 = UniformHypergraph::complete(2, 2).unwrap();
    let tri = UniformHypergraph::complete(2, 3).unwrap();
    let r = removal_experiment(&k2, &tri, Method::Exact).unwrap();
    assert_eq!(r.removed.len(), 3);
    assert!(r.verified && r.optimal);
}

#[test]
fn two_disjoint_copies_need_two_edges() {
    let triple = UniformHypergraph::complete(3, 3).unwrap();
    let h = UniformHypergraph::from_edges(3, 6, [[0, 1, 2], [3, 4, 5]]).unwrap();
    let images = enumerate_hom_images(&triple, &h, 100).unwrap();
    assert_eq!(greedy_hitting_set(&images).unwrap().len(), 2);
}

#[test]
fn planted_tetrahedra_on_six_vertices() {
    // keep exactly the triples inside {0,1,2,3} and {2,3,4,5}: two planted copies
    let keep: Vec<Vec<u32>> = k_subsets(6, 3)
        .into_iter()
        .filter(|e| e.iter().all(|&v| v <= 3) || e.iter().all(|&v| v >= 2))
        .collect();
    let h = UniformHypergraph::from_edges(3, 6, keep).unwrap();
    let k4 = UniformHypergraph::complete(3, 4).unwrap();
    let r = removal_experiment(&k4, &h, Method::Exact).unwrap();
    assert!(r.removed.len() <= 2);
    assert!(r.verified && r.residual.is_zero());
    let all: Vec<usize> = (0..h.edge_count()).collect();
    assert_eq!(
        hyperlim::hom_count(&k4, &h.without_edges(&all)).unwrap().count,
        0u8.into()
    );
}
