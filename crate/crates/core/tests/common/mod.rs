#![allow(dead_code)]

use hyperlim::UniformHypergraph;
use proptest::prelude::*;

/// Random `k`-uniform hypergraph on `n` vertices where each `k`-subset is an
/// edge iff the matching bit of `mask` is set.
pub fn from_mask(k: usize, n: usize, mask: u64) -> UniformHypergraph {
    let all = k_subsets(n, k);
    let edges: Vec<Vec<u32>> = all
        .into_iter()
        .enumerate()
        .filter(|(i, _)| mask >> (i % 64) & 1 == 1)
        .map(|(_, e)| e)
        .collect();
    UniformHypergraph::from_edges(k, n, edges).unwrap()
}

pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: u32, n: u32, k: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n as u32, k, &mut cur, &mut out);
    out
}

pub fn hypergraph(k: usize, max_n: usize) -> impl Strategy<Value = UniformHypergraph> {
    (k..=max_n, any::<u64>()).prop_map(move |(n, mask)| from_mask(k, n, mask))
}

pub fn is_edge(h: &UniformHypergraph, tuple: &[u32]) -> bool {
    let mut t = tuple.to_vec();
    t.sort_unstable();
    t.windows(2).all(|w| w[0] != w[1]) && h.edges().any(|e| e == t.as_slice())
}

/// Counts maps `V(K) -> V(H)` sending every edge to an edge by trying all of them.
pub fn brute_hom(k: &UniformHypergraph, h: &UniformHypergraph) -> u64 {
    let nk = k.n_vertices();
    let nh = h.n_vertices() as u64;
    let total = nh.pow(nk as u32);
    let mut count = 0;
    let mut f = vec![0u32; nk];
    for code in 0..total {
        let mut c = code;
        for slot in f.iter_mut() {
            *slot = (c % nh) as u32;
            c /= nh;
        }
        if k
            .edges()
            .all(|e| is_edge(h, &e.iter().map(|&v| f[v as usize]).collect::<Vec<_>>()))
        {
            count += 1;
        }
    }
    if nk == 0 {
        1
    } else {
        count
    }
}

/// Applies the vertex permutation `perm` to `h`.
pub fn relabel(h: &UniformHypergraph, perm: &[u32]) -> UniformHypergraph {
    UniformHypergraph::from_edges(
        h.arity(),
        h.n_vertices(),
        h.edges()
            .map(|e| e.iter().map(|&v| perm[v as usize]).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    )
    .unwrap()
}

pub fn permutation(n: usize) -> impl Strategy<Value = Vec<u32>> {
    Just((0..n as u32).collect::<Vec<_>>()).prop_shuffle()
}
