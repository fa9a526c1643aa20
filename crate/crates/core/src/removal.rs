//! Removal experiments: find a small edge set `L ⊆ E(H)` such that no
//! homomorphism `K -> H \ L` survives, and verify it by recounting.
//!
//! The hitting universe is the set of distinct homomorphism images
//! `{f(e) : e ∈ E(K)}`; removing any edge of an image destroys every
//! homomorphism with that image.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::homomorphism::{enumerate_hom_images, hom_density, HomImageSet, DEFAULT_IMAGE_CAP};
use crate::hypergraph::UniformHypergraph;
use crate::subsets::binomial_big;

/// Default node budget for [`exact_hitting_set`].
pub const DEFAULT_SEARCH_BUDGET: u64 = 1_000_000;

/// Header of the CSV rows produced by [`RemovalResult::csv_row`].
pub const REMOVAL_CSV_HEADER: &str = "instance,edges,images,method,removed,fraction,residual,verified";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Exact,
    Greedy,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Greedy => "greedy",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Method::Exact),
            "greedy" => Ok(Method::Greedy),
            other => Err(Error::invalid(format!("unknown removal method `{other}`"))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A set of edge ids hitting every image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HittingSet {
    pub edges: Vec<u32>,
    pub optimal: bool,
}

fn reject_truncated(images: &HomImageSet) -> Result<()> {
    if images.truncated {
        return Err(Error::invalid("image set was truncated; a hitting set would not be complete"));
    }
    Ok(())
}

/// Greedy set cover: repeatedly take the edge lying in the most images not
/// yet hit, ties broken by the smallest edge id.
pub fn greedy_hitting_set(images: &HomImageSet) -> Result<Vec<u32>> {
    reject_truncated(images)?;
    Ok(greedy(&images.images))
}

fn greedy(images: &[Vec<u32>]) -> Vec<u32> {
    let mut hit = vec![false; images.len()];
    let mut chosen = Vec::new();
    loop {
        let mut counts: std::collections::BTreeMap<u32, usize> = Default::default();
        for (img, _) in images.iter().zip(&hit).filter(|(_, &h)| !h) {
            for &e in img {
                *counts.entry(e).or_default() += 1;
            }
        }
        // BTreeMap iterates ids ascending, so max_by_key keeping the first max needs reversal
        let Some((&best, _)) = counts.iter().rev().max_by_key(|(_, &c)| c) else {
            break;
        };
        chosen.push(best);
        for (img, h) in images.iter().zip(hit.iter_mut()) {
            if !*h && img.contains(&best) {
                *h = true;
            }
        }
    }
    chosen.sort_unstable();
    chosen
}

/// Minimum hitting set by branch and bound.
///
/// Images that contain another image are dropped first. The search branches
/// on the edges of the smallest image not yet hit, forbidding the earlier
/// alternatives in later branches, and prunes with a disjoint-image packing
/// bound. When more than `budget` nodes would be expanded the greedy result is
/// returned with `optimal = false`.
pub fn exact_hitting_set(images: &HomImageSet, budget: u64) -> Result<HittingSet> {
    reject_truncated(images)?;
    let greedy_set = greedy(&images.images);
    let reduced = minimal_images(&images.images);

    let universe: Vec<u32> = reduced.iter().flatten().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let local: Vec<Vec<usize>> = reduced
        .iter()
        .map(|img| img.iter().map(|e| universe.binary_search(e).unwrap()).collect())
        .collect();

    let mut search = Search {
        images: &local,
        chosen: vec![false; universe.len()],
        forbidden: vec![false; universe.len()],
        current: Vec::new(),
        best: None,
        best_len: greedy_set.len(),
        nodes: 0,
        budget,
    };
    let complete = search.run();
    if !complete {
        return Ok(HittingSet {
            edges: greedy_set,
            optimal: false,
        });
    }
    let edges = match search.best {
        Some(best) => {
            let mut e: Vec<u32> = best.into_iter().map(|i| universe[i]).collect();
            e.sort_unstable();
            e
        }
        None => greedy_set,
    };
    Ok(HittingSet {
        edges,
        optimal: true,
    })
}

/// Deduplicated images with every image that strictly contains another removed.
fn minimal_images(images: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut sorted: Vec<&Vec<u32>> = images.iter().collect();
    sorted.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    sorted.dedup();
    let mut kept: Vec<Vec<u32>> = Vec::new();
    for img in sorted {
        let dominated = kept
            .iter()
            .any(|k| k.iter().all(|e| img.binary_search(e).is_ok()));
        if !dominated {
            kept.push(img.clone());
        }
    }
    kept
}

struct Search<'a> {
    images: &'a [Vec<usize>],
    chosen: Vec<bool>,
    forbidden: Vec<bool>,
    current: Vec<usize>,
    best: Option<Vec<usize>>,
    best_len: usize,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn is_hit(&self, img: &[usize]) -> bool {
        img.iter().any(|&e| self.chosen[e])
    }

    /// Number of pairwise disjoint open images, chosen greedily.
    fn packing_bound(&self, open: &[usize]) -> usize {
        let mut used = vec![false; self.chosen.len()];
        let mut count = 0;
        for &i in open {
            let img = &self.images[i];
            if img.iter().all(|&e| !used[e]) {
                count += 1;
                for &e in img {
                    used[e] = true;
                }
            }
        }
        count
    }

    /// Returns false when the node budget ran out.
    fn run(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            return false;
        }
        let mut open: Vec<usize> = (0..self.images.len())
            .filter(|&i| !self.is_hit(&self.images[i]))
            .collect();
        if open.is_empty() {
            if self.best.is_none() || self.current.len() < self.best_len {
                self.best_len = self.current.len();
                self.best = Some(self.current.clone());
            }
            return true;
        }
        open.sort_by_key(|&i| (self.images[i].iter().filter(|&&e| !self.forbidden[e]).count(), i));
        // a bound equal to the incumbent cannot improve it; the greedy size
        // counts as an incumbent even before anything is recorded
        let bound = self.current.len() + self.packing_bound(&open);
        let target = if self.best.is_none() { self.best_len + 1 } else { self.best_len };
        if bound >= target {
            return true;
        }
        let branch = open[0];
        let candidates: Vec<usize> = self.images[branch]
            .iter()
            .copied()
            .filter(|&e| !self.forbidden[e])
            .collect();
        let mut newly_forbidden = Vec::new();
        let mut complete = true;
        for e in candidates {
            self.chosen[e] = true;
            self.current.push(e);
            complete = self.run();
            self.current.pop();
            self.chosen[e] = false;
            if !complete {
                break;
            }
            self.forbidden[e] = true;
            newly_forbidden.push(e);
        }
        for e in newly_forbidden {
            self.forbidden[e] = false;
        }
        complete
    }
}

/// Outcome of a removal experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct RemovalResult {
    /// Removed edges of `H`, as vertex tuples in lexicographic order.
    pub removed: Vec<Vec<u32>>,
    /// `|L| / C(n, k)`
    pub removed_fraction: BigRational,
    /// `t(K, H \ L)`, recomputed by full homomorphism counting.
    pub residual: BigRational,
    pub method: Method,
    pub optimal: bool,
    /// Residual is zero and the image enumeration was complete.
    pub verified: bool,
    pub images: usize,
    pub truncated: bool,
    pub edges: usize,
}

impl RemovalResult {
    pub fn csv_row(&self, instance: &str) -> String {
        format!(
            "{instance},{},{},{},{},{},{},{}",
            self.edges,
            self.images,
            self.method,
            self.removed.len(),
            self.removed_fraction,
            self.residual,
            self.verified
        )
    }
}

/// Finds `L` with the default image cap and search budget.
pub fn removal_experiment(k: &UniformHypergraph, h: &UniformHypergraph, method: Method) -> Result<RemovalResult> {
    removal_experiment_with(k, h, method, DEFAULT_IMAGE_CAP, DEFAULT_SEARCH_BUDGET)
}

pub fn removal_experiment_with(
    k: &UniformHypergraph,
    h: &UniformHypergraph,
    method: Method,
    cap: usize,
    budget: u64,
) -> Result<RemovalResult> {
    if k.edge_count() == 0 {
        return Err(Error::invalid("pattern must have at least one edge"));
    }
    let images = enumerate_hom_images(k, h, cap)?;
    let (ids, optimal) = if images.truncated {
        // Hit what was seen; the recount below decides whether anything survives.
        (greedy(&images.images), false)
    } else {
        match method {
            Method::Greedy => (greedy_hitting_set(&images)?, false),
            Method::Exact => {
                let hs = exact_hitting_set(&images, budget)?;
                (hs.edges, hs.optimal)
            }
        }
    };
    let ids: Vec<usize> = ids.into_iter().map(|e| e as usize).collect();
    let remaining = h.without_edges(&ids);
    let residual = if h.n_vertices() == 0 {
        BigRational::zero()
    } else {
        hom_density(k, &remaining)?.0
    };
    let total = binomial_big(h.n_vertices() as u64, h.arity() as u64);
    let removed_fraction = if total.is_zero() {
        BigRational::zero()
    } else {
        BigRational::new(BigInt::from(ids.len()), BigInt::from(total))
    };
    Ok(RemovalResult {
        removed: ids.iter().map(|&i| h.edge(i).to_vec()).collect(),
        removed_fraction,
        verified: residual.is_zero() && !images.truncated,
        residual,
        method,
        optimal,
        images: images.len(),
        truncated: images.truncated,
        edges: h.edge_count(),
    })
}
