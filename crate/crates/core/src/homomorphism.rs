//! Exact homomorphism counting and homomorphism-image enumeration.
//!
//! A homomorphism `K -> H` is any vertex map (injective or not) that sends
//! every edge of `K` onto an edge of `H`. The search assigns the non-isolated
//! vertices of `K` one at a time, in descending order of degree (ties by id),
//! and rejects a partial map as soon as an edge whose vertices are all
//! assigned misses `H`. Isolated vertices of `K` contribute a factor `|V(H)|`
//! each and are never enumerated. The first assigned vertex is split across
//! the rayon pool; integer results make the reduction order irrelevant.

use std::cmp::Reverse;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hypergraph::UniformHypergraph;
use crate::subsets::MAX_ARITY;

/// Default cap on the number of distinct homomorphism images.
pub const DEFAULT_IMAGE_CAP: usize = 1_000_000;

/// `hom(K, H)` together with the size of the map space `|V(H)|^{|V(K)|}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomCount {
    pub count: BigUint,
    pub domain_size: BigUint,
}

impl HomCount {
    pub fn density(&self) -> Result<HomDensity> {
        if self.domain_size.is_zero() {
            return Err(Error::EmptyDomain("target has no vertices".into()));
        }
        Ok(HomDensity(BigRational::new(
            BigInt::from(self.count.clone()),
            BigInt::from(self.domain_size.clone()),
        )))
    }
}

/// `t(K, H)`: the probability that a uniformly random vertex map is a homomorphism.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct HomDensity(pub BigRational);

impl HomDensity {
    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.0)
    }
}

impl fmt::Display for HomDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Distinct edge images `{f(e) : e ∈ E(K)}` over all homomorphisms `f`.
///
/// Each image is a sorted list of edge ids of `H`; images are listed in
/// lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomImageSet {
    pub images: Vec<Vec<u32>>,
    pub truncated: bool,
}

impl HomImageSet {
    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// Distinct edge ids appearing in any image, ascending.
    pub fn edge_universe(&self) -> Vec<u32> {
        let set: BTreeSet<u32> = self.images.iter().flatten().copied().collect();
        set.into_iter().collect()
    }
}

/// Assignment order and per-depth edge checks for one pattern `K`.
struct SearchPlan {
    order: Vec<usize>,
    // checks[d]: (edge number in K, depths of its vertices) for edges completed at depth d
    checks: Vec<Vec<(usize, [usize; MAX_ARITY])>>,
    arity: usize,
    edge_count: usize,
    isolated: usize,
}

impl SearchPlan {
    fn new(k: &UniformHypergraph) -> Self {
        let degrees = k.degrees();
        let mut order: Vec<usize> = (0..k.n_vertices()).filter(|&v| degrees[v] > 0).collect();
        order.sort_by_key(|&v| (Reverse(degrees[v]), v));
        let mut depth_of = vec![usize::MAX; k.n_vertices()];
        for (d, &v) in order.iter().enumerate() {
            depth_of[v] = d;
        }
        let mut checks = vec![Vec::new(); order.len()];
        for (id, e) in k.edges().enumerate() {
            let mut depths = [0usize; MAX_ARITY];
            for (slot, &v) in depths.iter_mut().zip(e) {
                *slot = depth_of[v as usize];
            }
            let last = depths[..k.arity()].iter().copied().max().unwrap();
            checks[last].push((id, depths));
        }
        SearchPlan {
            isolated: k.n_vertices() - order.len(),
            order,
            checks,
            arity: k.arity(),
            edge_count: k.edge_count(),
        }
    }

    /// Edge ids (in `H`) of every edge completed at `depth`, or `None` if one misses.
    #[inline]
    fn check(
        &self,
        h: &UniformHypergraph,
        depth: usize,
        assignment: &[u32],
        mut record: impl FnMut(usize, u32),
    ) -> bool {
        let mut tuple = [0u32; MAX_ARITY];
        for (edge, depths) in &self.checks[depth] {
            for i in 0..self.arity {
                tuple[i] = assignment[depths[i]];
            }
            match h.tuple_edge_id(&tuple[..self.arity]) {
                Some(id) => record(*edge, id),
                None => return false,
            }
        }
        true
    }

    fn count_from(&self, h: &UniformHypergraph, depth: usize, assignment: &mut [u32]) -> u64 {
        let n = h.n_vertices() as u32;
        let last = depth + 1 == self.order.len();
        let mut total = 0u64;
        for v in 0..n {
            assignment[depth] = v;
            if !self.check(h, depth, assignment, |_, _| {}) {
                continue;
            }
            total += if last {
                1
            } else {
                self.count_from(h, depth + 1, assignment)
            };
        }
        total
    }

    fn images_from(
        &self,
        h: &UniformHypergraph,
        depth: usize,
        assignment: &mut [u32],
        image: &mut [u32],
        out: &mut BTreeSet<Vec<u32>>,
        limit: usize,
    ) -> bool {
        let n = h.n_vertices() as u32;
        for v in 0..n {
            assignment[depth] = v;
            if !self.check(h, depth, assignment, |e, id| image[e] = id) {
                continue;
            }
            if depth + 1 == self.order.len() {
                let mut key = image.to_vec();
                key.sort_unstable();
                key.dedup();
                out.insert(key);
                if out.len() > limit {
                    return false;
                }
            } else if !self.images_from(h, depth + 1, assignment, image, out, limit) {
                return false;
            }
        }
        true
    }
}

fn check_arities(k: &UniformHypergraph, h: &UniformHypergraph) -> Result<()> {
    if k.arity() != h.arity() {
        return Err(Error::ArityMismatch {
            left: k.arity(),
            right: h.arity(),
        });
    }
    Ok(())
}

/// `hom(K, H)`, the number of maps `V(K) -> V(H)` sending edges to edges.
pub fn hom_count(k: &UniformHypergraph, h: &UniformHypergraph) -> Result<HomCount> {
    check_arities(k, h)?;
    let n = BigUint::from(h.n_vertices());
    let domain_size = Pow::pow(&n, k.n_vertices());
    let plan = SearchPlan::new(k);
    let searched: u128 = if plan.order.is_empty() {
        1
    } else {
        (0..h.n_vertices() as u32)
            .into_par_iter()
            .map(|v| {
                let mut assignment = vec![0u32; plan.order.len()];
                assignment[0] = v;
                if !plan.check(h, 0, &assignment, |_, _| {}) {
                    return 0u128;
                }
                if plan.order.len() == 1 {
                    1
                } else {
                    u128::from(plan.count_from(h, 1, &mut assignment))
                }
            })
            .sum()
    };
    let count = BigUint::from(searched) * Pow::pow(&n, plan.isolated);
    Ok(HomCount { count, domain_size })
}

/// `t(K, H) = hom(K, H) / |V(H)|^{|V(K)|}`, exact.
pub fn hom_density(k: &UniformHypergraph, h: &UniformHypergraph) -> Result<HomDensity> {
    check_arities(k, h)?;
    if h.n_vertices() == 0 {
        return Err(Error::EmptyDomain("target has no vertices".into()));
    }
    hom_count(k, h)?.density()
}

/// All distinct edge images of homomorphisms `K -> H`, up to `cap` of them.
///
/// When more than `cap` distinct images exist the result holds the `cap`
/// lexicographically smallest ones that were found and `truncated` is set.
pub fn enumerate_hom_images(
    k: &UniformHypergraph,
    h: &UniformHypergraph,
    cap: usize,
) -> Result<HomImageSet> {
    check_arities(k, h)?;
    if k.edge_count() == 0 {
        return Err(Error::invalid("pattern must have at least one edge"));
    }
    let plan = SearchPlan::new(k);
    let branches: Vec<(BTreeSet<Vec<u32>>, bool)> = (0..h.n_vertices() as u32)
        .into_par_iter()
        .map(|v| {
            let mut assignment = vec![0u32; plan.order.len()];
            let mut image = vec![0u32; plan.edge_count];
            let mut found = BTreeSet::new();
            assignment[0] = v;
            if !plan.check(h, 0, &assignment, |e, id| image[e] = id) {
                return (found, true);
            }
            let complete = if plan.order.len() == 1 {
                let mut key = image.clone();
                key.sort_unstable();
                key.dedup();
                found.insert(key);
                true
            } else {
                plan.images_from(h, 1, &mut assignment, &mut image, &mut found, cap)
            };
            (found, complete)
        })
        .collect();
    let mut truncated = false;
    let mut all = BTreeSet::new();
    for (found, complete) in branches {
        truncated |= !complete;
        all.extend(found);
    }
    if all.len() > cap {
        truncated = true;
    }
    Ok(HomImageSet {
        images: all.into_iter().take(cap).collect(),
        truncated,
    })
}

/// `K1 ⊔ K2`: vertices of `K2` are shifted past those of `K1`.
pub fn disjoint_union(k1: &UniformHypergraph, k2: &UniformHypergraph) -> Result<UniformHypergraph> {
    check_arities(k1, k2)?;
    let offset = k1.n_vertices() as u32;
    let edges = k1
        .edges()
        .map(<[u32]>::to_vec)
        .chain(k2.edges().map(|e| e.iter().map(|v| v + offset).collect()))
        .collect::<Vec<Vec<u32>>>();
    UniformHypergraph::from_edges(k1.arity(), k1.n_vertices() + k2.n_vertices(), edges)
}

/// `|V|^n` helper exposed for oracles and reports.
pub fn map_space_size(n_target: usize, n_pattern: usize) -> BigUint {
    if n_pattern == 0 {
        return BigUint::one();
    }
    Pow::pow(&BigUint::from(n_target), n_pattern)
}
