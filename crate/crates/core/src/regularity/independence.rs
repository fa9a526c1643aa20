use crate::error::{Error, Result};
use crate::rng::derive_seed;
use crate::subsets::{binomial, check_arity};

use super::partition::random_hyperpartition;

/// Label for deriving the per-trial partition seeds of [`independence_test`].
pub const INDEPENDENCE_LABEL: &str = "independence";

/// Outcome of [`independence_test`].
#[derive(Debug, Clone, PartialEq)]
pub struct IndependenceStatistic {
    /// `max_trials |μ(S_1 ∩ … ∩ S_m) - μ(S_1)⋯μ(S_m)|`
    pub max_discrepancy: f64,
    /// `σ = sqrt(q(1-q)/C(n, a))` with `q = l^{-m}` and `a = max |A_i|`.
    pub sigma: f64,
    /// `4σ`
    pub bound: f64,
    pub trials: usize,
}

impl IndependenceStatistic {
    pub fn within_bound(&self) -> bool {
        self.max_discrepancy <= self.bound
    }
}

/// Finite check of total independence for random partitions.
///
/// `sets` are distinct nonempty subsets `A_i ⊆ [k]` given as bitmasks (bit
/// `j` for element `j+1`). Each trial draws a random `l`-hyperpartition; `S_i`
/// is the set of ordered `k`-tuples of distinct vertices whose
/// `A_i`-projection lies in class 0 at level `|A_i|`. The empirical measure of
/// the intersection is compared with the product of the marginals.
///
/// Under independence the intersection count over the `C(n, a)` distinct
/// top-level supports behaves like a binomial with success probability
/// `q = l^{-m}`; `sigma` is that binomial's standard error.
pub fn independence_test(
    k: usize,
    n: usize,
    l: usize,
    sets: &[u8],
    seed: u64,
    trials: usize,
) -> Result<IndependenceStatistic> {
    check_arity(k)?;
    if sets.is_empty() {
        return Err(Error::invalid("need at least one subset"));
    }
    if trials == 0 {
        return Err(Error::invalid("need at least one trial"));
    }
    if n < k {
        return Err(Error::invalid(format!("need at least {k} vertices, got {n}")));
    }
    let full = (1u8 << k) - 1;
    for (i, &a) in sets.iter().enumerate() {
        if a == 0 || a & !full != 0 {
            return Err(Error::invalid(format!("subset mask {a:#b} is not a nonempty subset of [{k}]")));
        }
        if sets[..i].contains(&a) {
            return Err(Error::invalid(format!("duplicate subset mask {a:#b}")));
        }
    }
    let members: Vec<Vec<usize>> = sets
        .iter()
        .map(|&a| (0..k).filter(|&j| a & (1 << j) != 0).collect())
        .collect();

    let mut max_discrepancy = 0.0f64;
    for t in 0..trials {
        let p = random_hyperpartition(k, n, l, derive_seed(seed, INDEPENDENCE_LABEL, &[t as u64]))?;
        let mut hits = vec![0u64; sets.len()];
        let mut joint = 0u64;
        let mut total = 0u64;
        let mut tuple = vec![0u32; k];
        let mut face = Vec::with_capacity(k);
        for_each_injective_tuple(n, k, &mut tuple, 0, &mut |x| {
            total += 1;
            let mut all = true;
            for (i, m) in members.iter().enumerate() {
                face.clear();
                face.extend(m.iter().map(|&j| x[j]));
                face.sort_unstable();
                if p.label(&face) == 0 {
                    hits[i] += 1;
                } else {
                    all = false;
                }
            }
            joint += u64::from(all);
        });
        let product: f64 = hits.iter().map(|&h| h as f64 / total as f64).product();
        let discrepancy = (joint as f64 / total as f64 - product).abs();
        max_discrepancy = max_discrepancy.max(discrepancy);
    }

    let q = (l as f64).powi(-(sets.len() as i32));
    let support = members.iter().map(Vec::len).max().unwrap();
    let units = binomial(n as u64, support as u64).unwrap_or(u64::MAX) as f64;
    let sigma = (q * (1.0 - q) / units).sqrt();
    Ok(IndependenceStatistic {
        max_discrepancy,
        sigma,
        bound: 4.0 * sigma,
        trials,
    })
}

fn for_each_injective_tuple(n: usize, k: usize, tuple: &mut [u32], depth: usize, f: &mut impl FnMut(&[u32])) {
    if depth == k {
        f(tuple);
        return;
    }
    for v in 0..n as u32 {
        if tuple[..depth].contains(&v) {
            continue;
        }
        tuple[depth] = v;
        for_each_injective_tuple(n, k, tuple, depth + 1, f);
    }
}
