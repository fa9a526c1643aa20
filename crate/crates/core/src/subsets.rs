//! Subset combinatorics shared by every other module.
//!
//! Two kinds of subsets show up here. Subsets of the coordinate set `[k]`
//! (at most 4 elements) are stored as bitmasks and listed by
//! [`SubsetIndexing`]. Subsets of a vertex set `{0..n-1}` are sorted `u32`
//! slices, enumerated in lexicographic order and ranked by [`SubsetRanker`].

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

/// Largest supported arity. The coordinate cube has `2^k - 1` axes, so grids
/// and cell enumerations grow doubly exponentially in `k`.
pub const MAX_ARITY: usize = 4;

pub(crate) fn check_arity(k: usize) -> Result<()> {
    if (1..=MAX_ARITY).contains(&k) {
        Ok(())
    } else {
        Err(Error::UnsupportedArity(k))
    }
}

/// `C(n, k)` as a `u64`; `None` on overflow. Zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return None;
        }
    }
    Some(acc as u64)
}

/// `C(n, k)` with arbitrary precision.
pub fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// All permutations of `0..k` in lexicographic order; `perm[i]` is the image of `i`.
pub fn permutations(k: usize) -> Vec<Vec<u8>> {
    let mut current: Vec<u8> = (0..k as u8).collect();
    let mut out = vec![current.clone()];
    // Narayana's next-permutation.
    while let Some(i) = (1..k).rev().find(|&i| current[i - 1] < current[i]) {
        let j = (i..k).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
        out.push(current.clone());
    }
    out
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order.
pub fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[u32])) {
    if k > n {
        return;
    }
    let mut c: Vec<u32> = (0..k as u32).collect();
    loop {
        f(&c);
        let Some(i) = (0..k).rev().find(|&i| (c[i] as usize) < n - k + i) else {
            return;
        };
        c[i] += 1;
        for j in i + 1..k {
            c[j] = c[j - 1] + 1;
        }
    }
}

/// All `k`-subsets of `0..n`, lexicographic.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for_each_subset(n, k, |s| out.push(s.to_vec()));
    out
}

/// Lexicographic rank of `k`-subsets of `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetRanker {
    n: usize,
    k: usize,
    // binom[a * (k + 1) + b] = C(a, b)
    binom: Vec<u64>,
    count: u64,
}

impl SubsetRanker {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        let count = binomial(n as u64, k as u64)
            .filter(|&c| c <= usize::MAX as u64)
            .ok_or_else(|| Error::BudgetExceeded(format!("C({n},{k}) does not fit in memory")))?;
        let mut binom = vec![0u64; (n + 1) * (k + 1)];
        for a in 0..=n {
            for b in 0..=k {
                binom[a * (k + 1) + b] = binomial(a as u64, b as u64).unwrap_or(u64::MAX);
            }
        }
        Ok(SubsetRanker { n, k, binom, count })
    }

    pub fn count(&self) -> usize {
        self.count as usize
    }

    fn c(&self, a: usize, b: usize) -> u64 {
        self.binom[a * (self.k + 1) + b]
    }

    /// Rank of a strictly increasing subset.
    pub fn rank(&self, subset: &[u32]) -> usize {
        debug_assert_eq!(subset.len(), self.k);
        let mut tail = 0u64;
        for (i, &v) in subset.iter().enumerate() {
            tail += self.c(self.n - 1 - v as usize, self.k - i);
        }
        (self.count - 1 - tail) as usize
    }

    pub fn unrank(&self, rank: usize) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.k);
        let mut remaining = rank as u64;
        let mut v = 0usize;
        for i in 0..self.k {
            loop {
                let block = self.c(self.n - 1 - v, self.k - 1 - i);
                if remaining < block {
                    break;
                }
                remaining -= block;
                v += 1;
            }
            out.push(v as u32);
            v += 1;
        }
        out
    }
}

/// Canonical list `A_1 .. A_{2^k-1}` of the nonempty subsets of `[k]`, with
/// the induced action of `S_k` on coordinate vectors indexed by them.
///
/// Order is by size, then lexicographic on sorted members, so for `k = 3`:
/// `{1},{2},{3},{1,2},{1,3},{2,3},{1,2,3}`. The full set `[k]` is always last.
#[derive(Debug, Clone)]
pub struct SubsetIndexing {
    k: usize,
    masks: Vec<u8>,
    position: [usize; 16],
    perms: Vec<Vec<u8>>,
    // remap[p][i] = index of perms[p](A_i)
    remap: Vec<Vec<usize>>,
}

impl SubsetIndexing {
    pub fn new(k: usize) -> Result<Self> {
        check_arity(k)?;
        let mut masks: Vec<u8> = (1..(1u8 << k)).collect();
        masks.sort_by_key(|&m| (m.count_ones(), mask_members(m)));
        let mut position = [usize::MAX; 16];
        for (i, &m) in masks.iter().enumerate() {
            position[m as usize] = i;
        }
        let perms = permutations(k);
        let remap = perms
            .iter()
            .map(|p| {
                masks
                    .iter()
                    .map(|&m| position[apply_to_mask(p, m) as usize])
                    .collect()
            })
            .collect();
        Ok(SubsetIndexing {
            k,
            masks,
            position,
            perms,
            remap,
        })
    }

    pub fn arity(&self) -> usize {
        self.k
    }

    /// Number of coordinates, `2^k - 1`.
    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    /// Index of the coordinate belonging to `[k]` itself.
    pub fn top(&self) -> usize {
        self.masks.len() - 1
    }

    /// Bitmask of `A_i` (bit `j` set iff `j` is a member, 0-based).
    pub fn mask(&self, index: usize) -> u8 {
        self.masks[index]
    }

    pub fn masks(&self) -> &[u8] {
        &self.masks
    }

    /// 0-based members of `A_i`, increasing.
    pub fn members(&self, index: usize) -> Vec<usize> {
        mask_members(self.masks[index])
    }

    pub fn index_of_mask(&self, mask: u8) -> Option<usize> {
        self.position
            .get(mask as usize)
            .copied()
            .filter(|&p| p != usize::MAX)
    }

    /// The `k!` permutations, lexicographic; indices into this list name group elements.
    pub fn permutations(&self) -> &[Vec<u8>] {
        &self.perms
    }

    /// Index remap of `A -> π(A)` for permutation number `p`.
    pub fn remap(&self, p: usize) -> &[usize] {
        &self.remap[p]
    }

    /// Index of `π ∘ ρ` (apply `ρ` first).
    pub fn compose(&self, pi: usize, rho: usize) -> usize {
        let composed: Vec<u8> = self.perms[rho]
            .iter()
            .map(|&x| self.perms[pi][x as usize])
            .collect();
        self.perms.iter().position(|p| *p == composed).unwrap()
    }

    /// `y^π`, the vector with `(y^π)_{π(A)} = y_A`, equivalently
    /// `(y^π)_A = y_{π^{-1}(A)}`.
    pub fn act<T: Copy>(&self, p: usize, y: &[T]) -> Vec<T> {
        let mut out = y.to_vec();
        self.act_into(p, y, &mut out);
        out
    }

    pub fn act_into<T: Copy>(&self, p: usize, y: &[T], out: &mut [T]) {
        for (i, &target) in self.remap[p].iter().enumerate() {
            out[target] = y[i];
        }
    }

    /// Lexicographically least element of the `S_k`-orbit of `y`.
    pub fn canonicalize<T: Copy + Ord>(&self, y: &[T]) -> Vec<T> {
        let mut best = y.to_vec();
        let mut scratch = y.to_vec();
        for p in 1..self.perms.len() {
            self.act_into(p, y, &mut scratch);
            if scratch < best {
                best.copy_from_slice(&scratch);
            }
        }
        best
    }

    pub fn is_canonical<T: Copy + Ord>(&self, y: &[T]) -> bool {
        self.canonicalize(y) == y
    }
}

fn mask_members(mask: u8) -> Vec<usize> {
    (0..8).filter(|&b| mask & (1 << b) != 0).collect()
}

fn apply_to_mask(perm: &[u8], mask: u8) -> u8 {
    mask_members(mask)
        .into_iter()
        .fold(0u8, |acc, b| acc | (1 << perm[b]))
}
