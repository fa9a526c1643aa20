use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::hypergraph::UniformHypergraph;
use crate::hypergraphon::{StepHypergraphon, ValueKind};
use crate::subsets::{binomial, for_each_subset, SubsetIndexing};

use super::partition::Hyperpartition;

/// The class labels of all nonempty subsets of a `k`-set, one per coordinate
/// in [`SubsetIndexing`] order, reduced to the lexicographically least
/// member of its `S_k`-orbit. Two `k`-subsets lie in the same cell iff their
/// profiles are equal.
///
/// Profiles use the same canonical form as the boxes of a
/// [`StepHypergraphon`], so a profile is directly a box vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellProfile(pub Vec<u16>);

impl fmt::Display for CellProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(":")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// Size and edge count of one cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CellStats {
    pub size: u64,
    pub edges: u64,
}

impl CellStats {
    pub fn density(&self) -> BigRational {
        BigRational::new(BigInt::from(self.edges), BigInt::from(self.size))
    }
}

/// Profile of every `k`-subset, indexed by its lexicographic rank.
pub fn induce_cells(p: &Hyperpartition) -> Vec<CellProfile> {
    let k = p.arity();
    let indexing = SubsetIndexing::new(k).expect("partition arity is valid");
    let members: Vec<Vec<usize>> = (0..indexing.len()).map(|j| indexing.members(j)).collect();
    let mut out = Vec::with_capacity(p.ranker(k).count());
    let mut raw = vec![0u16; indexing.len()];
    let mut face = Vec::with_capacity(k);
    for_each_subset(p.n_vertices(), k, |e| {
        for (slot, m) in raw.iter_mut().zip(&members) {
            face.clear();
            face.extend(m.iter().map(|&i| e[i]));
            *slot = p.label(&face);
        }
        out.push(CellProfile(indexing.canonicalize(&raw)));
    });
    out
}

fn check_compatible(h: &UniformHypergraph, p: &Hyperpartition) -> Result<()> {
    if h.arity() != p.arity() {
        return Err(Error::ArityMismatch {
            left: h.arity(),
            right: p.arity(),
        });
    }
    if h.n_vertices() != p.n_vertices() {
        return Err(Error::invalid(format!(
            "hypergraph has {} vertices, partition has {}",
            h.n_vertices(),
            p.n_vertices()
        )));
    }
    Ok(())
}

/// Size and edge count of every nonempty cell.
pub fn cell_stats(h: &UniformHypergraph, p: &Hyperpartition) -> Result<BTreeMap<CellProfile, CellStats>> {
    check_compatible(h, p)?;
    let profiles = induce_cells(p);
    let ranker = p.ranker(p.arity());
    let mut is_edge = vec![false; profiles.len()];
    for e in h.edges() {
        is_edge[ranker.rank(e)] = true;
    }
    let mut stats: BTreeMap<CellProfile, CellStats> = BTreeMap::new();
    for (profile, edge) in profiles.into_iter().zip(is_edge) {
        let s = stats.entry(profile).or_default();
        s.size += 1;
        s.edges += u64::from(edge);
    }
    Ok(stats)
}

/// Edge density of `H` inside every nonempty cell: the conditional
/// expectation of the edge indicator on the cell partition.
pub fn cell_density(h: &UniformHypergraph, p: &Hyperpartition) -> Result<BTreeMap<CellProfile, BigRational>> {
    Ok(cell_stats(h, p)?
        .into_iter()
        .map(|(c, s)| (c, s.density()))
        .collect())
}

/// The union `T` of cells with edge density strictly above 1/2 and the
/// resulting `|H △ T|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellApproximation {
    pub cells: BTreeSet<CellProfile>,
    pub symmetric_difference: u64,
    /// `C(n, k)`
    pub total: u64,
}

impl CellApproximation {
    /// `|H △ T| / C(n, k)`
    pub fn fraction(&self) -> BigRational {
        if self.total == 0 {
            return BigRational::zero();
        }
        BigRational::new(
            BigInt::from(self.symmetric_difference),
            BigInt::from(self.total),
        )
    }
}

pub fn cell_approximation(h: &UniformHypergraph, p: &Hyperpartition) -> Result<CellApproximation> {
    let stats = cell_stats(h, p)?;
    let mut cells = BTreeSet::new();
    let mut symmetric_difference = 0;
    for (c, s) in stats {
        if 2 * s.edges > s.size {
            symmetric_difference += s.size - s.edges;
            cells.insert(c);
        } else {
            symmetric_difference += s.edges;
        }
    }
    Ok(CellApproximation {
        cells,
        symmetric_difference,
        total: binomial(p.n_vertices() as u64, p.arity() as u64).unwrap_or(u64::MAX),
    })
}

/// Step hypergraphon at the partition's resolution whose value on the box
/// orbit of each profile is that cell's edge density; empty cells get 0.
pub fn extract_step_hypergraphon(h: &UniformHypergraph, p: &Hyperpartition) -> Result<StepHypergraphon> {
    let stats = cell_stats(h, p)?;
    StepHypergraphon::from_entries(
        p.arity(),
        p.resolution(),
        ValueKind::Projected,
        stats
            .into_iter()
            .map(|(c, s)| (c.0, s.edges as f64 / s.size as f64)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regularity::partition::random_hyperpartition;
    use num_traits::One;

    #[test]
    fn trivial_partition_has_one_cell() {
        let p = random_hyperpartition(3, 6, 1, 0).unwrap();
        let cells: BTreeSet<_> = induce_cells(&p).into_iter().collect();
        assert_eq!(cells.len(), 1);
    }

    #[test]
    fn explicit_pair_partition() {
        // vertices 0,1,2 in class 0 and 3,4,5 in class 1; pair class by parity of the sum
        let v: Vec<u16> = vec![0, 0, 0, 1, 1, 1];
        let mut pairs = Vec::new();
        for_each_subset(6, 2, |s| pairs.push(((s[0] + s[1]) % 2) as u16));
        let p = Hyperpartition::new(2, 6, 2, vec![v, pairs]).unwrap();
        let cells: BTreeSet<_> = induce_cells(&p).into_iter().collect();
        assert!(cells.len() <= 6);
        // brute force over the instance: distinct (sorted vertex classes, pair class)
        let mut brute = BTreeSet::new();
        for_each_subset(6, 2, |s| {
            let mut vc = [p.label(&s[..1]), p.label(&s[1..])];
            vc.sort();
            brute.insert((vc, p.label(s)));
        });
        assert_eq!(cells.len(), brute.len());
    }

    #[test]
    fn profile_is_swap_invariant() {
        let idx = SubsetIndexing::new(2).unwrap();
        assert_eq!(idx.canonicalize(&[1u16, 0, 1]), idx.canonicalize(&[0u16, 1, 1]));
    }

    #[test]
    fn densities_and_weighted_sum() {
        let p = random_hyperpartition(3, 7, 2, 4).unwrap();
        let complete = UniformHypergraph::complete(3, 7).unwrap();
        assert!(cell_density(&complete, &p).unwrap().values().all(|d| d.is_one()));
        let h = UniformHypergraph::from_edges(3, 7, [[0, 1, 2], [1, 3, 5], [2, 4, 6], [0, 5, 6]]).unwrap();
        let stats = cell_stats(&h, &p).unwrap();
        let weighted: BigRational = stats
            .values()
            .map(|s| BigRational::from_integer(s.size.into()) * s.density())
            .sum();
        assert_eq!(weighted, BigRational::from_integer(4.into()));
    }

    #[test]
    fn approximation_examples() {
        let p = random_hyperpartition(2, 6, 1, 0).unwrap();
        let complete = UniformHypergraph::complete(2, 6).unwrap();
        assert!(cell_approximation(&complete, &p).unwrap().fraction().is_zero());
        let minus_one = complete.without_edges(&[3]);
        let approx = cell_approximation(&minus_one, &p).unwrap();
        assert_eq!(approx.fraction(), BigRational::new(1.into(), 15.into()));
        assert_eq!(approx.cells.len(), 1);
    }

    #[test]
    fn union_of_cells_is_exact() {
        let p = random_hyperpartition(2, 8, 2, 11).unwrap();
        let profiles = induce_cells(&p);
        let chosen = profiles[0].clone();
        let edges: Vec<Vec<u32>> = crate::subsets::subsets(8, 2)
            .into_iter()
            .zip(&profiles)
            .filter(|(_, c)| **c == chosen)
            .map(|(e, _)| e)
            .collect();
        let h = UniformHypergraph::from_edges(2, 8, edges).unwrap();
        assert!(cell_approximation(&h, &p).unwrap().fraction().is_zero());
    }

    #[test]
    fn mismatched_inputs_rejected() {
        let p = random_hyperpartition(2, 6, 2, 0).unwrap();
        assert!(cell_stats(&UniformHypergraph::complete(2, 5).unwrap(), &p).is_err());
        assert!(cell_stats(&UniformHypergraph::complete(3, 6).unwrap(), &p).is_err());
    }

    #[test]
    fn extraction_of_complete_is_one() {
        let p = random_hyperpartition(2, 9, 2, 2).unwrap();
        let h = UniformHypergraph::complete(2, 9).unwrap();
        let w = extract_step_hypergraphon(&h, &p).unwrap();
        assert_eq!(w.kind(), ValueKind::Projected);
        let populated: BTreeSet<_> = induce_cells(&p).into_iter().collect();
        for c in populated {
            assert_eq!(w.value_at_box(&c.0), 1.0);
        }
    }
}
