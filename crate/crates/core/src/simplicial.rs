use std::collections::HashMap;

use crate::error::Result;
use crate::hypergraph::UniformHypergraph;
use crate::subsets::SubsetIndexing;

/// The nonempty faces `C_1 .. C_s` of the simplicial complex spanned by the
/// edges of a hypergraph, plus, for each edge `E`, the face index of
/// `s_E(A_j)` for every coordinate `A_j`.
///
/// `s_E : [k] -> E` is the order-preserving bijection: the `i`-th element of
/// `[k]` goes to the `i`-th smallest vertex of `E`. Faces are ordered by size,
/// then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialSupport {
    faces: Vec<Vec<u32>>,
    edge_coordinates: Vec<Vec<usize>>,
}

impl SimplicialSupport {
    pub fn of(k: &UniformHypergraph) -> Result<Self> {
        let indexing = SubsetIndexing::new(k.arity())?;
        Ok(Self::with_indexing(k, &indexing))
    }

    pub fn with_indexing(k: &UniformHypergraph, indexing: &SubsetIndexing) -> Self {
        let edge_faces: Vec<Vec<Vec<u32>>> = k
            .edges()
            .map(|e| {
                (0..indexing.len())
                    .map(|j| indexing.members(j).into_iter().map(|i| e[i]).collect())
                    .collect()
            })
            .collect();
        let mut faces: Vec<Vec<u32>> = edge_faces.iter().flatten().cloned().collect();
        faces.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        faces.dedup();
        let position: HashMap<&[u32], usize> = faces
            .iter()
            .enumerate()
            .map(|(i, f)| (f.as_slice(), i))
            .collect();
        let edge_coordinates = edge_faces
            .iter()
            .map(|fs| fs.iter().map(|f| position[f.as_slice()]).collect())
            .collect();
        SimplicialSupport {
            faces,
            edge_coordinates,
        }
    }

    /// `s = |C_K|`.
    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn faces(&self) -> &[Vec<u32>] {
        &self.faces
    }

    /// For edge number `e` of the source hypergraph, the face index of each
    /// coordinate `A_1 .. A_{2^k-1}` pulled back through `s_E`.
    pub fn edge_coordinates(&self, e: usize) -> &[usize] {
        &self.edge_coordinates[e]
    }

    pub fn edge_count(&self) -> usize {
        self.edge_coordinates.len()
    }
}
