//! Finite `k`-uniform hypergraphs on `{0..n-1}`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::io::{header, parse_field, ContentLines};
use crate::subsets::{binomial_big, check_arity, for_each_subset, MAX_ARITY};

/// Dense tuple tables are used while `n^k` stays below this many slots.
const DENSE_LIMIT: u128 = 1 << 22;

/// A finite `k`-uniform hypergraph.
///
/// Edges are strictly increasing vertex tuples stored flat in lexicographic
/// order. The symmetric tuple set `S_H` (all orderings of every edge) is never
/// materialized; it is answered by [`UniformHypergraph::symmetric_membership`]
/// through an internal lookup table.
#[derive(Clone)]
pub struct UniformHypergraph {
    arity: usize,
    n_vertices: usize,
    edges: Vec<u32>,
    lookup: EdgeLookup,
}

#[derive(Clone)]
enum EdgeLookup {
    /// Indexed by the ordered tuple in base `n`; holds edge id + 1, 0 when absent.
    /// Every ordering of an edge is filled, so lookups need no sorting.
    Dense(Vec<u32>),
    /// Keyed by the sorted tuple in base `n`.
    Hashed(HashMap<u64, u32>),
}

impl UniformHypergraph {
    /// Builds a hypergraph from edges given in any vertex order.
    ///
    /// Rejects out-of-range vertices, repeated vertices and duplicate edges.
    pub fn from_edges<I, E>(arity: usize, n_vertices: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[u32]>,
    {
        check_arity(arity)?;
        let mut sorted: Vec<Vec<u32>> = Vec::new();
        for e in edges {
            let e = e.as_ref();
            if e.len() != arity {
                return Err(Error::invalid(format!(
                    "edge {e:?} has {} vertices, expected {arity}",
                    e.len()
                )));
            }
            let mut e = e.to_vec();
            e.sort_unstable();
            if let Some(&v) = e.iter().find(|&&v| v as usize >= n_vertices) {
                return Err(Error::VertexOutOfRange {
                    vertex: v as usize,
                    n_vertices,
                });
            }
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::invalid(format!("edge {e:?} repeats a vertex")));
            }
            sorted.push(e);
        }
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!("duplicate edge {:?}", w[0])));
        }
        Self::from_canonical(arity, n_vertices, sorted.concat())
    }

    /// `edges` must already be flat, sorted within and across edges, duplicate free.
    pub(crate) fn from_canonical(arity: usize, n_vertices: usize, edges: Vec<u32>) -> Result<Self> {
        check_arity(arity)?;
        let slots = (n_vertices as u128).pow(arity as u32);
        if slots > u128::from(u64::MAX) || n_vertices > u32::MAX as usize {
            return Err(Error::invalid(format!(
                "{n_vertices} vertices is too many for arity {arity}"
            )));
        }
        let lookup = if slots <= DENSE_LIMIT {
            let mut table = vec![0u32; slots as usize];
            let mut buf = [0u32; MAX_ARITY];
            for (id, e) in edges.chunks_exact(arity).enumerate() {
                for_each_ordering(e, &mut buf[..arity], &mut |t| {
                    table[tuple_key(t, n_vertices) as usize] = id as u32 + 1;
                });
            }
            EdgeLookup::Dense(table)
        } else {
            EdgeLookup::Hashed(
                edges
                    .chunks_exact(arity)
                    .enumerate()
                    .map(|(id, e)| (tuple_key(e, n_vertices), id as u32))
                    .collect(),
            )
        };
        Ok(UniformHypergraph {
            arity,
            n_vertices,
            edges,
            lookup,
        })
    }

    /// Hypergraph with no edges.
    pub fn empty(arity: usize, n_vertices: usize) -> Result<Self> {
        Self::from_canonical(arity, n_vertices, Vec::new())
    }

    /// `K_k(n)`: all `k`-subsets of `n` vertices. Empty when `k > n`.
    pub fn complete(arity: usize, n_vertices: usize) -> Result<Self> {
        check_arity(arity)?;
        let mut edges = Vec::new();
        for_each_subset(n_vertices, arity, |s| edges.extend_from_slice(s));
        Self::from_canonical(arity, n_vertices, edges)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len() / self.arity
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> impl ExactSizeIterator<Item = &[u32]> + '_ {
        self.edges.chunks_exact(self.arity)
    }

    pub fn edge(&self, id: usize) -> &[u32] {
        &self.edges[id * self.arity..(id + 1) * self.arity]
    }

    /// Edge id of the set of vertices in `tuple` (any order). `None` when the
    /// tuple repeats a vertex or is not an edge. Entries must be in range.
    #[inline]
    pub fn tuple_edge_id(&self, tuple: &[u32]) -> Option<u32> {
        debug_assert_eq!(tuple.len(), self.arity);
        match &self.lookup {
            EdgeLookup::Dense(table) => {
                let id = table[tuple_key(tuple, self.n_vertices) as usize];
                id.checked_sub(1)
            }
            EdgeLookup::Hashed(map) => {
                let mut buf = [0u32; MAX_ARITY];
                let sorted = &mut buf[..self.arity];
                sorted.copy_from_slice(tuple);
                sorted.sort_unstable();
                if sorted.windows(2).any(|w| w[0] == w[1]) {
                    return None;
                }
                map.get(&tuple_key(sorted, self.n_vertices)).copied()
            }
        }
    }

    #[inline]
    pub(crate) fn contains_tuple(&self, tuple: &[u32]) -> bool {
        self.tuple_edge_id(tuple).is_some()
    }

    /// Membership of an ordered tuple in the symmetric tuple set `S_H`: true
    /// iff the entries are distinct and form an edge.
    pub fn symmetric_membership(&self, tuple: &[u32]) -> Result<bool> {
        if tuple.len() != self.arity {
            return Err(Error::ArityMismatch {
                left: tuple.len(),
                right: self.arity,
            });
        }
        if let Some(&v) = tuple.iter().find(|&&v| v as usize >= self.n_vertices) {
            return Err(Error::VertexOutOfRange {
                vertex: v as usize,
                n_vertices: self.n_vertices,
            });
        }
        Ok(self.contains_tuple(tuple))
    }

    /// `|E(H)| / C(n, k)`, exact.
    pub fn edge_density(&self) -> Result<BigRational> {
        if self.n_vertices < self.arity {
            return Err(Error::UndefinedDensity {
                n_vertices: self.n_vertices,
                arity: self.arity,
            });
        }
        let total = binomial_big(self.n_vertices as u64, self.arity as u64);
        Ok(BigRational::new(
            BigInt::from(self.edge_count()),
            BigInt::from(total),
        ))
    }

    /// Vertex degrees (number of incident edges).
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n_vertices];
        for &v in &self.edges {
            deg[v as usize] += 1;
        }
        deg
    }

    /// Copy of `self` without the edges whose ids are listed.
    pub fn without_edges(&self, ids: &[usize]) -> Self {
        let mut drop = vec![false; self.edge_count()];
        for &id in ids {
            drop[id] = true;
        }
        let edges: Vec<u32> = self
            .edges()
            .zip(&drop)
            .filter(|(_, &d)| !d)
            .flat_map(|(e, _)| e.iter().copied())
            .collect();
        Self::from_canonical(self.arity, self.n_vertices, edges)
            .expect("a subgraph of a valid hypergraph is valid")
    }

    /// Parses the HG text format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = ContentLines::new(text);
        let h = Self::parse_from(&mut lines)?;
        lines.expect_end()?;
        Ok(h)
    }

    pub(crate) fn parse_from(lines: &mut ContentLines<'_>) -> Result<Self> {
        let (line, text) = lines.expect_line("`HG` header")?;
        let fields = header(line, text, "HG", 3)?;
        let arity: usize = parse_field(line, fields[0], "arity")?;
        let n_vertices: usize = parse_field(line, fields[1], "vertex count")?;
        let m: usize = parse_field(line, fields[2], "edge count")?;
        if !(1..=MAX_ARITY).contains(&arity) {
            return Err(Error::parse(
                line,
                format!("arity {arity} is outside the supported range 1..={MAX_ARITY}"),
            ));
        }
        let mut edges: Vec<(Vec<u32>, usize)> = Vec::with_capacity(m);
        for _ in 0..m {
            let (line, text) = lines.expect_line("an edge line")?;
            let mut edge = Vec::with_capacity(arity);
            for tok in text.split_whitespace() {
                let v: u32 = parse_field(line, tok, "vertex id")?;
                if v as usize >= n_vertices {
                    return Err(Error::parse(
                        line,
                        format!("vertex {v} out of range for {n_vertices} vertices"),
                    ));
                }
                edge.push(v);
            }
            if edge.len() != arity {
                return Err(Error::parse(
                    line,
                    format!("edge has {} vertices, expected {arity}", edge.len()),
                ));
            }
            edge.sort_unstable();
            if edge.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::parse(line, "repeated vertex within an edge"));
            }
            edges.push((edge, line));
        }
        edges.sort();
        if let Some(w) = edges.windows(2).find(|w| w[0].0 == w[1].0) {
            let line = w[0].1.max(w[1].1);
            return Err(Error::parse(line, format!("duplicate edge {:?}", w[0].0)));
        }
        let flat = edges.into_iter().flat_map(|(e, _)| e).collect();
        Self::from_canonical(arity, n_vertices, flat).map_err(|e| Error::parse(line, e.to_string()))
    }

    /// Canonical HG text: header, then edges in lexicographic order.
    pub fn to_hg_string(&self) -> String {
        let mut out = format!("HG {} {} {}\n", self.arity, self.n_vertices, self.edge_count());
        for e in self.edges() {
            push_joined(&mut out, e);
            out.push('\n');
        }
        out
    }
}

pub(crate) fn push_joined(out: &mut String, values: &[u32]) {
    use std::fmt::Write;
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        write!(out, "{v}").unwrap();
    }
}

#[inline]
fn tuple_key(tuple: &[u32], n: usize) -> u64 {
    tuple
        .iter()
        .rev()
        .fold(0u64, |acc, &v| acc * n as u64 + u64::from(v))
}

fn for_each_ordering(edge: &[u32], buf: &mut [u32], f: &mut impl FnMut(&[u32])) {
    fn go(edge: &[u32], used: u8, depth: usize, buf: &mut [u32], f: &mut impl FnMut(&[u32])) {
        if depth == edge.len() {
            f(buf);
            return;
        }
        for (i, &v) in edge.iter().enumerate() {
            if used & (1 << i) == 0 {
                buf[depth] = v;
                go(edge, used | (1 << i), depth + 1, buf, f);
            }
        }
    }
    go(edge, 0, 0, buf, f);
}

impl PartialEq for UniformHypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity && self.n_vertices == other.n_vertices && self.edges == other.edges
    }
}

impl Eq for UniformHypergraph {}

impl fmt::Debug for UniformHypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UniformHypergraph")
            .field("arity", &self.arity)
            .field("n_vertices", &self.n_vertices)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}
