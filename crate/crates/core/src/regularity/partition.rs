use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::hypergraph::{push_joined, UniformHypergraph};
use crate::io::{header, parse_field, ContentLines};
use crate::rng::stream;
use crate::sampling::LatentSample;
use crate::subsets::{binomial_big, check_arity, for_each_subset, SubsetRanker};

/// Label of the per-level streams used by [`random_hyperpartition`].
pub const HYPERPARTITION_LABEL: &str = "hyperpartition";

/// An `l`-hyperpartition: for every level `r = 1..=k`, a class label in
/// `0..l` for each `r`-subset of the vertex set. Class `j` at level `r` is
/// the `r`-uniform hypergraph `P^j_r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hyperpartition {
    arity: usize,
    n_vertices: usize,
    resolution: usize,
    // labels[r - 1][lex rank of the r-subset]
    labels: Vec<Vec<u16>>,
    rankers: Vec<SubsetRanker>,
}

impl Hyperpartition {
    /// `labels[r - 1]` lists the labels of the `r`-subsets in lexicographic order.
    pub fn new(k: usize, n: usize, l: usize, labels: Vec<Vec<u16>>) -> Result<Self> {
        check_arity(k)?;
        if l == 0 || l > u16::MAX as usize {
            return Err(Error::invalid(format!("resolution {l} must be in 1..=65535")));
        }
        if labels.len() != k {
            return Err(Error::invalid(format!("expected {k} levels, got {}", labels.len())));
        }
        let rankers = (1..=k)
            .map(|r| SubsetRanker::new(n, r))
            .collect::<Result<Vec<_>>>()?;
        for (r, (level, ranker)) in labels.iter().zip(&rankers).enumerate() {
            if level.len() != ranker.count() {
                return Err(Error::invalid(format!(
                    "level {} has {} labels, expected {}",
                    r + 1,
                    level.len(),
                    ranker.count()
                )));
            }
            if let Some(x) = level.iter().find(|&&x| x as usize >= l) {
                return Err(Error::invalid(format!("label {x} out of range for {l} classes")));
            }
        }
        Ok(Hyperpartition {
            arity: k,
            n_vertices: n,
            resolution: l,
            labels,
            rankers,
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    /// Labels of level `r` in lexicographic subset order.
    pub fn level(&self, r: usize) -> &[u16] {
        &self.labels[r - 1]
    }

    pub(crate) fn ranker(&self, r: usize) -> &SubsetRanker {
        &self.rankers[r - 1]
    }

    /// Class of a strictly increasing subset of size `1..=k`.
    #[inline]
    pub fn label(&self, subset: &[u32]) -> u16 {
        let r = subset.len();
        self.labels[r - 1][self.rankers[r - 1].rank(subset)]
    }

    /// `|P^j_r|` for `j = 0..l`.
    pub fn class_sizes(&self, r: usize) -> Vec<u64> {
        let mut sizes = vec![0u64; self.resolution];
        for &x in &self.labels[r - 1] {
            sizes[x as usize] += 1;
        }
        sizes
    }

    /// `P^j_r` as an `r`-uniform hypergraph.
    pub fn class_hypergraph(&self, r: usize, j: u16) -> UniformHypergraph {
        let level = &self.labels[r - 1];
        let mut edges = Vec::new();
        let mut i = 0;
        for_each_subset(self.n_vertices, r, |s| {
            if level[i] == j {
                edges.extend_from_slice(s);
            }
            i += 1;
        });
        UniformHypergraph::from_canonical(r, self.n_vertices, edges).expect("class of a valid partition")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = ContentLines::new(text);
        let (line, head) = lines.expect_line("`HP` header")?;
        let fields = header(line, head, "HP", 3)?;
        let k: usize = parse_field(line, fields[0], "arity")?;
        let n: usize = parse_field(line, fields[1], "vertex count")?;
        let l: usize = parse_field(line, fields[2], "class count")?;
        check_arity(k).map_err(|e| Error::parse(line, e.to_string()))?;
        if l == 0 || l > u16::MAX as usize {
            return Err(Error::parse(line, "class count must be in 1..=65535"));
        }
        let mut labels = Vec::with_capacity(k);
        for r in 1..=k {
            let (line, text) = lines.expect_line(&format!("`LEVEL {r}`"))?;
            if text.split_whitespace().collect::<Vec<_>>() != ["LEVEL", &r.to_string()] {
                return Err(Error::parse(line, format!("expected `LEVEL {r}`")));
            }
            let mut expected = Vec::new();
            for_each_subset(n, r, |s| expected.push(s.to_vec()));
            let mut level = Vec::with_capacity(expected.len());
            for subset in expected {
                let (line, text) = lines.expect_line("a labeled subset")?;
                let tokens: Vec<&str> = text.split_whitespace().collect();
                if tokens.len() != r + 1 {
                    return Err(Error::parse(line, format!("expected {r} members and a label")));
                }
                let members = tokens[..r]
                    .iter()
                    .map(|t| parse_field::<u32>(line, t, "vertex id"))
                    .collect::<Result<Vec<u32>>>()?;
                if members != subset {
                    return Err(Error::parse(
                        line,
                        format!("expected subset {subset:?}, found {members:?}"),
                    ));
                }
                let label: u16 = parse_field(line, tokens[r], "label")?;
                if label as usize >= l {
                    return Err(Error::parse(line, format!("label {label} out of range")));
                }
                level.push(label);
            }
            labels.push(level);
        }
        lines.expect_end()?;
        Self::new(k, n, l, labels)
    }

    pub fn to_hp_string(&self) -> String {
        let mut out = format!("HP {} {} {}\n", self.arity, self.n_vertices, self.resolution);
        for r in 1..=self.arity {
            out.push_str(&format!("LEVEL {r}\n"));
            let level = &self.labels[r - 1];
            let mut i = 0;
            for_each_subset(self.n_vertices, r, |s| {
                push_joined(&mut out, s);
                out.push_str(&format!(" {}\n", level[i]));
                i += 1;
            });
        }
        out
    }
}

/// Every `r`-subset, at every level, gets an independent uniform label.
pub fn random_hyperpartition(k: usize, n: usize, l: usize, seed: u64) -> Result<Hyperpartition> {
    check_arity(k)?;
    if l == 0 || l > u16::MAX as usize {
        return Err(Error::invalid(format!("resolution {l} must be in 1..=65535")));
    }
    let labels = (1..=k)
        .map(|r| {
            let count = SubsetRanker::new(n, r)?.count();
            let mut rng = stream(seed, HYPERPARTITION_LABEL, &[r as u64]);
            Ok((0..count).map(|_| rng.gen_range(0..l) as u16).collect())
        })
        .collect::<Result<Vec<Vec<u16>>>>()?;
    Hyperpartition::new(k, n, l, labels)
}

/// Labels each subset `B` by its latent box `⌊l · u_B⌋`.
pub fn latent_hyperpartition(sample: &LatentSample, l: usize) -> Result<Hyperpartition> {
    let k = sample.arity();
    let labels = (1..=k)
        .map(|r| sample.level(r).iter().map(|u| u.box_index(l)).collect())
        .collect();
    Hyperpartition::new(k, sample.n_vertices(), l, labels)
}

/// `δ_r = max_{i<j} ||P^i_r| - |P^j_r|| / C(n, r)` per level, and their maximum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equitability {
    pub per_level: Vec<BigRational>,
    pub overall: BigRational,
}

pub fn equitability(p: &Hyperpartition) -> Equitability {
    let per_level: Vec<BigRational> = (1..=p.arity())
        .map(|r| {
            let sizes = p.class_sizes(r);
            let spread = sizes.iter().max().unwrap() - sizes.iter().min().unwrap();
            let total = binomial_big(p.n_vertices() as u64, r as u64);
            if total.is_zero() {
                BigRational::zero()
            } else {
                BigRational::new(BigInt::from(spread), BigInt::from(total))
            }
        })
        .collect();
    let overall = per_level.iter().max().cloned().unwrap_or_else(BigRational::zero);
    Equitability { per_level, overall }
}
