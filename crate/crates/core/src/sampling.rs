//! `W`-random hypergraphs with their latent coordinates.

use rand::RngCore;

use crate::error::{Error, Result};
use crate::hypergraph::{push_joined, UniformHypergraph};
use crate::hypergraphon::{StepHypergraphon, ValueKind};
use crate::io::{header, parse_field, ContentLines};
use crate::rng::stream;
use crate::subsets::{for_each_subset, SubsetRanker, SubsetIndexing};

/// Label of the per-level latent streams drawn by [`sample_w_random`].
pub const LATENT_LABEL: &str = "w_random/latents";

/// A latent coordinate in `[0, 1)`, stored as the 64-bit fraction `u / 2^64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Latent(pub u64);

impl Latent {
    /// Nearest-below `f64` (53-bit truncation), always `< 1`.
    pub fn to_f64(self) -> f64 {
        (self.0 >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// `⌊l · u⌋`, computed exactly.
    pub fn box_index(self, l: usize) -> u16 {
        ((u128::from(self.0) * l as u128) >> 64) as u16
    }
}

/// A sampled hypergraph together with the latent value `u_B` of every
/// vertex subset `B` with `1 <= |B| <= k`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatentSample {
    seed: u64,
    hypergraph: UniformHypergraph,
    // latents[r - 1][lex rank of the r-subset]
    latents: Vec<Vec<Latent>>,
}

impl LatentSample {
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn arity(&self) -> usize {
        self.hypergraph.arity()
    }

    pub fn n_vertices(&self) -> usize {
        self.hypergraph.n_vertices()
    }

    pub fn hypergraph(&self) -> &UniformHypergraph {
        &self.hypergraph
    }

    pub fn into_hypergraph(self) -> UniformHypergraph {
        self.hypergraph
    }

    /// Latents of all `r`-subsets, in lexicographic subset order.
    pub fn level(&self, r: usize) -> &[Latent] {
        &self.latents[r - 1]
    }

    /// `u_B` for a strictly increasing subset `B`.
    pub fn latent(&self, subset: &[u32]) -> Latent {
        let ranker = SubsetRanker::new(self.n_vertices(), subset.len()).expect("level exists");
        self.latents[subset.len() - 1][ranker.rank(subset)]
    }

    /// True iff every `k`-subset is an edge exactly when `W` is 1 at its latent box.
    pub fn consistent_with(&self, w: &StepHypergraphon) -> bool {
        if w.arity() != self.arity() {
            return false;
        }
        let expected = edges_from_latents(w, self.n_vertices(), &self.latents);
        expected == self.hypergraph
    }

    /// LAT text: header, one line per subset (size, then lexicographic) with
    /// its latent as 16 hex digits, then the embedded HG block.
    pub fn to_lat_string(&self) -> String {
        let k = self.arity();
        let n = self.n_vertices();
        let mut out = format!("LAT {k} {n} {}\n", self.seed);
        for r in 1..=k {
            let level = &self.latents[r - 1];
            let mut i = 0;
            for_each_subset(n, r, |s| {
                push_joined(&mut out, s);
                out.push_str(&format!(" {:016x}\n", level[i].0));
                i += 1;
            });
        }
        out.push_str(&self.hypergraph.to_hg_string());
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = ContentLines::new(text);
        let (line, head) = lines.expect_line("`LAT` header")?;
        let fields = header(line, head, "LAT", 3)?;
        let k: usize = parse_field(line, fields[0], "arity")?;
        let n: usize = parse_field(line, fields[1], "vertex count")?;
        let seed: u64 = parse_field(line, fields[2], "seed")?;
        crate::subsets::check_arity(k).map_err(|e| Error::parse(line, e.to_string()))?;
        let mut latents = Vec::with_capacity(k);
        for r in 1..=k {
            let mut expected = Vec::new();
            for_each_subset(n, r, |s| expected.push(s.to_vec()));
            let mut level = Vec::with_capacity(expected.len());
            for subset in expected {
                let (line, text) = lines.expect_line("a latent line")?;
                let tokens: Vec<&str> = text.split_whitespace().collect();
                if tokens.len() != r + 1 {
                    return Err(Error::parse(line, format!("expected {r} members and a latent")));
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
                let hex = tokens[r];
                if hex.len() != 16 {
                    return Err(Error::parse(line, "latent must be 16 hex digits"));
                }
                let u = u64::from_str_radix(hex, 16)
                    .map_err(|_| Error::parse(line, format!("invalid latent `{hex}`")))?;
                level.push(Latent(u));
            }
            latents.push(level);
        }
        let hypergraph = UniformHypergraph::parse_from(&mut lines)?;
        lines.expect_end()?;
        if hypergraph.arity() != k || hypergraph.n_vertices() != n {
            return Err(Error::parse(line, "embedded HG block does not match the LAT header"));
        }
        Ok(LatentSample {
            seed,
            hypergraph,
            latents,
        })
    }
}

fn edges_from_latents(w: &StepHypergraphon, n: usize, latents: &[Vec<Latent>]) -> UniformHypergraph {
    let k = w.arity();
    let indexing: &SubsetIndexing = w.indexing();
    let l = w.resolution();
    let rankers: Vec<SubsetRanker> = (1..=k)
        .map(|r| SubsetRanker::new(n, r).expect("levels fit"))
        .collect();
    let members: Vec<Vec<usize>> = (0..indexing.len()).map(|j| indexing.members(j)).collect();
    let mut edges = Vec::new();
    let mut b = vec![0u16; indexing.len()];
    let mut face = Vec::with_capacity(k);
    for_each_subset(n, k, |e| {
        for (slot, m) in b.iter_mut().zip(&members) {
            face.clear();
            face.extend(m.iter().map(|&i| e[i]));
            let r = face.len();
            *slot = latents[r - 1][rankers[r - 1].rank(&face)].box_index(l);
        }
        if w.value_at_box(&b) == 1.0 {
            edges.extend_from_slice(e);
        }
    });
    UniformHypergraph::from_canonical(k, n, edges).expect("sampled edges are canonical")
}

/// Draws `u_B` uniformly for every vertex subset with `1 <= |B| <= k`, then
/// keeps the `k`-subset `E` iff `W` is 1 at the box read off the latents of
/// its nonempty subsets, matched to coordinates by the order-preserving
/// bijection `[k] -> E`.
pub fn sample_w_random(w: &StepHypergraphon, n: usize, seed: u64) -> Result<LatentSample> {
    if w.kind() != ValueKind::Indicator {
        return Err(Error::invalid(
            "sampling requires an indicator hypergraphon",
        ));
    }
    let k = w.arity();
    if n < k {
        return Err(Error::invalid(format!("need at least {k} vertices, got {n}")));
    }
    let latents: Vec<Vec<Latent>> = (1..=k)
        .map(|r| {
            let count = SubsetRanker::new(n, r)?.count();
            let mut rng = stream(seed, LATENT_LABEL, &[r as u64]);
            Ok((0..count).map(|_| Latent(rng.next_u64())).collect())
        })
        .collect::<Result<_>>()?;
    let hypergraph = edges_from_latents(w, n, &latents);
    Ok(LatentSample {
        seed,
        hypergraph,
        latents,
    })
}
