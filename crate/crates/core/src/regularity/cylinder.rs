use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hypergraph::UniformHypergraph;
use crate::rng::indexed_stream;
use crate::subsets::{binomial, for_each_subset, permutations, SubsetRanker};

/// Densities the random parts of sampled cylinder intersections are drawn at.
pub const DEFAULT_DENSITY_GRID: [f64; 3] = [0.25, 0.5, 0.75];

/// Label of the per-cylinder streams used by [`check_regularity_sampled`].
pub const CYLINDER_LABEL: &str = "regularity/cylinders";

/// The `r`-uniform hypergraph `L` cut out by `r` many `(r-1)`-uniform
/// hypergraphs `B_1 .. B_r`: an `r`-subset `{a_1 .. a_r}` belongs to `L` iff
/// some `τ ∈ S_r` has `{a_τ(1) .. a_τ(r)} \ {a_τ(i)} ∈ B_i` for every `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CylinderIntersection {
    parts: Vec<UniformHypergraph>,
}

impl CylinderIntersection {
    pub fn new(parts: Vec<UniformHypergraph>) -> Result<Self> {
        let r = parts.len();
        if r < 2 {
            return Err(Error::invalid(
                "cylinder intersections need at least 2 parts (level 1 has none)",
            ));
        }
        let n = parts[0].n_vertices();
        for b in &parts {
            if b.arity() != r - 1 {
                return Err(Error::ArityMismatch {
                    left: b.arity(),
                    right: r - 1,
                });
            }
            if b.n_vertices() != n {
                return Err(Error::invalid("parts live on different vertex sets"));
            }
        }
        Ok(CylinderIntersection { parts })
    }

    /// `r`, the arity of `L`.
    pub fn arity(&self) -> usize {
        self.parts.len()
    }

    pub fn n_vertices(&self) -> usize {
        self.parts[0].n_vertices()
    }

    pub fn parts(&self) -> &[UniformHypergraph] {
        &self.parts
    }

    /// Membership of an `r`-subset, given in any order.
    pub fn contains(&self, subset: &[u32]) -> Result<bool> {
        if subset.len() != self.arity() {
            return Err(Error::ArityMismatch {
                left: subset.len(),
                right: self.arity(),
            });
        }
        if let Some(&v) = subset.iter().find(|&&v| v as usize >= self.n_vertices()) {
            return Err(Error::VertexOutOfRange {
                vertex: v as usize,
                n_vertices: self.n_vertices(),
            });
        }
        Ok(self.contains_with(subset, &permutations(self.arity())))
    }

    fn contains_with(&self, subset: &[u32], perms: &[Vec<u8>]) -> bool {
        let r = self.arity();
        let mut face = [0u32; 4];
        perms.iter().any(|tau| {
            (0..r).all(|i| {
                let skip = tau[i] as usize;
                let mut len = 0;
                for (j, &v) in subset.iter().enumerate() {
                    if j != skip {
                        face[len] = v;
                        len += 1;
                    }
                }
                self.parts[i].contains_tuple(&face[..len])
            })
        })
    }

    /// Membership of every `r`-subset, in lexicographic order.
    pub fn members(&self) -> Vec<bool> {
        let perms = permutations(self.arity());
        let mut out = Vec::new();
        for_each_subset(self.n_vertices(), self.arity(), |s| {
            out.push(self.contains_with(s, &perms));
        });
        out
    }

    /// `L` as an `r`-uniform hypergraph.
    pub fn to_hypergraph(&self) -> UniformHypergraph {
        let members = self.members();
        let mut edges = Vec::new();
        let mut i = 0;
        for_each_subset(self.n_vertices(), self.arity(), |s| {
            if members[i] {
                edges.extend_from_slice(s);
            }
            i += 1;
        });
        UniformHypergraph::from_canonical(self.arity(), self.n_vertices(), edges)
            .expect("members form a canonical edge list")
    }
}

/// Outcome of comparing `G`'s density inside `L` with its global density.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Deviation {
    /// `| |G|/C(n,r) - |G ∩ L|/|L| |`
    Admitted(BigRational),
    /// `|L| < ε·C(n, r)`: too small to be tested.
    Skipped,
}

/// `G` as membership flags over its `r`-subsets in lexicographic order.
struct Target {
    bits: Vec<bool>,
    edges: u64,
    total: u64,
}

impl Target {
    fn new(g: &UniformHypergraph) -> Result<Self> {
        let ranker = SubsetRanker::new(g.n_vertices(), g.arity())?;
        let mut bits = vec![false; ranker.count()];
        for e in g.edges() {
            bits[ranker.rank(e)] = true;
        }
        Ok(Target {
            bits,
            edges: g.edge_count() as u64,
            total: ranker.count() as u64,
        })
    }

    fn deviation(&self, members: &[bool], eps: f64) -> Deviation {
        let size = members.iter().filter(|&&m| m).count() as u64;
        if size == 0 || (size as f64) < eps * self.total as f64 {
            return Deviation::Skipped;
        }
        let inside = members
            .iter()
            .zip(&self.bits)
            .filter(|(&m, &g)| m && g)
            .count() as u64;
        let global = BigRational::new(BigInt::from(self.edges), BigInt::from(self.total));
        let local = BigRational::new(BigInt::from(inside), BigInt::from(size));
        Deviation::Admitted((global - local).abs())
    }
}

fn check_pair(g: &UniformHypergraph, l: &CylinderIntersection) -> Result<()> {
    if g.arity() != l.arity() {
        return Err(Error::ArityMismatch {
            left: g.arity(),
            right: l.arity(),
        });
    }
    if g.n_vertices() != l.n_vertices() {
        return Err(Error::invalid("hypergraph and cylinder intersection differ in vertex count"));
    }
    Ok(())
}

fn check_epsilon(eps: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::invalid(format!("epsilon {eps} is outside [0, 1]")));
    }
    Ok(())
}

/// Density deviation of `G` on `L`, or [`Deviation::Skipped`] when `L` is
/// below the `ε·C(n, r)` size gate.
pub fn regularity_deviation(g: &UniformHypergraph, l: &CylinderIntersection, eps: f64) -> Result<Deviation> {
    check_pair(g, l)?;
    check_epsilon(eps)?;
    Ok(Target::new(g)?.deviation(&l.members(), eps))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    /// Every cylinder intersection of a given (or complete) family was tested.
    Exhaustive,
    /// Randomly drawn cylinder intersections, after any planted ones.
    Sampled,
}

impl CheckMode {
    pub fn tag(self) -> &'static str {
        match self {
            CheckMode::Exhaustive => "exhaustive",
            CheckMode::Sampled => "sampled",
        }
    }
}

/// Result of an `ε`-regularity check.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularityReport {
    /// Largest deviation over admitted cylinder intersections (0 if none).
    pub max_deviation: BigRational,
    pub tested: usize,
    pub admitted: usize,
    pub epsilon: f64,
    /// First admitted cylinder intersection attaining the maximum, when it exceeds `ε`.
    pub witness: Option<CylinderIntersection>,
    pub mode: CheckMode,
}

impl RegularityReport {
    pub fn max_deviation_f64(&self) -> f64 {
        self.max_deviation.to_f64().unwrap_or(f64::NAN)
    }

    pub fn is_regular(&self) -> bool {
        self.witness.is_none()
    }
}

/// Folds per-candidate deviations in index order; returns the report and the
/// index of the witness.
fn summarize(
    deviations: Vec<Deviation>,
    eps: f64,
    mode: CheckMode,
) -> (RegularityReport, Option<usize>) {
    let tested = deviations.len();
    let mut admitted = 0;
    let mut best: Option<(usize, BigRational)> = None;
    for (i, d) in deviations.into_iter().enumerate() {
        if let Deviation::Admitted(d) = d {
            admitted += 1;
            if best.as_ref().is_none_or(|(_, b)| d > *b) {
                best = Some((i, d));
            }
        }
    }
    let (index, max_deviation) = match best {
        Some((i, d)) => (Some(i), d),
        None => (None, BigRational::zero()),
    };
    let violating = max_deviation.to_f64().unwrap_or(f64::INFINITY) > eps;
    (
        RegularityReport {
            max_deviation,
            tested,
            admitted,
            epsilon: eps,
            witness: None,
            mode,
        },
        index.filter(|_| violating),
    )
}

/// Tests `G` against every cylinder intersection in `family`.
pub fn check_regularity_family(
    g: &UniformHypergraph,
    eps: f64,
    family: &[CylinderIntersection],
) -> Result<RegularityReport> {
    check_epsilon(eps)?;
    for l in family {
        check_pair(g, l)?;
    }
    let target = Target::new(g)?;
    let deviations = family
        .par_iter()
        .map(|l| target.deviation(&l.members(), eps))
        .collect();
    let (mut report, witness) = summarize(deviations, eps, CheckMode::Exhaustive);
    report.witness = witness.map(|i| family[i].clone());
    Ok(report)
}

fn random_cylinder(n: usize, r: usize, seed: u64, index: u64, grid: &[f64]) -> CylinderIntersection {
    let mut rng = indexed_stream(seed, CYLINDER_LABEL, index);
    let parts = (0..r)
        .map(|_| {
            let p = grid[rng.gen_range(0..grid.len())];
            let mut edges = Vec::new();
            for_each_subset(n, r - 1, |s| {
                if rng.gen::<f64>() < p {
                    edges.extend_from_slice(s);
                }
            });
            UniformHypergraph::from_canonical(r - 1, n, edges).expect("random part is canonical")
        })
        .collect();
    CylinderIntersection::new(parts).expect("parts share arity and vertex set")
}

/// Tests `G` against the `planted` cylinder intersections followed by `m`
/// random ones. Each random part `B_i` takes a density uniformly from
/// `density_grid` and includes every `(r-1)`-subset independently with that
/// probability. Cylinder `i` draws from its own stream, so the report is a
/// function of `seed`.
pub fn check_regularity_sampled(
    g: &UniformHypergraph,
    eps: f64,
    m: usize,
    seed: u64,
    density_grid: &[f64],
    planted: &[CylinderIntersection],
) -> Result<RegularityReport> {
    check_epsilon(eps)?;
    if m == 0 {
        return Err(Error::invalid("need at least one sampled cylinder intersection"));
    }
    if density_grid.is_empty() || density_grid.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(Error::invalid("density grid must be nonempty with values in [0, 1]"));
    }
    let r = g.arity();
    if r < 2 {
        return Err(Error::invalid(
            "level 1 has no cylinder intersections; use equitability",
        ));
    }
    for l in planted {
        check_pair(g, l)?;
    }
    let target = Target::new(g)?;
    let n = g.n_vertices();
    let p = planted.len();
    let deviations = (0..p + m)
        .into_par_iter()
        .map(|i| {
            if i < p {
                target.deviation(&planted[i].members(), eps)
            } else {
                let l = random_cylinder(n, r, seed, (i - p) as u64, density_grid);
                target.deviation(&l.members(), eps)
            }
        })
        .collect();
    let (mut report, witness) = summarize(deviations, eps, CheckMode::Sampled);
    report.witness = witness.map(|i| {
        if i < p {
            planted[i].clone()
        } else {
            random_cylinder(n, r, seed, (i - p) as u64, density_grid)
        }
    });
    Ok(report)
}

/// Tests `G` against every cylinder intersection on its vertex set. There are
/// `2^(r·C(n, r-1))` choices of parts, which must not exceed `budget`.
pub fn check_regularity_exhaustive(g: &UniformHypergraph, eps: f64, budget: u64) -> Result<RegularityReport> {
    check_epsilon(eps)?;
    let r = g.arity();
    if r < 2 {
        return Err(Error::invalid(
            "level 1 has no cylinder intersections; use equitability",
        ));
    }
    let n = g.n_vertices();
    let faces = crate::subsets::subsets(n, r - 1);
    let bits = binomial(n as u64, (r - 1) as u64)
        .and_then(|c| c.checked_mul(r as u64))
        .filter(|&b| b < 64 && (1u64 << b) <= budget)
        .ok_or_else(|| {
            Error::BudgetExceeded(format!(
                "all cylinder intersections on {n} vertices at arity {r} exceed {budget}"
            ))
        })?;
    let per_part = faces.len();
    let build = |code: u64| {
        let parts = (0..r)
            .map(|i| {
                let edges: Vec<u32> = faces
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| code >> (i * per_part + j) & 1 == 1)
                    .flat_map(|(_, f)| f.iter().copied())
                    .collect();
                UniformHypergraph::from_canonical(r - 1, n, edges).expect("canonical part")
            })
            .collect();
        CylinderIntersection::new(parts).expect("valid parts")
    };
    let target = Target::new(g)?;
    let deviations = (0..1u64 << bits)
        .into_par_iter()
        .map(|code| target.deviation(&build(code).members(), eps))
        .collect();
    let (mut report, witness) = summarize(deviations, eps, CheckMode::Exhaustive);
    report.witness = witness.map(|i| build(i as u64));
    Ok(report)
}
