//! Step hypergraphons on the `l`-box grid of `[0,1]^(2^k - 1)`.
//!
//! Coordinates are indexed by the nonempty subsets of `[k]` in
//! [`SubsetIndexing`] order. A coordinate `x` lies in box `⌊l·x⌋`, i.e. boxes
//! are half-open `[j/l, (j+1)/l)`. Values are stored once per `S_k`-orbit of
//! box vectors, under the lexicographically least representative, so every
//! evaluation is symmetric by construction.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hypergraph::UniformHypergraph;
use crate::io::{header, parse_field, ContentLines};
use crate::rng::{indexed_stream, CompensatedSum};
use crate::simplicial::SimplicialSupport;
use crate::subsets::SubsetIndexing;

/// Grids with at most this many boxes get a dense lookup table.
const DENSE_TABLE_LIMIT: u128 = 1 << 22;

/// Default cap on `l^s` for [`exact_density`].
pub const DEFAULT_DENSITY_BUDGET: u128 = 1 << 28;

/// Number of independent chunks the flat density sum is split into. Fixed so
/// the reduction order never depends on the thread count.
const SUM_CHUNKS: u128 = 256;

const MC_CHUNK: usize = 4096;

/// Whether the stored values are `{0,1}` indicators or general `[0,1]` values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ValueKind {
    Indicator,
    Projected,
}

impl ValueKind {
    pub fn tag(self) -> &'static str {
        match self {
            ValueKind::Indicator => "ind",
            ValueKind::Projected => "proj",
        }
    }
}

impl std::str::FromStr for ValueKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ind" => Ok(ValueKind::Indicator),
            "proj" => Ok(ValueKind::Projected),
            other => Err(Error::invalid(format!("unknown value kind `{other}`"))),
        }
    }
}

/// An `S_k`-invariant step function, constant on the boxes of an `l`-grid.
#[derive(Clone)]
pub struct StepHypergraphon {
    indexing: SubsetIndexing,
    resolution: usize,
    kind: ValueKind,
    // canonical box vector -> nonzero value
    entries: BTreeMap<Vec<u16>, f64>,
    // value of every box, mixed radix with coordinate 0 most significant
    table: Option<Vec<f64>>,
}

impl StepHypergraphon {
    /// Builds from `(box, value)` pairs. Boxes may be any orbit member; two
    /// entries in the same orbit must agree. Zero values are dropped.
    pub fn from_entries<I>(k: usize, resolution: usize, kind: ValueKind, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u16>, f64)>,
    {
        let indexing = SubsetIndexing::new(k)?;
        check_resolution(resolution)?;
        let mut map: BTreeMap<Vec<u16>, f64> = BTreeMap::new();
        for (b, value) in entries {
            check_box(&indexing, resolution, &b)?;
            check_value(kind, value)?;
            let canon = indexing.canonicalize(&b);
            if let Some(&prev) = map.get(&canon) {
                if prev != value {
                    return Err(Error::invalid(format!(
                        "box {b:?} conflicts with another member of its orbit"
                    )));
                }
            }
            map.insert(canon, value);
        }
        map.retain(|_, v| *v != 0.0);
        Ok(Self::assemble(indexing, resolution, kind, map))
    }

    /// Evaluates `f` on every canonical box representative. Requires the
    /// full grid `l^(2^k-1)` to be enumerable.
    pub fn from_fn(
        k: usize,
        resolution: usize,
        kind: ValueKind,
        f: impl Fn(&[u16]) -> f64,
    ) -> Result<Self> {
        let indexing = SubsetIndexing::new(k)?;
        check_resolution(resolution)?;
        let dims = indexing.len();
        let total = (resolution as u128).pow(dims as u32);
        if total > DEFAULT_DENSITY_BUDGET {
            return Err(Error::BudgetExceeded(format!(
                "grid of {resolution}^{dims} boxes is too large to enumerate"
            )));
        }
        let mut map = BTreeMap::new();
        let mut b = vec![0u16; dims];
        for _ in 0..total {
            if indexing.is_canonical(&b) {
                let v = f(&b);
                check_value(kind, v)?;
                if v != 0.0 {
                    map.insert(b.clone(), v);
                }
            }
            increment(&mut b, resolution);
        }
        Ok(Self::assemble(indexing, resolution, kind, map))
    }

    /// `W ≡ p`. Indicator kind for `p ∈ {0, 1}`, projected otherwise; resolution 1.
    pub fn constant(k: usize, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::invalid(format!("constant {p} is outside [0, 1]")));
        }
        let kind = if p == 0.0 || p == 1.0 {
            ValueKind::Indicator
        } else {
            ValueKind::Projected
        };
        let dims = (1 << k) - 1;
        Self::from_entries(k, 1, kind, [(vec![0u16; dims], p)])
    }

    fn assemble(
        indexing: SubsetIndexing,
        resolution: usize,
        kind: ValueKind,
        entries: BTreeMap<Vec<u16>, f64>,
    ) -> Self {
        let dims = indexing.len();
        let total = (resolution as u128).pow(dims as u32);
        let table = (total <= DENSE_TABLE_LIMIT).then(|| {
            let mut table = vec![0.0; total as usize];
            let mut b = vec![0u16; dims];
            for slot in table.iter_mut() {
                *slot = entries
                    .get(&indexing.canonicalize(&b))
                    .copied()
                    .unwrap_or(0.0);
                increment(&mut b, resolution);
            }
            table
        });
        StepHypergraphon {
            indexing,
            resolution,
            kind,
            entries,
            table,
        }
    }

    pub fn arity(&self) -> usize {
        self.indexing.arity()
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn kind(&self) -> ValueKind {
        self.kind
    }

    pub fn indexing(&self) -> &SubsetIndexing {
        &self.indexing
    }

    /// Number of coordinates, `2^k - 1`.
    pub fn dims(&self) -> usize {
        self.indexing.len()
    }

    /// Stored nonzero entries keyed by canonical box vector.
    pub fn entries(&self) -> &BTreeMap<Vec<u16>, f64> {
        &self.entries
    }

    /// Value on the box with the given indices (any orbit member).
    #[inline]
    pub fn value_at_box(&self, b: &[u16]) -> f64 {
        match &self.table {
            Some(table) => table[self.flat_index(b)],
            None => self
                .entries
                .get(&self.indexing.canonicalize(b))
                .copied()
                .unwrap_or(0.0),
        }
    }

    #[inline]
    fn flat_index(&self, b: &[u16]) -> usize {
        b.iter()
            .fold(0usize, |acc, &x| acc * self.resolution + x as usize)
    }

    /// Box index of a coordinate in `[0, 1)`.
    #[inline]
    pub fn box_of(&self, x: f64) -> u16 {
        ((self.resolution as f64 * x) as usize).min(self.resolution - 1) as u16
    }

    /// `W(point)` for a point of `[0,1)^(2^k-1)` in coordinate order.
    pub fn eval(&self, point: &[f64]) -> Result<f64> {
        if point.len() != self.dims() {
            return Err(Error::invalid(format!(
                "point has {} coordinates, expected {}",
                point.len(),
                self.dims()
            )));
        }
        if let Some(x) = point.iter().find(|x| !(0.0..1.0).contains(*x)) {
            return Err(Error::invalid(format!("coordinate {x} is outside [0, 1)")));
        }
        let b: Vec<u16> = point.iter().map(|&x| self.box_of(x)).collect();
        Ok(self.value_at_box(&b))
    }

    /// The projected hypergraphon: the top (`[k]`) coordinate averaged out.
    /// Stored on the full grid, constant in the top coordinate.
    pub fn project(&self) -> StepHypergraphon {
        let top = self.indexing.top();
        // The top coordinate is fixed by every permutation, so the canonical
        // form of (lower, t) is (canonical lower, t).
        let mut lower_sums: BTreeMap<Vec<u16>, CompensatedSum> = BTreeMap::new();
        for (b, &v) in &self.entries {
            lower_sums.entry(b[..top].to_vec()).or_default().add(v);
        }
        let l = self.resolution;
        let mut entries = BTreeMap::new();
        for (lower, sum) in lower_sums {
            let value = sum.value() / l as f64;
            if value == 0.0 {
                continue;
            }
            for t in 0..l {
                let mut b = lower.clone();
                b.push(t as u16);
                entries.insert(b, value.min(1.0));
            }
        }
        Self::assemble(self.indexing.clone(), l, ValueKind::Projected, entries)
    }

    /// Parses the HGON text format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = ContentLines::new(text);
        let (line, head) = lines.expect_line("`HGON` header")?;
        let fields = header(line, head, "HGON", 4)?;
        let k: usize = parse_field(line, fields[0], "arity")?;
        let l: usize = parse_field(line, fields[1], "resolution")?;
        let kind: ValueKind = fields[2].parse().map_err(|e: Error| Error::parse(line, e.to_string()))?;
        let s: usize = parse_field(line, fields[3], "entry count")?;
        let indexing = SubsetIndexing::new(k).map_err(|e| Error::parse(line, e.to_string()))?;
        check_resolution(l).map_err(|e| Error::parse(line, e.to_string()))?;
        let dims = indexing.len();
        let mut map = BTreeMap::new();
        for _ in 0..s {
            let (line, text) = lines.expect_line("an HGON entry")?;
            let tokens: Vec<&str> = text.split_whitespace().collect();
            if tokens.len() != dims + 1 {
                return Err(Error::parse(
                    line,
                    format!("expected {dims} box indices and a value"),
                ));
            }
            let b = tokens[..dims]
                .iter()
                .map(|t| parse_field::<u16>(line, t, "box index"))
                .collect::<Result<Vec<u16>>>()?;
            let value: f64 = parse_field(line, tokens[dims], "value")?;
            check_box(&indexing, l, &b).map_err(|e| Error::parse(line, e.to_string()))?;
            check_value(kind, value).map_err(|e| Error::parse(line, e.to_string()))?;
            if !indexing.is_canonical(&b) {
                return Err(Error::parse(line, "entry is not a canonical orbit representative"));
            }
            if map.insert(b, value).is_some() {
                return Err(Error::parse(line, "duplicate orbit entry"));
            }
        }
        lines.expect_end()?;
        map.retain(|_, v| *v != 0.0);
        Ok(Self::assemble(indexing, l, kind, map))
    }

    /// HGON text; entries in lexicographic order of their box vectors.
    pub fn to_hgon_string(&self) -> String {
        let mut out = format!(
            "HGON {} {} {} {}\n",
            self.arity(),
            self.resolution,
            self.kind.tag(),
            self.entries.len()
        );
        for (b, v) in &self.entries {
            for x in b {
                out.push_str(&x.to_string());
                out.push(' ');
            }
            out.push_str(&format!("{v:?}\n"));
        }
        out
    }
}

impl fmt::Debug for StepHypergraphon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StepHypergraphon")
            .field("arity", &self.arity())
            .field("resolution", &self.resolution)
            .field("kind", &self.kind)
            .field("entries", &self.entries)
            .finish()
    }
}

impl PartialEq for StepHypergraphon {
    fn eq(&self, other: &Self) -> bool {
        self.arity() == other.arity()
            && self.resolution == other.resolution
            && self.kind == other.kind
            && self.entries == other.entries
    }
}

fn check_resolution(l: usize) -> Result<()> {
    if l == 0 || l > u16::MAX as usize {
        return Err(Error::invalid(format!("resolution {l} must be in 1..=65535")));
    }
    Ok(())
}

fn check_box(indexing: &SubsetIndexing, l: usize, b: &[u16]) -> Result<()> {
    if b.len() != indexing.len() {
        return Err(Error::invalid(format!(
            "box has {} indices, expected {}",
            b.len(),
            indexing.len()
        )));
    }
    if let Some(x) = b.iter().find(|&&x| x as usize >= l) {
        return Err(Error::invalid(format!("box index {x} out of range for resolution {l}")));
    }
    Ok(())
}

fn check_value(kind: ValueKind, v: f64) -> Result<()> {
    match kind {
        ValueKind::Indicator if v != 0.0 && v != 1.0 => {
            Err(Error::invalid(format!("indicator value {v} is not 0 or 1")))
        }
        _ if !(0.0..=1.0).contains(&v) => Err(Error::invalid(format!("value {v} is outside [0, 1]"))),
        _ => Ok(()),
    }
}

/// Odometer step, last coordinate fastest.
fn increment(b: &mut [u16], l: usize) {
    for x in b.iter_mut().rev() {
        *x += 1;
        if (*x as usize) < l {
            return;
        }
        *x = 0;
    }
}

fn check_pattern(k: &UniformHypergraph, w: &StepHypergraphon) -> Result<()> {
    if k.arity() != w.arity() {
        return Err(Error::ArityMismatch {
            left: k.arity(),
            right: w.arity(),
        });
    }
    Ok(())
}

/// Product over the edges of `K` of `W` at the boxes picked by `digits`.
#[inline]
fn edge_product(w: &StepHypergraphon, support: &SimplicialSupport, digits: &[u16], scratch: &mut [u16]) -> f64 {
    let mut prod = 1.0;
    for e in 0..support.edge_count() {
        for (slot, &face) in scratch.iter_mut().zip(support.edge_coordinates(e)) {
            *slot = digits[face];
        }
        prod *= w.value_at_box(scratch);
        if prod == 0.0 {
            break;
        }
    }
    prod
}

fn grid_size(w: &StepHypergraphon, s: usize, budget: u128) -> Result<u128> {
    let l = w.resolution() as u128;
    l.checked_pow(s as u32)
        .filter(|&total| total <= budget)
        .ok_or_else(|| {
            Error::BudgetExceeded(format!(
                "{}^{s} assignments exceed the budget of {budget}",
                w.resolution()
            ))
        })
}

/// `t(K, W)` by summing the step function over every assignment of a box to
/// each face of `K`'s simplicial complex, using the default budget.
pub fn exact_density(k: &UniformHypergraph, w: &StepHypergraphon) -> Result<f64> {
    exact_density_with_budget(k, w, DEFAULT_DENSITY_BUDGET)
}

pub fn exact_density_with_budget(
    k: &UniformHypergraph,
    w: &StepHypergraphon,
    budget: u128,
) -> Result<f64> {
    check_pattern(k, w)?;
    let support = SimplicialSupport::with_indexing(k, w.indexing());
    let s = support.len();
    let total = grid_size(w, s, budget)?;
    if support.edge_count() == 0 {
        return Ok(1.0);
    }
    let l = w.resolution();
    let chunks = SUM_CHUNKS.min(total);
    let partials: Vec<CompensatedSum> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = total * c / chunks;
            let end = total * (c + 1) / chunks;
            let mut digits = vec![0u16; s];
            let mut rest = start;
            for d in digits.iter_mut().rev() {
                *d = (rest % l as u128) as u16;
                rest /= l as u128;
            }
            let mut scratch = vec![0u16; w.dims()];
            let mut sum = CompensatedSum::new();
            for _ in start..end {
                sum.add(edge_product(w, &support, &digits, &mut scratch));
                increment(&mut digits, l);
            }
            sum
        })
        .collect();
    let mut sum = CompensatedSum::new();
    for p in &partials {
        sum.merge(p);
    }
    Ok(sum.value() / total as f64)
}

/// `t(K, W)` as an iterated integral: the faces of `K` are integrated one at
/// a time, innermost last in `order` (a permutation of `0..s`). Subtrees
/// whose accumulated product is already zero are skipped.
pub fn exact_density_iterated(
    k: &UniformHypergraph,
    w: &StepHypergraphon,
    order: &[usize],
) -> Result<f64> {
    check_pattern(k, w)?;
    let support = SimplicialSupport::with_indexing(k, w.indexing());
    let s = support.len();
    let mut seen = vec![false; s];
    if order.len() != s || order.iter().any(|&f| f >= s || std::mem::replace(&mut seen[f], true)) {
        return Err(Error::invalid(format!("order must be a permutation of 0..{s}")));
    }
    grid_size(w, s, DEFAULT_DENSITY_BUDGET)?;
    let mut level_of = vec![0usize; s];
    for (lvl, &f) in order.iter().enumerate() {
        level_of[f] = lvl;
    }
    // edges become evaluable once their last face is fixed
    let mut completes: Vec<Vec<usize>> = vec![Vec::new(); s];
    for e in 0..support.edge_count() {
        let last = support
            .edge_coordinates(e)
            .iter()
            .map(|&f| level_of[f])
            .max()
            .unwrap();
        completes[last].push(e);
    }

    struct Ctx<'a> {
        w: &'a StepHypergraphon,
        support: &'a SimplicialSupport,
        order: &'a [usize],
        completes: Vec<Vec<usize>>,
    }

    fn integrate(ctx: &Ctx<'_>, level: usize, digits: &mut [u16], scratch: &mut [u16]) -> f64 {
        if level == ctx.order.len() {
            return 1.0;
        }
        let l = ctx.w.resolution();
        let face = ctx.order[level];
        let mut sum = CompensatedSum::new();
        for v in 0..l {
            digits[face] = v as u16;
            let mut factor = 1.0;
            for &e in &ctx.completes[level] {
                for (slot, &f) in scratch.iter_mut().zip(ctx.support.edge_coordinates(e)) {
                    *slot = digits[f];
                }
                factor *= ctx.w.value_at_box(scratch);
                if factor == 0.0 {
                    break;
                }
            }
            if factor != 0.0 {
                sum.add(factor * integrate(ctx, level + 1, digits, scratch));
            }
        }
        sum.value() / l as f64
    }

    let ctx = Ctx {
        w,
        support: &support,
        order,
        completes,
    };
    let mut digits = vec![0u16; s];
    let mut scratch = vec![0u16; w.dims()];
    Ok(integrate(&ctx, 0, &mut digits, &mut scratch))
}

/// Seeded Monte-Carlo estimate of `t(K, W)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityEstimate {
    pub estimate: f64,
    /// Sample standard deviation over `sqrt(n_samples)`.
    pub standard_error: f64,
    pub n_samples: usize,
    pub seed: u64,
}

#[derive(Clone, Copy, Default)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        let delta = x - self.mean;
        self.mean += delta / self.n;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(&mut self, o: &Moments) {
        if o.n == 0.0 {
            return;
        }
        let n = self.n + o.n;
        let delta = o.mean - self.mean;
        self.mean += delta * o.n / n;
        self.m2 += o.m2 + delta * delta * self.n * o.n / n;
        self.n = n;
    }
}

/// Label of the per-sample streams used by [`mc_density`].
pub const MC_DENSITY_LABEL: &str = "mc_density";

/// Averages `Π_E W(·)` over `n_samples` uniform draws of one coordinate per
/// face of `K`. Sample `i` draws from its own stream, so the estimate is a
/// function of `(seed, n_samples)` only.
pub fn mc_density(
    k: &UniformHypergraph,
    w: &StepHypergraphon,
    n_samples: usize,
    seed: u64,
) -> Result<DensityEstimate> {
    check_pattern(k, w)?;
    if n_samples < 2 {
        return Err(Error::invalid("need at least 2 samples"));
    }
    let support = SimplicialSupport::with_indexing(k, w.indexing());
    let s = support.len();
    let chunks = n_samples.div_ceil(MC_CHUNK);
    let partials: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut m = Moments::default();
            let mut digits = vec![0u16; s];
            let mut scratch = vec![0u16; w.dims()];
            for i in c * MC_CHUNK..((c + 1) * MC_CHUNK).min(n_samples) {
                let mut rng = indexed_stream(seed, MC_DENSITY_LABEL, i as u64);
                for d in digits.iter_mut() {
                    *d = w.box_of(rng.gen::<f64>());
                }
                m.push(edge_product(w, &support, &digits, &mut scratch));
            }
            m
        })
        .collect();
    let mut total = Moments::default();
    for p in &partials {
        total.merge(p);
    }
    let variance = total.m2 / (total.n - 1.0);
    Ok(DensityEstimate {
        estimate: total.mean,
        standard_error: (variance.max(0.0) / total.n).sqrt(),
        n_samples,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> UniformHypergraph {
        UniformHypergraph::complete(2, 3).unwrap()
    }

    /// k=2, l=2: W = 1 iff the pair coordinate lies in box 0.
    fn pair_half() -> StepHypergraphon {
        StepHypergraphon::from_fn(2, 2, ValueKind::Indicator, |b| (b[2] == 0) as u8 as f64).unwrap()
    }

    #[test]
    fn eval_examples() {
        let c = StepHypergraphon::constant(2, 0.3).unwrap();
        assert_eq!(c.eval(&[0.1, 0.9, 0.5]).unwrap(), 0.3);
        let w = pair_half();
        assert_eq!(w.eval(&[0.1, 0.9, 0.3]).unwrap(), 1.0);
        assert_eq!(w.eval(&[0.1, 0.9, 0.7]).unwrap(), 0.0);
        assert!(w.eval(&[0.1, 1.0, 0.7]).is_err());
        assert!(w.eval(&[0.1, 0.2]).is_err());
        let asym = StepHypergraphon::from_entries(2, 2, ValueKind::Indicator, [(vec![0, 1, 1], 1.0)]).unwrap();
        assert_eq!(asym.eval(&[0.2, 0.7, 0.9]).unwrap(), 1.0);
        assert_eq!(asym.eval(&[0.7, 0.2, 0.9]).unwrap(), 1.0);
        assert_eq!(asym.eval(&[0.7, 0.7, 0.9]).unwrap(), 0.0);
    }

    #[test]
    fn constant_kinds() {
        assert_eq!(StepHypergraphon::constant(2, 1.0).unwrap().kind(), ValueKind::Indicator);
        let zero = StepHypergraphon::constant(3, 0.0).unwrap();
        assert!(zero.entries().is_empty());
        assert_eq!(StepHypergraphon::constant(2, 0.5).unwrap().kind(), ValueKind::Projected);
        assert!(StepHypergraphon::constant(2, 1.5).is_err());
    }

    #[test]
    fn conflicting_orbit_members_rejected() {
        let err = StepHypergraphon::from_entries(
            2,
            2,
            ValueKind::Projected,
            [(vec![0, 1, 0], 0.5), (vec![1, 0, 0], 0.25)],
        );
        assert!(err.is_err());
        assert!(StepHypergraphon::from_entries(2, 2, ValueKind::Indicator, [(vec![0, 1, 0], 0.5)]).is_err());
    }

    #[test]
    fn density_examples() {
        let half = StepHypergraphon::constant(2, 0.5).unwrap();
        assert!((exact_density(&triangle(), &half).unwrap() - 0.125).abs() < 1e-15);
        assert!((exact_density(&triangle(), &pair_half()).unwrap() - 0.125).abs() < 1e-15);
        let edgeless = UniformHypergraph::empty(2, 4).unwrap();
        assert_eq!(exact_density(&edgeless, &pair_half()).unwrap(), 1.0);
    }

    #[test]
    fn density_budget_is_checked_first() {
        let w = pair_half();
        let err = exact_density_with_budget(&triangle(), &w, 32).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded(_)));
        assert!(exact_density_with_budget(&triangle(), &w, 64).is_ok());
    }

    #[test]
    fn iterated_matches_flat() {
        let w = StepHypergraphon::from_fn(2, 3, ValueKind::Projected, |b| {
            ((b[0] + b[1]) as f64 * 0.2 + b[2] as f64 * 0.1).min(1.0)
        })
        .unwrap();
        let k = UniformHypergraph::from_edges(2, 4, [[0, 1], [1, 2], [2, 3], [0, 2]]).unwrap();
        let flat = exact_density(&k, &w).unwrap();
        let s = SimplicialSupport::of(&k).unwrap().len();
        let forward: Vec<usize> = (0..s).collect();
        let backward: Vec<usize> = (0..s).rev().collect();
        for order in [forward, backward] {
            let it = exact_density_iterated(&k, &w, &order).unwrap();
            assert!((flat - it).abs() < 1e-12, "{flat} vs {it}");
        }
        assert!(exact_density_iterated(&k, &w, &[0, 0, 1]).is_err());
    }

    #[test]
    fn projection_examples() {
        let c = StepHypergraphon::constant(3, 0.25).unwrap().project();
        assert_eq!(c.eval(&[0.5; 7]).unwrap(), 0.25);
        let top_only = StepHypergraphon::from_fn(2, 2, ValueKind::Indicator, |b| (b[2] == 1) as u8 as f64).unwrap();
        let p = top_only.project();
        assert_eq!(p.kind(), ValueKind::Projected);
        for pt in [[0.1, 0.2, 0.3], [0.9, 0.2, 0.8], [0.6, 0.6, 0.6]] {
            assert_eq!(p.eval(&pt).unwrap(), 0.5);
        }
    }

    #[test]
    fn mc_is_deterministic_and_close() {
        let half = StepHypergraphon::constant(2, 0.5).unwrap();
        let a = mc_density(&triangle(), &half, 100_000, 7).unwrap();
        let b = mc_density(&triangle(), &half, 100_000, 7).unwrap();
        assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
        assert_eq!(a.standard_error.to_bits(), b.standard_error.to_bits());
        assert!((a.estimate - 0.125).abs() <= 3.0 * a.standard_error + 1e-12);
        assert!(mc_density(&triangle(), &half, 1, 7).is_err());
    }

    #[test]
    fn hgon_round_trip() {
        let w = StepHypergraphon::from_fn(3, 2, ValueKind::Projected, |b| {
            b.iter().map(|&x| x as f64).sum::<f64>() / 7.0
        })
        .unwrap();
        let text = w.to_hgon_string();
        let back = StepHypergraphon::parse(&text).unwrap();
        assert_eq!(back, w);
        assert_eq!(back.to_hgon_string(), text);
    }

    #[test]
    fn hgon_rejects_bad_entries() {
        // non-canonical: (1,0,0) is in the orbit of (0,1,0)
        let err = StepHypergraphon::parse("HGON 2 2 ind 1\n1 0 0 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = StepHypergraphon::parse("HGON 2 2 ind 2\n0 1 0 1\n0 1 0 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, ref message } if message.contains("duplicate")));
        assert!(StepHypergraphon::parse("HGON 2 2 ind 1\n0 1 0 0.5\n").is_err());
        assert!(StepHypergraphon::parse("HGON 2 2 maybe 0\n").is_err());
        assert!(StepHypergraphon::parse("HGON 2 2 ind 1\n0 2 0 1\n").is_err());
    }
}
