//! Allowable splits of a structure graph and the samplers that produce them.
//!
//! An allowable split is a bipartition `{S, S^C}` of the vertices where both
//! sides induce connected subgraphs. Three producers are provided:
//!
//! * [`enumerate_allowable_splits`]: the exact set, exponential in `|V|`.
//! * [`sample_splits_edge_contraction`]: contract random edges down to `c`
//!   super-vertices, enumerate exactly there, lift back, keep a random `m`.
//! * [`sample_splits_spanning_tree`]: draw `n` uniform spanning trees and cut
//!   each tree edge.
//!
//! Every allowable split is produced with positive probability by both
//! samplers, but not uniformly.

use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::mask::{self, dispatch_width, Mask};
use crate::graph::{too_large, wilson_spanning_tree, ContractionState, StructureGraph, VertexSet};

/// Default cap on connected sets visited by full enumeration.
pub const DEFAULT_ENUMERATION_LIMIT: u64 = 50_000_000;

/// A bipartition of a graph's vertices stored by its canonical side, the one
/// containing vertex 0.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Split {
    left: VertexSet,
}

impl Split {
    /// Validates `side` as one side of an allowable split of `g` and stores
    /// it in canonical form.
    pub fn new(g: &StructureGraph, side: VertexSet) -> Result<Self> {
        if side.width() != g.order() {
            return Err(Error::WidthMismatch {
                expected: g.order(),
                found: side.width(),
            });
        }
        let other = side.complement();
        if side.is_empty() || other.is_empty() {
            return Err(Error::Validation("split side must be non-empty and proper".into()));
        }
        if !g.is_connected(&side)? || !g.is_connected(&other)? {
            return Err(Error::Validation(format!(
                "split {:?} is not allowable: a side is disconnected",
                g.set_labels(&side)
            )));
        }
        Ok(Self::canonical(side))
    }

    /// Canonical form without validation.
    pub(crate) fn canonical(side: VertexSet) -> Self {
        if side.contains(0) {
            Self { left: side }
        } else {
            Self {
                left: side.complement(),
            }
        }
    }

    /// Side containing vertex 0.
    pub fn left(&self) -> &VertexSet {
        &self.left
    }

    pub fn right(&self) -> VertexSet {
        self.left.complement()
    }

    pub fn is_allowable_on(&self, g: &StructureGraph) -> bool {
        Split::new(g, self.left.clone()).is_ok_and(|s| s == *self)
    }

    /// Labels of the canonical side, in vertex order.
    pub fn labels<'g>(&self, g: &'g StructureGraph) -> Vec<&'g str> {
        g.set_labels(&self.left)
    }
}

impl fmt::Debug for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Split{:?}", self.left)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplingMethod {
    FullEnumeration,
    EdgeContraction,
    SpanningTree,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SamplerConfig {
    pub method: SamplingMethod,
    /// Order of the contracted graph.
    pub contraction_size: usize,
    /// Upper bound on returned splits for edge contraction, and on the
    /// uniform subsample drawn from full enumeration.
    pub max_splits_to_search: usize,
    pub num_spanning_trees: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            method: SamplingMethod::SpanningTree,
            contraction_size: 5,
            max_splits_to_search: 20,
            num_spanning_trees: 1,
        }
    }
}

impl SamplerConfig {
    pub fn spanning_tree(n: usize) -> Self {
        Self {
            method: SamplingMethod::SpanningTree,
            num_spanning_trees: n,
            ..Self::default()
        }
    }

    pub fn edge_contraction(c: usize, m: usize) -> Self {
        Self {
            method: SamplingMethod::EdgeContraction,
            contraction_size: c,
            max_splits_to_search: m,
            ..Self::default()
        }
    }

    /// Full enumeration, subsampled to `m` splits per call.
    pub fn full_enumeration(m: usize) -> Self {
        Self {
            method: SamplingMethod::FullEnumeration,
            max_splits_to_search: m,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.contraction_size < 2 {
            return Err(Error::InvalidConfig("contraction_size must be at least 2".into()));
        }
        if self.max_splits_to_search < 1 {
            return Err(Error::InvalidConfig("max_splits_to_search must be at least 1".into()));
        }
        if self.num_spanning_trees < 1 {
            return Err(Error::InvalidConfig("num_spanning_trees must be at least 1".into()));
        }
        Ok(())
    }
}

/// Depth-first search over connected sets `S` of size at most `⌊n/2⌋`,
/// grown from their smallest vertex.
///
/// Vertices passed over by the search (smaller roots, earlier siblings) can
/// never join `S`, so they must end up in `S^C`. A branch is abandoned as
/// soon as those excluded vertices do not lie in a single component of
/// `G[V \ S]`: growing `S` only splits that region further, so no
/// descendant could have a connected complement. The pruning does not
/// change the output, only the number of sets visited.
struct SplitSearch<'a, const W: usize, F> {
    adj: &'a [Mask<W>],
    all: Mask<W>,
    n: usize,
    limit: u64,
    visited: u64,
    visit: F,
}

impl<const W: usize, F: FnMut(Mask<W>)> SplitSearch<'_, W, F> {
    fn excluded_hang_together(&self, set: &Mask<W>, excluded: &Mask<W>) -> bool {
        let Some(start) = mask::lowest(excluded) else {
            return true;
        };
        let region = mask::and_not(&self.all, set);
        let mut reached = mask::bit::<W>(start);
        let mut frontier = reached;
        while let Some(v) = mask::pop_lowest(&mut frontier) {
            let fresh = mask::and_not(&mask::and(&self.adj[v], &region), &reached);
            reached = mask::or(&reached, &fresh);
            frontier = mask::or(&frontier, &fresh);
        }
        mask::is_zero(&mask::and_not(excluded, &reached))
    }

    fn grow(&mut self, set: Mask<W>, nbhd: Mask<W>, excluded: Mask<W>, size: usize) -> Result<()> {
        self.visited += 1;
        if self.visited > self.limit {
            return Err(Error::ResourceLimit { limit: self.limit });
        }
        let has_root = mask::has(&set, 0);
        if !(2 * size == self.n && !has_root) {
            let rest = mask::and_not(&self.all, &set);
            if mask::is_connected_mask(self.adj, &rest) {
                (self.visit)(if has_root { set } else { rest });
            }
        }
        if 2 * (size + 1) > self.n {
            return Ok(());
        }
        let mut candidates = mask::and_not(&mask::and_not(&nbhd, &set), &excluded);
        let mut excluded = excluded;
        while let Some(u) = mask::pop_lowest(&mut candidates) {
            let ub = mask::bit::<W>(u);
            let child = mask::or(&set, &ub);
            if self.excluded_hang_together(&child, &excluded) {
                self.grow(child, mask::or(&nbhd, &self.adj[u]), excluded, size + 1)?;
            }
            excluded = mask::or(&excluded, &ub);
        }
        Ok(())
    }
}

/// Calls `visit` with the canonical side of every allowable split; at
/// `|S| = n/2` only the set holding vertex 0 is kept. Returns the number of
/// connected sets visited.
fn allowable_split_masks<const W: usize>(
    adj: Vec<Mask<W>>,
    limit: u64,
    visit: impl FnMut(Mask<W>),
) -> Result<u64> {
    let n = adj.len();
    if n < 2 {
        return Ok(0);
    }
    let mut search = SplitSearch {
        adj: &adj,
        all: mask::full::<W>(n),
        n,
        limit,
        visited: 0,
        visit,
    };
    for (v, &nbr) in adj.iter().enumerate().take(n) {
        let set = mask::bit::<W>(v);
        let excluded = mask::full::<W>(v);
        if search.excluded_hang_together(&set, &excluded) {
            search.grow(set, nbr, excluded, 1)?;
        }
    }
    Ok(search.visited)
}

/// Every allowable split of `g` in canonical order.
///
/// `limit` caps the number of connected sets visited; `None` means
/// [`DEFAULT_ENUMERATION_LIMIT`].
pub fn enumerate_allowable_splits(g: &StructureGraph, limit: Option<u64>) -> Result<Vec<Split>> {
    let n = g.order();
    if n < 2 {
        return Err(Error::InvalidConfig("splits need at least 2 vertices".into()));
    }
    let limit = limit.unwrap_or(DEFAULT_ENUMERATION_LIMIT);
    let mut out = Vec::new();
    dispatch_width!(n, W => allowable_split_masks::<W>(mask::adjacency::<W>(g), limit, |m| {
        out.push(Split { left: VertexSet::from_words(n, &m) });
    }))
    .ok_or_else(|| too_large(n))??;
    out.sort_unstable();
    Ok(out)
}

/// Counts allowable splits without materializing them. Returns
/// `(splits, connected sets visited)`.
pub fn count_allowable_splits(g: &StructureGraph, limit: Option<u64>) -> Result<(u64, u64)> {
    let n = g.order();
    if n < 2 {
        return Err(Error::InvalidConfig("splits need at least 2 vertices".into()));
    }
    let limit = limit.unwrap_or(DEFAULT_ENUMERATION_LIMIT);
    let mut count = 0u64;
    let visited = dispatch_width!(n, W => allowable_split_masks::<W>(mask::adjacency::<W>(g), limit, |_| {
        count += 1;
    }))
    .ok_or_else(|| too_large(n))??;
    Ok((count, visited))
}

/// Maps a split of a contracted graph back to the original graph.
pub fn lift_split(contracted: &Split, state: &ContractionState) -> Result<Split> {
    let lifted = state.lift_set(contracted.left())?;
    Split::new(state.original(), lifted).map_err(|e| Error::InconsistentState(e.to_string()))
}

/// Allocation-light minor used by the edge-contraction sampler. Each
/// super-vertex is named by its smallest original vertex.
pub(crate) struct MaskMinor<const W: usize> {
    alive: Mask<W>,
    members: Vec<Mask<W>>,
    nbr: Vec<Mask<W>>,
    order: usize,
}

impl<const W: usize> MaskMinor<W> {
    pub(crate) fn new(g: &StructureGraph) -> Self {
        let n = g.order();
        Self {
            alive: mask::full::<W>(n),
            members: (0..n).map(mask::bit::<W>).collect(),
            nbr: mask::adjacency::<W>(g),
            order: n,
        }
    }

    pub(crate) fn order(&self) -> usize {
        self.order
    }

    fn edge_count(&self) -> usize {
        let mut alive = self.alive;
        let mut total = 0;
        while let Some(r) = mask::pop_lowest(&mut alive) {
            total += mask::popcount(&mask::and_not(&self.nbr[r], &mask::full::<W>(r + 1)));
        }
        total
    }

    /// `k`-th edge `(r, s)`, `r < s`, in lexicographic order.
    fn nth_edge(&self, mut k: usize) -> (usize, usize) {
        let mut alive = self.alive;
        while let Some(r) = mask::pop_lowest(&mut alive) {
            let mut above = mask::and_not(&self.nbr[r], &mask::full::<W>(r + 1));
            let cnt = mask::popcount(&above);
            if k < cnt {
                for _ in 0..k {
                    mask::pop_lowest(&mut above);
                }
                return (r, mask::lowest(&above).expect("edge exists"));
            }
            k -= cnt;
        }
        unreachable!("edge index out of range")
    }

    /// Contracts the edge between representatives `a < b`.
    pub(crate) fn contract(&mut self, a: usize, b: usize) {
        debug_assert!(a < b && mask::has(&self.nbr[a], b));
        let bb = mask::bit::<W>(b);
        let ab = mask::bit::<W>(a);
        self.members[a] = mask::or(&self.members[a], &self.members[b]);
        let mut others = mask::and_not(&self.nbr[b], &ab);
        self.nbr[a] = mask::and_not(&mask::or(&self.nbr[a], &others), &mask::or(&ab, &bb));
        while let Some(x) = mask::pop_lowest(&mut others) {
            self.nbr[x] = mask::or(&mask::and_not(&self.nbr[x], &bb), &ab);
        }
        self.nbr[b] = mask::zero();
        self.members[b] = mask::zero();
        self.alive = mask::and_not(&self.alive, &bb);
        self.order -= 1;
    }

    pub(crate) fn contract_random<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let k = rng.gen_range(0..self.edge_count());
        let (a, b) = self.nth_edge(k);
        self.contract(a, b);
    }

    /// Representatives in ascending order; position `i` is vertex `i` of
    /// the compacted minor.
    pub(crate) fn reps(&self) -> Vec<usize> {
        let mut alive = self.alive;
        std::iter::from_fn(|| mask::pop_lowest(&mut alive)).collect()
    }

    #[cfg(test)]
    pub(crate) fn members(&self, rep: usize) -> &Mask<W> {
        &self.members[rep]
    }

    /// Lifted canonical sides of all allowable splits of the minor.
    pub(crate) fn lifted_splits(&self) -> Result<Vec<Mask<W>>> {
        let reps = self.reps();
        let pos = |r: usize| reps.binary_search(&r).expect("alive rep");
        let compact: Vec<Mask<W>> = reps
            .iter()
            .map(|&r| {
                let mut m = mask::zero::<W>();
                let mut nb = self.nbr[r];
                while let Some(s) = mask::pop_lowest(&mut nb) {
                    let p = pos(s);
                    m[p / 64] |= 1 << (p % 64);
                }
                m
            })
            .collect();
        let mut out = Vec::new();
        allowable_split_masks::<W>(compact, u64::MAX, |m| {
            let mut lifted = mask::zero::<W>();
            let mut bits = m;
            while let Some(p) = mask::pop_lowest(&mut bits) {
                lifted = mask::or(&lifted, &self.members[reps[p]]);
            }
            out.push(lifted);
        })?;
        Ok(out)
    }
}

fn check_method(cfg: &SamplerConfig, method: SamplingMethod) -> Result<()> {
    cfg.validate()?;
    if cfg.method != method {
        return Err(Error::InvalidConfig(format!(
            "expected method {method:?}, got {:?}",
            cfg.method
        )));
    }
    Ok(())
}

fn choose_subset<R: Rng + ?Sized>(mut splits: Vec<Split>, m: usize, rng: &mut R) -> Vec<Split> {
    if splits.len() > m {
        let mut picked: Vec<usize> = index::sample(rng, splits.len(), m).into_vec();
        picked.sort_unstable();
        let mut taken = Vec::with_capacity(m);
        for i in picked.into_iter().rev() {
            taken.push(splits.swap_remove(i));
        }
        splits = taken;
        splits.sort_unstable();
    }
    splits
}

/// Edge-contraction sampler: contracts `|V| - c` uniformly chosen distinct
/// edges in sequence, enumerates the allowable splits of the minor, lifts
/// them, and returns a uniform subset of size `min(m, count)` drawn without
/// replacement, in canonical order.
pub fn sample_splits_edge_contraction<R: Rng + ?Sized>(
    g: &StructureGraph,
    cfg: &SamplerConfig,
    rng: &mut R,
) -> Result<Vec<Split>> {
    check_method(cfg, SamplingMethod::EdgeContraction)?;
    let n = g.order();
    if cfg.contraction_size > n {
        return Err(Error::InvalidConfig(format!(
            "contraction_size {} exceeds graph order {n}",
            cfg.contraction_size
        )));
    }
    let lifted = dispatch_width!(n, W => {
        let mut minor = MaskMinor::<W>::new(g);
        while minor.order() > cfg.contraction_size {
            minor.contract_random(rng);
        }
        minor.lifted_splits().map(|sides| {
            sides
                .iter()
                .map(|m| Split { left: VertexSet::from_words(n, m) })
                .collect::<Vec<_>>()
        })
    })
    .ok_or_else(|| too_large(n))??;
    let mut lifted = lifted;
    lifted.sort_unstable();
    Ok(choose_subset(lifted, cfg.max_splits_to_search, rng))
}

/// Splits induced by cutting each edge of a spanning tree.
pub fn tree_edge_splits(tree: &crate::graph::SpanningTree) -> Vec<Split> {
    let n = tree.parent.len();
    let mut subtree: Vec<VertexSet> = (0..n).map(|v| VertexSet::singleton(n, v)).collect();
    let order = tree.topological_order();
    let mut out = Vec::with_capacity(n.saturating_sub(1));
    for &v in order.iter().rev() {
        if v == 0 {
            continue;
        }
        let p = tree.parent[v];
        let below = subtree[v].clone();
        subtree[p].union_with(&below);
        out.push(Split {
            left: below.complement(),
        });
    }
    out
}

/// Spanning-tree sampler: `n` Wilson trees, one split per tree edge,
/// deduplicated, in canonical order.
pub fn sample_splits_spanning_tree<R: Rng + ?Sized>(
    g: &StructureGraph,
    cfg: &SamplerConfig,
    rng: &mut R,
) -> Result<Vec<Split>> {
    check_method(cfg, SamplingMethod::SpanningTree)?;
    let mut out = Vec::with_capacity(cfg.num_spanning_trees * g.order().saturating_sub(1));
    for _ in 0..cfg.num_spanning_trees {
        out.extend(tree_edge_splits(&wilson_spanning_tree(g, rng)));
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Per-graph candidate generator used during tree growth. Caches the full
/// enumeration when that method is selected.
pub struct SplitSampler {
    graph: Arc<StructureGraph>,
    config: SamplerConfig,
    limit: u64,
    enumerated: OnceLock<std::result::Result<Vec<Split>, String>>,
}

impl SplitSampler {
    pub fn new(graph: Arc<StructureGraph>, config: SamplerConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            graph,
            config,
            limit: DEFAULT_ENUMERATION_LIMIT,
            enumerated: OnceLock::new(),
        })
    }

    pub fn with_limit(mut self, limit: u64) -> Self {
        self.limit = limit;
        self
    }

    pub fn graph(&self) -> &StructureGraph {
        &self.graph
    }

    /// Candidate splits in canonical order. Graphs with a single vertex
    /// have none.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<Split>> {
        let g = &*self.graph;
        if g.order() < 2 {
            return Ok(Vec::new());
        }
        match self.config.method {
            SamplingMethod::FullEnumeration => {
                let all = self
                    .enumerated
                    .get_or_init(|| enumerate_allowable_splits(g, Some(self.limit)).map_err(|e| e.to_string()))
                    .as_ref()
                    .map_err(|e| Error::InvalidConfig(e.clone()))?;
                Ok(choose_subset(all.clone(), self.config.max_splits_to_search, rng))
            }
            SamplingMethod::EdgeContraction => {
                let mut cfg = self.config.clone();
                cfg.contraction_size = cfg.contraction_size.min(g.order());
                sample_splits_edge_contraction(g, &cfg, rng)
            }
            SamplingMethod::SpanningTree => sample_splits_spanning_tree(g, &self.config, rng),
        }
    }
}
