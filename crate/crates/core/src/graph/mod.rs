//! Graphs that encode the structure of a categorical variable.
//!
//! A [`StructureGraph`] is a simple, connected, undirected graph whose
//! vertices are the category labels. Connected vertex sets are the groups of
//! categories a tree is allowed to aggregate.

mod contraction;
pub(crate) mod mask;
mod spanning;
mod vertex_set;

pub use contraction::ContractionState;
pub use mask::MAX_MASK_VERTICES;
pub use spanning::{wilson_spanning_tree, SpanningTree};
pub use vertex_set::{Members, VertexSet};

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use mask::dispatch_width;

#[derive(Clone, Debug)]
pub struct StructureGraph {
    labels: Vec<String>,
    adj: Vec<Vec<usize>>,
    index: HashMap<String, usize>,
}

impl PartialEq for StructureGraph {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.adj == other.adj
    }
}

impl Eq for StructureGraph {}

/// On-disk graph document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
}

impl StructureGraph {
    /// Builds a validated graph from labels and index pairs.
    pub fn new(labels: Vec<String>, edges: &[(usize, usize)]) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::Validation("graph has no vertices".into()));
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() {
                return Err(Error::Validation(format!("vertex {i} has an empty label")));
            }
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::Validation(format!("duplicate vertex label {l:?}")));
            }
        }
        let n = labels.len();
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::Validation(format!("edge ({a}, {b}) out of range")));
            }
            if a == b {
                return Err(Error::Validation(format!("self-loop on {:?}", labels[a])));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        for (v, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                let dup = list.windows(2).find(|w| w[0] == w[1]).unwrap()[0];
                return Err(Error::Validation(format!(
                    "duplicate edge ({:?}, {:?})",
                    labels[v], labels[dup]
                )));
            }
        }
        let g = Self { labels, adj, index };
        if let Some(v) = g.unreachable_vertex() {
            return Err(Error::Validation(format!(
                "graph is disconnected: {:?} unreachable from {:?}",
                g.labels[v], g.labels[0]
            )));
        }
        Ok(g)
    }

    /// Builds a graph from label pairs; vertices keep the order given.
    pub fn from_labeled_edges<S: AsRef<str>>(vertices: &[S], edges: &[(S, S)]) -> Result<Self> {
        let labels: Vec<String> = vertices.iter().map(|s| s.as_ref().to_owned()).collect();
        let lookup: HashMap<&str, usize> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        let mut idx = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            let (a, b) = (a.as_ref(), b.as_ref());
            let ia = *lookup
                .get(a)
                .ok_or_else(|| Error::Validation(format!("edge references unknown vertex {a:?}")))?;
            let ib = *lookup
                .get(b)
                .ok_or_else(|| Error::Validation(format!("edge references unknown vertex {b:?}")))?;
            idx.push((ia, ib));
        }
        Self::new(labels, &idx)
    }

    pub fn path(n: usize) -> Self {
        let labels = (0..n).map(|i| format!("v{i}")).collect();
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::new(labels, &edges).expect("path graph is valid")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let labels = (0..n).map(|i| format!("v{i}")).collect();
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::new(labels, &edges).expect("cycle graph is valid")
    }

    pub fn complete(n: usize) -> Self {
        let labels = (0..n).map(|i| format!("v{i}")).collect();
        let edges: Vec<_> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        Self::new(labels, &edges).expect("complete graph is valid")
    }

    /// `rows × cols` grid with labels `r{row}c{col}`, row-major order.
    pub fn grid(rows: usize, cols: usize) -> Self {
        let labels = (0..rows)
            .flat_map(|r| (0..cols).map(move |c| format!("r{r}c{c}")))
            .collect();
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                if c + 1 < cols {
                    edges.push((v, v + 1));
                }
                if r + 1 < rows {
                    edges.push((v, v + cols));
                }
            }
        }
        Self::new(labels, &edges).expect("grid graph is valid")
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.order() && self.adj[a].binary_search(&b).is_ok()
    }

    /// Edges `(a, b)` with `a < b`, ordered by `(a, b)`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(a, list)| list.iter().filter(move |&&b| b > a).map(move |&b| (a, b)))
            .collect()
    }

    /// Labels of a vertex set, in vertex order.
    pub fn set_labels(&self, set: &VertexSet) -> Vec<&str> {
        set.iter().map(|v| self.labels[v].as_str()).collect()
    }

    fn unreachable_vertex(&self) -> Option<usize> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for &u in &self.adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        seen.iter().position(|s| !s)
    }

    fn check_width(&self, set: &VertexSet) -> Result<()> {
        if set.width() != self.order() {
            return Err(Error::WidthMismatch {
                expected: self.order(),
                found: set.width(),
            });
        }
        Ok(())
    }

    /// Whether the subgraph induced by `set` is connected. An empty set is
    /// reported as not connected.
    pub fn is_connected(&self, set: &VertexSet) -> Result<bool> {
        self.check_width(set)?;
        let Some(start) = set.first() else {
            return Ok(false);
        };
        let mut reached = VertexSet::singleton(self.order(), start);
        let mut stack = vec![start];
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &u in &self.adj[v] {
                if set.contains(u) && !reached.contains(u) {
                    reached.insert(u);
                    count += 1;
                    stack.push(u);
                }
            }
        }
        Ok(count == set.len())
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            vertices: self.labels.clone(),
            edges: self
                .edges()
                .into_iter()
                .map(|(a, b)| [self.labels[a].clone(), self.labels[b].clone()])
                .collect(),
        }
    }

    pub fn from_file(file: &GraphFile) -> Result<Self> {
        let edges: Vec<(&str, &str)> = file
            .edges
            .iter()
            .map(|[a, b]| (a.as_str(), b.as_str()))
            .collect();
        let vertices: Vec<&str> = file.vertices.iter().map(String::as_str).collect();
        Self::from_labeled_edges(&vertices, &edges)
    }
}

/// Parses and validates a graph document.
///
/// ```text
/// {
///   "vertices": ["a", "b", "c"],
///   "edges": [["a", "b"], ["b", "c"]]
/// }
/// ```
pub fn load_graph(source: &str) -> Result<StructureGraph> {
    let file: GraphFile = serde_json::from_str(source)?;
    StructureGraph::from_file(&file)
}

/// Canonical serialization: vertices in graph order, one edge per line with
/// edges sorted by endpoint position, trailing newline.
pub fn save_graph(g: &StructureGraph) -> String {
    let q = |s: &str| serde_json::to_string(s).expect("strings serialize");
    let mut out = String::from("{\n  \"vertices\": [\n");
    let vs: Vec<String> = g.labels.iter().map(|l| format!("    {}", q(l))).collect();
    out.push_str(&vs.join(",\n"));
    out.push_str("\n  ],\n");
    let es: Vec<String> = g
        .edges()
        .into_iter()
        .map(|(a, b)| format!("    [{}, {}]", q(&g.labels[a]), q(&g.labels[b])))
        .collect();
    if es.is_empty() {
        out.push_str("  \"edges\": []\n}\n");
    } else {
        out.push_str("  \"edges\": [\n");
        out.push_str(&es.join(",\n"));
        out.push_str("\n  ]\n}\n");
    }
    out
}

pub fn read_graph_file(path: &std::path::Path) -> Result<StructureGraph> {
    let text = std::fs::read_to_string(path)?;
    load_graph(&text)
}

/// Stream of connected vertex sets, see [`enumerate_connected_sets`].
pub struct ConnectedSets {
    inner: Box<dyn Iterator<Item = VertexSet> + Send>,
}

impl Iterator for ConnectedSets {
    type Item = VertexSet;

    fn next(&mut self) -> Option<VertexSet> {
        self.inner.next()
    }
}

/// Streams every connected vertex subset with at most `max_size` members,
/// each exactly once.
///
/// Order: grouped by smallest member ascending, then depth-first growth
/// adding frontier vertices in ascending index order. Deterministic for a
/// given graph.
pub fn enumerate_connected_sets(g: &StructureGraph, max_size: usize) -> Result<ConnectedSets> {
    let n = g.order();
    if max_size == 0 || max_size > n {
        return Err(Error::InvalidConfig(format!(
            "max_size must be in 1..={n}, got {max_size}"
        )));
    }
    dispatch_width!(n, W => {
        let it = mask::ConnectedMasks::<W>::new(mask::adjacency::<W>(g), max_size)
            .map(move |m| VertexSet::from_words(n, &m));
        ConnectedSets { inner: Box::new(it) }
    })
    .ok_or_else(|| too_large(n))
}

/// Number of connected sets with at most `max_size` members.
pub fn count_connected_sets(g: &StructureGraph, max_size: usize) -> Result<u64> {
    let n = g.order();
    if max_size == 0 || max_size > n {
        return Err(Error::InvalidConfig(format!(
            "max_size must be in 1..={n}, got {max_size}"
        )));
    }
    dispatch_width!(n, W => {
        mask::ConnectedMasks::<W>::new(mask::adjacency::<W>(g), max_size).count() as u64
    })
    .ok_or_else(|| too_large(n))
}

pub(crate) fn too_large(n: usize) -> Error {
    Error::Validation(format!(
        "graph with {n} vertices exceeds the enumeration limit of {MAX_MASK_VERTICES}"
    ))
}
