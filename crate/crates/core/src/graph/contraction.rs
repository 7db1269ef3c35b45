use std::sync::Arc;

use super::{StructureGraph, VertexSet};
use crate::error::{Error, Result};

/// A graph minor obtained by edge contractions, together with the set of
/// original vertices absorbed by each super-vertex.
#[derive(Clone, Debug)]
pub struct ContractionState {
    original: Arc<StructureGraph>,
    current: StructureGraph,
    merge_map: Vec<VertexSet>,
}

impl ContractionState {
    /// Identity state: nothing contracted yet.
    pub fn new(original: Arc<StructureGraph>) -> Self {
        let n = original.order();
        let merge_map = (0..n).map(|v| VertexSet::singleton(n, v)).collect();
        Self {
            current: (*original).clone(),
            original,
            merge_map,
        }
    }

    pub fn original(&self) -> &StructureGraph {
        &self.original
    }

    pub fn current(&self) -> &StructureGraph {
        &self.current
    }

    /// Original vertices absorbed by each super-vertex, indexed like
    /// `current()`.
    pub fn merge_map(&self) -> &[VertexSet] {
        &self.merge_map
    }

    /// Super-vertex currently holding original vertex `v`.
    pub fn super_vertex_of(&self, v: usize) -> Option<usize> {
        self.merge_map.iter().position(|s| s.contains(v))
    }

    /// Contracts the edge `(a, b)` of the current graph.
    ///
    /// The merged vertex takes the position of the smaller endpoint; the
    /// larger endpoint is removed and later positions shift down by one.
    /// Its label is the sorted constituent labels joined by `+`.
    pub fn contract_edge(&self, a: usize, b: usize) -> Result<Self> {
        if !self.current.has_edge(a, b) {
            return Err(Error::EdgeNotFound(a, b));
        }
        let (keep, drop) = if a < b { (a, b) } else { (b, a) };
        let n = self.current.order();
        let remap = |v: usize| -> usize {
            if v == drop {
                keep
            } else if v > drop {
                v - 1
            } else {
                v
            }
        };

        let mut merge_map = self.merge_map.clone();
        let absorbed = merge_map.remove(drop);
        merge_map[keep].union_with(&absorbed);

        let mut edges = Vec::with_capacity(self.current.edge_count());
        for (u, v) in self.current.edges() {
            let (ru, rv) = (remap(u), remap(v));
            if ru != rv {
                edges.push((ru.min(rv), ru.max(rv)));
            }
        }
        edges.sort_unstable();
        edges.dedup();

        let labels = (0..n - 1)
            .map(|i| {
                if i == keep {
                    self.merged_label(&merge_map[i])
                } else {
                    let old = if i >= drop { i + 1 } else { i };
                    self.current.label(old).to_owned()
                }
            })
            .collect();
        let current = StructureGraph::new(labels, &edges)
            .map_err(|e| Error::InconsistentState(e.to_string()))?;
        Ok(Self {
            original: Arc::clone(&self.original),
            current,
            merge_map,
        })
    }

    /// Contracts the edge joining the super-vertices that hold the two
    /// original labels.
    pub fn contract_labels(&self, a: &str, b: &str) -> Result<Self> {
        let find = |l: &str| {
            self.original
                .index_of(l)
                .and_then(|v| self.super_vertex_of(v))
                .ok_or_else(|| Error::Validation(format!("unknown vertex {l:?}")))
        };
        let (sa, sb) = (find(a)?, find(b)?);
        self.contract_edge(sa, sb)
    }

    /// Maps a set of super-vertices to the union of their original vertices.
    pub fn lift_set(&self, set: &VertexSet) -> Result<VertexSet> {
        if set.width() != self.current.order() {
            return Err(Error::InconsistentState(format!(
                "set width {} does not match contracted order {}",
                set.width(),
                self.current.order()
            )));
        }
        let mut out = VertexSet::empty(self.original.order());
        for v in set.iter() {
            out.union_with(&self.merge_map[v]);
        }
        Ok(out)
    }

    fn merged_label(&self, members: &VertexSet) -> String {
        let mut parts: Vec<&str> = members.iter().map(|v| self.original.label(v)).collect();
        parts.sort_unstable();
        parts.join("+")
    }
}
