use rand::Rng;

use super::StructureGraph;

/// A spanning tree rooted at vertex 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningTree {
    /// Parent of each vertex; the root maps to itself.
    pub parent: Vec<usize>,
    /// Tree edges `(a, b)` with `a < b`, sorted.
    pub edges: Vec<(usize, usize)>,
}

impl SpanningTree {
    /// Vertices ordered so every vertex appears after its parent.
    pub fn topological_order(&self) -> Vec<usize> {
        let n = self.parent.len();
        let mut children = vec![Vec::new(); n];
        for (v, &p) in self.parent.iter().enumerate() {
            if p != v {
                children[p].push(v);
            }
        }
        let mut order = Vec::with_capacity(n);
        order.push(0);
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            order.extend_from_slice(&children[v]);
            i += 1;
        }
        order
    }

    /// Checks the tree against its host graph.
    pub fn is_valid_for(&self, g: &StructureGraph) -> bool {
        let n = g.order();
        if self.parent.len() != n || self.edges.len() + 1 != n || self.parent[0] != 0 {
            return false;
        }
        if !self.edges.iter().all(|&(a, b)| g.has_edge(a, b)) {
            return false;
        }
        self.topological_order().len() == n
    }
}

/// Samples a spanning tree uniformly at random with Wilson's loop-erased
/// random walks, rooted at vertex 0.
///
/// Vertices not yet in the tree start walks in index order. Each walk
/// records the last exit taken from every vertex it visits, which erases
/// loops implicitly; retracing those exits from the start vertex gives the
/// loop-erased path that is grafted onto the tree.
pub fn wilson_spanning_tree<R: Rng + ?Sized>(g: &StructureGraph, rng: &mut R) -> SpanningTree {
    let n = g.order();
    let mut in_tree = vec![false; n];
    let mut next = vec![usize::MAX; n];
    let mut parent = vec![0; n];
    in_tree[0] = true;
    for start in 1..n {
        let mut u = start;
        while !in_tree[u] {
            let nb = g.neighbors(u);
            next[u] = nb[rng.gen_range(0..nb.len())];
            u = next[u];
        }
        let mut u = start;
        while !in_tree[u] {
            in_tree[u] = true;
            parent[u] = next[u];
            u = next[u];
        }
    }
    let mut edges: Vec<(usize, usize)> = (1..n)
        .map(|v| (v.min(parent[v]), v.max(parent[v])))
        .collect();
    edges.sort_unstable();
    SpanningTree { parent, edges }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn tree_graph_has_unique_spanning_tree() {
        let g = StructureGraph::path(3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let t = wilson_spanning_tree(&g, &mut rng);
            assert_eq!(t.edges, vec![(0, 1), (1, 2)]);
            assert!(t.is_valid_for(&g));
        }
    }

    #[test]
    fn same_seed_same_tree() {
        let g = StructureGraph::grid(4, 4);
        let a = wilson_spanning_tree(&g, &mut ChaCha8Rng::seed_from_u64(9));
        let b = wilson_spanning_tree(&g, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
        assert!(a.is_valid_for(&g));
    }

    #[test]
    fn single_vertex() {
        let g = StructureGraph::new(vec!["x".into()], &[]).unwrap();
        let t = wilson_spanning_tree(&g, &mut ChaCha8Rng::seed_from_u64(0));
        assert!(t.edges.is_empty());
        assert!(t.is_valid_for(&g));
    }
}
