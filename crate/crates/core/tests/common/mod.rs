//! Brute-force oracles shared by the integration and acceptance tests. They
//! work on plain adjacency lists and never call the library's algorithms.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use terrainboost::graph::{load_graph, StructureGraph};

pub const US49: &str = include_str!("../../data/us49.json");

pub fn us49() -> StructureGraph {
    load_graph(US49).expect("bundled graph loads")
}

/// Connected graph on `n` vertices: a random tree plus each other pair with
/// probability `p`.
pub fn random_connected_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> StructureGraph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        let (a, b) = (order[i], order[j]);
        edges.push((a.min(b), a.max(b)));
    }
    for a in 0..n {
        for b in a + 1..n {
            if !edges.contains(&(a, b)) && rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    let labels = (0..n).map(|i| format!("v{i}")).collect();
    StructureGraph::new(labels, &edges).expect("random graph is valid")
}

pub fn adjacency(g: &StructureGraph) -> Vec<Vec<usize>> {
    (0..g.order()).map(|v| g.neighbors(v).to_vec()).collect()
}

/// BFS over the subgraph induced by `members`.
pub fn induced_connected(adj: &[Vec<usize>], members: &[bool]) -> bool {
    let Some(start) = members.iter().position(|&m| m) else {
        return false;
    };
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if members[w] && !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    members.iter().zip(&seen).all(|(&m, &s)| !m || s)
}

fn bits(mask: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| mask >> i & 1 == 1).collect()
}

/// Every connected subset of size `<= max_size`, as sorted member lists.
pub fn oracle_connected_sets(g: &StructureGraph, max_size: usize) -> Vec<Vec<usize>> {
    let n = g.order();
    assert!(n <= 20);
    let adj = adjacency(g);
    let mut out = Vec::new();
    for mask in 1u64..(1 << n) {
        if mask.count_ones() as usize <= max_size && induced_connected(&adj, &bits(mask, n)) {
            out.push((0..n).filter(|&i| mask >> i & 1 == 1).collect());
        }
    }
    out.sort();
    out
}

/// Every allowable split as the sorted side containing vertex 0, in
/// lexicographic order.
pub fn oracle_splits(g: &StructureGraph) -> Vec<Vec<usize>> {
    let n = g.order();
    assert!(n <= 20);
    let adj = adjacency(g);
    let full = (1u64 << n) - 1;
    let mut out = Vec::new();
    for mask in (1u64..full).filter(|m| m & 1 == 1) {
        if induced_connected(&adj, &bits(mask, n)) && induced_connected(&adj, &bits(full ^ mask, n)) {
            out.push((0..n).filter(|&i| mask >> i & 1 == 1).collect());
        }
    }
    out.sort();
    out
}

/// Every spanning tree as a sorted list of `(a, b)` edges with `a < b`.
pub fn oracle_spanning_trees(g: &StructureGraph) -> Vec<Vec<(usize, usize)>> {
    let n = g.order();
    let mut edges = Vec::new();
    for a in 0..n {
        for &b in g.neighbors(a) {
            if a < b {
                edges.push((a, b));
            }
        }
    }
    let m = edges.len();
    assert!(m <= 24);
    let mut out = Vec::new();
    for mask in 0u32..(1 << m) {
        if mask.count_ones() as usize + 1 != n {
            continue;
        }
        // union-find acyclicity; n-1 acyclic edges span
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        let mut ok = true;
        let mut chosen = Vec::new();
        for (i, &(a, b)) in edges.iter().enumerate() {
            if mask >> i & 1 == 1 {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra == rb {
                    ok = false;
                    break;
                }
                parent[ra] = rb;
                chosen.push((a, b));
            }
        }
        if ok {
            out.push(chosen);
        }
    }
    out
}

/// Upper critical value of the chi-square distribution.
pub fn chi_square_critical(dof: usize, alpha: f64) -> f64 {
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    ChiSquared::new(dof as f64).unwrap().inverse_cdf(1.0 - alpha)
}

pub fn chi_square_uniform(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let e = total as f64 / counts.len() as f64;
    counts.iter().map(|&c| (c as f64 - e).powi(2) / e).sum()
}
