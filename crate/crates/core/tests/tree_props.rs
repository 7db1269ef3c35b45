mod common;

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use terrainboost::data::Column;
use terrainboost::tree::{grow_tree, Rule};
use terrainboost::{Dataset, FeatureSpec, GrowthParams, SamplerConfig, Schema, StructureGraph, TreeNode};

use common::*;

struct Case {
    data: Dataset<f64>,
    graph: StructureGraph,
    rows: Vec<usize>,
    g: Vec<f64>,
    h: Vec<f64>,
}

/// One numeric feature with ties and missing values, one categorical
/// feature on a random graph, gradients from random margins.
fn random_case(rng: &mut ChaCha8Rng) -> Case {
    let n_vert = rng.gen_range(2..=8);
    let graph = random_connected_graph(rng, n_vert, 0.3);
    let schema = Arc::new(
        Schema::new(
            vec![
                FeatureSpec::numeric("x"),
                FeatureSpec::categorical("c", Arc::new(graph.clone())),
            ],
            "y",
        )
        .unwrap(),
    );
    let n = rng.gen_range(2..60);
    let missing: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.1)).collect();
    let values: Vec<f64> = missing
        .iter()
        .map(|&m| if m { 0.0 } else { f64::from(rng.gen_range(0..8)) * 0.5 })
        .collect();
    let cats: Vec<u32> = (0..n).map(|_| rng.gen_range(0..n_vert as u32)).collect();
    let y: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2)).collect();
    let data = Dataset::new(
        schema,
        vec![Column::Numeric { values: values.clone(), missing }, Column::Categorical(cats)],
        Some(y.clone()),
    )
    .unwrap();
    let (mut g, mut h) = (Vec::new(), Vec::new());
    for &yi in &y {
        let p = 1.0 / (1.0 + (-rng.gen_range(-2.0..2.0f64)).exp());
        g.push(p - f64::from(yi));
        h.push(p * (1.0 - p));
    }
    let rows: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.85)).collect();
    let rows = if rows.is_empty() { vec![0] } else { rows };
    Case { data, graph, rows, g, h }
}

fn oracle_gain(gl: f64, hl: f64, gr: f64, hr: f64, lambda: f64) -> f64 {
    let t = |g: f64, h: f64| if h + lambda > 0.0 { g * g / (h + lambda) } else { 0.0 };
    0.5 * (t(gl, hl) + t(gr, hr) - t(gl + gr, hl + hr))
}

/// Every admissible partition of `rows`, as left-membership predicates,
/// with its gain.
fn oracle_candidates(c: &Case, rows: &[usize], p: &GrowthParams) -> Vec<(f64, Vec<bool>)> {
    let mut out = Vec::new();
    let mut push = |left: Vec<bool>| {
        let (mut gl, mut hl, mut gr, mut hr, mut nl) = (0.0, 0.0, 0.0, 0.0, 0);
        for (k, &r) in rows.iter().enumerate() {
            if left[k] {
                gl += c.g[r];
                hl += c.h[r];
                nl += 1;
            } else {
                gr += c.g[r];
                hr += c.h[r];
            }
        }
        if nl >= p.min_samples_leaf && rows.len() - nl >= p.min_samples_leaf {
            out.push((oracle_gain(gl, hl, gr, hr, p.reg_lambda), left));
        }
    };
    let mut distinct: Vec<f64> = rows.iter().filter_map(|&r| c.data.numeric(0, r)).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    for &v in distinct.iter().take(distinct.len().saturating_sub(1)) {
        push(rows.iter().map(|&r| c.data.numeric(0, r).is_none_or(|x| x <= v)).collect());
    }
    for side in oracle_splits(&c.graph) {
        push(rows.iter().map(|&r| side.contains(&c.data.category(1, r))).collect());
    }
    out
}

fn goes_left(c: &Case, feature: usize, rule: &Rule<f64>, r: usize) -> bool {
    match rule {
        Rule::Threshold(t) => c.data.numeric(feature, r).is_none_or(|x| x <= *t),
        Rule::Categories(s) => s.left().contains(c.data.category(feature, r)),
    }
}

/// Walks the grown tree and checks each node against the brute force.
fn check_node(c: &Case, node: &TreeNode<f64>, rows: &[usize], depth: usize, p: &GrowthParams) {
    let best = oracle_candidates(c, rows, p)
        .into_iter()
        .map(|(gain, _)| gain)
        .filter(|&gain| gain > 0.0)
        .fold(None, |m: Option<f64>, x| Some(m.map_or(x, |m| m.max(x))));
    match node {
        TreeNode::Leaf { value } => {
            let g: f64 = rows.iter().map(|&r| c.g[r]).sum();
            let h: f64 = rows.iter().map(|&r| c.h[r]).sum();
            assert!((value + g / (h + p.reg_lambda)).abs() <= 1e-12, "leaf {value} vs Newton step");
            if depth < p.max_depth && rows.len() >= 2 * p.min_samples_leaf {
                assert!(best.is_none_or(|b| b < 1e-12), "stopped early with oracle gain {best:?}");
            }
        }
        TreeNode::Internal { feature, rule, left, right } => {
            assert!(depth < p.max_depth);
            let mask: Vec<bool> = rows.iter().map(|&r| goes_left(c, *feature, rule, r)).collect();
            let (l, r): (Vec<usize>, Vec<usize>) = rows.iter().partition(|&&r| goes_left(c, *feature, rule, r));
            let gain = oracle_candidates(c, rows, p)
                .into_iter()
                .find(|(_, m)| *m == mask)
                .map(|(g, _)| g)
                .expect("chosen partition is admissible");
            let best = best.expect("split chosen with no positive oracle gain");
            assert!((gain - best).abs() <= 1e-9 * best.abs().max(1.0), "gain {gain} vs oracle best {best}");
            check_node(c, left, &l, depth + 1, p);
            check_node(c, right, &r, depth + 1, p);
        }
    }
}

#[test]
fn exhaustive_growth_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..300 {
        let c = random_case(&mut rng);
        let p = GrowthParams {
            max_depth: rng.gen_range(1..=4),
            min_samples_leaf: rng.gen_range(1..=3),
            reg_lambda: [0.0, 0.5, 1.0, 3.0][rng.gen_range(0..4)],
            min_gain: 0.0,
            sampler: SamplerConfig::full_enumeration(10_000),
        };
        let tree = grow_tree(&c.data, &c.rows, &c.g, &c.h, &p, &mut rng).unwrap();
        check_node(&c, &tree, &c.rows, 0, &p);
    }
}

/// Regularised second-order objective of a tree's leaves.
fn objective(c: &Case, node: &TreeNode<f64>, rows: &[usize], lambda: f64) -> f64 {
    match node {
        TreeNode::Leaf { value } => {
            let g: f64 = rows.iter().map(|&r| c.g[r]).sum();
            let h: f64 = rows.iter().map(|&r| c.h[r]).sum();
            g * value + 0.5 * (h + lambda) * value * value
        }
        TreeNode::Internal { feature, rule, left, right } => {
            let (l, r): (Vec<usize>, Vec<usize>) = rows.iter().partition(|&&r| goes_left(c, *feature, rule, r));
            objective(c, left, &l, lambda) + objective(c, right, &r, lambda)
        }
    }
}

#[test]
fn deeper_trees_never_raise_the_objective() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let c = random_case(&mut rng);
        let mut prev = f64::INFINITY;
        for depth in 1..=4 {
            let p = GrowthParams {
                max_depth: depth,
                sampler: SamplerConfig::full_enumeration(10_000),
                ..GrowthParams::default()
            };
            let tree = grow_tree(&c.data, &c.rows, &c.g, &c.h, &p, &mut rng).unwrap();
            assert!(tree.depth() <= depth);
            let obj = objective(&c, &tree, &c.rows, p.reg_lambda);
            assert!(obj <= prev + 1e-12, "depth {depth}: {obj} > {prev}");
            prev = obj;
        }
    }
}

#[test]
fn min_gain_prunes_weak_splits() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..50 {
        let c = random_case(&mut rng);
        let base = GrowthParams {
            max_depth: 1,
            sampler: SamplerConfig::full_enumeration(10_000),
            ..GrowthParams::default()
        };
        let best = oracle_candidates(&c, &c.rows, &base)
            .into_iter()
            .map(|(g, _)| g)
            .fold(0.0f64, f64::max);
        let strict = GrowthParams { min_gain: best + 1e-6, ..base };
        let tree = grow_tree(&c.data, &c.rows, &c.g, &c.h, &strict, &mut rng).unwrap();
        assert_eq!(tree.leaf_count(), 1);
    }
}

#[test]
fn sampled_growth_only_uses_allowable_rules() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..100 {
        let c = random_case(&mut rng);
        for sampler in [SamplerConfig::spanning_tree(1), SamplerConfig::edge_contraction(2, 3)] {
            let p = GrowthParams { max_depth: 3, sampler, ..GrowthParams::default() };
            let tree = grow_tree(&c.data, &c.rows, &c.g, &c.h, &p, &mut rng).unwrap();
            tree.validate(c.data.schema()).unwrap();
        }
    }
}
