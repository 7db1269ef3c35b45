//! Structured categorical decision trees fitted to gradient/hessian targets.
//!
//! Numeric features split on `value <= threshold`. Categorical features split
//! on membership in one side of an allowable split of the feature's graph,
//! so every vertex of the graph routes somewhere, including categories never
//! seen in training.

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::data::{Dataset, FeatureKind, Schema};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::split::{SamplerConfig, Split, SplitSampler};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GrowthParams {
    pub max_depth: usize,
    pub min_samples_leaf: usize,
    pub reg_lambda: f64,
    pub min_gain: f64,
    pub sampler: SamplerConfig,
}

impl Default for GrowthParams {
    fn default() -> Self {
        Self {
            max_depth: 3,
            min_samples_leaf: 1,
            reg_lambda: 1.0,
            min_gain: 0.0,
            sampler: SamplerConfig::default(),
        }
    }
}

impl GrowthParams {
    pub fn validate(&self) -> Result<()> {
        if self.max_depth < 1 {
            return Err(Error::InvalidConfig("max_depth must be at least 1".into()));
        }
        if self.min_samples_leaf < 1 {
            return Err(Error::InvalidConfig("min_samples_leaf must be at least 1".into()));
        }
        if self.reg_lambda.is_nan() || self.reg_lambda < 0.0 || self.min_gain.is_nan() || self.min_gain < 0.0 {
            return Err(Error::InvalidConfig("reg_lambda and min_gain must be non-negative".into()));
        }
        self.sampler.validate()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Rule<T> {
    /// `value <= threshold` (or missing) goes left.
    Threshold(T),
    /// Membership in the split's canonical side goes left.
    Categories(Split),
}

#[derive(Clone, Debug, PartialEq)]
pub enum TreeNode<T> {
    Leaf {
        value: T,
    },
    Internal {
        feature: usize,
        rule: Rule<T>,
        left: Box<TreeNode<T>>,
        right: Box<TreeNode<T>>,
    },
}

impl<T: Scalar> TreeNode<T> {
    /// Leaf value for a dataset row. Categorical values in a [`Dataset`] are
    /// validated vertex indices, so routing cannot fail.
    pub fn route(&self, data: &Dataset<T>, row: usize) -> T {
        let mut node = self;
        loop {
            match node {
                TreeNode::Leaf { value } => return *value,
                TreeNode::Internal {
                    feature,
                    rule,
                    left,
                    right,
                } => {
                    let go_left = match rule {
                        Rule::Threshold(t) => data.numeric(*feature, row).is_none_or(|v| v <= *t),
                        Rule::Categories(s) => s.left().contains(data.category(*feature, row)),
                    };
                    node = if go_left { left } else { right };
                }
            }
        }
    }

    /// Leaf value for a raw record, one entry per schema feature.
    pub fn route_record(&self, schema: &Schema, record: &[FeatureValue<'_, T>]) -> Result<T> {
        if record.len() != schema.features().len() {
            return Err(Error::SchemaMismatch(format!(
                "record has {} values for {} features",
                record.len(),
                schema.features().len()
            )));
        }
        let mut node = self;
        loop {
            match node {
                TreeNode::Leaf { value } => return Ok(*value),
                TreeNode::Internal {
                    feature,
                    rule,
                    left,
                    right,
                } => {
                    let spec = &schema.features()[*feature];
                    let go_left = match (rule, &record[*feature], &spec.kind) {
                        (Rule::Threshold(t), FeatureValue::Numeric(v), _) => v.is_none_or(|v| v <= *t),
                        (Rule::Categories(s), FeatureValue::Category(label), FeatureKind::Categorical(g)) => {
                            let label = label.ok_or_else(|| Error::MissingValue {
                                feature: spec.name.clone(),
                                row: None,
                            })?;
                            let v = g.index_of(label).ok_or_else(|| Error::UnknownCategory {
                                feature: spec.name.clone(),
                                value: label.to_owned(),
                                row: None,
                            })?;
                            s.left().contains(v)
                        }
                        _ => {
                            return Err(Error::SchemaMismatch(format!(
                                "value kind does not match feature {:?}",
                                spec.name
                            )))
                        }
                    };
                    node = if go_left { left } else { right };
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Internal { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Internal { left, right, .. } => left.leaf_count() + right.leaf_count(),
        }
    }

    /// Re-validates every categorical rule against its feature graph.
    pub fn validate(&self, schema: &Schema) -> Result<()> {
        match self {
            TreeNode::Leaf { .. } => Ok(()),
            TreeNode::Internal {
                feature,
                rule,
                left,
                right,
            } => {
                let spec = schema
                    .features()
                    .get(*feature)
                    .ok_or_else(|| Error::SchemaMismatch(format!("feature index {feature} out of range")))?;
                match (rule, &spec.kind) {
                    (Rule::Threshold(_), FeatureKind::Numeric) => {}
                    (Rule::Categories(s), FeatureKind::Categorical(g)) => {
                        if !s.is_allowable_on(g) {
                            return Err(Error::Validation(format!(
                                "rule on {:?} is not an allowable split",
                                spec.name
                            )));
                        }
                    }
                    _ => {
                        return Err(Error::SchemaMismatch(format!(
                            "rule kind does not match feature {:?}",
                            spec.name
                        )))
                    }
                }
                left.validate(schema)?;
                right.validate(schema)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FeatureValue<'a, T> {
    Numeric(Option<T>),
    Category(Option<&'a str>),
}

/// Second-order gain of splitting `(G, H)` into `(G_L, H_L)` and the rest:
/// `½ [G_L²/(H_L+λ) + G_R²/(H_R+λ) - G²/(H+λ)]`.
#[inline]
pub fn split_gain<T: Scalar>(g_left: T, h_left: T, g_total: T, h_total: T, lambda: T) -> T {
    let term = |g: T, h: T| {
        let d = h + lambda;
        if d > T::zero() {
            g * g / d
        } else {
            T::zero()
        }
    };
    let half = T::lit(0.5);
    half * (term(g_left, h_left) + term(g_total - g_left, h_total - h_left) - term(g_total, h_total))
}

/// Newton step `-G / (H + λ)`; zero when the denominator vanishes.
#[inline]
pub fn leaf_value<T: Scalar>(g: T, h: T, lambda: T) -> T {
    let d = h + lambda;
    if d > T::zero() {
        -g / d
    } else {
        T::zero()
    }
}

fn accept<T: Scalar>(gain: T, params: &GrowthParams) -> bool {
    gain > T::zero() && gain >= T::lit(params.min_gain)
}

/// Best candidate by gain; ties keep the earliest candidate. `None` when no
/// candidate leaves `min_samples_leaf` rows on both sides with positive gain
/// of at least `min_gain`.
pub fn best_categorical_split<T: Scalar>(
    rows: &[usize],
    grads: &[T],
    hessians: &[T],
    categories: &[u32],
    order: usize,
    candidates: &[Split],
    params: &GrowthParams,
) -> Option<(Split, T)> {
    let mut g_v = vec![T::zero(); order];
    let mut h_v = vec![T::zero(); order];
    let mut n_v = vec![0usize; order];
    for &r in rows {
        let v = categories[r] as usize;
        g_v[v] = g_v[v] + grads[r];
        h_v[v] = h_v[v] + hessians[r];
        n_v[v] += 1;
    }
    let g_total: T = g_v.iter().copied().sum();
    let h_total: T = h_v.iter().copied().sum();
    let lambda = T::lit(params.reg_lambda);
    let mut best: Option<(usize, T)> = None;
    for (i, split) in candidates.iter().enumerate() {
        let (mut gl, mut hl, mut nl) = (T::zero(), T::zero(), 0usize);
        for v in split.left().iter() {
            gl = gl + g_v[v];
            hl = hl + h_v[v];
            nl += n_v[v];
        }
        if nl < params.min_samples_leaf || rows.len() - nl < params.min_samples_leaf {
            continue;
        }
        let gain = split_gain(gl, hl, g_total, h_total, lambda);
        if best.is_none_or(|(_, b)| gain > b) {
            best = Some((i, gain));
        }
    }
    best.filter(|&(_, gain)| accept(gain, params))
        .map(|(i, gain)| (candidates[i].clone(), gain))
}

/// Best `value <= threshold` split by sorted scan. Thresholds are midpoints
/// between adjacent distinct values; missing values always go left. Ties
/// keep the smallest threshold.
pub fn best_numeric_split<T: Scalar>(
    rows: &[usize],
    grads: &[T],
    hessians: &[T],
    values: &[T],
    missing: &[bool],
    params: &GrowthParams,
) -> Option<(T, T)> {
    let (mut g_miss, mut h_miss, mut n_miss) = (T::zero(), T::zero(), 0usize);
    let mut present: Vec<usize> = Vec::with_capacity(rows.len());
    for &r in rows {
        if missing[r] {
            g_miss = g_miss + grads[r];
            h_miss = h_miss + hessians[r];
            n_miss += 1;
        } else {
            present.push(r);
        }
    }
    present.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("values are not NaN"));
    let g_total = g_miss + present.iter().map(|&r| grads[r]).sum::<T>();
    let h_total = h_miss + present.iter().map(|&r| hessians[r]).sum::<T>();
    let lambda = T::lit(params.reg_lambda);
    let (mut gl, mut hl) = (g_miss, h_miss);
    let mut best: Option<(T, T)> = None;
    for i in 0..present.len().saturating_sub(1) {
        let r = present[i];
        gl = gl + grads[r];
        hl = hl + hessians[r];
        let (lo, hi) = (values[r], values[present[i + 1]]);
        if lo == hi {
            continue;
        }
        let nl = n_miss + i + 1;
        if nl < params.min_samples_leaf || rows.len() - nl < params.min_samples_leaf {
            continue;
        }
        let gain = split_gain(gl, hl, g_total, h_total, lambda);
        if best.is_none_or(|(_, b)| gain > b) {
            let mut mid = lo + (hi - lo) * T::lit(0.5);
            if mid >= hi {
                mid = lo;
            }
            best = Some((mid, gain));
        }
    }
    best.filter(|&(_, gain)| accept(gain, params))
}

/// Fits trees for one dataset. Holds per-feature split samplers so full
/// enumerations are computed once.
pub struct TreeBuilder<'a, T> {
    data: &'a Dataset<T>,
    params: GrowthParams,
    samplers: Vec<Option<SplitSampler>>,
}

impl<'a, T: Scalar> TreeBuilder<'a, T> {
    pub fn new(data: &'a Dataset<T>, params: GrowthParams) -> Result<Self> {
        params.validate()?;
        let samplers = data
            .schema()
            .features()
            .iter()
            .map(|f| match &f.kind {
                FeatureKind::Categorical(g) => {
                    SplitSampler::new(Arc::clone(g), params.sampler.clone()).map(Some)
                }
                FeatureKind::Numeric => Ok(None),
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            data,
            params,
            samplers,
        })
    }

    pub fn params(&self) -> &GrowthParams {
        &self.params
    }

    /// Grows a tree over `rows`. Candidate categorical splits are drawn
    /// afresh at every node, per feature, in schema order.
    pub fn grow<R: Rng + ?Sized>(&self, rows: &[usize], grads: &[T], hessians: &[T], rng: &mut R) -> Result<TreeNode<T>> {
        if rows.is_empty() {
            return Err(Error::InsufficientData("cannot grow a tree on zero rows".into()));
        }
        self.grow_node(rows, grads, hessians, rng, 0)
    }

    fn leaf(&self, rows: &[usize], grads: &[T], hessians: &[T]) -> TreeNode<T> {
        let g: T = rows.iter().map(|&r| grads[r]).sum();
        let h: T = rows.iter().map(|&r| hessians[r]).sum();
        TreeNode::Leaf {
            value: leaf_value(g, h, T::lit(self.params.reg_lambda)),
        }
    }

    fn grow_node<R: Rng + ?Sized>(
        &self,
        rows: &[usize],
        grads: &[T],
        hessians: &[T],
        rng: &mut R,
        depth: usize,
    ) -> Result<TreeNode<T>> {
        if depth >= self.params.max_depth || rows.len() < 2 * self.params.min_samples_leaf {
            return Ok(self.leaf(rows, grads, hessians));
        }
        let mut best: Option<(usize, Rule<T>, T)> = None;
        for (j, column) in self.data.columns().iter().enumerate() {
            let found = match (column, &self.samplers[j]) {
                (crate::data::Column::Numeric { values, missing }, _) => {
                    best_numeric_split(rows, grads, hessians, values, missing, &self.params)
                        .map(|(t, gain)| (Rule::Threshold(t), gain))
                }
                (crate::data::Column::Categorical(cats), Some(sampler)) => {
                    let candidates = sampler.sample(rng)?;
                    best_categorical_split(
                        rows,
                        grads,
                        hessians,
                        cats,
                        sampler.graph().order(),
                        &candidates,
                        &self.params,
                    )
                    .map(|(s, gain)| (Rule::Categories(s), gain))
                }
                (crate::data::Column::Categorical(_), None) => unreachable!("sampler per categorical feature"),
            };
            if let Some((rule, gain)) = found {
                if best.as_ref().is_none_or(|(_, _, b)| gain > *b) {
                    best = Some((j, rule, gain));
                }
            }
        }
        let Some((feature, rule, _)) = best else {
            return Ok(self.leaf(rows, grads, hessians));
        };
        let (left_rows, right_rows): (Vec<usize>, Vec<usize>) = rows.iter().partition(|&&r| match &rule {
            Rule::Threshold(t) => self.data.numeric(feature, r).is_none_or(|v| v <= *t),
            Rule::Categories(s) => s.left().contains(self.data.category(feature, r)),
        });
        let left = self.grow_node(&left_rows, grads, hessians, rng, depth + 1)?;
        let right = self.grow_node(&right_rows, grads, hessians, rng, depth + 1)?;
        Ok(TreeNode::Internal {
            feature,
            rule,
            left: Box::new(left),
            right: Box::new(right),
        })
    }
}

/// Convenience wrapper: builds a [`TreeBuilder`] and grows one tree.
pub fn grow_tree<T: Scalar, R: Rng + ?Sized>(
    data: &Dataset<T>,
    rows: &[usize],
    grads: &[T],
    hessians: &[T],
    params: &GrowthParams,
    rng: &mut R,
) -> Result<TreeNode<T>> {
    TreeBuilder::new(data, params.clone())?.grow(rows, grads, hessians, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{Column, FeatureSpec};
    use crate::graph::StructureGraph;
    use crate::split::enumerate_allowable_splits;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn params(lambda: f64) -> GrowthParams {
        GrowthParams {
            reg_lambda: lambda,
            ..GrowthParams::default()
        }
    }

    #[test]
    fn zero_gradients_give_no_split() {
        let g = StructureGraph::cycle(5);
        let cands = enumerate_allowable_splits(&g, None).unwrap();
        let rows: Vec<usize> = (0..10).collect();
        let cats: Vec<u32> = (0..10).map(|i| (i % 5) as u32).collect();
        let zeros = vec![0.0f64; 10];
        let h = vec![0.25; 10];
        assert!(best_categorical_split(&rows, &zeros, &h, &cats, 5, &cands, &params(0.0)).is_none());
        let vals: Vec<f64> = (0..10).map(f64::from).collect();
        assert!(best_numeric_split(&rows, &zeros, &h, &vals, &[false; 10], &params(0.0)).is_none());
    }

    #[test]
    fn two_vertex_split_gain_by_hand() {
        let g = StructureGraph::path(2);
        let cands = enumerate_allowable_splits(&g, None).unwrap();
        // two rows on a with g = -0.5, two rows on b with g = +0.5, h = 0.25
        let cats = [0u32, 0, 1, 1];
        let grads = [-0.5f64, -0.5, 0.5, 0.5];
        let h = [0.25; 4];
        let (split, gain) = best_categorical_split(&[0, 1, 2, 3], &grads, &h, &cats, 2, &cands, &params(0.0)).unwrap();
        assert_eq!(split.left().iter().collect::<Vec<_>>(), vec![0]);
        // ½[(-1)²/0.5 + 1²/0.5 - 0] = 2
        assert!((gain - 2.0).abs() < 1e-15);
    }

    #[test]
    fn numeric_single_candidate() {
        let (t, gain) = best_numeric_split(&[0, 1], &[-1.0f64, 1.0], &[0.25, 0.25], &[1.0, 2.0], &[false, false], &params(0.0)).unwrap();
        assert_eq!(t, 1.5);
        // ½[1/0.25 + 1/0.25 - 0] = 4
        assert!((gain - 4.0).abs() < 1e-15);
        assert!(best_numeric_split(&[0, 1], &[-1.0f64, 1.0], &[0.25, 0.25], &[3.0, 3.0], &[false, false], &params(0.0)).is_none());
    }

    #[test]
    fn missing_numeric_goes_left() {
        let grads = [-1.0f64, -1.0, 1.0, 1.0];
        let h = [0.25; 4];
        let values = [0.0, 1.0, 2.0, 3.0];
        let missing = [true, false, false, false];
        let (t, _) = best_numeric_split(&[0, 1, 2, 3], &grads, &h, &values, &missing, &params(0.0)).unwrap();
        assert_eq!(t, 1.5);
    }

    #[test]
    fn min_samples_leaf_blocks_small_children() {
        let p = GrowthParams {
            min_samples_leaf: 2,
            ..params(0.0)
        };
        assert!(best_numeric_split(&[0, 1, 2], &[-1.0f64, 1.0, 1.0], &[0.25; 3], &[1.0, 2.0, 3.0], &[false; 3], &p)
            .is_none());
    }

    #[test]
    fn numeric_scan_matches_exhaustive_threshold_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let n = rng.gen_range(2..200);
            let values: Vec<f64> = (0..n).map(|_| f64::from(rng.gen_range(0..30))).collect();
            let grads: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let h: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..0.25)).collect();
            let rows: Vec<usize> = (0..n).collect();
            let p = params(1.0);
            let got = best_numeric_split(&rows, &grads, &h, &values, &vec![false; n], &p);
            // oracle: every distinct value as a "<= v" cut, summed directly
            let mut distinct = values.clone();
            distinct.sort_by(f64::total_cmp);
            distinct.dedup();
            let gt: f64 = grads.iter().sum();
            let ht: f64 = h.iter().sum();
            let mut best: Option<(f64, f64)> = None;
            for w in distinct.windows(2) {
                let gl: f64 = (0..n).filter(|&i| values[i] <= w[0]).map(|i| grads[i]).sum();
                let hl: f64 = (0..n).filter(|&i| values[i] <= w[0]).map(|i| h[i]).sum();
                let gain = 0.5 * (gl * gl / (hl + 1.0) + (gt - gl).powi(2) / (ht - hl + 1.0) - gt * gt / (ht + 1.0));
                if best.is_none_or(|(_, b)| gain > b + 1e-12) {
                    best = Some(((w[0] + w[1]) / 2.0, gain));
                }
            }
            let best = best.filter(|&(_, g)| g > 0.0);
            match (got, best) {
                (Some((t, g)), Some((bt, bg))) => {
                    assert!((g - bg).abs() < 1e-9);
                    assert_eq!(t, bt);
                }
                (None, None) => {}
                other => panic!("mismatch {other:?}"),
            }
        }
    }

    #[test]
    fn categorical_argmax_matches_oracle_on_cycle() {
        let g = Arc::new(StructureGraph::cycle(5));
        let cands = enumerate_allowable_splits(&g, None).unwrap();
        // signal on the arc {0,1} vs the rest
        let cats: Vec<u32> = (0..50).map(|i| (i % 5) as u32).collect();
        let grads: Vec<f64> = cats.iter().map(|&c| if c <= 1 { -0.4 } else { 0.3 }).collect();
        let h = vec![0.24; 50];
        let rows: Vec<usize> = (0..50).collect();
        let (split, gain) = best_categorical_split(&rows, &grads, &h, &cats, 5, &cands, &params(1.0)).unwrap();
        let oracle = cands
            .iter()
            .map(|s| {
                let gl: f64 = rows.iter().filter(|&&r| s.left().contains(cats[r] as usize)).map(|&r| grads[r]).sum();
                let hl: f64 = rows.iter().filter(|&&r| s.left().contains(cats[r] as usize)).map(|&r| h[r]).sum();
                let (gt, ht): (f64, f64) = (grads.iter().sum(), h.iter().sum());
                (s, 0.5 * (gl * gl / (hl + 1.0) + (gt - gl).powi(2) / (ht - hl + 1.0) - gt * gt / (ht + 1.0)))
            })
            .fold(None::<(&Split, f64)>, |acc, (s, v)| match acc {
                Some((_, b)) if b >= v => acc,
                _ => Some((s, v)),
            })
            .unwrap();
        assert_eq!(&split, oracle.0);
        assert!((gain - oracle.1).abs() < 1e-12);
        assert_eq!(split.left().iter().collect::<Vec<_>>(), vec![0, 1]);
    }

    fn stump_data() -> Dataset<f64> {
        let g = Arc::new(StructureGraph::from_labeled_edges(&["a", "b"], &[("a", "b")]).unwrap());
        let schema = Arc::new(Schema::new(vec![FeatureSpec::categorical("c", g)], "y").unwrap());
        Dataset::new(schema, vec![Column::Categorical(vec![0, 0, 1, 1])], Some(vec![0, 0, 1, 1])).unwrap()
    }

    #[test]
    fn stump_routes_and_leaf_values_are_newton_steps() {
        let data = stump_data();
        let grads = [0.5f64, 0.5, -0.5, -0.5];
        let h = [0.25; 4];
        let p = GrowthParams {
            max_depth: 1,
            reg_lambda: 1.0,
            ..GrowthParams::default()
        };
        let tree = grow_tree(&data, &[0, 1, 2, 3], &grads, &h, &p, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert_eq!(tree.depth(), 1);
        // left leaf: -(1.0)/(0.5 + 1)
        assert!((tree.route(&data, 0) - (-1.0 / 1.5)).abs() < 1e-12);
        assert!((tree.route(&data, 3) - (1.0 / 1.5)).abs() < 1e-12);
        tree.validate(data.schema()).unwrap();

        let schema = data.schema();
        let v = tree.route_record(schema, &[FeatureValue::Category(Some("a"))]).unwrap();
        assert_eq!(v, tree.route(&data, 0));
        assert!(matches!(
            tree.route_record(schema, &[FeatureValue::Category(Some("zzz"))]),
            Err(Error::UnknownCategory { .. })
        ));
        assert!(matches!(
            tree.route_record(schema, &[FeatureValue::Category(None)]),
            Err(Error::MissingValue { .. })
        ));
    }

    #[test]
    fn uniform_gradients_make_a_leaf() {
        let data = stump_data();
        let tree = grow_tree(&data, &[0, 1, 2, 3], &[0.3f64; 4], &[0.2; 4], &GrowthParams::default(), &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert!(matches!(tree, TreeNode::Leaf { .. }));
    }

    #[test]
    fn unseen_vertex_routes_without_error() {
        // train only on a and c of a path a-b-c; b still routes
        let g = Arc::new(StructureGraph::from_labeled_edges(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap());
        let schema = Arc::new(Schema::new(vec![FeatureSpec::categorical("c", Arc::clone(&g))], "y").unwrap());
        let data = Dataset::new(Arc::clone(&schema), vec![Column::Categorical(vec![0, 0, 2, 2])], Some(vec![0, 0, 1, 1])).unwrap();
        let p = GrowthParams {
            sampler: SamplerConfig::full_enumeration(10),
            ..GrowthParams::default()
        };
        let tree = grow_tree(&data, &[0, 1, 2, 3], &[0.5f64, 0.5, -0.5, -0.5], &[0.25; 4], &p, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        for label in ["a", "b", "c"] {
            assert!(tree.route_record(&schema, &[FeatureValue::Category(Some(label))]).is_ok());
        }
    }

    #[test]
    fn generic_over_f32() {
        let (t, _) = best_numeric_split(&[0, 1], &[-1.0f32, 1.0], &[0.25, 0.25], &[1.0, 2.0], &[false, false], &GrowthParams { reg_lambda: 0.0, ..GrowthParams::default() }).unwrap();
        assert_eq!(t, 1.5f32);
    }
}
