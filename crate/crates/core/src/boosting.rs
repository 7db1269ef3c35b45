//! Binary log-loss boosting with shrinkage and validation early stopping,
//! plus the versioned JSON model file.

use std::path::Path;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data::{Dataset, FeatureKind, FeatureSpec, Schema};
use crate::error::{Error, Result};
use crate::graph::{GraphFile, StructureGraph, VertexSet};
use crate::metrics::log_loss;
use crate::scalar::{logit, sigmoid, Scalar};
use crate::split::Split;
use crate::tree::{FeatureValue, GrowthParams, Rule, TreeBuilder, TreeNode};

pub const MODEL_FORMAT: &str = "terrainboost-model";
pub const MODEL_VERSION: u32 = 1;
const BASE_CLAMP: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoostConfig {
    pub learning_rate: f64,
    pub max_rounds: usize,
    pub early_stopping_rounds: usize,
    pub growth: GrowthParams,
    pub seed: u64,
}

impl Default for BoostConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.02,
            max_rounds: 5000,
            early_stopping_rounds: 20,
            growth: GrowthParams::default(),
            seed: 0,
        }
    }
}

impl BoostConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate <= 1.0) {
            return Err(Error::InvalidConfig("learning_rate must be in (0, 1]".into()));
        }
        if self.max_rounds < 1 || self.early_stopping_rounds < 1 {
            return Err(Error::InvalidConfig(
                "max_rounds and early_stopping_rounds must be at least 1".into(),
            ));
        }
        self.growth.validate()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoostedModel<T> {
    schema: Arc<Schema>,
    base_score: T,
    learning_rate: T,
    trees: Vec<TreeNode<T>>,
}

/// Result of [`train`]. `history[k]` is the validation log-loss with the
/// first `k` trees, so `history[0]` is the base score alone.
#[derive(Clone, Debug)]
pub struct TrainOutput<T> {
    pub model: BoostedModel<T>,
    pub history: Vec<f64>,
    pub best_round: usize,
}

/// Gradient and hessian of per-row log-loss with respect to the margin.
#[inline]
pub fn gradients<T: Scalar>(y: u8, margin: T) -> (T, T) {
    let p = sigmoid(margin);
    let y = if y == 1 { T::one() } else { T::zero() };
    (p - y, p * (T::one() - p))
}

/// Per-row log-loss as a function of the margin, `softplus(m) - y m`.
pub fn margin_loss(y: u8, margin: f64) -> f64 {
    let softplus = if margin > 0.0 {
        margin + (-margin).exp().ln_1p()
    } else {
        margin.exp().ln_1p()
    };
    softplus - f64::from(y) * margin
}

pub fn train<T: Scalar>(train_data: &Dataset<T>, valid: &Dataset<T>, config: &BoostConfig) -> Result<TrainOutput<T>> {
    config.validate()?;
    valid.check_schema(train_data.schema())?;
    let y = train_data.require_target()?;
    let yv = valid.require_target()?;
    if y.is_empty() {
        return Err(Error::InsufficientData("training set is empty".into()));
    }
    if yv.is_empty() {
        return Err(Error::InsufficientData("validation set is empty".into()));
    }
    let single = |t: &[u8]| t.iter().all(|&v| v == t[0]);
    if single(y) && single(yv) {
        return Err(Error::DegenerateTarget(
            "training and validation targets are each single-class".into(),
        ));
    }

    let mean = y.iter().map(|&v| f64::from(v)).sum::<f64>() / y.len() as f64;
    let base = logit(T::lit(mean.clamp(BASE_CLAMP, 1.0 - BASE_CLAMP)));
    let lr = T::lit(config.learning_rate);
    let builder = TreeBuilder::new(train_data, config.growth.clone())?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let rows: Vec<usize> = (0..y.len()).collect();
    let mut margin = vec![base; y.len()];
    let mut margin_v = vec![base; yv.len()];
    let mut grads = vec![T::zero(); y.len()];
    let mut hess = vec![T::zero(); y.len()];
    let mut probs_v: Vec<T> = margin_v.iter().map(|&m| sigmoid(m)).collect();
    let mut history = vec![log_loss(yv, &probs_v)?];
    let mut best_round = 0;
    let mut trees = Vec::new();

    for round in 1..=config.max_rounds {
        for i in 0..y.len() {
            (grads[i], hess[i]) = gradients(y[i], margin[i]);
        }
        let tree = builder.grow(&rows, &grads, &hess, &mut rng)?;
        for (i, m) in margin.iter_mut().enumerate() {
            *m = *m + lr * tree.route(train_data, i);
        }
        for (i, m) in margin_v.iter_mut().enumerate() {
            *m = *m + lr * tree.route(valid, i);
            probs_v[i] = sigmoid(*m);
        }
        trees.push(tree);
        let loss = log_loss(yv, &probs_v)?;
        history.push(loss);
        if loss < history[best_round] {
            best_round = round;
        }
        if round - best_round >= config.early_stopping_rounds {
            break;
        }
    }
    trees.truncate(best_round);
    Ok(TrainOutput {
        model: BoostedModel {
            schema: Arc::clone(train_data.schema()),
            base_score: base,
            learning_rate: lr,
            trees,
        },
        history,
        best_round,
    })
}

impl<T: Scalar> BoostedModel<T> {
    pub fn new(schema: Arc<Schema>, base_score: T, learning_rate: T, trees: Vec<TreeNode<T>>) -> Result<Self> {
        for t in &trees {
            t.validate(&schema)?;
        }
        Ok(Self {
            schema,
            base_score,
            learning_rate,
            trees,
        })
    }

    pub fn schema(&self) -> &Arc<Schema> {
        &self.schema
    }

    pub fn base_score(&self) -> T {
        self.base_score
    }

    pub fn learning_rate(&self) -> T {
        self.learning_rate
    }

    pub fn trees(&self) -> &[TreeNode<T>] {
        &self.trees
    }

    pub fn margin(&self, data: &Dataset<T>, row: usize) -> T {
        let sum: T = self.trees.iter().map(|t| t.route(data, row)).sum();
        self.base_score + self.learning_rate * sum
    }

    pub fn predict_proba(&self, data: &Dataset<T>) -> Result<Vec<T>> {
        data.check_schema(&self.schema)?;
        Ok((0..data.n_rows()).map(|i| sigmoid(self.margin(data, i))).collect())
    }

    /// Probability for one raw record, one value per schema feature.
    pub fn predict_record(&self, record: &[FeatureValue<'_, T>]) -> Result<T> {
        let mut sum = T::zero();
        for t in &self.trees {
            sum = sum + t.route_record(&self.schema, record)?;
        }
        Ok(sigmoid(self.base_score + self.learning_rate * sum))
    }

    pub fn to_file(&self) -> ModelFile {
        let features = self
            .schema
            .features()
            .iter()
            .map(|f| match &f.kind {
                FeatureKind::Numeric => FeatureFile::Numeric { name: f.name.clone() },
                FeatureKind::Categorical(g) => FeatureFile::Categorical {
                    name: f.name.clone(),
                    graph: g.to_file(),
                },
            })
            .collect();
        ModelFile {
            format: MODEL_FORMAT.to_owned(),
            version: MODEL_VERSION,
            target: self.schema.target().to_owned(),
            features,
            base_score: self.base_score.as_f64(),
            learning_rate: self.learning_rate.as_f64(),
            trees: self.trees.iter().map(|t| node_to_file(t, &self.schema)).collect(),
        }
    }

    pub fn from_file(file: &ModelFile) -> Result<Self> {
        if file.format != MODEL_FORMAT {
            return Err(Error::Parse(format!("not a model file (format {:?})", file.format)));
        }
        if file.version != MODEL_VERSION {
            return Err(Error::Parse(format!("unsupported model version {}", file.version)));
        }
        let mut features = Vec::with_capacity(file.features.len());
        for f in &file.features {
            features.push(match f {
                FeatureFile::Numeric { name } => FeatureSpec::numeric(name.clone()),
                FeatureFile::Categorical { name, graph } => {
                    FeatureSpec::categorical(name.clone(), Arc::new(StructureGraph::from_file(graph)?))
                }
            });
        }
        let schema = Arc::new(Schema::new(features, file.target.clone())?);
        let trees = file
            .trees
            .iter()
            .map(|n| node_from_file(n, &schema))
            .collect::<Result<Vec<_>>>()?;
        Self::new(schema, scalar(file.base_score)?, scalar(file.learning_rate)?, trees)
    }

    /// Pretty JSON, newline-terminated. Byte-identical for identical models.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("model serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(&serde_json::from_str(text)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

fn scalar<T: Scalar>(x: f64) -> Result<T> {
    if !x.is_finite() {
        return Err(Error::Parse(format!("non-finite number {x} in model")));
    }
    T::from_f64(x).ok_or_else(|| Error::Parse(format!("number {x} out of range")))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub format: String,
    pub version: u32,
    pub target: String,
    pub features: Vec<FeatureFile>,
    pub base_score: f64,
    pub learning_rate: f64,
    pub trees: Vec<NodeFile>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "snake_case")]
pub enum FeatureFile {
    Numeric { name: String },
    Categorical { name: String, graph: GraphFile },
}

/// Tree node document. Categorical rules list the labels that go left, in
/// vertex order; that side always contains the graph's first vertex.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, tag = "node", rename_all = "snake_case")]
pub enum NodeFile {
    Leaf {
        value: f64,
    },
    Threshold {
        feature: String,
        threshold: f64,
        left: Box<NodeFile>,
        right: Box<NodeFile>,
    },
    Categories {
        feature: String,
        left_labels: Vec<String>,
        left: Box<NodeFile>,
        right: Box<NodeFile>,
    },
}

fn node_to_file<T: Scalar>(node: &TreeNode<T>, schema: &Schema) -> NodeFile {
    match node {
        TreeNode::Leaf { value } => NodeFile::Leaf { value: value.as_f64() },
        TreeNode::Internal {
            feature,
            rule,
            left,
            right,
        } => {
            let spec = &schema.features()[*feature];
            let left = Box::new(node_to_file(left, schema));
            let right = Box::new(node_to_file(right, schema));
            match rule {
                Rule::Threshold(t) => NodeFile::Threshold {
                    feature: spec.name.clone(),
                    threshold: t.as_f64(),
                    left,
                    right,
                },
                Rule::Categories(s) => {
                    let g = spec.graph().expect("categorical rule on categorical feature");
                    NodeFile::Categories {
                        feature: spec.name.clone(),
                        left_labels: s.labels(g).into_iter().map(str::to_owned).collect(),
                        left,
                        right,
                    }
                }
            }
        }
    }
}

fn node_from_file<T: Scalar>(node: &NodeFile, schema: &Schema) -> Result<TreeNode<T>> {
    let lookup = |name: &str| {
        schema
            .feature_index(name)
            .ok_or_else(|| Error::SchemaMismatch(format!("tree references unknown feature {name:?}")))
    };
    Ok(match node {
        NodeFile::Leaf { value } => TreeNode::Leaf { value: scalar(*value)? },
        NodeFile::Threshold {
            feature,
            threshold,
            left,
            right,
        } => TreeNode::Internal {
            feature: lookup(feature)?,
            rule: Rule::Threshold(scalar(*threshold)?),
            left: Box::new(node_from_file(left, schema)?),
            right: Box::new(node_from_file(right, schema)?),
        },
        NodeFile::Categories {
            feature,
            left_labels,
            left,
            right,
        } => {
            let j = lookup(feature)?;
            let g = schema.features()[j]
                .graph()
                .ok_or_else(|| Error::SchemaMismatch(format!("feature {feature:?} is not categorical")))?;
            let mut side = VertexSet::empty(g.order());
            for label in left_labels {
                let v = g.index_of(label).ok_or_else(|| Error::UnknownCategory {
                    feature: feature.clone(),
                    value: label.clone(),
                    row: None,
                })?;
                side.insert(v);
            }
            let split = Split::new(g, side.clone())?;
            if *split.left() != side {
                return Err(Error::Validation(format!(
                    "left labels for {feature:?} must include the first vertex {:?}",
                    g.label(0)
                )));
            }
            TreeNode::Internal {
                feature: j,
                rule: Rule::Categories(split),
                left: Box::new(node_from_file(left, schema)?),
                right: Box::new(node_from_file(right, schema)?),
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Column;
    use crate::graph::StructureGraph;

    fn toy(cats: Vec<u32>, y: Vec<u8>) -> Dataset<f64> {
        let g = Arc::new(StructureGraph::from_labeled_edges(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap());
        let schema = Arc::new(Schema::new(vec![FeatureSpec::categorical("c", g)], "y").unwrap());
        Dataset::new(schema, vec![Column::Categorical(cats)], Some(y)).unwrap()
    }

    #[test]
    fn gradients_match_finite_differences() {
        let h = 1e-4;
        for y in [0u8, 1] {
            for m in [-6.0, -1.3, 0.0, 0.4, 2.5, 7.0] {
                let (g, hs) = gradients(y, m);
                let fd1 = (margin_loss(y, m + h) - margin_loss(y, m - h)) / (2.0 * h);
                let fd2 = (margin_loss(y, m + h) - 2.0 * margin_loss(y, m) + margin_loss(y, m - h)) / (h * h);
                assert!((g - fd1).abs() < 1e-6, "g {g} vs {fd1}");
                assert!((hs - fd2).abs() < 1e-6, "h {hs} vs {fd2}");
            }
        }
    }

    #[test]
    fn no_signal_predicts_base_rate() {
        // every category has rate 0.3
        let cats: Vec<u32> = (0..300).map(|i| (i % 3) as u32).collect();
        let y: Vec<u8> = (0..300).map(|i| u8::from((i / 3) % 10 < 3)).collect();
        let d = toy(cats, y);
        let out = train(&d, &d, &BoostConfig::default()).unwrap();
        for p in out.model.predict_proba(&d).unwrap() {
            assert!((p - 0.3).abs() < 1e-9);
        }
    }

    #[test]
    fn separable_loss_decreases_and_best_round_is_argmin() {
        let cats: Vec<u32> = (0..60).map(|i| (i % 3) as u32).collect();
        let y: Vec<u8> = cats.iter().map(|&c| u8::from(c == 0)).collect();
        let d = toy(cats, y);
        let cfg = BoostConfig {
            learning_rate: 0.5,
            max_rounds: 30,
            ..BoostConfig::default()
        };
        let out = train(&d, &d, &cfg).unwrap();
        assert!(out.history.windows(2).all(|w| w[1] < w[0]));
        let argmin = (0..out.history.len())
            .min_by(|&a, &b| out.history[a].total_cmp(&out.history[b]))
            .unwrap();
        assert_eq!(out.best_round, argmin);
        assert_eq!(out.model.trees().len(), out.best_round);
    }

    #[test]
    fn degenerate_target() {
        let d = toy(vec![0, 1, 2], vec![1, 1, 1]);
        assert!(matches!(train(&d, &d, &BoostConfig::default()), Err(Error::DegenerateTarget(_))));
        // single-class train is fine when validation has both classes
        let v = toy(vec![0, 1], vec![0, 1]);
        assert!(train(&d, &v, &BoostConfig { max_rounds: 3, ..BoostConfig::default() }).is_ok());
    }

    #[test]
    fn empty_model_and_stump_outputs() {
        let d = toy(vec![0, 1, 2], vec![0, 1, 1]);
        let m = BoostedModel::new(Arc::clone(d.schema()), 0.0, 1.0, vec![]).unwrap();
        assert_eq!(m.predict_proba(&d).unwrap(), vec![0.5; 3]);
        let g = d.schema().features()[0].graph().unwrap().clone();
        let s = Split::new(&g, VertexSet::from_indices(3, [0])).unwrap();
        let stump = TreeNode::Internal {
            feature: 0,
            rule: Rule::Categories(s),
            left: Box::new(TreeNode::Leaf { value: -0.7 }),
            right: Box::new(TreeNode::Leaf { value: 0.7 }),
        };
        let m = BoostedModel::new(Arc::clone(d.schema()), 0.0, 1.0, vec![stump]).unwrap();
        let mut p = m.predict_proba(&d).unwrap();
        p.dedup();
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn model_file_round_trip() {
        let cats: Vec<u32> = (0..90).map(|i| (i % 3) as u32).collect();
        let y: Vec<u8> = (0..90).map(|i| u8::from(i % 3 != 1 && i % 4 != 0)).collect();
        let d = toy(cats, y);
        let cfg = BoostConfig {
            learning_rate: 0.3,
            max_rounds: 10,
            ..BoostConfig::default()
        };
        let out = train(&d, &d, &cfg).unwrap();
        let text = out.model.to_json();
        let back = BoostedModel::<f64>::from_json(&text).unwrap();
        assert_eq!(back, out.model);
        assert_eq!(back.to_json(), text);
        assert_eq!(back.predict_proba(&d).unwrap(), out.model.predict_proba(&d).unwrap());
        let again = train(&d, &d, &cfg).unwrap();
        assert_eq!(again.model.to_json(), text);
    }

    #[test]
    fn rejects_non_canonical_or_disallowed_rules() {
        let d = toy(vec![0], vec![0]);
        let m = BoostedModel::new(Arc::clone(d.schema()), 0.0, 1.0, vec![]).unwrap();
        let mut file = m.to_file();
        let rule = |labels: &[&str]| NodeFile::Categories {
            feature: "c".into(),
            left_labels: labels.iter().map(|s| s.to_string()).collect(),
            left: Box::new(NodeFile::Leaf { value: 0.0 }),
            right: Box::new(NodeFile::Leaf { value: 1.0 }),
        };
        file.trees = vec![rule(&["a", "c"])];
        assert!(BoostedModel::<f64>::from_file(&file).is_err());
        file.trees = vec![rule(&["c"])];
        assert!(BoostedModel::<f64>::from_file(&file).is_err());
        file.trees = vec![rule(&["a"])];
        assert!(BoostedModel::<f64>::from_file(&file).is_ok());
        file.version = 2;
        assert!(BoostedModel::<f64>::from_file(&file).is_err());
    }
}
