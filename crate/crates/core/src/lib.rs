//! Gradient boosting for binary targets with graph-structured categorical
//! features.
//!
//! A categorical feature carries a [`StructureGraph`] over its values. Tree
//! splits on it are restricted to allowable splits: bipartitions of the
//! vertex set whose two sides both induce connected subgraphs. Candidate
//! splits come from exhaustive enumeration, random edge contraction or
//! uniform spanning trees ([`SamplerConfig`]).
//!
//! The numeric core is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix the precision.

pub mod boosting;
pub mod data;
pub mod error;
pub mod graph;
pub mod harness;
pub mod metrics;
pub mod scalar;
pub mod seed;
pub mod split;
pub mod tree;

pub use boosting::{train, BoostConfig, BoostedModel, TrainOutput};
pub use data::{Dataset, FeatureKind, FeatureSpec, Schema};
pub use error::{Error, Result};
pub use graph::{StructureGraph, VertexSet};
pub use metrics::EvalResult;
pub use scalar::Scalar;
pub use split::{SamplerConfig, SamplingMethod, Split, SplitSampler};
pub use tree::{GrowthParams, TreeNode};

pub type Model = BoostedModel<f64>;
pub type Model32 = BoostedModel<f32>;
pub type Data = Dataset<f64>;
pub type Data32 = Dataset<f32>;
pub type Tree = TreeNode<f64>;
pub type Tree32 = TreeNode<f32>;
