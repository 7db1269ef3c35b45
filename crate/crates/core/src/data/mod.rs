//! Columnar datasets, schemas, CSV I/O, trial splitting and synthetic
//! scenarios.

mod csv_io;
pub mod synth;
mod trials;

pub use csv_io::{load_csv, read_csv, save_csv, write_csv, TargetMode};
pub use synth::{generate_synthetic, ScenarioKind, ScenarioSpec, SyntheticData};
pub use trials::{split_trials, split_trials_from, TrialSplit};

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{read_graph_file, StructureGraph};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub enum FeatureKind {
    Numeric,
    Categorical(Arc<StructureGraph>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct FeatureSpec {
    pub name: String,
    pub kind: FeatureKind,
}

impl FeatureSpec {
    pub fn numeric(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            kind: FeatureKind::Numeric,
        }
    }

    pub fn categorical(name: impl Into<String>, graph: Arc<StructureGraph>) -> Self {
        Self {
            name: name.into(),
            kind: FeatureKind::Categorical(graph),
        }
    }

    pub fn graph(&self) -> Option<&Arc<StructureGraph>> {
        match &self.kind {
            FeatureKind::Categorical(g) => Some(g),
            FeatureKind::Numeric => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Schema {
    features: Vec<FeatureSpec>,
    target: String,
}

impl Schema {
    pub fn new(features: Vec<FeatureSpec>, target: impl Into<String>) -> Result<Self> {
        let target = target.into();
        for (i, f) in features.iter().enumerate() {
            if f.name.is_empty() {
                return Err(Error::SchemaMismatch(format!("feature {i} has an empty name")));
            }
            if f.name == target {
                return Err(Error::SchemaMismatch(format!(
                    "target {target:?} is also listed as a feature"
                )));
            }
            if features[..i].iter().any(|o| o.name == f.name) {
                return Err(Error::SchemaMismatch(format!("duplicate feature name {:?}", f.name)));
            }
        }
        Ok(Self { features, target })
    }

    pub fn features(&self) -> &[FeatureSpec] {
        &self.features
    }

    pub fn target(&self) -> &str {
        &self.target
    }

    pub fn feature_index(&self, name: &str) -> Option<usize> {
        self.features.iter().position(|f| f.name == name)
    }
}

/// Schema document. Graph paths are resolved relative to the file.
///
/// ```text
/// {
///   "target": "rain",
///   "features": [
///     {"name": "region", "kind": "categorical", "graph": "region.graph.json"},
///     {"name": "temp", "kind": "numeric"}
///   ]
/// }
/// ```
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemaFile {
    pub target: String,
    pub features: Vec<FeatureEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "snake_case")]
pub enum FeatureEntry {
    Numeric { name: String },
    Categorical { name: String, graph: PathBuf },
}

pub fn read_schema_file(path: &Path) -> Result<Schema> {
    let text = std::fs::read_to_string(path)?;
    let file: SchemaFile = serde_json::from_str(&text)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let mut features = Vec::with_capacity(file.features.len());
    for entry in file.features {
        features.push(match entry {
            FeatureEntry::Numeric { name } => FeatureSpec::numeric(name),
            FeatureEntry::Categorical { name, graph } => {
                let g = read_graph_file(&base.join(&graph))?;
                FeatureSpec::categorical(name, Arc::new(g))
            }
        });
    }
    Schema::new(features, file.target)
}

/// Writes the schema plus one `<feature>.graph.json` per categorical feature
/// into `dir`; returns the schema file path.
pub fn write_schema_dir(schema: &Schema, dir: &Path, file_name: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let mut entries = Vec::new();
    for f in schema.features() {
        entries.push(match &f.kind {
            FeatureKind::Numeric => FeatureEntry::Numeric {
                name: f.name.clone(),
            },
            FeatureKind::Categorical(g) => {
                let graph = PathBuf::from(format!("{}.graph.json", f.name));
                std::fs::write(dir.join(&graph), crate::graph::save_graph(g))?;
                FeatureEntry::Categorical {
                    name: f.name.clone(),
                    graph,
                }
            }
        });
    }
    let file = SchemaFile {
        target: schema.target.clone(),
        features: entries,
    };
    let path = dir.join(file_name);
    std::fs::write(&path, serde_json::to_string_pretty(&file)? + "\n")?;
    Ok(path)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Column<T> {
    /// Values with a parallel missing mask; masked slots hold zero.
    Numeric { values: Vec<T>, missing: Vec<bool> },
    /// Vertex indices into the feature's graph.
    Categorical(Vec<u32>),
}

impl<T> Column<T> {
    fn len(&self) -> usize {
        match self {
            Column::Numeric { values, .. } => values.len(),
            Column::Categorical(v) => v.len(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Dataset<T> {
    schema: Arc<Schema>,
    columns: Vec<Column<T>>,
    target: Option<Vec<u8>>,
    n_rows: usize,
}

impl<T: Scalar> Dataset<T> {
    pub fn new(schema: Arc<Schema>, columns: Vec<Column<T>>, target: Option<Vec<u8>>) -> Result<Self> {
        if columns.len() != schema.features().len() {
            return Err(Error::SchemaMismatch(format!(
                "{} columns for {} features",
                columns.len(),
                schema.features().len()
            )));
        }
        let n_rows = target
            .as_ref()
            .map(Vec::len)
            .or_else(|| columns.first().map(Column::len))
            .unwrap_or(0);
        for (f, c) in schema.features().iter().zip(&columns) {
            if c.len() != n_rows {
                return Err(Error::SchemaMismatch(format!(
                    "column {:?} has {} rows, expected {n_rows}",
                    f.name,
                    c.len()
                )));
            }
            match (&f.kind, c) {
                (FeatureKind::Numeric, Column::Numeric { missing, .. }) if missing.len() == n_rows => {}
                (FeatureKind::Categorical(g), Column::Categorical(idx)) => {
                    if let Some(&bad) = idx.iter().find(|&&i| i as usize >= g.order()) {
                        return Err(Error::SchemaMismatch(format!(
                            "vertex index {bad} out of range for feature {:?}",
                            f.name
                        )));
                    }
                }
                _ => {
                    return Err(Error::SchemaMismatch(format!(
                        "column kind does not match feature {:?}",
                        f.name
                    )))
                }
            }
        }
        if let Some(t) = &target {
            if t.iter().any(|&y| y > 1) {
                return Err(Error::SchemaMismatch("target values must be 0 or 1".into()));
            }
        }
        Ok(Self {
            schema,
            columns,
            target,
            n_rows,
        })
    }

    pub fn schema(&self) -> &Arc<Schema> {
        &self.schema
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn columns(&self) -> &[Column<T>] {
        &self.columns
    }

    pub fn column(&self, j: usize) -> &Column<T> {
        &self.columns[j]
    }

    pub fn target(&self) -> Option<&[u8]> {
        self.target.as_deref()
    }

    pub fn require_target(&self) -> Result<&[u8]> {
        self.target()
            .ok_or_else(|| Error::MissingTarget(self.schema.target().to_owned()))
    }

    #[inline]
    pub fn numeric(&self, j: usize, row: usize) -> Option<T> {
        match &self.columns[j] {
            Column::Numeric { values, missing } => (!missing[row]).then(|| values[row]),
            Column::Categorical(_) => None,
        }
    }

    #[inline]
    pub fn category(&self, j: usize, row: usize) -> usize {
        match &self.columns[j] {
            Column::Categorical(idx) => idx[row] as usize,
            Column::Numeric { .. } => panic!("feature {j} is numeric"),
        }
    }

    /// Rows `indices` in the given order.
    pub fn select(&self, indices: &[usize]) -> Self {
        let columns = self
            .columns
            .iter()
            .map(|c| match c {
                Column::Numeric { values, missing } => Column::Numeric {
                    values: indices.iter().map(|&i| values[i]).collect(),
                    missing: indices.iter().map(|&i| missing[i]).collect(),
                },
                Column::Categorical(idx) => Column::Categorical(indices.iter().map(|&i| idx[i]).collect()),
            })
            .collect();
        Self {
            schema: Arc::clone(&self.schema),
            columns,
            target: self.target.as_ref().map(|t| indices.iter().map(|&i| t[i]).collect()),
            n_rows: indices.len(),
        }
    }

    /// Same schema check used by training and prediction.
    pub fn check_schema(&self, other: &Schema) -> Result<()> {
        if *self.schema != *other {
            return Err(Error::SchemaMismatch(
                "dataset schema differs from the expected schema".into(),
            ));
        }
        Ok(())
    }
}
