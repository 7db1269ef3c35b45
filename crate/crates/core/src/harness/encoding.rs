//! Target-mean encoding ablation: each categorical value becomes the mean
//! training target of its rows, values without training rows get the global
//! training mean, and the result is boosted as a numeric feature.

use std::sync::Arc;

use crate::data::{Column, Dataset, FeatureKind, FeatureSpec, Schema};
use crate::error::Result;
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct TargetEncoder<T> {
    global: T,
    /// Per feature; `None` for numeric features.
    tables: Vec<Option<Vec<T>>>,
    encoded_schema: Arc<Schema>,
}

impl<T: Scalar> TargetEncoder<T> {
    pub fn fit(train: &Dataset<T>) -> Result<Self> {
        let y = train.require_target()?;
        let n = y.len().max(1);
        let global = T::lit(y.iter().map(|&v| f64::from(v)).sum::<f64>() / n as f64);
        let mut tables = Vec::new();
        for (j, f) in train.schema().features().iter().enumerate() {
            tables.push(match &f.kind {
                FeatureKind::Numeric => None,
                FeatureKind::Categorical(g) => {
                    let mut sum = vec![0u64; g.order()];
                    let mut count = vec![0u64; g.order()];
                    for (row, &t) in y.iter().enumerate() {
                        let v = train.category(j, row);
                        sum[v] += u64::from(t);
                        count[v] += 1;
                    }
                    Some(
                        sum.iter()
                            .zip(&count)
                            .map(|(&s, &c)| if c == 0 { global } else { T::lit(s as f64 / c as f64) })
                            .collect(),
                    )
                }
            });
        }
        let encoded_schema = Arc::new(Schema::new(
            train
                .schema()
                .features()
                .iter()
                .map(|f| FeatureSpec::numeric(f.name.clone()))
                .collect(),
            train.schema().target(),
        )?);
        Ok(Self {
            global,
            tables,
            encoded_schema,
        })
    }

    pub fn global_mean(&self) -> T {
        self.global
    }

    /// Encoded value per vertex of categorical feature `j`.
    pub fn table(&self, j: usize) -> Option<&[T]> {
        self.tables[j].as_deref()
    }

    pub fn transform(&self, data: &Dataset<T>) -> Result<Dataset<T>> {
        let columns = data
            .columns()
            .iter()
            .zip(&self.tables)
            .map(|(c, table)| match (c, table) {
                (Column::Categorical(idx), Some(t)) => Column::Numeric {
                    values: idx.iter().map(|&v| t[v as usize]).collect(),
                    missing: vec![false; idx.len()],
                },
                (other, _) => other.clone(),
            })
            .collect();
        Dataset::new(Arc::clone(&self.encoded_schema), columns, data.target().map(<[u8]>::to_vec))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::StructureGraph;

    #[test]
    fn means_and_fallback() {
        let g = Arc::new(StructureGraph::path(3));
        let schema = Arc::new(Schema::new(vec![FeatureSpec::categorical("c", g)], "y").unwrap());
        let train = Dataset::<f64>::new(
            Arc::clone(&schema),
            vec![Column::Categorical(vec![0, 0, 1, 1])],
            Some(vec![1, 0, 1, 1]),
        )
        .unwrap();
        let enc = TargetEncoder::fit(&train).unwrap();
        assert_eq!(enc.table(0).unwrap(), &[0.5, 1.0, 0.75]);
        let test = Dataset::<f64>::new(schema, vec![Column::Categorical(vec![2, 0])], Some(vec![0, 1])).unwrap();
        let out = enc.transform(&test).unwrap();
        assert_eq!(out.numeric(0, 0), Some(0.75));
        assert_eq!(out.numeric(0, 1), Some(0.5));
    }
}
