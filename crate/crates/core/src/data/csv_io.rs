use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::Path;
use std::sync::Arc;

use super::{Column, Dataset, FeatureKind, Schema};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TargetMode {
    /// Target column must be present; at least one row required.
    Required,
    /// Target column read when present. Empty files are accepted.
    Optional,
}

pub fn load_csv<T: Scalar>(path: &Path, schema: Arc<Schema>, mode: TargetMode) -> Result<Dataset<T>> {
    let file = std::fs::File::open(path)?;
    read_csv(file, schema, mode)
}

/// Reads comma-separated, double-quoted UTF-8 with a header row. Columns may
/// appear in any order; every column must be a feature or the target.
pub fn read_csv<T: Scalar, R: Read>(reader: R, schema: Arc<Schema>, mode: TargetMode) -> Result<Dataset<T>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::Parse(format!("reading header: {e}")))?
        .clone();
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Err(Error::Parse("missing header row".into()));
    }

    let mut position: HashMap<&str, usize> = HashMap::new();
    for (i, h) in headers.iter().enumerate() {
        if position.insert(h, i).is_some() {
            return Err(Error::Parse(format!("duplicate column {h:?}")));
        }
        if h != schema.target() && schema.feature_index(h).is_none() {
            return Err(Error::Parse(format!("unexpected column {h:?}")));
        }
    }
    let mut feature_pos = Vec::with_capacity(schema.features().len());
    for f in schema.features() {
        let p = *position
            .get(f.name.as_str())
            .ok_or_else(|| Error::Parse(format!("missing feature column {:?}", f.name)))?;
        feature_pos.push(p);
    }
    let target_pos = position.get(schema.target()).copied();
    if target_pos.is_none() && mode == TargetMode::Required {
        return Err(Error::MissingTarget(schema.target().to_owned()));
    }

    let mut columns: Vec<Column<T>> = schema
        .features()
        .iter()
        .map(|f| match f.kind {
            FeatureKind::Numeric => Column::Numeric {
                values: Vec::new(),
                missing: Vec::new(),
            },
            FeatureKind::Categorical(_) => Column::Categorical(Vec::new()),
        })
        .collect();
    let mut target = target_pos.map(|_| Vec::new());

    for (r, record) in rdr.records().enumerate() {
        let row = r + 1;
        let record = record.map_err(|e| Error::Parse(format!("row {row}: {e}")))?;
        for ((f, &p), col) in schema.features().iter().zip(&feature_pos).zip(columns.iter_mut()) {
            let cell = &record[p];
            match (&f.kind, col) {
                (FeatureKind::Numeric, Column::Numeric { values, missing }) => {
                    if cell.trim().is_empty() {
                        values.push(T::zero());
                        missing.push(true);
                    } else {
                        let v: f64 = cell.trim().parse().map_err(|_| Error::ParseAt {
                            row,
                            column: f.name.clone(),
                            message: format!("not a number: {cell:?}"),
                        })?;
                        values.push(T::from_f64(v).ok_or_else(|| Error::ParseAt {
                            row,
                            column: f.name.clone(),
                            message: format!("out of range: {cell:?}"),
                        })?);
                        missing.push(false);
                    }
                }
                (FeatureKind::Categorical(g), Column::Categorical(idx)) => {
                    if cell.is_empty() {
                        return Err(Error::MissingValue {
                            feature: f.name.clone(),
                            row: Some(row),
                        });
                    }
                    let v = g.index_of(cell).ok_or_else(|| Error::UnknownCategory {
                        feature: f.name.clone(),
                        value: cell.to_owned(),
                        row: Some(row),
                    })?;
                    idx.push(v as u32);
                }
                _ => unreachable!("columns built from schema"),
            }
        }
        if let (Some(p), Some(t)) = (target_pos, target.as_mut()) {
            let y = match record[p].trim() {
                "0" => 0,
                "1" => 1,
                other => {
                    return Err(Error::ParseAt {
                        row,
                        column: schema.target().to_owned(),
                        message: format!("target must be 0 or 1, got {other:?}"),
                    })
                }
            };
            t.push(y);
        }
    }
    let data = Dataset::new(schema, columns, target)?;
    if mode == TargetMode::Required && data.n_rows() == 0 {
        return Err(Error::InsufficientData("no data rows".into()));
    }
    Ok(data)
}

pub fn save_csv<T: Scalar>(data: &Dataset<T>, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_csv(data, file)
}

/// Writes features in schema order, then the target when present. Numbers
/// use the shortest representation that parses back to the same value.
pub fn write_csv<T: Scalar, W: Write>(data: &Dataset<T>, writer: W) -> Result<()> {
    let schema = data.schema();
    let mut w = csv::Writer::from_writer(writer);
    let mut header: Vec<&str> = schema.features().iter().map(|f| f.name.as_str()).collect();
    if data.target().is_some() {
        header.push(schema.target());
    }
    w.write_record(&header).map_err(csv_err)?;
    let mut record: Vec<String> = Vec::with_capacity(header.len());
    for row in 0..data.n_rows() {
        record.clear();
        for (j, f) in schema.features().iter().enumerate() {
            record.push(match &f.kind {
                FeatureKind::Numeric => data
                    .numeric(j, row)
                    .map(|v| format!("{}", v.as_f64()))
                    .unwrap_or_default(),
                FeatureKind::Categorical(g) => g.label(data.category(j, row)).to_owned(),
            });
        }
        if let Some(t) = data.target() {
            record.push(t[row].to_string());
        }
        w.write_record(&record).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}
