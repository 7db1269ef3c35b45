use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::stats::paired_t_test;
use super::{BenchmarkConfig, CellResult};
use crate::error::{Error, Result};

pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub trial: usize,
    pub train_size: usize,
    pub variant: String,
    pub max_depth: usize,
    pub log_loss: f64,
    pub auroc: f64,
    pub n: usize,
    pub rounds: usize,
}

/// Best depth per (train size, variant), chosen by mean test log-loss over
/// trials; ties keep the smaller depth.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub train_size: usize,
    pub variant: String,
    pub best_depth: usize,
    pub mean_log_loss: f64,
    pub sd_log_loss: f64,
    pub mean_auroc: f64,
    pub n_trials: usize,
}

/// Paired t-test on per-trial test log-loss at each variant's best depth.
/// Negative `mean_diff` favours `variant_a`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TTestRow {
    pub train_size: usize,
    pub variant_a: String,
    pub variant_b: String,
    pub mean_diff: f64,
    pub t: f64,
    pub p: f64,
    pub zero_variance: bool,
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimingRow {
    pub trial: usize,
    pub train_size: usize,
    pub variant: String,
    pub max_depth: usize,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentReport {
    pub metrics: Vec<MetricRow>,
    pub aggregates: Vec<AggregateRow>,
    pub ttests: Vec<TTestRow>,
    /// Wall-clock times; written to their own file so the other files stay
    /// reproducible.
    pub timings: Vec<TimingRow>,
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn sd(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

impl ExperimentReport {
    pub fn assemble(config: &BenchmarkConfig, cells: &[CellResult]) -> Self {
        let mut metrics: Vec<MetricRow> = cells
            .iter()
            .map(|c| MetricRow {
                trial: c.trial,
                train_size: c.train_size,
                variant: c.variant.clone(),
                max_depth: c.max_depth,
                log_loss: c.eval.log_loss,
                auroc: c.eval.auroc,
                n: c.eval.n,
                rounds: c.rounds,
            })
            .collect();
        let variant_pos = |name: &str| config.variants.iter().position(|v| v.name() == name).unwrap_or(usize::MAX);
        let key = |r: &MetricRow| (r.trial, r.train_size, variant_pos(&r.variant), r.max_depth);
        metrics.sort_by_key(|r| key(r));
        let mut timings: Vec<TimingRow> = cells
            .iter()
            .map(|c| TimingRow {
                trial: c.trial,
                train_size: c.train_size,
                variant: c.variant.clone(),
                max_depth: c.max_depth,
                seconds: c.seconds,
            })
            .collect();
        timings.sort_by_key(|r| (r.trial, r.train_size, variant_pos(&r.variant), r.max_depth));

        let mut aggregates = Vec::new();
        // (size, variant) -> per-trial log-loss at the best depth
        let mut best_series: BTreeMap<(usize, usize), Vec<f64>> = BTreeMap::new();
        for &size in &config.train_sizes {
            for (vi, v) in config.variants.iter().enumerate() {
                let mut by_depth: BTreeMap<usize, Vec<&MetricRow>> = BTreeMap::new();
                for r in metrics.iter().filter(|r| r.train_size == size && r.variant == v.name()) {
                    by_depth.entry(r.max_depth).or_default().push(r);
                }
                let mut best: Option<(usize, f64)> = None;
                for (&d, rows) in &by_depth {
                    let m = mean(&rows.iter().map(|r| r.log_loss).collect::<Vec<_>>());
                    if best.is_none_or(|(_, b)| m < b) {
                        best = Some((d, m));
                    }
                }
                let Some((depth, _)) = best else {
                    continue;
                };
                let rows = &by_depth[&depth];
                let mut rows = rows.clone();
                rows.sort_by_key(|r| r.trial);
                let losses: Vec<f64> = rows.iter().map(|r| r.log_loss).collect();
                let aurocs: Vec<f64> = rows.iter().map(|r| r.auroc).collect();
                aggregates.push(AggregateRow {
                    train_size: size,
                    variant: v.name().to_owned(),
                    best_depth: depth,
                    mean_log_loss: mean(&losses),
                    sd_log_loss: sd(&losses),
                    mean_auroc: mean(&aurocs),
                    n_trials: losses.len(),
                });
                best_series.insert((size, vi), losses);
            }
        }

        let mut ttests = Vec::new();
        for &size in &config.train_sizes {
            for i in 0..config.variants.len() {
                for j in i + 1..config.variants.len() {
                    let (Some(a), Some(b)) = (best_series.get(&(size, i)), best_series.get(&(size, j))) else {
                        continue;
                    };
                    let Ok(t) = paired_t_test(a, b) else {
                        continue;
                    };
                    ttests.push(TTestRow {
                        train_size: size,
                        variant_a: config.variants[i].name().to_owned(),
                        variant_b: config.variants[j].name().to_owned(),
                        mean_diff: t.mean_diff,
                        t: t.t,
                        p: t.p,
                        zero_variance: t.zero_variance,
                        n: t.n,
                    });
                }
            }
        }
        Self {
            metrics,
            aggregates,
            ttests,
            timings,
        }
    }

    pub fn aggregate(&self, train_size: usize, variant: &str) -> Option<&AggregateRow> {
        self.aggregates
            .iter()
            .find(|a| a.train_size == train_size && a.variant == variant)
    }

    /// The t-test row for a pair in either order, oriented as `a` vs `b`.
    pub fn ttest(&self, train_size: usize, a: &str, b: &str) -> Option<TTestRow> {
        self.ttests.iter().find_map(|r| {
            if r.train_size != train_size {
                return None;
            }
            if r.variant_a == a && r.variant_b == b {
                Some(r.clone())
            } else if r.variant_a == b && r.variant_b == a {
                Some(TTestRow {
                    variant_a: a.to_owned(),
                    variant_b: b.to_owned(),
                    mean_diff: -r.mean_diff,
                    t: -r.t,
                    ..r.clone()
                })
            } else {
                None
            }
        })
    }

    /// Writes `metrics.csv`, `aggregates.csv`, `ttests.csv`, `summary.txt`
    /// and `timings.csv` into `dir`.
    pub fn write_dir(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("metrics.csv"), table_to_string("metrics", &self.metrics)?)?;
        std::fs::write(dir.join("aggregates.csv"), table_to_string("aggregates", &self.aggregates)?)?;
        std::fs::write(dir.join("ttests.csv"), table_to_string("ttests", &self.ttests)?)?;
        std::fs::write(dir.join("timings.csv"), table_to_string("timings", &self.timings)?)?;
        std::fs::write(dir.join("summary.txt"), self.summary())?;
        Ok(())
    }

    pub fn read_dir(dir: &Path) -> Result<Self> {
        let read = |name: &str| std::fs::read_to_string(dir.join(format!("{name}.csv")));
        Ok(Self {
            metrics: table_from_str("metrics", &read("metrics")?)?,
            aggregates: table_from_str("aggregates", &read("aggregates")?)?,
            ttests: table_from_str("ttests", &read("ttests")?)?,
            timings: match read("timings") {
                Ok(text) => table_from_str("timings", &text)?,
                Err(e) if e.kind() == std::io::ErrorKind::NotFound => Vec::new(),
                Err(e) => return Err(e.into()),
            },
        })
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "terrainboost benchmark report v{REPORT_VERSION}");
        let _ = writeln!(s, "cells: {}", self.metrics.len());
        let _ = writeln!(s);
        let _ = writeln!(s, "best depth per train size and variant (test log-loss, mean over trials)");
        let _ = writeln!(
            s,
            "{:>10}  {:<20} {:>5}  {:>10}  {:>10}  {:>8}",
            "train_size", "variant", "depth", "log_loss", "sd", "auroc"
        );
        for a in &self.aggregates {
            let _ = writeln!(
                s,
                "{:>10}  {:<20} {:>5}  {:>10.6}  {:>10.6}  {:>8.4}",
                a.train_size, a.variant, a.best_depth, a.mean_log_loss, a.sd_log_loss, a.mean_auroc
            );
        }
        if !self.ttests.is_empty() {
            let _ = writeln!(s);
            let _ = writeln!(s, "paired t-tests on test log-loss (a - b)");
            for t in &self.ttests {
                let _ = writeln!(
                    s,
                    "{:>10}  {:<20} vs {:<20}  diff {:>+11.6}  t {:>9.3}  p {:.4}{}",
                    t.train_size,
                    t.variant_a,
                    t.variant_b,
                    t.mean_diff,
                    t.t,
                    t.p,
                    if t.zero_variance { "  (zero variance)" } else { "" }
                );
            }
        }
        s
    }
}

fn header_line(table: &str) -> String {
    format!("# terrainboost-report v{REPORT_VERSION} {table}")
}

fn table_to_string<R: Serialize>(table: &str, rows: &[R]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(true).from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Parse(e.to_string()))?;
    }
    let body = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    let mut out = header_line(table);
    out.push('\n');
    out.push_str(std::str::from_utf8(&body).expect("csv output is UTF-8"));
    Ok(out)
}

fn table_from_str<R: DeserializeOwned>(table: &str, text: &str) -> Result<Vec<R>> {
    let (first, body) = text.split_once('\n').unwrap_or((text, ""));
    if first != header_line(table) {
        return Err(Error::Parse(format!(
            "{table}: expected header {:?}, found {first:?}",
            header_line(table)
        )));
    }
    csv::Reader::from_reader(body.as_bytes())
        .deserialize()
        .collect::<std::result::Result<Vec<R>, _>>()
        .map_err(|e| Error::Parse(format!("{table}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::VariantSpec;
    use crate::metrics::EvalResult;

    fn cell(trial: usize, variant: &str, depth: usize, ll: f64) -> CellResult {
        CellResult {
            trial,
            train_size: 10,
            variant: variant.into(),
            max_depth: depth,
            eval: EvalResult {
                log_loss: ll,
                auroc: 0.6,
                n: 5,
            },
            rounds: 3,
            seconds: 0.01,
        }
    }

    #[test]
    fn best_depth_and_pairing() {
        let config = BenchmarkConfig {
            train_sizes: vec![10],
            variants: vec![VariantSpec::spanning_tree(1), VariantSpec::base_rate()],
            ..BenchmarkConfig::default()
        };
        let cells = vec![
            cell(0, "st_1", 1, 0.50),
            cell(1, "st_1", 1, 0.52),
            cell(0, "st_1", 2, 0.40),
            cell(1, "st_1", 2, 0.46),
            cell(1, "base_rate", 0, 0.60),
            cell(0, "base_rate", 0, 0.61),
        ];
        let r = ExperimentReport::assemble(&config, &cells);
        let a = r.aggregate(10, "st_1").unwrap();
        assert_eq!(a.best_depth, 2);
        assert!((a.mean_log_loss - 0.43).abs() < 1e-12);
        let t = r.ttest(10, "st_1", "base_rate").unwrap();
        let direct = paired_t_test(&[0.40, 0.46], &[0.61, 0.60]).unwrap();
        assert_eq!(t.t, direct.t);
        assert_eq!(r.ttest(10, "base_rate", "st_1").unwrap().t, -direct.t);
        // rows come out in (trial, size, variant order, depth) order
        assert_eq!(r.metrics[0].variant, "st_1");
        assert_eq!(r.metrics[2].variant, "base_rate");
    }

    #[test]
    fn files_round_trip() {
        let config = BenchmarkConfig {
            train_sizes: vec![10],
            variants: vec![VariantSpec::spanning_tree(1), VariantSpec::base_rate()],
            ..BenchmarkConfig::default()
        };
        let cells = vec![
            cell(0, "st_1", 1, 0.1 + 0.2),
            cell(1, "st_1", 1, 1.0 / 3.0),
            cell(0, "base_rate", 0, 0.7),
            cell(1, "base_rate", 0, 0.7 + 1e-17),
        ];
        let r = ExperimentReport::assemble(&config, &cells);
        let dir = tempfile::tempdir().unwrap();
        r.write_dir(dir.path()).unwrap();
        assert_eq!(ExperimentReport::read_dir(dir.path()).unwrap(), r);
        let text = std::fs::read_to_string(dir.path().join("metrics.csv")).unwrap();
        assert!(text.starts_with("# terrainboost-report v1 metrics\n"));
        assert!(table_from_str::<MetricRow>("aggregates", &text).is_err());
    }
}
