//! Synthetic weather-style scenarios over a grid "region" graph and a
//! 12-cycle "month" graph.
//!
//! The true log-odds of `rain` are
//! `base_logit + Σ_b height_b · exp(-d²(cell, b) / (2 width_b²)) + month_amplitude · cos(2π (month - month_peak) / 12)`,
//! where `d` is Euclidean distance in grid coordinates. Rows draw region and
//! month uniformly and the target from the true probability.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Column, Dataset, FeatureSpec, Schema};
use crate::error::{Error, Result};
use crate::graph::StructureGraph;
use crate::scalar::{sigmoid, Scalar};

pub const MONTHS: [&str; 12] = [
    "jan", "feb", "mar", "apr", "may", "jun", "jul", "aug", "sep", "oct", "nov", "dec",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    GridWeather,
    /// Like `GridWeather`, plus a set of region vertices whose rows are
    /// reserved for testing.
    HoldoutVertices,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bump {
    pub row: f64,
    pub col: f64,
    pub height: f64,
    pub width: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioSpec {
    pub scenario: ScenarioKind,
    pub grid_size: usize,
    pub bumps: Vec<Bump>,
    pub base_logit: f64,
    pub month_amplitude: f64,
    /// Month index (0 = jan) where the seasonal term peaks.
    pub month_peak: usize,
    pub rows: usize,
    /// Region labels held out for testing (`holdout_vertices` only).
    pub holdout: Vec<String>,
    /// Overrides the surface with a single probability everywhere.
    pub constant_probability: Option<f64>,
}

impl Default for ScenarioSpec {
    fn default() -> Self {
        Self {
            scenario: ScenarioKind::GridWeather,
            grid_size: 7,
            bumps: vec![
                Bump { row: 1.0, col: 1.5, height: 2.2, width: 1.4 },
                Bump { row: 5.0, col: 4.5, height: -2.0, width: 1.6 },
                Bump { row: 2.0, col: 5.5, height: 1.2, width: 1.0 },
            ],
            base_logit: -0.6,
            month_amplitude: 1.0,
            month_peak: 0,
            rows: 20_000,
            holdout: Vec::new(),
            constant_probability: None,
        }
    }
}

impl ScenarioSpec {
    /// Default `holdout_vertices` scenario: three held-out cells, one in the
    /// wet corner, one in the dry basin and one in between.
    pub fn holdout_default() -> Self {
        Self {
            scenario: ScenarioKind::HoldoutVertices,
            holdout: vec!["r1c1".into(), "r5c4".into(), "r3c3".into()],
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid_size < 2 {
            return Err(Error::InvalidScenario("grid_size must be at least 2".into()));
        }
        if self.rows == 0 {
            return Err(Error::InvalidScenario("rows must be positive".into()));
        }
        if self.month_peak >= 12 {
            return Err(Error::InvalidScenario("month_peak must be in 0..12".into()));
        }
        if self.bumps.iter().any(|b| b.width.is_nan() || b.width <= 0.0 || !b.height.is_finite()) {
            return Err(Error::InvalidScenario("bump widths must be positive".into()));
        }
        if let Some(p) = self.constant_probability {
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::InvalidScenario("constant_probability must be in (0, 1)".into()));
            }
        }
        match self.scenario {
            ScenarioKind::GridWeather if !self.holdout.is_empty() => Err(Error::InvalidScenario(
                "holdout labels require the holdout_vertices scenario".into(),
            )),
            ScenarioKind::HoldoutVertices if self.holdout.is_empty() => Err(Error::InvalidScenario(
                "holdout_vertices needs at least one holdout label".into(),
            )),
            _ => Ok(()),
        }
    }

    pub fn region_graph(&self) -> StructureGraph {
        StructureGraph::grid(self.grid_size, self.grid_size)
    }

    pub fn month_graph() -> StructureGraph {
        let edges: Vec<(&str, &str)> = (0..12).map(|i| (MONTHS[i], MONTHS[(i + 1) % 12])).collect();
        StructureGraph::from_labeled_edges(&MONTHS, &edges).expect("month cycle is valid")
    }

    /// True `P(rain | region, month)` for a grid vertex index and month.
    pub fn true_probability(&self, region: usize, month: usize) -> f64 {
        if let Some(p) = self.constant_probability {
            return p;
        }
        let (r, c) = ((region / self.grid_size) as f64, (region % self.grid_size) as f64);
        let spatial: f64 = self
            .bumps
            .iter()
            .map(|b| {
                let d2 = (r - b.row).powi(2) + (c - b.col).powi(2);
                b.height * (-d2 / (2.0 * b.width * b.width)).exp()
            })
            .sum();
        let phase = 2.0 * PI * (month as f64 - self.month_peak as f64) / 12.0;
        sigmoid(self.base_logit + spatial + self.month_amplitude * phase.cos())
    }
}

#[derive(Clone, Debug)]
pub struct SyntheticData<T> {
    pub spec: ScenarioSpec,
    pub data: Dataset<T>,
    pub schema: Arc<Schema>,
    pub region: Arc<StructureGraph>,
    pub month: Arc<StructureGraph>,
    /// True probability behind each row's target.
    pub truth: Vec<f64>,
    /// Rows whose region is held out (empty for `grid_weather`).
    pub holdout_rows: Vec<usize>,
    /// All other rows.
    pub pool_rows: Vec<usize>,
}

pub fn generate_synthetic<T: Scalar>(spec: &ScenarioSpec, seed: u64) -> Result<SyntheticData<T>> {
    spec.validate()?;
    let region = Arc::new(spec.region_graph());
    let month = Arc::new(ScenarioSpec::month_graph());
    let mut held = vec![false; region.order()];
    for label in &spec.holdout {
        let v = region
            .index_of(label)
            .ok_or_else(|| Error::InvalidScenario(format!("unknown holdout vertex {label:?}")))?;
        held[v] = true;
    }
    let schema = Arc::new(Schema::new(
        vec![
            FeatureSpec::categorical("region", Arc::clone(&region)),
            FeatureSpec::categorical("month", Arc::clone(&month)),
        ],
        "rain",
    )?);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = spec.rows;
    let mut regions = Vec::with_capacity(n);
    let mut months = Vec::with_capacity(n);
    let mut target = Vec::with_capacity(n);
    let mut truth = Vec::with_capacity(n);
    let (mut holdout_rows, mut pool_rows) = (Vec::new(), Vec::new());
    for i in 0..n {
        let r = rng.gen_range(0..region.order());
        let m = rng.gen_range(0..12);
        let p = spec.true_probability(r, m);
        let y = u8::from(rng.gen::<f64>() < p);
        regions.push(r as u32);
        months.push(m as u32);
        target.push(y);
        truth.push(p);
        if held[r] {
            holdout_rows.push(i);
        } else {
            pool_rows.push(i);
        }
    }
    let data = Dataset::new(
        Arc::clone(&schema),
        vec![Column::Categorical(regions), Column::Categorical(months)],
        Some(target),
    )?;
    Ok(SyntheticData {
        spec: spec.clone(),
        data,
        schema,
        region,
        month,
        truth,
        holdout_rows,
        pool_rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_under_seed() {
        let spec = ScenarioSpec {
            grid_size: 5,
            rows: 500,
            ..ScenarioSpec::default()
        };
        let a: SyntheticData<f64> = generate_synthetic(&spec, 3).unwrap();
        let b: SyntheticData<f64> = generate_synthetic(&spec, 3).unwrap();
        assert_eq!(a.data.target(), b.data.target());
        assert_eq!(a.data.columns(), b.data.columns());
        assert_eq!(a.truth, b.truth);
    }

    #[test]
    fn constant_probability_everywhere() {
        let spec = ScenarioSpec {
            constant_probability: Some(0.3),
            rows: 100,
            ..ScenarioSpec::default()
        };
        let s: SyntheticData<f64> = generate_synthetic(&spec, 0).unwrap();
        assert!(s.truth.iter().all(|&p| p == 0.3));
    }

    #[test]
    fn holdout_rows_partition() {
        let spec = ScenarioSpec {
            rows: 3000,
            ..ScenarioSpec::holdout_default()
        };
        let s: SyntheticData<f32> = generate_synthetic(&spec, 1).unwrap();
        assert_eq!(s.holdout_rows.len() + s.pool_rows.len(), 3000);
        let held: Vec<usize> = ["r1c1", "r5c4", "r3c3"]
            .iter()
            .map(|l| s.region.index_of(l).unwrap())
            .collect();
        for &i in &s.holdout_rows {
            assert!(held.contains(&s.data.category(0, i)));
        }
        for &i in &s.pool_rows {
            assert!(!held.contains(&s.data.category(0, i)));
        }
    }

    #[test]
    fn invalid_scenarios() {
        let spec = ScenarioSpec {
            holdout: vec!["r0c0".into()],
            ..ScenarioSpec::default()
        };
        assert!(matches!(generate_synthetic::<f64>(&spec, 0), Err(Error::InvalidScenario(_))));
        let mut spec = ScenarioSpec::holdout_default();
        spec.holdout = vec!["nowhere".into()];
        assert!(matches!(generate_synthetic::<f64>(&spec, 0), Err(Error::InvalidScenario(_))));
        spec.holdout.clear();
        assert!(spec.validate().is_err());
        let spec = ScenarioSpec { grid_size: 1, ..ScenarioSpec::default() };
        assert!(spec.validate().is_err());
    }

    #[test]
    fn cell_frequencies_match_truth() {
        // 3x3 grid, 108 cells, about 925 rows each; 4 SE is a Bonferroni bound near 0.7% familywise
        let spec = ScenarioSpec {
            grid_size: 3,
            rows: 100_000,
            bumps: vec![Bump { row: 0.0, col: 0.0, height: 2.0, width: 1.0 }],
            ..ScenarioSpec::default()
        };
        let s: SyntheticData<f64> = generate_synthetic(&spec, 12).unwrap();
        let mut hits = vec![[0u32; 2]; 9 * 12];
        for i in 0..s.data.n_rows() {
            let cell = s.data.category(0, i) * 12 + s.data.category(1, i);
            hits[cell][0] += 1;
            hits[cell][1] += u32::from(s.data.target().unwrap()[i]);
        }
        for (cell, [n, k]) in hits.iter().enumerate() {
            let p = spec.true_probability(cell / 12, cell % 12);
            let se = (p * (1.0 - p) / *n as f64).sqrt();
            let freq = *k as f64 / *n as f64;
            assert!((freq - p).abs() <= 4.0 * se, "cell {cell}: {freq} vs {p}");
        }
    }
}
