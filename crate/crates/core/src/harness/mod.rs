//! Benchmark protocol: repeated random train/valid/test splits of a
//! synthetic scenario, a max-depth sweep per model variant, test metrics per
//! cell, best-depth aggregates and paired t-tests between variants.

mod encoding;
mod report;
mod stats;

pub use encoding::TargetEncoder;
pub use report::{AggregateRow, ExperimentReport, MetricRow, TTestRow, TimingRow, REPORT_VERSION};
pub use stats::{ln_gamma, paired_t_test, regularized_incomplete_beta, student_t_cdf, student_t_two_sided, TTest};

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boosting::{train, BoostConfig};
use crate::data::{generate_synthetic, split_trials_from, Dataset, ScenarioKind, ScenarioSpec, SyntheticData, TrialSplit};
use crate::error::{Error, Result};
use crate::metrics::{evaluate, EvalResult};
use crate::seed;
use crate::split::SamplerConfig;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "snake_case")]
pub enum VariantSpec {
    /// Boosting on the categorical features with graph-constrained splits.
    Structured { name: String, sampler: SamplerConfig },
    /// Boosting on target-mean encoded categorical features.
    TargetEncoding { name: String },
    /// Constant training-set base rate.
    BaseRate { name: String },
}

impl VariantSpec {
    pub fn name(&self) -> &str {
        match self {
            VariantSpec::Structured { name, .. } | VariantSpec::TargetEncoding { name } | VariantSpec::BaseRate { name } => name,
        }
    }

    pub fn spanning_tree(n: usize) -> Self {
        VariantSpec::Structured {
            name: format!("st_{n}"),
            sampler: SamplerConfig::spanning_tree(n),
        }
    }

    pub fn edge_contraction(c: usize, m: usize) -> Self {
        VariantSpec::Structured {
            name: format!("ec_c{c}_m{m}"),
            sampler: SamplerConfig::edge_contraction(c, m),
        }
    }

    pub fn target_encoding() -> Self {
        VariantSpec::TargetEncoding {
            name: "target_encoding".into(),
        }
    }

    pub fn base_rate() -> Self {
        VariantSpec::BaseRate {
            name: "base_rate".into(),
        }
    }

    fn uses_depth(&self) -> bool {
        !matches!(self, VariantSpec::BaseRate { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BenchmarkConfig {
    pub scenario: ScenarioSpec,
    pub seed: u64,
    pub n_trials: usize,
    pub train_sizes: Vec<usize>,
    pub n_valid: usize,
    pub n_test: usize,
    pub max_depths: Vec<usize>,
    pub variants: Vec<VariantSpec>,
    /// Shared boosting settings; `growth.max_depth`, `growth.sampler` and
    /// `seed` are set per cell.
    pub boost: BoostConfig,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        Self {
            scenario: ScenarioSpec::default(),
            seed: 0,
            n_trials: 5,
            train_sizes: vec![500, 2000],
            n_valid: 5000,
            n_test: 5000,
            max_depths: vec![1, 2, 3, 4, 6, 8],
            variants: vec![
                VariantSpec::spanning_tree(1),
                VariantSpec::spanning_tree(5),
                VariantSpec::edge_contraction(5, 20),
                VariantSpec::target_encoding(),
                VariantSpec::base_rate(),
            ],
            boost: BoostConfig::default(),
        }
    }
}

impl BenchmarkConfig {
    pub fn validate(&self) -> Result<()> {
        self.scenario.validate()?;
        self.boost.validate()?;
        if self.n_trials == 0 || self.train_sizes.is_empty() || self.variants.is_empty() {
            return Err(Error::InvalidConfig(
                "n_trials, train_sizes and variants must be non-empty".into(),
            ));
        }
        if self.max_depths.is_empty() || self.max_depths.contains(&0) {
            return Err(Error::InvalidConfig("max_depths must be non-empty and positive".into()));
        }
        if self.train_sizes.contains(&0) || self.n_valid == 0 || self.n_test == 0 {
            return Err(Error::InvalidConfig("set sizes must be positive".into()));
        }
        for (i, v) in self.variants.iter().enumerate() {
            if self.variants[..i].iter().any(|o| o.name() == v.name()) {
                return Err(Error::InvalidConfig(format!("duplicate variant name {:?}", v.name())));
            }
            if let VariantSpec::Structured { sampler, .. } = v {
                sampler.validate()?;
            }
        }
        Ok(())
    }
}

/// Scenario data plus the per-trial index splits.
pub struct Prepared {
    pub config: BenchmarkConfig,
    pub synthetic: SyntheticData<f64>,
    pub trials: Vec<TrialSplit>,
}

pub fn prepare(config: &BenchmarkConfig) -> Result<Prepared> {
    config.validate()?;
    let synthetic: SyntheticData<f64> = generate_synthetic(&config.scenario, seed::derive_str(config.seed, "data"))?;
    let all: Vec<usize>;
    let (pool, test_pool) = match config.scenario.scenario {
        ScenarioKind::GridWeather => {
            all = (0..synthetic.data.n_rows()).collect();
            (&all[..], None)
        }
        ScenarioKind::HoldoutVertices => (&synthetic.pool_rows[..], Some(&synthetic.holdout_rows[..])),
    };
    let trials = split_trials_from(
        pool,
        test_pool,
        &config.train_sizes,
        config.n_valid,
        config.n_test,
        config.n_trials,
        seed::derive_str(config.seed, "trials"),
    )?;
    Ok(Prepared {
        config: config.clone(),
        synthetic,
        trials,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CellResult {
    pub trial: usize,
    pub train_size: usize,
    pub variant: String,
    /// Zero for variants without a depth parameter.
    pub max_depth: usize,
    pub eval: EvalResult,
    pub rounds: usize,
    pub seconds: f64,
}

pub fn cell_seed(master: u64, trial: usize, train_size: usize, variant: &str, max_depth: usize) -> u64 {
    seed::derive_str(master, &format!("cell/{trial}/{train_size}/{variant}/{max_depth}"))
}

/// Boosting configuration used for one cell.
pub fn cell_boost_config(config: &BenchmarkConfig, variant: &VariantSpec, trial: usize, train_size: usize, max_depth: usize) -> BoostConfig {
    let mut boost = config.boost.clone();
    boost.growth.max_depth = max_depth;
    if let VariantSpec::Structured { sampler, .. } = variant {
        boost.growth.sampler = sampler.clone();
    }
    boost.seed = cell_seed(config.seed, trial, train_size, variant.name(), max_depth);
    boost
}

/// Trains and evaluates one (trial, train size, variant, depth) cell.
pub fn run_cell(prep: &Prepared, trial: usize, size_idx: usize, variant: &VariantSpec, max_depth: usize) -> Result<CellResult> {
    let train_size = prep.config.train_sizes[size_idx];
    let (tr, va, te) = cell_inputs(prep, trial, size_idx);
    let y_test = te.require_target()?;
    let start = Instant::now();
    let (probs, rounds): (Vec<f64>, usize) = match variant {
        VariantSpec::BaseRate { .. } => {
            let y = tr.require_target()?;
            let rate = y.iter().map(|&v| f64::from(v)).sum::<f64>() / y.len() as f64;
            (vec![rate; te.n_rows()], 0)
        }
        VariantSpec::Structured { .. } => {
            let cfg = cell_boost_config(&prep.config, variant, trial, train_size, max_depth);
            let out = train(&tr, &va, &cfg)?;
            (out.model.predict_proba(&te)?, out.best_round)
        }
        VariantSpec::TargetEncoding { .. } => {
            let cfg = cell_boost_config(&prep.config, variant, trial, train_size, max_depth);
            let enc = TargetEncoder::fit(&tr)?;
            let (tr, va, te) = (enc.transform(&tr)?, enc.transform(&va)?, enc.transform(&te)?);
            let out = train(&tr, &va, &cfg)?;
            (out.model.predict_proba(&te)?, out.best_round)
        }
    };
    let seconds = start.elapsed().as_secs_f64();
    Ok(CellResult {
        trial,
        train_size,
        variant: variant.name().to_owned(),
        max_depth: if variant.uses_depth() { max_depth } else { 0 },
        eval: evaluate(y_test, &probs)?,
        rounds,
        seconds,
    })
}

/// Runs every cell (in parallel on the current rayon pool) and assembles the
/// report in a fixed order.
pub fn run_benchmark(config: &BenchmarkConfig) -> Result<ExperimentReport> {
    let prep = prepare(config)?;
    let mut tasks = Vec::new();
    for trial in 0..config.n_trials {
        for size_idx in 0..config.train_sizes.len() {
            for variant in &config.variants {
                if variant.uses_depth() {
                    for &d in &config.max_depths {
                        tasks.push((trial, size_idx, variant, d));
                    }
                } else {
                    tasks.push((trial, size_idx, variant, 0));
                }
            }
        }
    }
    let cells = tasks
        .par_iter()
        .map(|&(trial, size_idx, variant, d)| run_cell(&prep, trial, size_idx, variant, d))
        .collect::<Result<Vec<_>>>()?;
    Ok(ExperimentReport::assemble(config, &cells))
}

/// Train, validation and test datasets of one cell.
pub fn cell_inputs(prep: &Prepared, trial: usize, size_idx: usize) -> (Dataset<f64>, Dataset<f64>, Dataset<f64>) {
    let split = &prep.trials[trial];
    let data = &prep.synthetic.data;
    (data.select(&split.train[size_idx]), data.select(&split.valid), data.select(&split.test))
}
