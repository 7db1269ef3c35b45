use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use terrainboost::data::{
    generate_synthetic, load_csv, read_schema_file, save_csv, write_schema_dir, ScenarioKind, ScenarioSpec,
    SyntheticData, TargetMode,
};
use terrainboost::graph::{enumerate_connected_sets, read_graph_file, StructureGraph};
use terrainboost::harness::{run_benchmark, BenchmarkConfig};
use terrainboost::metrics::evaluate as eval_metrics;
use terrainboost::split::{count_allowable_splits, enumerate_allowable_splits, DEFAULT_ENUMERATION_LIMIT};
use terrainboost::{train as train_model, BoostConfig, Model, SamplerConfig, SamplingMethod, Split, SplitSampler};

use crate::{
    BenchmarkArgs, EnumerateArgs, EvaluateArgs, GraphInfoArgs, Method, PredictArgs, SampleArgs, ScenarioArg,
    SynthArgs, TrainArgs,
};

/// Training config document. Paths are relative to the config file.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TrainConfig {
    schema: PathBuf,
    train: PathBuf,
    valid: PathBuf,
    #[serde(default)]
    boost: BoostConfig,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn output(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn load_graph_arg(path: &Path) -> Result<StructureGraph> {
    read_graph_file(path).with_context(|| format!("loading graph {}", path.display()))
}

pub fn train(a: TrainArgs) -> Result<()> {
    let cfg: TrainConfig = read_json(&a.config)?;
    let base = a.config.parent().unwrap_or(Path::new("."));
    let schema = Arc::new(read_schema_file(&base.join(&cfg.schema)).context("loading schema")?);
    let tr = load_csv::<f64>(&base.join(&cfg.train), Arc::clone(&schema), TargetMode::Required)
        .context("loading training data")?;
    let va = load_csv::<f64>(&base.join(&cfg.valid), schema, TargetMode::Required).context("loading validation data")?;
    let mut boost = cfg.boost;
    if let Some(seed) = a.seed {
        boost.seed = seed;
    }
    let out = train_model(&tr, &va, &boost)?;
    std::fs::create_dir_all(&a.out)?;
    out.model.save(&a.out.join("model.json"))?;
    let mut hist = String::from("round,valid_log_loss\n");
    for (i, l) in out.history.iter().enumerate() {
        hist.push_str(&format!("{i},{l}\n"));
    }
    std::fs::write(a.out.join("history.csv"), hist)?;
    eprintln!(
        "trained {} trees (best round {} of {}), valid log-loss {:.6}",
        out.model.trees().len(),
        out.best_round,
        out.history.len() - 1,
        out.history[out.best_round]
    );
    Ok(())
}

pub fn predict(a: PredictArgs) -> Result<()> {
    let model = Model::load(&a.model).context("loading model")?;
    let data = load_csv::<f64>(&a.data, Arc::clone(model.schema()), TargetMode::Optional)?;
    let probs = model.predict_proba(&data)?;
    let mut w = output(a.out.as_deref())?;
    for p in probs {
        writeln!(w, "{p:.16e}")?;
    }
    w.flush()?;
    Ok(())
}

pub fn evaluate(a: EvaluateArgs) -> Result<()> {
    let model = Model::load(&a.model).context("loading model")?;
    let data = load_csv::<f64>(&a.data, Arc::clone(model.schema()), TargetMode::Required)?;
    let probs = model.predict_proba(&data)?;
    let result = eval_metrics(data.require_target()?, &probs)?;
    let mut w = output(a.out.as_deref())?;
    writeln!(w, "{}", serde_json::to_string_pretty(&result)?)?;
    w.flush()?;
    Ok(())
}

fn write_splits(w: &mut dyn Write, g: &StructureGraph, splits: &[Split]) -> Result<()> {
    for s in splits {
        writeln!(w, "{}", serde_json::to_string(&s.labels(g))?)?;
    }
    writeln!(w, "count {}", splits.len())?;
    w.flush()?;
    Ok(())
}

pub fn enumerate_splits(a: EnumerateArgs) -> Result<()> {
    let g = load_graph_arg(&a.graph)?;
    let splits = enumerate_allowable_splits(&g, Some(a.limit.unwrap_or(DEFAULT_ENUMERATION_LIMIT)))?;
    write_splits(&mut *output(a.out.as_deref())?, &g, &splits)
}

pub fn sample_splits(a: SampleArgs) -> Result<()> {
    let g = Arc::new(load_graph_arg(&a.graph)?);
    let mut cfg: SamplerConfig = match &a.config {
        Some(p) => read_json(p)?,
        None => SamplerConfig::default(),
    };
    if let Some(m) = a.method {
        cfg.method = match m {
            Method::SpanningTree => SamplingMethod::SpanningTree,
            Method::EdgeContraction => SamplingMethod::EdgeContraction,
            Method::FullEnumeration => SamplingMethod::FullEnumeration,
        };
    }
    if let Some(c) = a.contraction_size {
        cfg.contraction_size = c;
    }
    if let Some(m) = a.max_splits {
        cfg.max_splits_to_search = m;
    }
    if let Some(n) = a.num_trees {
        cfg.num_spanning_trees = n;
    }
    if a.repeat == 0 {
        bail!("--repeat must be at least 1");
    }
    let mut sampler = SplitSampler::new(Arc::clone(&g), cfg)?;
    if let Some(limit) = a.limit {
        sampler = sampler.with_limit(limit);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut all = Vec::new();
    for _ in 0..a.repeat {
        all.extend(sampler.sample(&mut rng)?);
    }
    all.sort_unstable();
    all.dedup();
    write_splits(&mut *output(a.out.as_deref())?, &g, &all)
}

fn scenario_for(arg: Option<ScenarioArg>) -> ScenarioSpec {
    match arg {
        Some(ScenarioArg::HoldoutVertices) => ScenarioSpec::holdout_default(),
        Some(ScenarioArg::GridWeather) | None => ScenarioSpec::default(),
    }
}

pub fn synth(a: SynthArgs) -> Result<()> {
    if a.config.is_some() && a.scenario.is_some() {
        bail!("--scenario cannot be combined with --config");
    }
    let mut spec: ScenarioSpec = match &a.config {
        Some(p) => read_json(p)?,
        None => scenario_for(a.scenario),
    };
    if let Some(rows) = a.rows {
        spec.rows = rows;
    }
    let s: SyntheticData<f64> = generate_synthetic(&spec, a.seed)?;
    std::fs::create_dir_all(&a.out)?;
    save_csv(&s.data, &a.out.join("data.csv"))?;
    write_schema_dir(&s.schema, &a.out, "schema.json")?;
    let mut holdout = vec![false; s.data.n_rows()];
    for &i in &s.holdout_rows {
        holdout[i] = true;
    }
    let mut truth = String::from("p,holdout\n");
    for (p, h) in s.truth.iter().zip(&holdout) {
        truth.push_str(&format!("{p},{}\n", u8::from(*h)));
    }
    std::fs::write(a.out.join("truth.csv"), truth)?;
    std::fs::write(a.out.join("scenario.json"), serde_json::to_string_pretty(&spec)? + "\n")?;
    eprintln!(
        "wrote {} rows ({} in held-out regions) to {}",
        s.data.n_rows(),
        s.holdout_rows.len(),
        a.out.display()
    );
    Ok(())
}

pub fn benchmark(a: BenchmarkArgs) -> Result<()> {
    let mut cfg: BenchmarkConfig = match &a.config {
        Some(p) => read_json(p)?,
        None => BenchmarkConfig::default(),
    };
    match (a.scenario, a.config.is_some()) {
        (Some(_), true) => bail!("--scenario cannot be combined with --config"),
        (Some(arg), false) => {
            cfg.scenario = scenario_for(Some(arg));
            if cfg.scenario.scenario == ScenarioKind::HoldoutVertices {
                cfg.n_test = 1000;
            }
        }
        _ => {}
    }
    if let Some(seed) = a.seed {
        cfg.seed = seed;
    }
    let report = run_benchmark(&cfg)?;
    report.write_dir(&a.out)?;
    std::fs::write(a.out.join("config.json"), serde_json::to_string_pretty(&cfg)? + "\n")?;
    print!("{}", report.summary());
    Ok(())
}

#[derive(Serialize)]
struct GraphInfo {
    vertices: usize,
    edges: usize,
    min_degree: usize,
    max_degree: usize,
    mean_degree: f64,
    allowable_splits: u64,
    sets_visited: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    connected_sets: Option<u64>,
}

pub fn graph_info(a: GraphInfoArgs) -> Result<()> {
    let g = load_graph_arg(&a.graph)?;
    let limit = a.limit.unwrap_or(DEFAULT_ENUMERATION_LIMIT);
    let degrees: Vec<usize> = (0..g.order()).map(|v| g.neighbors(v).len()).collect();
    let (splits, visited) = if g.order() >= 2 {
        count_allowable_splits(&g, Some(limit))?
    } else {
        (0, 0)
    };
    let connected_sets = match a.max_set_size {
        Some(k) => {
            let n = enumerate_connected_sets(&g, k)?.take(limit.saturating_add(1) as usize).count() as u64;
            if n > limit {
                return Err(terrainboost::Error::ResourceLimit { limit }.into());
            }
            Some(n)
        }
        None => None,
    };
    let info = GraphInfo {
        vertices: g.order(),
        edges: g.edge_count(),
        min_degree: degrees.iter().copied().min().unwrap_or(0),
        max_degree: degrees.iter().copied().max().unwrap_or(0),
        mean_degree: degrees.iter().sum::<usize>() as f64 / g.order() as f64,
        allowable_splits: splits,
        sets_visited: visited,
        connected_sets,
    };
    let mut w = output(a.out.as_deref())?;
    writeln!(w, "{}", serde_json::to_string_pretty(&info)?)?;
    w.flush()?;
    Ok(())
}
