//! Timing harness for the dimensional and typed-attribute workloads.
//!
//! Every measured iteration regenerates its source from a seed derived
//! from the base seed, the workload, the cardinality, the parameter and
//! the iteration number, so a run is reproducible apart from the clock.
//! One warm-up iteration per workload is run and discarded.

pub mod corpus;
pub mod gen;

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::Instant;

use mdprof_core::kg::{discover_level_mapping, KgConfig, KnowledgeGraph};
use mdprof_core::profile::profile_dimensional;
use mdprof_core::{AttributeCategory, Table};
use thiserror::Error;

use crate::engine::{profile_column, profile_table, EngineConfig, EngineError};
use crate::graph_io::{load_kg, KgLoadError};
use crate::ingest::{write_csv, LoadOptions};

pub use corpus::{pseudo_words, CORPUS_WORDS};
pub use gen::{gen_dimensional_source, gen_typed_source, DimensionalSource};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid benchmark configuration: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Fixture(#[from] KgLoadError),
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> BenchError + '_ {
    move |source| BenchError::Io {
        path: path.to_owned(),
        source,
    }
}

/// Members in the synthetic benchmark level.
pub const LEVEL_MEMBERS: usize = 10_000;
pub const BENCH_NS: &str = "http://example.org/bench#";

/// The typed workloads, in report order.
pub const TYPED: [AttributeCategory; 5] = [
    AttributeCategory::Integer,
    AttributeCategory::Decimal,
    AttributeCategory::Categorical,
    AttributeCategory::Datetime,
    AttributeCategory::Textual,
];

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub cardinalities: Vec<usize>,
    pub noise_levels: Vec<f64>,
    pub iterations: usize,
    pub seed: u64,
    pub bins: usize,
    pub run_dimensional: bool,
    pub run_typed: bool,
    /// Also time the whole typed source profiled with every core.
    pub parallel: bool,
    /// Where the synthetic level is written before being loaded back.
    pub fixture: PathBuf,
    /// Words for the textual column.
    pub corpus: Vec<String>,
    /// When set, the first measured source of every workload is written
    /// there as CSV.
    pub dump_sources: Option<PathBuf>,
}

impl BenchConfig {
    pub fn new(fixture: PathBuf) -> Self {
        BenchConfig {
            cardinalities: vec![10_000, 100_000, 1_000_000],
            noise_levels: vec![0.0, 0.1, 0.2, 0.3, 0.4, 0.5],
            iterations: 10,
            seed: 42,
            bins: 10,
            run_dimensional: true,
            run_typed: true,
            parallel: false,
            fixture,
            corpus: pseudo_words(CORPUS_WORDS),
            dump_sources: None,
        }
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let bad = |m: &str| Err(BenchError::Config(m.into()));
        if self.iterations == 0 {
            return bad("iterations must be at least 1");
        }
        if self.bins == 0 {
            return bad("bins must be at least 1");
        }
        if self.cardinalities.is_empty() || self.cardinalities.contains(&0) {
            return bad("cardinalities must be positive");
        }
        if self.noise_levels.iter().any(|n| !(0.0..1.0).contains(n)) {
            return bad("noise levels must lie in [0, 1)");
        }
        if self.corpus.is_empty() {
            return bad("word corpus is empty");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimingRow {
    /// `dimensional` or `typed`.
    pub workload: &'static str,
    pub cardinality: usize,
    /// Noise fraction or attribute category.
    pub parameter: String,
    pub mean_s: f64,
    pub std_s: f64,
    /// Mapping discovery time, dimensional workload only.
    pub mapping: Option<(f64, f64)>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TimingReport {
    pub rows: Vec<TimingRow>,
}

pub const CSV_HEADER: &str =
    "workload,cardinality,parameter,mean_s,std_s,mapping_mean_s,mapping_std_s";

impl TimingReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from(CSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            let _ = write!(
                s,
                "{},{},{},{:.9},{:.9},",
                r.workload, r.cardinality, r.parameter, r.mean_s, r.std_s
            );
            if let Some((m, sd)) = r.mapping {
                let _ = write!(s, "{m:.9},{sd:.9}");
            } else {
                s.push(',');
            }
            s.push('\n');
        }
        s
    }

    pub fn find(&self, workload: &str, cardinality: usize, parameter: &str) -> Option<&TimingRow> {
        self.rows.iter().find(|r| {
            r.workload == workload && r.cardinality == cardinality && r.parameter == parameter
        })
    }

    /// Per-series files for plotting: `<noise>_noise_level.csv` with the
    /// report columns, and `mean_<type>_time_processing.csv` with
    /// cardinality, mean and standard deviation.
    pub fn write_series(&self, dir: &Path) -> Result<Vec<PathBuf>, BenchError> {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        let mut files: Vec<(PathBuf, String)> = Vec::new();
        for r in &self.rows {
            let (name, header, line) = if r.workload == "dimensional" {
                let (m, sd) = r.mapping.unwrap_or_default();
                (
                    format!("{}_noise_level.csv", r.parameter),
                    CSV_HEADER,
                    format!(
                        "{},{},{},{:.9},{:.9},{m:.9},{sd:.9}\n",
                        r.workload, r.cardinality, r.parameter, r.mean_s, r.std_s
                    ),
                )
            } else {
                (
                    format!("mean_{}_time_processing.csv", r.parameter),
                    "cardinality,mean_s,std_s",
                    format!("{},{:.9},{:.9}\n", r.cardinality, r.mean_s, r.std_s),
                )
            };
            let path = dir.join(name);
            match files.iter_mut().find(|(p, _)| *p == path) {
                Some((_, body)) => body.push_str(&line),
                None => files.push((path, format!("{header}\n{line}"))),
            }
        }
        for (path, body) in &files {
            fs::write(path, body).map_err(io_err(path))?;
        }
        Ok(files.into_iter().map(|(p, _)| p).collect())
    }
}

/// Mean and sample standard deviation (0 for a single value).
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// SplitMix64 over the parts, for independent per-iteration seeds.
pub fn derive_seed(parts: &[u64]) -> u64 {
    let mut h = 0x9E37_79B9_7F4A_7C15u64;
    for &p in parts {
        let mut z = h ^ p.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        h = z ^ (z >> 31);
    }
    h
}

pub fn level_iri() -> String {
    format!("{BENCH_NS}Level")
}

/// Turtle for one level with `n` members labelled `member 00000` ….
pub fn synthetic_level_turtle(n: usize) -> String {
    let mut s = String::with_capacity(n * 80);
    s.push_str("@prefix kpi: <http://w3id.org/kpionto/> .\n");
    s.push_str("@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n");
    let _ = writeln!(s, "@prefix b: <{BENCH_NS}> .\n");
    s.push_str("b:Dimension a kpi:Dimension .\n");
    s.push_str("b:Level a kpi:Level ; rdfs:label \"Level\" ; kpi:inDimension b:Dimension .\n");
    for i in 0..n {
        let _ = writeln!(
            s,
            "b:m{i:05} a kpi:Member ; rdfs:label \"member {i:05}\" ; kpi:inLevel b:Level ."
        );
    }
    s
}

fn parameter_label(noise: f64) -> String {
    format!("{noise:.1}")
}

fn dump(dir: &Option<PathBuf>, name: &str, table: &Table) -> Result<(), BenchError> {
    let Some(dir) = dir else { return Ok(()) };
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let path = dir.join(name);
    let file = fs::File::create(&path).map_err(io_err(&path))?;
    write_csv(table, io::BufWriter::new(file), &LoadOptions::default())
        .map_err(|e| io_err(&path)(io::Error::other(e.to_string())))
}

/// Runs the configured workloads. `progress` sees each row as it is
/// finished.
pub fn run_benchmark(
    config: &BenchConfig,
    mut progress: impl FnMut(&TimingRow),
) -> Result<TimingReport, BenchError> {
    config.validate()?;
    let mut report = TimingReport::default();

    if config.run_dimensional {
        if let Some(parent) = config
            .fixture
            .parent()
            .filter(|p| !p.as_os_str().is_empty())
        {
            fs::create_dir_all(parent).map_err(io_err(parent))?;
        }
        fs::write(&config.fixture, synthetic_level_turtle(LEVEL_MEMBERS))
            .map_err(io_err(&config.fixture))?;
        let kg = load_kg(&config.fixture, &KgConfig::default())?;
        let level = kg
            .level(&level_iri())
            .ok_or_else(|| BenchError::Config("fixture lacks the benchmark level".into()))?;
        let members: Vec<String> = level.members().iter().map(|m| m.label.clone()).collect();
        for &card in &config.cardinalities {
            for (ni, &noise) in config.noise_levels.iter().enumerate() {
                let row = time_dimensional(config, &kg, &members, card, ni, noise)?;
                progress(&row);
                report.rows.push(row);
            }
        }
    }

    if config.run_typed {
        let engine = EngineConfig {
            threads: Some(1),
            profile: mdprof_core::profile::ProfileOptions {
                bins: config.bins,
                ..Default::default()
            },
            ..Default::default()
        };
        for &card in &config.cardinalities {
            let mut samples: Vec<Vec<f64>> = vec![Vec::new(); TYPED.len() + 1];
            for it in 0..=config.iterations {
                let table = gen_typed_source(
                    card,
                    &config.corpus,
                    derive_seed(&[config.seed, 2, card as u64, it as u64]),
                );
                if it == 1 {
                    dump(&config.dump_sources, &format!("typed_{card}.csv"), &table)?;
                }
                for (k, column) in table.columns().iter().enumerate() {
                    let t = Instant::now();
                    let r = profile_column(column, None, &engine)?;
                    let dt = t.elapsed().as_secs_f64();
                    std::hint::black_box(&r);
                    if r.input.category != TYPED[k] {
                        return Err(BenchError::Config(format!(
                            "generated {} column typed as {}",
                            TYPED[k], r.input.category
                        )));
                    }
                    if it > 0 {
                        samples[k].push(dt);
                    }
                }
                if config.parallel {
                    let par = EngineConfig {
                        threads: None,
                        ..engine.clone()
                    };
                    let t = Instant::now();
                    std::hint::black_box(profile_table(&table, "typed", None, &par)?);
                    if it > 0 {
                        samples[TYPED.len()].push(t.elapsed().as_secs_f64());
                    }
                }
            }
            let mut names: Vec<String> = TYPED.iter().map(|c| c.to_string()).collect();
            names.push("all".into());
            for (name, xs) in names.into_iter().zip(&samples) {
                if xs.is_empty() {
                    continue;
                }
                let (mean_s, std_s) = mean_std(xs);
                let row = TimingRow {
                    workload: "typed",
                    cardinality: card,
                    parameter: name,
                    mean_s,
                    std_s,
                    mapping: None,
                };
                progress(&row);
                report.rows.push(row);
            }
        }
    }
    Ok(report)
}

fn time_dimensional(
    config: &BenchConfig,
    kg: &KnowledgeGraph,
    members: &[String],
    card: usize,
    noise_index: usize,
    noise: f64,
) -> Result<TimingRow, BenchError> {
    let mut profile_t = Vec::with_capacity(config.iterations);
    let mut mapping_t = Vec::with_capacity(config.iterations);
    for it in 0..=config.iterations {
        let seed = derive_seed(&[config.seed, 1, card as u64, noise_index as u64, it as u64]);
        let src = gen_dimensional_source(card, noise, members, seed);
        if it == 1 {
            dump(
                &config.dump_sources,
                &format!("dimensional_{card}_{}.csv", parameter_label(noise)),
                &src.table,
            )?;
        }
        let column = &src.table.columns()[0];

        let t = Instant::now();
        let mapping = discover_level_mapping(column, kg, 0.5);
        let map_dt = t.elapsed().as_secs_f64();
        let mapping = mapping.ok_or_else(|| {
            BenchError::Config(format!(
                "noise {noise} leaves the column unmapped at threshold 0.5"
            ))
        })?;

        let t = Instant::now();
        let profile =
            profile_dimensional(column, &mapping, kg).map_err(|source| EngineError::Profile {
                attribute: column.name.clone(),
                source,
            })?;
        let prof_dt = t.elapsed().as_secs_f64();
        std::hint::black_box(&profile);
        if profile.others != src.noise_cells as u64 {
            return Err(BenchError::Config(format!(
                "generator planted {} unmappable cells, profile counted {}",
                src.noise_cells, profile.others
            )));
        }
        if it > 0 {
            mapping_t.push(map_dt);
            profile_t.push(prof_dt);
        }
    }
    let (mean_s, std_s) = mean_std(&profile_t);
    Ok(TimingRow {
        workload: "dimensional",
        cardinality: card,
        parameter: parameter_label(noise),
        mean_s,
        std_s,
        mapping: Some(mean_std(&mapping_t)),
    })
}
