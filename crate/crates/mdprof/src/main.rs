use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use serde_json::json;

use mdprof::bench::{self, BenchConfig};
use mdprof::catalog::{Catalog, CatalogError};
use mdprof::core::kg::KgConfig;
use mdprof::core::profile::{ProfileOptions, Stopwords};
use mdprof::core::rdf::{self, shape, RdfFormat, SourceMetadata};
use mdprof::core::{AttributeCategory, KnowledgeGraph, TypingConfig};
use mdprof::diagnostics;
use mdprof::engine::{profile_table, EngineConfig};
use mdprof::graph_io::{load_kg, read_graph};
use mdprof::ingest::{detect_format, load_source, LoadOptions, SourceFormat};
use mdprof::settings::{OutputError, Settings};

/// Profiles tabular sources against a multidimensional knowledge graph
/// and keeps the resulting metadata in a searchable catalog.
#[derive(Parser)]
#[command(name = "mdprof", version)]
struct Cli {
    /// Settings file (default: ./mdprof.toml when present).
    #[arg(long, global = true, env = "MDPROF_CONFIG", value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Profile a CSV or JSON source and write its metadata graph.
    Profile(Box<ProfileCmd>),
    /// Add a metadata graph to the catalog, replacing any earlier version.
    Register {
        graph: PathBuf,
        #[command(flatten)]
        catalog: CatalogArg,
    },
    /// List catalogued sources matching every `--where` clause.
    Query {
        /// `key op value`, e.g. `mapTo=kg:City`, `items>1000`, `max(price)<=50`.
        #[arg(long = "where", short = 'w', value_name = "CLAUSE")]
        clauses: Vec<String>,
        #[command(flatten)]
        catalog: CatalogArg,
    },
    /// Print a catalogued source, or one attribute profile, as JSON.
    Show {
        /// Source IRI, prefixed name or name.
        source: String,
        attribute: Option<String>,
        #[command(flatten)]
        catalog: CatalogArg,
    },
    /// Check a metadata graph against the vocabulary shapes.
    Validate { graph: PathBuf },
    /// Time the profiler on synthetic sources.
    Bench(BenchCmd),
}

#[derive(Args)]
struct CatalogArg {
    /// Catalog directory.
    #[arg(long, env = "MDPROF_CATALOG", value_name = "DIR")]
    catalog: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Turtle,
    Ntriples,
}

#[derive(Clone, Copy, ValueEnum)]
enum InFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct ProfileCmd {
    source: PathBuf,
    /// Source format (default: detected).
    #[arg(long, value_enum)]
    input_format: Option<InFormat>,
    #[arg(long)]
    delimiter: Option<char>,
    /// Cell value read as null; repeatable, replaces the defaults.
    #[arg(long = "null-token", value_name = "TOKEN")]
    null_tokens: Vec<String>,
    #[arg(long)]
    no_header: bool,

    /// Most distinct values a categorical attribute may have.
    #[arg(long, value_name = "N")]
    cat_thr: Option<usize>,
    /// Categorical threshold as a fraction of the non-null cells.
    #[arg(long, value_name = "FRACTION", conflicts_with = "cat_thr")]
    cat_thr_relative: Option<f64>,
    /// Largest failing fraction tolerated by datetime detection.
    #[arg(long, value_name = "FRACTION")]
    date_thr: Option<f64>,
    #[arg(long)]
    no_string_proc: bool,
    #[arg(long, conflicts_with = "month_first")]
    day_first: bool,
    #[arg(long)]
    month_first: bool,
    /// Skip inference for a column, e.g. `zip=categorical`; repeatable.
    #[arg(long = "force-type", value_name = "COL=CATEGORY")]
    force_type: Vec<String>,

    /// Knowledge graph (Turtle or N-Triples).
    #[arg(long, env = "MDPROF_KG", value_name = "PATH")]
    kg: Option<PathBuf>,
    #[arg(long, value_name = "FRACTION")]
    containment_thr: Option<f64>,
    /// Property linking members to levels.
    #[arg(long, value_name = "IRI")]
    member_level_prop: Option<String>,

    #[arg(long, value_name = "N")]
    bins: Option<usize>,
    /// Stopword list, one word per line.
    #[arg(long, value_name = "PATH")]
    stopwords: Option<PathBuf>,
    /// Keep only the N most frequent words of textual attributes.
    #[arg(long, value_name = "N")]
    max_words: Option<usize>,
    #[arg(long, env = "MDPROF_THREADS", value_name = "N")]
    threads: Option<usize>,

    /// Output file (default: stdout).
    #[arg(long, short, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<OutFormat>,

    /// Source name (default: the file stem).
    #[arg(long)]
    name: Option<String>,
    #[arg(long)]
    title: Option<String>,
    #[arg(long)]
    description: Option<String>,
    #[arg(long)]
    creator: Option<String>,
    #[arg(long)]
    publisher: Option<String>,
    #[arg(long = "contributor")]
    contributors: Vec<String>,
    #[arg(long)]
    date: Option<String>,
    #[arg(long)]
    license: Option<String>,
    /// Subject IRI; repeatable.
    #[arg(long = "subject")]
    subjects: Vec<String>,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Workload {
    Dimensional,
    Typed,
}

#[derive(Args)]
struct BenchCmd {
    /// Cardinalities, comma separated.
    #[arg(long, value_delimiter = ',', value_name = "LIST")]
    cards: Vec<usize>,
    /// Noise fractions, comma separated; `0,0.1,...,0.5` expands.
    #[arg(long, value_delimiter = ',', value_name = "LIST")]
    noise: Vec<String>,
    #[arg(long, value_name = "N")]
    iters: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_name = "N")]
    bins: Option<usize>,
    /// Run one workload only.
    #[arg(long, value_enum)]
    only: Option<Workload>,
    /// Also time whole typed sources profiled on every core.
    #[arg(long)]
    parallel: bool,
    /// Report CSV (default: stdout).
    #[arg(long, short, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Write per-series CSVs for plotting into DIR (default: next to --out).
    #[arg(long, value_name = "DIR", num_args = 0..=1)]
    gnuplot_data: Option<Option<PathBuf>>,
    /// Write the first measured source of every series into DIR.
    #[arg(long, value_name = "DIR")]
    dump_sources: Option<PathBuf>,
    /// Text file whose words feed the textual column.
    #[arg(long, value_name = "PATH")]
    corpus: Option<PathBuf>,
    /// Where the synthetic level is written (default: a temporary file).
    #[arg(long, value_name = "PATH")]
    fixture: Option<PathBuf>,
    #[arg(long, short)]
    quiet: bool,
}

enum Failure {
    /// Bad flags or settings, detected before any work.
    Usage(anyhow::Error),
    Domain(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Domain(e)
    }
}

fn usage<T>(r: anyhow::Result<T>) -> Result<T, Failure> {
    r.map_err(Failure::Usage)
}

fn main() -> ExitCode {
    let matches = Cli::command()
        .after_help(diagnostics::help_text())
        .get_matches();
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            report(&e);
            eprintln!("\nFor more information, try '--help'.");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            report(&e);
            ExitCode::from(1)
        }
    }
}

fn report(e: &anyhow::Error) {
    // Library errors already print their source, so only append causes
    // that add text.
    let mut msg = String::new();
    for cause in e.chain() {
        let text = cause.to_string();
        if !msg.contains(&text) {
            if !msg.is_empty() {
                msg.push_str(": ");
            }
            msg.push_str(&text);
        }
    }
    match e.chain().find_map(diagnostics::code_of) {
        Some(code) => eprintln!("error[{code}]: {msg}"),
        None => eprintln!("error: {msg}"),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let settings = usage(Settings::load(cli.config.as_deref()).map_err(Into::into))?;
    match cli.command {
        Command::Profile(cmd) => profile(*cmd, &settings),
        Command::Register { graph, catalog } => {
            let cat = open_catalog(catalog, &settings)?;
            let g = read_graph(&graph).map_err(anyhow::Error::from)?;
            let iri = cat.register(&g).map_err(anyhow::Error::from)?;
            println!("{iri}");
            Ok(())
        }
        Command::Query { clauses, catalog } => {
            let cat = open_catalog(catalog, &settings)?;
            let query = cat
                .parse_query(&clauses)
                .map_err(|e| Failure::Usage(e.into()))?;
            for iri in cat.find_sources(&query).map_err(anyhow::Error::from)? {
                println!("{iri}");
            }
            Ok(())
        }
        Command::Show {
            source,
            attribute,
            catalog,
        } => {
            let cat = open_catalog(catalog, &settings)?;
            let iri = cat.resolve(&source).map_err(anyhow::Error::from)?;
            let value = match attribute {
                Some(a) => {
                    serde_json::to_value(cat.get_profile(&iri, &a).map_err(anyhow::Error::from)?)
                }
                None => {
                    let d = cat.describe(&iri).map_err(anyhow::Error::from)?;
                    let attrs: Vec<_> = d
                        .attributes
                        .iter()
                        .map(|a| {
                            json!({
                                "iri": a.iri,
                                "name": a.name,
                                "category": a.category.as_str(),
                                "mapping": a.mapping,
                                "profile": a.profile,
                            })
                        })
                        .collect();
                    Ok(json!({
                        "iri": d.iri,
                        "metadata": d.metadata,
                        "domains": d.domains,
                        "attributes": attrs,
                    }))
                }
            }
            .context("serializing to JSON")?;
            let text = serde_json::to_string_pretty(&value).context("serializing to JSON")?;
            println!("{text}");
            Ok(())
        }
        Command::Validate { graph } => {
            let g = read_graph(&graph).map_err(anyhow::Error::from)?;
            let violations = shape::validate(&g);
            if violations.is_empty() {
                println!("{}: conforms ({} triples)", graph.display(), g.len());
                return Ok(());
            }
            for v in &violations {
                println!("{v}");
            }
            Err(anyhow::Error::from(CatalogError::ShapeViolation(violations)).into())
        }
        Command::Bench(cmd) => bench_cmd(cmd, &settings),
    }
}

fn open_catalog(arg: CatalogArg, settings: &Settings) -> Result<Catalog, Failure> {
    let Some(dir) = arg.catalog.or_else(|| settings.catalog.clone()) else {
        return Err(Failure::Usage(anyhow!(
            "no catalog directory; pass --catalog or set MDPROF_CATALOG"
        )));
    };
    Ok(Catalog::open(dir).map_err(anyhow::Error::from)?)
}

fn parse_forced(items: &[String]) -> anyhow::Result<BTreeMap<String, AttributeCategory>> {
    let mut forced = BTreeMap::new();
    for item in items {
        let (col, cat) = item
            .rsplit_once('=')
            .ok_or_else(|| anyhow!("--force-type expects COL=CATEGORY, got `{item}`"))?;
        let cat: AttributeCategory = cat
            .trim()
            .parse()
            .map_err(|e| anyhow!("--force-type {item}: {e}"))?;
        if forced.insert(col.to_string(), cat).is_some() {
            bail!("column `{col}` forced twice");
        }
    }
    Ok(forced)
}

fn engine_config(cmd: &ProfileCmd, s: &Settings) -> anyhow::Result<EngineConfig> {
    let mut typing = TypingConfig::default();
    if let Some(rel) = cmd.cat_thr_relative.or(if cmd.cat_thr.is_some() {
        None
    } else {
        s.cat_thr_relative
    }) {
        typing.cat_thr_relative = Some(rel);
    } else if let Some(n) = cmd.cat_thr.or(s.cat_thr) {
        typing.cat_thr = n;
    }
    if let Some(d) = cmd.date_thr.or(s.date_thr) {
        typing.date_thr = d;
    }
    typing.string_proc = !cmd.no_string_proc && s.string_proc.unwrap_or(true);
    typing.day_first = if cmd.day_first {
        true
    } else if cmd.month_first {
        false
    } else {
        s.day_first.unwrap_or(true)
    };
    typing.validate()?;

    let mut profile = ProfileOptions::default();
    if let Some(b) = cmd.bins.or(s.bins) {
        if b == 0 {
            return Err(mdprof::core::profile::ProfileError::ZeroBins.into());
        }
        profile.bins = b;
    }
    if let Some(path) = cmd.stopwords.as_ref().or(s.stopwords.as_ref()) {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading stopwords {}", path.display()))?;
        profile.stopwords = Stopwords::from_list(&text);
    }
    profile.max_words = cmd.max_words.or(s.max_words);

    let containment_thr = cmd.containment_thr.or(s.containment_thr).unwrap_or(0.5);
    if !(0.0..=1.0).contains(&containment_thr) {
        return Err(mdprof::core::kg::KgError::Threshold(containment_thr).into());
    }
    let threads = cmd.threads.or(s.threads);
    if threads == Some(0) {
        bail!("--threads must be at least 1");
    }
    Ok(EngineConfig {
        typing,
        containment_thr,
        profile,
        forced: parse_forced(&cmd.force_type)?,
        threads,
    })
}

fn profile(cmd: ProfileCmd, s: &Settings) -> Result<(), Failure> {
    let config = usage(engine_config(&cmd, s))?;
    let mut load = LoadOptions::default();
    if let Some(d) = cmd.delimiter.or(s.delimiter) {
        if !d.is_ascii() {
            return Err(Failure::Usage(anyhow!(
                "--delimiter must be a single ASCII character"
            )));
        }
        load.delimiter = d as u8;
    }
    if !cmd.null_tokens.is_empty() {
        load.null_tokens = cmd.null_tokens.clone();
    } else if let Some(t) = &s.null_tokens {
        load.null_tokens = t.clone();
    }
    load.has_header = !cmd.no_header && s.has_header.unwrap_or(true);
    let out_format = match (cmd.format, s.format.as_deref()) {
        (Some(OutFormat::Turtle), _) | (None, None | Some("turtle")) => RdfFormat::Turtle,
        (Some(OutFormat::Ntriples), _) | (None, Some("ntriples")) => RdfFormat::NTriples,
        (None, Some(other)) => {
            return Err(Failure::Usage(anyhow!(
                "unknown output format `{other}` in settings"
            )))
        }
    };
    let mut kg_config = KgConfig::default();
    if let Some(p) = cmd
        .member_level_prop
        .as_ref()
        .or(s.member_level_prop.as_ref())
    {
        kg_config.member_level_property =
            p.trim_start_matches('<').trim_end_matches('>').to_string();
    }

    let kg: Option<KnowledgeGraph> = match cmd.kg.as_ref().or(s.kg.as_ref()) {
        Some(path) => Some(load_kg(path, &kg_config).map_err(anyhow::Error::from)?),
        None => None,
    };
    let format = match cmd.input_format {
        Some(InFormat::Csv) => SourceFormat::Csv,
        Some(InFormat::Json) => SourceFormat::Json,
        None => detect_format(&cmd.source).map_err(anyhow::Error::from)?,
    };
    let table = load_source(&cmd.source, format, &load).map_err(anyhow::Error::from)?;
    let location = fs::canonicalize(&cmd.source).unwrap_or_else(|_| cmd.source.clone());
    let mut profiled = profile_table(&table, &location.to_string_lossy(), kg.as_ref(), &config)
        .map_err(anyhow::Error::from)?;
    profiled.metadata = SourceMetadata {
        name: cmd.name.unwrap_or(profiled.metadata.name),
        format: Some(format.as_str().to_string()),
        title: cmd.title,
        description: cmd.description,
        creator: cmd.creator,
        publisher: cmd.publisher,
        contributors: cmd.contributors,
        date: cmd.date,
        license: cmd.license,
        subjects: cmd.subjects,
        ..profiled.metadata
    };
    let graph = profiled
        .to_graph(kg.as_ref())
        .map_err(anyhow::Error::from)?;
    let text = rdf::serialize(&graph, out_format);
    match &cmd.out {
        Some(path) => write_file(path, text.as_bytes())?,
        None => io::stdout()
            .write_all(text.as_bytes())
            .context("writing to stdout")?,
    }
    for a in &profiled.attributes {
        let target = a
            .input
            .mapping
            .as_ref()
            .map_or(String::new(), |m| format!(" -> {}", m.target.iri()));
        eprintln!("{}: {}{}", a.input.name, a.input.category, target);
    }
    Ok(())
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|source| {
        Failure::Domain(
            OutputError {
                path: path.to_owned(),
                source,
            }
            .into(),
        )
    })
}

/// Expands `a,b,...,z` into the arithmetic progression from `a` to `z`
/// with step `b - a`.
fn expand_noise(items: &[String]) -> anyhow::Result<Vec<f64>> {
    let mut out: Vec<f64> = Vec::new();
    let mut i = 0;
    while i < items.len() {
        let item = items[i].trim();
        if item == "..." {
            let (Some(&a), Some(&b)) = (out.len().checked_sub(2).map(|k| &out[k]), out.last())
            else {
                bail!("`...` in --noise needs two values before it");
            };
            let end: f64 = items
                .get(i + 1)
                .ok_or_else(|| anyhow!("`...` in --noise needs an end value"))?
                .trim()
                .parse()?;
            let step = b - a;
            if step <= 0.0 {
                bail!("`...` in --noise needs increasing values");
            }
            let mut k = 1.0;
            loop {
                let v = b + k * step;
                if v > end + step * 1e-6 {
                    break;
                }
                // Round away float drift so labels read 0.3, not 0.30000000000000004.
                out.push((v * 1e9).round() / 1e9);
                k += 1.0;
            }
            if out.last().is_none_or(|&l| (l - end).abs() > step * 1e-6) {
                out.push(end);
            }
            i += 2;
            continue;
        }
        out.push(
            item.parse()
                .with_context(|| format!("bad noise value `{item}`"))?,
        );
        i += 1;
    }
    Ok(out)
}

fn bench_cmd(cmd: BenchCmd, s: &Settings) -> Result<(), Failure> {
    let temp_fixture = cmd.fixture.is_none();
    let fixture = cmd.fixture.unwrap_or_else(|| {
        std::env::temp_dir()
            .join(format!("mdprof-bench-{}", std::process::id()))
            .join("level.ttl")
    });
    let mut config = BenchConfig::new(fixture.clone());
    if !cmd.cards.is_empty() {
        config.cardinalities = cmd.cards;
    }
    if !cmd.noise.is_empty() {
        config.noise_levels = usage(expand_noise(&cmd.noise))?;
    }
    if let Some(n) = cmd.iters {
        config.iterations = n;
    }
    if let Some(seed) = cmd.seed.or(s.seed) {
        config.seed = seed;
    }
    if let Some(b) = cmd.bins.or(s.bins) {
        config.bins = b;
    }
    config.parallel = cmd.parallel;
    config.run_dimensional = cmd.only != Some(Workload::Typed);
    config.run_typed = cmd.only != Some(Workload::Dimensional);
    config.dump_sources = cmd.dump_sources;
    if let Some(path) = &cmd.corpus {
        let text = usage(
            fs::read_to_string(path).with_context(|| format!("reading corpus {}", path.display())),
        )?;
        config.corpus = bench::corpus::words_from_text(&text);
    }
    usage(config.validate().map_err(Into::into))?;

    let quiet = cmd.quiet;
    let result = bench::run_benchmark(&config, |row| {
        if !quiet {
            eprintln!(
                "{} card={} {} mean={:.6}s sd={:.6}s",
                row.workload, row.cardinality, row.parameter, row.mean_s, row.std_s
            );
        }
    });
    if temp_fixture {
        let _ = fs::remove_dir_all(fixture.parent().unwrap_or(Path::new(".")));
    }
    let report = result.map_err(anyhow::Error::from)?;
    let csv = report.to_csv();
    match &cmd.out {
        Some(path) => write_file(path, csv.as_bytes())?,
        None => print!("{csv}"),
    }
    if let Some(dir) = cmd.gnuplot_data {
        let dir = dir
            .or_else(|| {
                cmd.out
                    .as_ref()
                    .and_then(|o| o.parent())
                    .map(Path::to_path_buf)
            })
            .unwrap_or_else(|| PathBuf::from("."));
        report.write_series(&dir).map_err(anyhow::Error::from)?;
    }
    Ok(())
}
