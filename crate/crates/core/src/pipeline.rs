// SPDX-License-Identifier: Apache-2.0

//! Run configuration and the end-to-end analysis command.

use std::collections::BTreeMap;
use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::centrality::{compute_metrics, metric_distribution, top_k_nodes, MetricKind, MetricOptions};
use crate::community::{community_report, CommunityInputs, CommunityThresholds};
use crate::error::{Error, Result};
use crate::export::{export_graph, GraphFormat, SCHEMA_VERSION};
use crate::graph::union_layers;
use crate::ingest::{
    build_layered_network, filter_corpus, parse_exclusion_list, parse_support_files, parse_tweet_stream, FilterQuery,
    LayeredNetwork, RelationKind, SupportData, TweetRecord,
};
use crate::report::{render_report, CorpusStats, LayerSize, RankedNode, Report, ReportFormat};
use crate::synth::SynthConfig;
use crate::{Distribution, MetricSuite, TopLists};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct InputPaths {
    pub tweets: PathBuf,
    pub accounts: Option<PathBuf>,
    pub follows: Option<PathBuf>,
    /// Manual exclusion list, one tweet id per line.
    pub exclusions: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FilterSettings {
    pub include_hashtag: String,
    pub exclude_terms: Vec<String>,
    pub window_start: Option<i64>,
    pub window_end: Option<i64>,
}

impl Default for FilterSettings {
    fn default() -> Self {
        FilterSettings {
            include_hashtag: "athens".into(),
            exclude_terms: vec!["georgia".into(), "athensga".into()],
            window_start: None,
            window_end: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AnalysisSettings {
    /// Layers unioned into the graph the metrics run on.
    pub layers: Vec<RelationKind>,
    pub top_k: usize,
    pub histogram_bins: usize,
    /// Upper bound on metric worker threads; `None` uses every core.
    pub workers: Option<usize>,
    #[serde(flatten)]
    pub metrics: MetricOptions,
}

impl Default for AnalysisSettings {
    fn default() -> Self {
        AnalysisSettings {
            layers: vec![RelationKind::F],
            top_k: 20,
            histogram_bins: 20,
            workers: None,
            metrics: MetricOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OutputSettings {
    pub dir: PathBuf,
    pub graph_formats: Vec<GraphFormat>,
}

impl Default for OutputSettings {
    fn default() -> Self {
        OutputSettings {
            dir: PathBuf::from("out"),
            graph_formats: vec![GraphFormat::Graphml, GraphFormat::Dot, GraphFormat::EdgeCsv],
        }
    }
}

/// Everything a run needs; loadable from one TOML file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub input: InputPaths,
    pub filter: FilterSettings,
    pub analysis: AnalysisSettings,
    pub community: CommunityThresholds,
    pub narrative: BTreeMap<String, String>,
    pub output: OutputSettings,
    pub synth: SynthConfig,
}

impl RunConfig {
    /// Loads a TOML configuration. Relative paths inside it resolve
    /// against the file's directory.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut config: RunConfig = toml::from_str(&text).map_err(|e| Error::Parse {
            line: e.span().map(|s| text[..s.start].lines().count().max(1)).unwrap_or(0),
            message: e.message().to_owned(),
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        config.resolve_paths(base);
        Ok(config)
    }

    fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if !p.as_os_str().is_empty() && p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.input.tweets);
        self.input.accounts.iter_mut().for_each(fix);
        self.input.follows.iter_mut().for_each(fix);
        self.input.exclusions.iter_mut().for_each(fix);
        fix(&mut self.output.dir);
    }

    pub fn filter_query(&self) -> Result<FilterQuery> {
        let mut query = FilterQuery::new(
            &self.filter.include_hashtag,
            self.filter.window_start.unwrap_or(i64::MIN),
            self.filter.window_end.unwrap_or(i64::MAX),
        )
        .excluding(&self.filter.exclude_terms);
        if let Some(path) = &self.input.exclusions {
            let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
            query.exclude_tweet_ids = parse_exclusion_list(BufReader::new(file))?;
        }
        query.validate()?;
        Ok(query)
    }

    pub fn validate(&self) -> Result<()> {
        if self.input.tweets.as_os_str().is_empty() {
            return Err(Error::config("input.tweets", "path is required"));
        }
        if self.output.dir.as_os_str().is_empty() {
            return Err(Error::config("output.dir", "path is required"));
        }
        if self.analysis.top_k == 0 {
            return Err(Error::config("analysis.top_k", "must be at least 1"));
        }
        if self.analysis.histogram_bins == 0 {
            return Err(Error::config("analysis.histogram_bins", "must be at least 1"));
        }
        if self.analysis.layers.is_empty() {
            return Err(Error::config("analysis.layers", "select at least one of F, M, R"));
        }
        if self.analysis.workers == Some(0) {
            return Err(Error::config("analysis.workers", "must be at least 1"));
        }
        Ok(())
    }
}

/// Raw inputs as read from disk.
#[derive(Debug, Clone, Default)]
pub struct LoadedCorpus {
    pub tweets: Vec<TweetRecord>,
    pub support: SupportData,
}

fn open(path: &Path) -> Result<BufReader<fs::File>> {
    fs::File::open(path).map(BufReader::new).map_err(|e| Error::io(path, e))
}

fn located(path: &Path, err: Error) -> Error {
    match err {
        Error::Parse { line, message } => Error::Parse {
            line,
            message: format!("{}: {message}", path.display()),
        },
        Error::DuplicateKey { line, key } => Error::Parse {
            line,
            message: format!("{}: duplicate key {key:?}", path.display()),
        },
        other => other,
    }
}

pub fn load_corpus(input: &InputPaths) -> Result<LoadedCorpus> {
    let tweets = parse_tweet_stream(open(&input.tweets)?).map_err(|e| located(&input.tweets, e))?;
    let empty: &[u8] = &[];
    let support = match (&input.accounts, &input.follows) {
        (Some(a), Some(f)) => parse_support_files(open(a)?, open(f)?),
        (Some(a), None) => parse_support_files(open(a)?, empty),
        (None, Some(f)) => parse_support_files(empty, open(f)?),
        (None, None) => parse_support_files(empty, empty),
    }?;
    Ok(LoadedCorpus { tweets, support })
}

/// In-memory result of an analysis, before anything touches the disk.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub report: Report,
    pub network: LayeredNetwork,
    pub metrics: MetricSuite,
    /// Output file names and contents, in write order.
    pub files: Vec<(String, Vec<u8>)>,
}

fn with_workers<R: Send>(workers: Option<usize>, job: impl FnOnce() -> R + Send) -> Result<R> {
    match workers {
        None => Ok(job()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Usage(format!("cannot start {n} workers: {e}")))?;
            Ok(pool.install(job))
        }
    }
}

fn metrics_csv(network: &LayeredNetwork, suite: &MetricSuite) -> Vec<u8> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["account_id", "screen_name", "category"];
    header.extend(MetricKind::ALL.iter().map(|k| k.as_str()));
    writer.write_record(&header).expect("in-memory write");

    let columns: Vec<Option<&crate::MetricVector>> = MetricKind::ALL.iter().map(|&k| suite.vector(k)).collect();
    let ids = suite.in_degree.node_ids();
    let mut order: Vec<usize> = (0..ids.len()).collect();
    order.sort_by(|&a, &b| ids[a].cmp(&ids[b]));
    for i in order {
        let id = &ids[i];
        let (name, category) = network
            .attributes
            .get(id)
            .map(|r| (r.screen_name.clone(), r.category.as_str()))
            .unwrap_or_default();
        let mut row = vec![id.clone(), name, category.to_owned()];
        row.extend(
            columns
                .iter()
                .map(|c| c.map_or_else(String::new, |v| v.values()[i].to_string())),
        );
        writer.write_record(&row).expect("in-memory write");
    }
    writer.into_inner().expect("in-memory flush")
}

#[derive(Serialize)]
struct DistributionFile<'a> {
    schema_version: &'a str,
    bin_count: usize,
    metrics: BTreeMap<MetricKind, Distribution>,
}

#[derive(Serialize)]
struct SummaryFile<'a> {
    schema_version: &'a str,
    analyzed_layers: &'a [RelationKind],
    summary: &'a crate::NetworkSummary,
}

#[derive(Serialize)]
struct Manifest<'a> {
    schema_version: &'a str,
    files: Vec<&'a str>,
}

fn json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("output serializes");
    bytes.push(b'\n');
    bytes
}

/// Runs ingest, network construction, metrics and community indicators on
/// an already loaded corpus and renders every output file in memory.
pub fn analyze_corpus(corpus: &LoadedCorpus, config: &RunConfig) -> Result<Analysis> {
    config.validate()?;
    let query = config.filter_query()?;
    let tweets = filter_corpus(&corpus.tweets, &query);
    if tweets.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let support = &corpus.support;
    let network = build_layered_network(&tweets, &support.accounts, &support.follows);
    let graph = union_layers(&network, &config.analysis.layers)?;
    let settings = &config.analysis;

    let suite: MetricSuite = with_workers(settings.workers, || compute_metrics(&graph, &settings.metrics))??;

    let mut top_lists = TopLists::new();
    let mut distributions = BTreeMap::new();
    for kind in MetricKind::ALL {
        let Some(vector) = suite.vector(kind) else { continue };
        if MetricKind::CENTRALITY.contains(&kind) {
            top_lists.insert(kind, top_k_nodes(vector, settings.top_k)?);
        }
        if !vector.is_empty() {
            distributions.insert(kind, metric_distribution(vector, settings.histogram_bins)?);
        }
    }

    let indicators = community_report(
        &CommunityInputs {
            network: &network,
            tweets: &tweets,
            graph: &graph,
            betweenness: &suite.betweenness,
            top_lists: &top_lists,
        },
        &config.community,
        &config.narrative,
    )?;

    let report = Report {
        schema_version: SCHEMA_VERSION.into(),
        corpus: CorpusStats {
            tweets_read: corpus.tweets.len(),
            tweets_retained: tweets.len(),
            core_tweeters: network.core_tweeters.len(),
            accounts: support.accounts.len(),
            follow_pairs: support.follows.len(),
            rejected_rows: support.warnings.len(),
        },
        layers: network
            .layers
            .iter()
            .map(|(&k, g)| {
                (
                    k,
                    LayerSize {
                        nodes: g.node_count(),
                        edges: g.edge_count(),
                    },
                )
            })
            .collect(),
        analyzed_layers: {
            let mut layers = settings.layers.clone();
            layers.sort();
            layers.dedup();
            layers
        },
        metric_options: settings.metrics,
        top_k: settings.top_k,
        summary: suite.summary,
        indicators,
        top_nodes: top_lists
            .iter()
            .map(|(&k, list)| {
                let ranked = list
                    .iter()
                    .map(|(id, value)| RankedNode {
                        id: id.clone(),
                        value: *value,
                    })
                    .collect();
                (k, ranked)
            })
            .collect(),
    };

    let mut files: Vec<(String, Vec<u8>)> = vec![
        (
            "report.json".into(),
            render_report(&report, ReportFormat::Machine).into_bytes(),
        ),
        (
            "report.txt".into(),
            render_report(&report, ReportFormat::Human).into_bytes(),
        ),
        (
            "summary.json".into(),
            json_bytes(&SummaryFile {
                schema_version: SCHEMA_VERSION,
                analyzed_layers: &report.analyzed_layers,
                summary: &report.summary,
            }),
        ),
        ("metrics.csv".into(), metrics_csv(&network, &suite)),
        (
            "distributions.json".into(),
            json_bytes(&DistributionFile {
                schema_version: SCHEMA_VERSION,
                bin_count: settings.histogram_bins,
                metrics: distributions,
            }),
        ),
    ];
    let mut formats = config.output.graph_formats.clone();
    formats.sort();
    formats.dedup();
    for format in formats {
        files.push((
            format!("graph.{}", format.extension()),
            export_graph(&graph, &network.attributes, format).into_bytes(),
        ));
    }
    let manifest = json_bytes(&Manifest {
        schema_version: SCHEMA_VERSION,
        files: files.iter().map(|(name, _)| name.as_str()).collect(),
    });
    files.push(("manifest.json".into(), manifest));

    Ok(Analysis {
        report,
        network,
        metrics: suite,
        files,
    })
}

/// Writes rendered files into `dir`. Files written before a failure are
/// removed again.
pub fn write_outputs(dir: &Path, files: &[(String, Vec<u8>)]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    for (name, bytes) in files {
        let path = dir.join(name);
        if let Err(e) = fs::write(&path, bytes) {
            for done in &written {
                let _ = fs::remove_file(done);
            }
            return Err(Error::io(path, e));
        }
        written.push(path);
    }
    Ok(written)
}

/// Full `analyze` command: load, analyze, write.
pub fn cmd_analyze(config: &RunConfig) -> Result<Analysis> {
    config.validate()?;
    let corpus = load_corpus(&config.input)?;
    let analysis = analyze_corpus(&corpus, config)?;
    write_outputs(&config.output.dir, &analysis.files)?;
    Ok(analysis)
}
