// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use citynet::centrality::{EigenMode, PathMode};
use citynet::export::{export_graph, GraphFormat};
use citynet::pipeline::{cmd_analyze, load_corpus, RunConfig};
use citynet::report::compare_reports;
use citynet::synth::generate_corpus;
use citynet::{build_layered_network, filter_corpus, union_layers, Error, RelationKind};

#[derive(Parser)]
#[command(name = "citynet", version, about = "Hashtag community network analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the networks, compute all metrics and write reports.
    Analyze {
        #[command(flatten)]
        run: RunFlags,
        #[arg(long, value_delimiter = ',')]
        layers: Option<Vec<RelationKind>>,
        #[arg(long)]
        top_k: Option<usize>,
        #[arg(long)]
        bins: Option<usize>,
        #[arg(long)]
        betweenness_mode: Option<PathMode>,
        #[arg(long)]
        geodesic_mode: Option<PathMode>,
        #[arg(long)]
        eigenvector_mode: Option<EigenMode>,
        #[arg(long)]
        workers: Option<usize>,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a synthetic corpus.
    Synth {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        accounts: Option<usize>,
        #[arg(long)]
        follow_edges: Option<usize>,
        #[arg(long)]
        exponent: Option<f64>,
        /// Directory receiving tweets.jsonl, accounts.jsonl and follows.jsonl.
        #[arg(long)]
        out: PathBuf,
    },
    /// Write one network (a union of layers) as graphml, dot or edge-csv.
    Export {
        #[command(flatten)]
        run: RunFlags,
        #[arg(long, value_delimiter = ',', default_value = "F")]
        layers: Vec<RelationKind>,
        #[arg(long, default_value = "graphml")]
        format: GraphFormat,
        /// Output file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Per-field deltas between two report.json files.
    Compare {
        report_a: PathBuf,
        report_b: PathBuf,
        /// Output file; printed to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Input and filter flags shared by `analyze` and `export`; each one
/// overrides the configuration file.
#[derive(Args)]
struct RunFlags {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    tweets: Option<PathBuf>,
    #[arg(long)]
    accounts: Option<PathBuf>,
    #[arg(long)]
    follows: Option<PathBuf>,
    #[arg(long)]
    exclusions: Option<PathBuf>,
    #[arg(long)]
    hashtag: Option<String>,
    /// Exclusion keyword; repeatable. Replaces the configured list.
    #[arg(long = "exclude")]
    exclude_terms: Vec<String>,
    #[arg(long)]
    window_start: Option<i64>,
    #[arg(long)]
    window_end: Option<i64>,
}

impl RunFlags {
    fn into_config(self) -> Result<RunConfig, Error> {
        let mut config = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        if let Some(p) = self.tweets {
            config.input.tweets = p;
        }
        if self.accounts.is_some() {
            config.input.accounts = self.accounts;
        }
        if self.follows.is_some() {
            config.input.follows = self.follows;
        }
        if self.exclusions.is_some() {
            config.input.exclusions = self.exclusions;
        }
        if let Some(tag) = self.hashtag {
            config.filter.include_hashtag = tag;
        }
        if !self.exclude_terms.is_empty() {
            config.filter.exclude_terms = self.exclude_terms;
        }
        if self.window_start.is_some() {
            config.filter.window_start = self.window_start;
        }
        if self.window_end.is_some() {
            config.filter.window_end = self.window_end;
        }
        Ok(config)
    }
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Error::Io {
            path: path.to_owned(),
            source: e,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_json(path: &Path) -> Result<serde_json::Value, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_owned(),
        source: e,
    })?;
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        line: e.line(),
        message: format!("{}: {e}", path.display()),
    })
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Analyze {
            run,
            layers,
            top_k,
            bins,
            betweenness_mode,
            geodesic_mode,
            eigenvector_mode,
            workers,
            out,
        } => {
            let mut config = run.into_config()?;
            let a = &mut config.analysis;
            if let Some(layers) = layers {
                a.layers = layers;
            }
            a.top_k = top_k.unwrap_or(a.top_k);
            a.histogram_bins = bins.unwrap_or(a.histogram_bins);
            a.metrics.betweenness_mode = betweenness_mode.unwrap_or(a.metrics.betweenness_mode);
            a.metrics.geodesic_mode = geodesic_mode.unwrap_or(a.metrics.geodesic_mode);
            a.metrics.eigenvector.mode = eigenvector_mode.unwrap_or(a.metrics.eigenvector.mode);
            if workers.is_some() {
                a.workers = workers;
            }
            if let Some(dir) = out {
                config.output.dir = dir;
            }
            let analysis = cmd_analyze(&config)?;
            let s = &analysis.report.summary;
            eprintln!(
                "analyzed {} nodes / {} edges; wrote {} files to {}",
                s.node_count,
                s.edge_count,
                analysis.files.len(),
                config.output.dir.display()
            );
            Ok(())
        }
        Command::Synth {
            config,
            seed,
            accounts,
            follow_edges,
            exponent,
            out,
        } => {
            let mut synth = match config {
                Some(path) => RunConfig::from_file(&path)?.synth,
                None => Default::default(),
            };
            synth.seed = seed.unwrap_or(synth.seed);
            synth.account_count = accounts.unwrap_or(synth.account_count);
            synth.follow_edges_target = follow_edges.unwrap_or(synth.follow_edges_target);
            synth.follow_attachment_exponent = exponent.unwrap_or(synth.follow_attachment_exponent);
            let corpus = generate_corpus(&synth)?;
            corpus.write_to(&out)?;
            eprintln!(
                "wrote {} tweets, {} accounts, {} follows to {}",
                corpus.tweets.len(),
                corpus.accounts.len(),
                corpus.follows.len(),
                out.display()
            );
            Ok(())
        }
        Command::Export {
            run,
            layers,
            format,
            out,
        } => {
            let config = run.into_config()?;
            config.validate()?;
            let corpus = load_corpus(&config.input)?;
            let tweets = filter_corpus(&corpus.tweets, &config.filter_query()?);
            if tweets.is_empty() {
                return Err(Error::EmptyCorpus);
            }
            let network = build_layered_network(&tweets, &corpus.support.accounts, &corpus.support.follows);
            let graph = union_layers(&network, &layers)?;
            write_or_print(Some(&out), &export_graph(&graph, &network.attributes, format))
        }
        Command::Compare {
            report_a,
            report_b,
            out,
        } => {
            let comparison = compare_reports(&read_json(&report_a)?, &read_json(&report_b)?)?;
            let mut text = serde_json::to_string_pretty(&comparison).expect("comparison serializes");
            text.push('\n');
            write_or_print(out.as_deref(), &text)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
