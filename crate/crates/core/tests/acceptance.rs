// SPDX-License-Identifier: Apache-2.0

//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use citynet::centrality::{
    betweenness_centrality, clustering_coefficients, eigenvector_centrality, geodesic_stats, graph_density, pagerank,
    EigenvectorOptions, MetricKind, PageRankOptions, PathMode,
};
use citynet::community::{category_tally, interactivity_ratio, main_component_share, url_tweet_fraction, TopLists};
use citynet::pipeline::{analyze_corpus, cmd_analyze, load_corpus, RunConfig};
use citynet::synth::{generate_corpus, SynthConfig};
use citynet::{
    build_layered_network, union_layers, weakly_connected_components, AccountRecord, Category, DirectedGraph,
    RelationKind, TweetRecord,
};
use common::*;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn check(cond: bool, detail: impl Into<String>) -> Outcome {
    let detail = detail.into();
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn small_corpus() -> Vec<Spec> {
    let mut r = rng(20_110_301);
    (0..200)
        .map(|i| {
            let n = 1 + i % 7;
            let m = (i * 7) % (n * n + 1);
            Spec::random(n, m, &mut r)
        })
        .collect()
}

fn betweenness_oracle_equivalence() -> Outcome {
    let corpus = small_corpus();
    let start = Instant::now();
    let mut worst = 0.0f64;
    for s in &corpus {
        let g = s.graph();
        for (mode, undirected) in [(PathMode::Directed, false), (PathMode::Undirected, true)] {
            let got = by_index(&betweenness_centrality(&g, mode), s.n);
            worst = worst.max(max_abs_diff(
                &got,
                &betweenness_oracle(&s.adjacency(undirected), undirected),
            ));
        }
    }
    let elapsed = start.elapsed();
    check(
        worst <= 1e-9 && elapsed < Duration::from_secs(10),
        format!("200 graphs, max abs diff {worst:.2e}, {:.3}s", elapsed.as_secs_f64()),
    )
}

fn structural_oracle_equivalence() -> Outcome {
    let mut mismatches = Vec::new();
    for (i, s) in small_corpus().iter().enumerate() {
        let g = s.graph();
        for (mode, undirected) in [(PathMode::Directed, false), (PathMode::Undirected, true)] {
            let (mean, diameter, pairs) = geodesic_oracle(&s.adjacency(undirected));
            match geodesic_stats::<f64>(&g, mode) {
                Ok(st) if st.average == mean && st.diameter == diameter && st.reachable_pairs == pairs => {}
                Err(_) if pairs == 0 => {}
                other => mismatches.push(format!("graph {i} {mode:?} geodesics {other:?}")),
            }
        }
        let parts = weakly_connected_components(&g);
        let got: std::collections::BTreeSet<Vec<usize>> = parts
            .components
            .iter()
            .map(|c| {
                let mut v: Vec<usize> = c.iter().map(|&x| g.node_id(x)[1..].parse().unwrap()).collect();
                v.sort_unstable();
                v
            })
            .collect();
        if got != components_oracle(s) {
            mismatches.push(format!("graph {i} components"));
        }
        let local = by_index(&clustering_coefficients::<f64>(&g).local, s.n);
        if local != clustering_oracle(s) {
            mismatches.push(format!("graph {i} clustering"));
        }
    }
    check(
        mismatches.is_empty(),
        if mismatches.is_empty() {
            "200 graphs, distances, components and clustering identical".to_string()
        } else {
            mismatches.join("; ")
        },
    )
}

fn pagerank_normalization() -> Outcome {
    let mut r = rng(85);
    let opts = PageRankOptions::default();
    let mut worst_sum = 0.0f64;
    let mut with_dangling = 0;
    for i in 0..100 {
        let n = 2 + i % 40;
        let mut s = Spec::random(n, 2 * n, &mut r);
        // the last node never links out
        s.edges.retain(|&(a, _)| a != n - 1);
        with_dangling += 1;
        let pr = pagerank::<f64>(&s.graph(), &opts).map_err(|e| e.to_string())?;
        worst_sum = worst_sum.max((pr.sum() - 1.0).abs());
    }
    let mut worst_cycle = 0.0f64;
    for n in 2..=10 {
        let raw: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        let pr = pagerank::<f64>(&Spec::new(n, &raw).graph(), &opts).map_err(|e| e.to_string())?;
        for &v in pr.values() {
            worst_cycle = worst_cycle.max((v - 1.0 / n as f64).abs());
        }
    }
    check(
        worst_sum <= 1e-9 && worst_cycle <= 1e-9,
        format!(
            "{with_dangling} graphs with dangling nodes, |sum-1| <= {worst_sum:.1e}; cycles 2..10 |pr-1/n| <= {worst_cycle:.1e}"
        ),
    )
}

fn eigenvector_reconstruction(fixture: &Fixture) -> Outcome {
    let opts = EigenvectorOptions::default();
    let star = Spec::new(4, &[(1, 0), (2, 0), (3, 0)]);
    let ev = eigenvector_centrality::<f64>(&star.graph(), &opts).map_err(|e| e.to_string())?;
    let center = 3f64.sqrt() / (3.0 + 3f64.sqrt());
    let leaf = 1.0 / (3.0 + 3f64.sqrt());
    let v = by_index(&ev, 4);
    let star_err = max_abs_diff(&v, &[center, leaf, leaf, leaf]);

    let mut worst_mean = 0.0f64;
    let mut inputs = 0;
    for s in small_corpus().iter().filter(|s| !s.edges.is_empty()) {
        let ev = eigenvector_centrality::<f64>(&s.graph(), &opts).map_err(|e| e.to_string())?;
        worst_mean = worst_mean.max((ev.mean().unwrap() - 1.0 / s.n as f64).abs());
        inputs += 1;
    }
    let f = union_layers(&fixture.network, &[RelationKind::F]).map_err(|e| e.to_string())?;
    let ev = eigenvector_centrality::<f64>(&f, &opts).map_err(|e| e.to_string())?;
    let mean = ev.mean().unwrap();
    worst_mean = worst_mean.max((mean - 1.0 / f.node_count() as f64).abs());
    let shown = format!("{mean:.3}");
    check(
        star_err <= 1e-6 && worst_mean <= 1e-12 && shown == "0.002",
        format!(
            "star center {:.6} (err {star_err:.1e}); mean-1/N <= {worst_mean:.1e} over {} inputs; N={} mean {shown}",
            v[0],
            inputs + 1,
            f.node_count()
        ),
    )
}

fn density_reconstruction(fixture: &Fixture) -> Outcome {
    let f = union_layers(&fixture.network, &[RelationKind::F]).map_err(|e| e.to_string())?;
    let d: f64 = graph_density(&f).map_err(|e| e.to_string())?;
    let expected = 1947.0 / (527.0 * 526.0);
    let shown = format!("{d:.3}");
    let report_line = fixture.report_txt.lines().any(|l| {
        l.split_whitespace()
            .collect::<Vec<_>>()
            .starts_with(&["density", "0.007"])
    });
    check(
        f.node_count() == 527
            && f.edge_count() == 1947
            && (d - expected).abs() <= 1e-15
            && shown == "0.007"
            && report_line,
        format!(
            "N={} E={} density {d:.5} printed {shown}",
            f.node_count(),
            f.edge_count()
        ),
    )
}

fn tweet(id: &str, author: &str, mentions: &[&str], urls: u32) -> TweetRecord {
    TweetRecord {
        tweet_id: id.into(),
        author_id: author.into(),
        timestamp: 1_300_000_000,
        text: String::new(),
        hashtags: vec!["athens".into()],
        mentioned_account_ids: mentions.iter().map(|s| s.to_string()).collect(),
        retweet_of_author_id: None,
        reply_to_author_id: None,
        url_count: urls,
    }
}

fn pairs(raw: &[(&str, &str)]) -> Vec<(String, String)> {
    raw.iter().map(|&(a, b)| (a.into(), b.into())).collect()
}

fn interactivity_arithmetic() -> Outcome {
    let tweets = [
        tweet("1", "a", &["b"], 0),
        tweet("2", "d", &["a"], 0),
        tweet("3", "b", &[], 0),
        tweet("4", "c", &[], 0),
    ];
    let follows = pairs(&[("a", "b"), ("b", "c"), ("a", "c"), ("c", "d")]);
    let net = build_layered_network(&tweets, &[], &follows);
    let (edge, vertex): (f64, f64) = interactivity_ratio(&net).map_err(|e| e.to_string())?;

    let overlap = build_layered_network(&tweets[..3], &[], &pairs(&[("a", "b")]));
    let union = union_layers(&overlap, &RelationKind::ALL).map_err(|e| e.to_string())?;
    let union_edges: Vec<(&str, &str)> = union.sorted_edge_ids();
    check(
        edge == 0.4 && vertex == 0.75 && union_edges == [("a", "b"), ("d", "a")],
        format!("edge ratio {edge}, vertex ratio {vertex}; F∩M overlap union {union_edges:?}"),
    )
}

fn membership_and_needs() -> Outcome {
    let mut edges: Vec<(String, String)> = (1..429).map(|i| (format!("n{i:03}"), "n000".to_string())).collect();
    for i in (429..527).step_by(2) {
        edges.push((format!("n{i:03}"), format!("n{:03}", i + 1)));
    }
    let nodes: Vec<String> = (0..527).map(|i| format!("n{i:03}")).collect();
    let g = DirectedGraph::from_edges(&nodes, &edges).map_err(|e| e.to_string())?;
    let share = main_component_share::<f64>(&g).map_err(|e| e.to_string())?;

    let tweets: Vec<TweetRecord> = (0..7)
        .map(|i| tweet(&format!("t{i}"), &format!("u{i}"), &[], u32::from(i < 3)))
        .collect();
    let frac: f64 = url_tweet_fraction(&tweets).map_err(|e| e.to_string())?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut config = RunConfig::default();
    config.input.tweets = dir.path().join("unused.jsonl");
    config.output.dir = dir.path().to_path_buf();
    config.analysis.layers = RelationKind::ALL.to_vec();
    let corpus = citynet::pipeline::LoadedCorpus {
        tweets,
        support: Default::default(),
    };
    let analysis = analyze_corpus(&corpus, &config).map_err(|e| e.to_string())?;
    let text = file_text(&analysis.files, "report.txt");
    let rendered = text
        .lines()
        .find(|l| l.contains("tweets with URLs"))
        .unwrap_or("")
        .trim()
        .to_string();
    check(
        (share.node_share - 0.814).abs() <= 0.001 && (frac - 3.0 / 7.0).abs() < 1e-15 && rendered.contains("42.9%"),
        format!(
            "main component 429/527 = {:.4}; url fraction line {rendered:?}",
            share.node_share
        ),
    )
}

fn table_shape(fixture: &Fixture) -> Outcome {
    // labels chosen so the in-degree elite reproduces the published row
    let mut accounts = Vec::new();
    let mut categories = vec![Category::Org; 3];
    categories.extend([Category::Jmb; 9]);
    categories.extend([Category::Oi; 8]);
    for (i, c) in categories.into_iter().enumerate() {
        accounts.push(AccountRecord {
            category: c,
            ..AccountRecord::placeholder(&format!("h{i:02}"))
        });
    }
    let tweets: Vec<TweetRecord> = accounts
        .iter()
        .map(|a| tweet(&format!("t{}", a.account_id), &a.account_id, &[], 0))
        .collect();
    let net = build_layered_network(&tweets, &accounts, &[]);
    let mut lists: TopLists<f64> = BTreeMap::new();
    lists.insert(
        MetricKind::InDegree,
        accounts.iter().map(|a| (a.account_id.clone(), 1.0)).collect(),
    );
    let tally = category_tally(&net, &lists).map_err(|e| e.to_string())?;
    let t = tally[&MetricKind::InDegree];
    let published = (t.org, t.jmb, t.oi, t.other) == (3, 9, 8, 0);

    let report: serde_json::Value =
        serde_json::from_str(&file_text(&fixture.files, "report.json")).map_err(|e| e.to_string())?;
    let tallies = &report["indicators"]["category_tallies"];
    let mut sums = Vec::new();
    for kind in MetricKind::CENTRALITY {
        let key = serde_json::to_value(kind).map_err(|e| e.to_string())?;
        let row = &tallies[key.as_str().unwrap_or_default()];
        let sum: u64 = ["ORG", "JMB", "OI", "OTHER"]
            .iter()
            .map(|k| row[k].as_u64().unwrap_or(0))
            .sum();
        sums.push(sum);
    }
    let block: Vec<&str> = fixture
        .report_txt
        .lines()
        .skip_while(|l| !l.starts_with("TYPES OF ACCOUNT"))
        .skip(2)
        .take(MetricKind::CENTRALITY.len())
        .collect();
    let four_columns = block.len() == 5
        && block.iter().all(|l| {
            let nums: Vec<u64> = l.split_whitespace().filter_map(|w| w.parse().ok()).collect();
            nums.len() == 4 && nums.iter().sum::<u64>() == 20
        });
    check(
        published && sums.iter().all(|&s| s == 20) && four_columns,
        format!(
            "hand-labeled in-degree row {} {} {} {}; fixture row sums {sums:?}; rendered rows 4 columns: {four_columns}",
            t.org, t.jmb, t.oi, t.other
        ),
    )
}

fn tree_bytes(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect()
}

fn determinism(fixture: &Fixture) -> Outcome {
    let mut trees = Vec::new();
    for (name, workers) in [
        ("run-a", None),
        ("run-b", None),
        ("serial", Some(1)),
        ("parallel", Some(8)),
    ] {
        let mut config = fixture.config.clone();
        config.analysis.workers = workers;
        config.analysis.layers = RelationKind::ALL.to_vec();
        config.output.dir = fixture.dir.join(name);
        cmd_analyze(&config).map_err(|e| e.to_string())?;
        trees.push(tree_bytes(&config.output.dir));
    }
    let files = trees[0].len();
    check(
        files >= 9 && trees[0] == trees[1] && trees[2] == trees[3] && trees[0] == trees[2],
        format!("{files} files; repeated runs identical, 1 vs 8 workers identical"),
    )
}

fn performance(fixture: &Fixture) -> Outcome {
    let mut config = fixture.config.clone();
    config.analysis.layers = RelationKind::ALL.to_vec();
    config.output.dir = fixture.dir.join("timed");
    let start = Instant::now();
    let analysis = cmd_analyze(&config).map_err(|e| e.to_string())?;
    let analyze_time = start.elapsed();
    let layered_edges = analysis.report.summary.edge_count;

    let big = Spec::random(10_000, 50_000, &mut rng(10_000));
    let g = big.graph();
    let start = Instant::now();
    let b = betweenness_centrality::<f64>(&g, PathMode::Directed);
    let bc_time = start.elapsed();
    check(
        analyze_time < Duration::from_secs(2) && bc_time < Duration::from_secs(60) && b.len() == 10_000,
        format!(
            "analyze {} nodes / {layered_edges} layered edges in {:.3}s; betweenness on {} nodes / {} edges in {:.2}s",
            analysis.report.summary.node_count,
            analyze_time.as_secs_f64(),
            g.node_count(),
            g.edge_count(),
            bc_time.as_secs_f64()
        ),
    )
}

fn synth_calibration() -> Outcome {
    let mut heavy = 0;
    let mut ratios = Vec::new();
    for seed in 0..100 {
        let config = SynthConfig {
            seed,
            account_count: 500,
            follow_edges_target: 2000,
            follow_attachment_exponent: 1.0,
            ..SynthConfig::default()
        };
        let corpus = generate_corpus(&config).map_err(|e| e.to_string())?;
        let mut in_degree: BTreeMap<&str, usize> = BTreeMap::new();
        for (_, followed) in &corpus.follows {
            *in_degree.entry(followed).or_default() += 1;
        }
        let max = in_degree.values().copied().max().unwrap_or(0) as f64;
        let mean = corpus.follows.len() as f64 / config.account_count as f64;
        ratios.push(max / mean);
        if max > 5.0 * mean {
            heavy += 1;
        }
    }
    let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    check(
        heavy >= 95,
        format!("{heavy}/100 seeds with max in-degree > 5x mean (smallest ratio {min:.1})"),
    )
}

/// The athens-like synthetic corpus, written to a scratch directory and
/// analyzed once.
struct Fixture {
    _scratch: tempfile::TempDir,
    dir: PathBuf,
    config: RunConfig,
    network: citynet::LayeredNetwork,
    files: Vec<(String, Vec<u8>)>,
    report_txt: String,
}

fn file_text(files: &[(String, Vec<u8>)], name: &str) -> String {
    files
        .iter()
        .find(|(n, _)| n == name)
        .map(|(_, b)| String::from_utf8_lossy(b).into_owned())
        .unwrap_or_default()
}

fn fixture() -> citynet::Result<Fixture> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/athens-like.toml");
    let mut config = RunConfig::from_file(&path)?;
    let scratch = tempfile::tempdir().expect("scratch dir");
    let dir = scratch.path().to_path_buf();
    let data = dir.join("data");
    generate_corpus(&config.synth)?.write_to(&data)?;
    config.input.tweets = data.join(citynet::synth::TWEETS_FILE);
    config.input.accounts = Some(data.join(citynet::synth::ACCOUNTS_FILE));
    config.input.follows = Some(data.join(citynet::synth::FOLLOWS_FILE));
    config.output.dir = dir.join("out");
    let corpus = load_corpus(&config.input)?;
    let analysis = analyze_corpus(&corpus, &config)?;
    let report_txt = file_text(&analysis.files, "report.txt");
    Ok(Fixture {
        _scratch: scratch,
        dir,
        config,
        network: analysis.network,
        files: analysis.files,
        report_txt,
    })
}

fn main() -> ExitCode {
    let fixture = match fixture() {
        Ok(f) => f,
        Err(e) => {
            println!("FAIL  fixture setup: {e}");
            return ExitCode::FAILURE;
        }
    };
    let criteria: Vec<Criterion> = vec![
        (
            "betweenness oracle equivalence",
            Box::new(betweenness_oracle_equivalence),
        ),
        (
            "geodesic/component/clustering oracles",
            Box::new(structural_oracle_equivalence),
        ),
        ("pagerank normalization", Box::new(pagerank_normalization)),
        (
            "eigenvector closed form and mean",
            Box::new(|| eigenvector_reconstruction(&fixture)),
        ),
        ("density reconstruction", Box::new(|| density_reconstruction(&fixture))),
        ("interactivity arithmetic", Box::new(interactivity_arithmetic)),
        ("main component and url share", Box::new(membership_and_needs)),
        ("centrality elite table shape", Box::new(|| table_shape(&fixture))),
        ("determinism", Box::new(|| determinism(&fixture))),
        ("performance", Box::new(|| performance(&fixture))),
        ("synthetic heavy tail calibration", Box::new(synth_calibration)),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        match run() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
