// SPDX-License-Identifier: Apache-2.0

//! Analysis reports: the machine-readable JSON document, its plain-text
//! rendering and field-by-field comparison of two reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::centrality::{MetricKind, MetricOptions};
use crate::community::CategoryTally;
use crate::error::{Error, Result};
use crate::export::SCHEMA_VERSION;
use crate::ingest::RelationKind;
use crate::{CommunityIndicators, NetworkSummary};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub tweets_read: usize,
    pub tweets_retained: usize,
    pub core_tweeters: usize,
    pub accounts: usize,
    pub follow_pairs: usize,
    pub rejected_rows: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerSize {
    pub nodes: usize,
    pub edges: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedNode {
    pub id: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: String,
    pub corpus: CorpusStats,
    pub layers: BTreeMap<RelationKind, LayerSize>,
    /// Layers unioned into the analyzed graph.
    pub analyzed_layers: Vec<RelationKind>,
    pub metric_options: MetricOptions,
    pub top_k: usize,
    pub summary: NetworkSummary,
    pub indicators: CommunityIndicators,
    pub top_nodes: BTreeMap<MetricKind, Vec<RankedNode>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Machine,
    Human,
}

/// Renders a report. The machine format is pretty-printed JSON and
/// parses back into an identical [`Report`].
pub fn render_report(report: &Report, format: ReportFormat) -> String {
    match format {
        ReportFormat::Machine => {
            let mut text = serde_json::to_string_pretty(report).expect("report serializes");
            text.push('\n');
            text
        }
        ReportFormat::Human => render_text(report),
    }
}

pub fn parse_report(text: &str) -> Result<Report> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    check_version(&value)?;
    serde_json::from_value(value).map_err(|e| Error::Parse {
        line: 0,
        message: e.to_string(),
    })
}

fn check_version(value: &Value) -> Result<()> {
    match value.get("schema_version").and_then(Value::as_str) {
        Some(SCHEMA_VERSION) => Ok(()),
        Some(other) => Err(Error::Version {
            expected: SCHEMA_VERSION.into(),
            found: other.into(),
        }),
        None => Err(Error::Version {
            expected: SCHEMA_VERSION.into(),
            found: "none".into(),
        }),
    }
}

const UNDEFINED: &str = "undefined";

fn fixed(value: Option<f64>, places: usize) -> String {
    value.map_or_else(|| UNDEFINED.to_owned(), |v| format!("{v:.places$}"))
}

fn percent(value: Option<f64>) -> String {
    value.map_or_else(|| UNDEFINED.to_owned(), |v| format!("{v:.4} ({:.1}%)", 100.0 * v))
}

fn count(value: Option<usize>) -> String {
    value.map_or_else(|| UNDEFINED.to_owned(), |v| v.to_string())
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn render_text(report: &Report) -> String {
    let s = &report.summary;
    let ind = &report.indicators;
    let layers: Vec<&str> = report.analyzed_layers.iter().map(|k| k.as_str()).collect();
    let mut out = String::new();

    let _ = writeln!(out, "NETWORK METRICS ({})", layers.join("+"));
    let rows = [
        (
            "network size (no of nodes)",
            s.node_count.to_string(),
            "diameter",
            count(s.diameter),
        ),
        (
            "edges",
            s.edge_count.to_string(),
            "avg betweenness centrality",
            fixed(s.avg_betweenness, 1),
        ),
        (
            "density",
            fixed(s.density, 3),
            "avg eigenvector centrality",
            fixed(s.avg_eigenvector, 4),
        ),
        (
            "connected components",
            s.component_count.to_string(),
            "avg clustering coefficient",
            fixed(s.avg_clustering, 3),
        ),
        (
            "avg. geodesic distance",
            fixed(s.avg_geodesic_distance, 2),
            "",
            String::new(),
        ),
    ];
    for (l1, v1, l2, v2) in rows {
        let _ = writeln!(out, "  {l1:<28}{v1:>10}    {l2:<28}{v2:>10}");
    }
    let _ = writeln!(out);

    let _ = writeln!(out, "LAYERS");
    for (kind, size) in &report.layers {
        let _ = writeln!(out, "  {kind}  nodes {:>6}  edges {:>6}", size.nodes, size.edges);
    }
    let c = &report.corpus;
    let _ = writeln!(
        out,
        "  tweets retained {} of {}, core tweeters {}, rejected rows {}",
        c.tweets_retained, c.tweets_read, c.core_tweeters, c.rejected_rows
    );
    let _ = writeln!(out);

    let _ = writeln!(out, "TYPES OF ACCOUNT OF THE MOST CENTRAL NODES (top {})", report.top_k);
    let tallies: Vec<(MetricKind, CategoryTally)> = MetricKind::CENTRALITY
        .iter()
        .map(|&kind| (kind, ind.category_tallies.get(&kind).copied().unwrap_or_default()))
        .collect();
    // the unlabeled column only appears when some account lacks a label
    let show_unlabeled = tallies.iter().any(|(_, t)| t.unlabeled > 0);
    let mut header = format!(
        "  {:<14}{:>14}{:>8}{:>8}{:>8}",
        "", "organizations", "J/MB", "OI", "other"
    );
    if show_unlabeled {
        let _ = write!(header, "{:>12}", "(unlabeled)");
    }
    let _ = writeln!(out, "{header}");
    for (kind, t) in tallies {
        let mut row = format!(
            "  {:<14}{:>14}{:>8}{:>8}{:>8}",
            kind.label(),
            t.org,
            t.jmb,
            t.oi,
            t.other
        );
        if show_unlabeled {
            let _ = write!(row, "{:>12}", t.unlabeled);
        }
        let _ = writeln!(out, "{row}");
    }
    let _ = writeln!(out);

    let _ = writeln!(out, "COMMUNITY INDICATORS");
    let lines = [
        (
            "high center: max / mean betweenness",
            fixed(ind.high_center_max_over_mean, 1),
        ),
        (
            "high center: max / median betweenness",
            fixed(ind.high_center_max_over_median, 1),
        ),
        (
            "interactivity: M+R / F+M+R edges",
            percent(ind.interactivity_edge_ratio),
        ),
        (
            "interactivity: M+R / F+M+R vertices",
            percent(ind.interactivity_vertex_ratio),
        ),
        (
            "membership: main component nodes",
            percent(ind.main_component_node_share),
        ),
        (
            "membership: main component edges",
            percent(ind.main_component_edge_share),
        ),
        ("needs: tweets with URLs", percent(ind.url_tweet_fraction)),
    ];
    for (label, value) in lines {
        let _ = writeln!(out, "  {label:<40}{value}");
    }
    let cr = &ind.criteria;
    let _ = writeln!(
        out,
        "  criteria: interactive {}, membership {}, informational {}, high centers {}",
        yes_no(cr.interactive),
        yes_no(cr.membership),
        yes_no(cr.informational),
        yes_no(cr.high_centers)
    );
    if !ind.narrative_fields.is_empty() {
        let _ = writeln!(out);
        let _ = writeln!(out, "NARRATIVE");
        for (key, text) in &ind.narrative_fields {
            let shown = if text.is_empty() { "-" } else { text.as_str() };
            let _ = writeln!(out, "  {key}: {shown}");
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldStatus {
    Both,
    /// Present only in the second report.
    Added,
    /// Present only in the first report.
    Removed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldDelta {
    pub field: String,
    pub a: Option<f64>,
    pub b: Option<f64>,
    /// `a - b`.
    pub abs_delta: Option<f64>,
    /// `(a - b) / |b|`; absent when `b` is zero.
    pub rel_delta: Option<f64>,
    pub status: FieldStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub schema_version: String,
    pub fields: Vec<FieldDelta>,
}

/// Numeric (or null) leaves keyed by dotted path.
fn numeric_leaves(value: &Value, prefix: &str, out: &mut BTreeMap<String, Option<f64>>) {
    let join = |key: &str| {
        if prefix.is_empty() {
            key.to_owned()
        } else {
            format!("{prefix}.{key}")
        }
    };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                numeric_leaves(v, &join(k), out);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                numeric_leaves(v, &join(&i.to_string()), out);
            }
        }
        Value::Number(n) => {
            out.insert(prefix.to_owned(), n.as_f64());
        }
        Value::Null => {
            out.insert(prefix.to_owned(), None);
        }
        Value::Bool(_) | Value::String(_) => {}
    }
}

/// Per-field deltas of report `a` against baseline `b`.
pub fn compare_reports(a: &Value, b: &Value) -> Result<Comparison> {
    check_version(a)?;
    check_version(b)?;
    let mut left = BTreeMap::new();
    let mut right = BTreeMap::new();
    numeric_leaves(a, "", &mut left);
    numeric_leaves(b, "", &mut right);

    let mut keys: Vec<&String> = left.keys().chain(right.keys()).collect();
    keys.sort();
    keys.dedup();

    let fields = keys
        .into_iter()
        .map(|key| {
            let (in_a, in_b) = (left.get(key), right.get(key));
            let (a, b) = (in_a.copied().flatten(), in_b.copied().flatten());
            let status = match (in_a, in_b) {
                (Some(_), Some(_)) => FieldStatus::Both,
                (None, _) => FieldStatus::Added,
                (_, None) => FieldStatus::Removed,
            };
            let abs_delta = a.zip(b).map(|(a, b)| a - b);
            let rel_delta = a.zip(b).and_then(|(a, b)| (b != 0.0).then(|| (a - b) / b.abs()));
            FieldDelta {
                field: key.clone(),
                a,
                b,
                abs_delta,
                rel_delta,
                status,
            }
        })
        .collect();
    Ok(Comparison {
        schema_version: SCHEMA_VERSION.into(),
        fields,
    })
}
