// SPDX-License-Identifier: Apache-2.0

//! Graph serialization for external viewers.
//!
//! Nodes carry the attributes a force-directed view maps to visual
//! channels: in-degree (size), global status count (colour) and global
//! follower count (opacity). Elements are written in sorted id order.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Read;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, GraphBuilder};
use crate::ingest::AccountRecord;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphFormat {
    Graphml,
    Dot,
    EdgeCsv,
}

impl GraphFormat {
    pub fn extension(self) -> &'static str {
        match self {
            GraphFormat::Graphml => "graphml",
            GraphFormat::Dot => "dot",
            GraphFormat::EdgeCsv => "csv",
        }
    }
}

impl FromStr for GraphFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "graphml" => Ok(GraphFormat::Graphml),
            "dot" => Ok(GraphFormat::Dot),
            "edge-csv" | "csv" => Ok(GraphFormat::EdgeCsv),
            other => Err(Error::Usage(format!(
                "unsupported graph format {other:?} (expected graphml, dot or edge-csv)"
            ))),
        }
    }
}

struct NodeView<'a> {
    id: &'a str,
    in_degree: usize,
    record: Option<&'a AccountRecord>,
}

fn node_views<'a>(g: &'a DirectedGraph, attributes: &'a BTreeMap<String, AccountRecord>) -> Vec<NodeView<'a>> {
    g.sorted_node_indices()
        .into_iter()
        .map(|v| {
            let id = g.node_id(v);
            NodeView {
                id,
                in_degree: g.in_degree(v),
                record: attributes.get(id),
            }
        })
        .collect()
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn graphml(g: &DirectedGraph, attributes: &BTreeMap<String, AccountRecord>) -> String {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str(
        "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\" \
         xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" \
         xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns \
         http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n",
    );
    out.push_str("  <key id=\"schema_version\" for=\"graph\" attr.name=\"schema_version\" attr.type=\"string\"/>\n");
    for (key, ty) in [
        ("screen_name", "string"),
        ("category", "string"),
        ("in_degree", "int"),
        ("statuses", "long"),
        ("followers", "long"),
    ] {
        let _ = writeln!(
            out,
            "  <key id=\"{key}\" for=\"node\" attr.name=\"{key}\" attr.type=\"{ty}\"/>"
        );
    }
    out.push_str("  <graph id=\"G\" edgedefault=\"directed\">\n");
    let _ = writeln!(out, "    <data key=\"schema_version\">{SCHEMA_VERSION}</data>");
    for node in node_views(g, attributes) {
        let _ = writeln!(out, "    <node id=\"{}\">", xml_escape(node.id));
        if let Some(r) = node.record {
            let _ = writeln!(
                out,
                "      <data key=\"screen_name\">{}</data>",
                xml_escape(&r.screen_name)
            );
            let _ = writeln!(out, "      <data key=\"category\">{}</data>", r.category);
        }
        let _ = writeln!(out, "      <data key=\"in_degree\">{}</data>", node.in_degree);
        if let Some(r) = node.record {
            let _ = writeln!(out, "      <data key=\"statuses\">{}</data>", r.statuses_count_global);
            let _ = writeln!(out, "      <data key=\"followers\">{}</data>", r.followers_count_global);
        }
        out.push_str("    </node>\n");
    }
    for (i, (s, t)) in g.sorted_edge_ids().into_iter().enumerate() {
        let _ = writeln!(
            out,
            "    <edge id=\"e{i}\" source=\"{}\" target=\"{}\"/>",
            xml_escape(s),
            xml_escape(t)
        );
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}

fn dot(g: &DirectedGraph, attributes: &BTreeMap<String, AccountRecord>) -> String {
    let mut out = String::new();
    out.push_str("digraph G {\n");
    let _ = writeln!(out, "  schema_version={};", dot_quote(SCHEMA_VERSION));
    for node in node_views(g, attributes) {
        let mut attrs = vec![format!("in_degree={}", node.in_degree)];
        if let Some(r) = node.record {
            attrs.push(format!("screen_name={}", dot_quote(&r.screen_name)));
            attrs.push(format!("category={}", dot_quote(r.category.as_str())));
            attrs.push(format!("statuses={}", r.statuses_count_global));
            attrs.push(format!("followers={}", r.followers_count_global));
        }
        let _ = writeln!(out, "  {} [{}];", dot_quote(node.id), attrs.join(", "));
    }
    for (s, t) in g.sorted_edge_ids() {
        let _ = writeln!(out, "  {} -> {};", dot_quote(s), dot_quote(t));
    }
    out.push_str("}\n");
    out
}

fn edge_csv(g: &DirectedGraph) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(["source", "target"]).expect("in-memory write");
    for (s, t) in g.sorted_edge_ids() {
        writer.write_record([s, t]).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

/// Renders `g` in the requested format.
pub fn export_graph(g: &DirectedGraph, attributes: &BTreeMap<String, AccountRecord>, format: GraphFormat) -> String {
    match format {
        GraphFormat::Graphml => graphml(g, attributes),
        GraphFormat::Dot => dot(g, attributes),
        GraphFormat::EdgeCsv => edge_csv(g),
    }
}

/// Reads a `source,target` edge list as written by [`export_graph`].
pub fn parse_edge_csv<R: Read>(reader: R) -> Result<DirectedGraph> {
    let mut csv = csv::Reader::from_reader(reader);
    let mut builder = GraphBuilder::new();
    for (i, row) in csv.records().enumerate() {
        let line = i + 2;
        let row = row.map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?;
        match (row.get(0), row.get(1)) {
            (Some(s), Some(t)) => {
                builder.add_edge(s, t).map_err(|e| Error::Parse {
                    line,
                    message: e.to_string(),
                })?;
            }
            _ => {
                return Err(Error::Parse {
                    line,
                    message: "expected source,target".into(),
                })
            }
        }
    }
    Ok(builder.build())
}
