// SPDX-License-Identifier: Apache-2.0

//! Node- and network-level metrics over a [`DirectedGraph`].
//!
//! Every routine is generic over [`Scalar`]. Work that runs on the rayon
//! pool is split into fixed-size blocks whose partial results are merged
//! in block order, so output bits do not depend on the number of worker
//! threads.

mod betweenness;
mod clustering;
mod degree;
mod distribution;
mod paths;
mod spectral;
mod summary;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::graph::DirectedGraph;
use crate::scalar::{ordered_sum, Scalar};

pub use betweenness::betweenness_centrality;
pub use clustering::{clustering_coefficients, Clustering};
pub use degree::{degree_stats, graph_density};
pub use distribution::{metric_distribution, top_k_nodes, Distribution};
pub use paths::{geodesic_stats, GeodesicStats};
pub use spectral::{eigenvector_centrality, pagerank, EigenvectorOptions, PageRankOptions};
pub use summary::{compute_metrics, network_summary, MetricOptions, MetricSuite, NetworkSummary};

/// Source nodes handled per parallel work unit.
pub(crate) const BLOCK: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MetricKind {
    InDegree,
    OutDegree,
    Betweenness,
    Eigenvector,
    Pagerank,
    Clustering,
}

impl MetricKind {
    pub const ALL: [MetricKind; 6] = [
        MetricKind::InDegree,
        MetricKind::OutDegree,
        MetricKind::Betweenness,
        MetricKind::Eigenvector,
        MetricKind::Pagerank,
        MetricKind::Clustering,
    ];

    /// The centrality rows of the account-type table.
    pub const CENTRALITY: [MetricKind; 5] = [
        MetricKind::InDegree,
        MetricKind::OutDegree,
        MetricKind::Betweenness,
        MetricKind::Pagerank,
        MetricKind::Eigenvector,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MetricKind::InDegree => "in_degree",
            MetricKind::OutDegree => "out_degree",
            MetricKind::Betweenness => "betweenness",
            MetricKind::Eigenvector => "eigenvector",
            MetricKind::Pagerank => "pagerank",
            MetricKind::Clustering => "clustering",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            MetricKind::InDegree => "in-degree",
            MetricKind::OutDegree => "out-degree",
            MetricKind::Betweenness => "betweenness",
            MetricKind::Eigenvector => "eigenvector",
            MetricKind::Pagerank => "pageRank",
            MetricKind::Clustering => "clustering",
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Shortest-path convention for geodesic statistics and betweenness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathMode {
    /// Follow edge direction; ordered pairs.
    Directed,
    /// Ignore edge direction.
    Undirected,
}

impl FromStr for PathMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "directed" => Ok(PathMode::Directed),
            "undirected" => Ok(PathMode::Undirected),
            other => Err(Error::Usage(format!("unknown path mode {other:?}"))),
        }
    }
}

/// Adjacency used for eigenvector centrality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenMode {
    /// A node's score accumulates over its in-neighbours.
    DirectedIn,
    Undirected,
}

impl FromStr for EigenMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "directed_in" => Ok(EigenMode::DirectedIn),
            "undirected" => Ok(EigenMode::Undirected),
            other => Err(Error::Usage(format!("unknown eigenvector mode {other:?}"))),
        }
    }
}

/// One value per graph node, in the graph's node order.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricVector<T> {
    pub kind: MetricKind,
    nodes: Vec<String>,
    values: Vec<T>,
}

impl<T: Scalar> MetricVector<T> {
    pub fn new(kind: MetricKind, nodes: Vec<String>, values: Vec<T>) -> Self {
        assert_eq!(nodes.len(), values.len(), "one value per node");
        MetricVector { kind, nodes, values }
    }

    pub(crate) fn for_graph(kind: MetricKind, g: &DirectedGraph, values: Vec<T>) -> Self {
        Self::new(kind, g.node_ids().to_vec(), values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn node_ids(&self) -> &[String] {
        &self.nodes
    }

    pub fn get(&self, id: &str) -> Option<T> {
        self.nodes.iter().position(|n| n == id).map(|i| self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, T)> + '_ {
        self.nodes.iter().map(String::as_str).zip(self.values.iter().copied())
    }

    /// Sum in node order.
    pub fn sum(&self) -> T {
        ordered_sum(&self.values)
    }

    pub fn mean(&self) -> Option<T> {
        (!self.values.is_empty()).then(|| self.sum() / T::from_count(self.values.len()))
    }

    pub fn max(&self) -> Option<T> {
        self.values.iter().copied().reduce(T::max)
    }

    /// Median; the midpoint of the two middle values for even lengths.
    pub fn median(&self) -> Option<T> {
        if self.values.is_empty() {
            return None;
        }
        let mut sorted = self.values.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite metric values"));
        let mid = sorted.len() / 2;
        Some(if sorted.len() % 2 == 1 {
            sorted[mid]
        } else {
            (sorted[mid - 1] + sorted[mid]) / T::lit(2.0)
        })
    }

    pub fn map_values(&self, f: impl Fn(T) -> T) -> Self {
        MetricVector {
            kind: self.kind,
            nodes: self.nodes.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }
}
