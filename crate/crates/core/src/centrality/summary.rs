// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::{
    betweenness_centrality, clustering_coefficients, degree_stats, eigenvector_centrality, geodesic_stats,
    graph_density, pagerank, EigenvectorOptions, MetricKind, MetricVector, PageRankOptions, PathMode,
};
use crate::error::{Error, Result};
use crate::graph::{weakly_connected_components, DirectedGraph};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MetricOptions {
    pub betweenness_mode: PathMode,
    pub geodesic_mode: PathMode,
    pub eigenvector: EigenvectorOptions,
    pub pagerank: PageRankOptions,
}

impl Default for MetricOptions {
    fn default() -> Self {
        MetricOptions {
            betweenness_mode: PathMode::Directed,
            geodesic_mode: PathMode::Undirected,
            eigenvector: EigenvectorOptions::default(),
            pagerank: PageRankOptions::default(),
        }
    }
}

/// Network-wide values. Fields are `None` when the metric is undefined
/// for the graph (too few nodes, no edges, no reachable pairs).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetworkSummary<T> {
    pub node_count: usize,
    pub edge_count: usize,
    pub density: Option<T>,
    pub component_count: usize,
    pub avg_geodesic_distance: Option<T>,
    pub diameter: Option<usize>,
    pub avg_betweenness: Option<T>,
    pub avg_eigenvector: Option<T>,
    pub avg_clustering: Option<T>,
}

/// All per-node vectors for one graph plus its summary.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSuite<T> {
    pub in_degree: MetricVector<T>,
    pub out_degree: MetricVector<T>,
    pub betweenness: MetricVector<T>,
    pub eigenvector: Option<MetricVector<T>>,
    pub pagerank: Option<MetricVector<T>>,
    pub clustering: MetricVector<T>,
    pub summary: NetworkSummary<T>,
}

impl<T: Scalar> MetricSuite<T> {
    pub fn vector(&self, kind: MetricKind) -> Option<&MetricVector<T>> {
        match kind {
            MetricKind::InDegree => Some(&self.in_degree),
            MetricKind::OutDegree => Some(&self.out_degree),
            MetricKind::Betweenness => Some(&self.betweenness),
            MetricKind::Eigenvector => self.eigenvector.as_ref(),
            MetricKind::Pagerank => self.pagerank.as_ref(),
            MetricKind::Clustering => Some(&self.clustering),
        }
    }
}

fn defined<V>(r: Result<V>) -> Result<Option<V>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::UndefinedMetric(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Runs every metric on `g`. Undefined metrics become `None`; a
/// non-converging power iteration is an error.
pub fn compute_metrics<T: Scalar>(g: &DirectedGraph, options: &MetricOptions) -> Result<MetricSuite<T>> {
    let (in_degree, out_degree) = degree_stats(g);
    let betweenness = betweenness_centrality(g, options.betweenness_mode);
    let eigenvector = defined(eigenvector_centrality(g, &options.eigenvector))?;
    let pagerank = defined(pagerank(g, &options.pagerank))?;
    let clustering = clustering_coefficients(g);
    let geodesics = defined(geodesic_stats::<T>(g, options.geodesic_mode))?;

    let summary = NetworkSummary {
        node_count: g.node_count(),
        edge_count: g.edge_count(),
        density: defined(graph_density(g))?,
        component_count: weakly_connected_components(g).count(),
        avg_geodesic_distance: geodesics.map(|s| s.average),
        diameter: geodesics.map(|s| s.diameter),
        avg_betweenness: betweenness.mean(),
        avg_eigenvector: eigenvector.as_ref().and_then(MetricVector::mean),
        avg_clustering: clustering.average,
    };
    Ok(MetricSuite {
        in_degree,
        out_degree,
        betweenness,
        eigenvector,
        pagerank,
        clustering: clustering.local,
        summary,
    })
}

pub fn network_summary<T: Scalar>(g: &DirectedGraph, options: &MetricOptions) -> Result<NetworkSummary<T>> {
    compute_metrics(g, options).map(|suite| suite.summary)
}
