// SPDX-License-Identifier: Apache-2.0

use super::{MetricKind, MetricVector};
use crate::error::{Error, Result};
use crate::graph::DirectedGraph;
use crate::scalar::Scalar;

/// In- and out-degree of every node.
pub fn degree_stats<T: Scalar>(g: &DirectedGraph) -> (MetricVector<T>, MetricVector<T>) {
    let n = g.node_count();
    let indeg = (0..n).map(|v| T::from_count(g.in_degree(v))).collect();
    let outdeg = (0..n).map(|v| T::from_count(g.out_degree(v))).collect();
    (
        MetricVector::for_graph(MetricKind::InDegree, g, indeg),
        MetricVector::for_graph(MetricKind::OutDegree, g, outdeg),
    )
}

/// `E / (N (N - 1))` for a directed simple graph.
pub fn graph_density<T: Scalar>(g: &DirectedGraph) -> Result<T> {
    let n = g.node_count();
    if n < 2 {
        return Err(Error::UndefinedMetric(format!(
            "density needs at least 2 nodes, got {n}"
        )));
    }
    Ok(T::from_count(g.edge_count()) / (T::from_count(n) * T::from_count(n - 1)))
}
