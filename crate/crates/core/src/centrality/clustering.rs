// SPDX-License-Identifier: Apache-2.0

use rayon::prelude::*;

use super::{MetricKind, MetricVector};
use crate::graph::DirectedGraph;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Clustering<T> {
    pub local: MetricVector<T>,
    /// Mean over all nodes, degree < 2 nodes included as 0. `None` for an
    /// empty graph.
    pub average: Option<T>,
}

fn local_coefficient<T: Scalar>(g: &DirectedGraph, v: usize) -> T {
    let nbrs = g.undirected_neighbors(v);
    let k = nbrs.len();
    if k < 2 {
        return T::zero();
    }
    let mut links = 0usize;
    for (i, &a) in nbrs.iter().enumerate() {
        let adj = g.undirected_neighbors(a);
        links += nbrs[i + 1..].iter().filter(|b| adj.binary_search(b).is_ok()).count();
    }
    T::from_count(2 * links) / T::from_count(k * (k - 1))
}

/// Local clustering on the underlying undirected simple graph.
pub fn clustering_coefficients<T: Scalar>(g: &DirectedGraph) -> Clustering<T> {
    let values: Vec<T> = (0..g.node_count())
        .into_par_iter()
        .map(|v| local_coefficient(g, v))
        .collect();
    let local = MetricVector::for_graph(MetricKind::Clustering, g, values);
    let average = local.mean();
    Clustering { local, average }
}
