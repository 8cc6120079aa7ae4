// SPDX-License-Identifier: Apache-2.0

//! Power-iteration centralities: eigenvector and PageRank.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{EigenMode, MetricKind, MetricVector};
use crate::error::{Error, Result};
use crate::graph::DirectedGraph;
use crate::scalar::{ordered_sum, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EigenvectorOptions {
    pub mode: EigenMode,
    /// Maximum absolute change between successive sum-normalized iterates.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for EigenvectorOptions {
    fn default() -> Self {
        EigenvectorOptions {
            mode: EigenMode::Undirected,
            tolerance: 1e-10,
            max_iterations: 10_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PageRankOptions {
    pub damping: f64,
    /// L1 change between successive iterates.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for PageRankOptions {
    fn default() -> Self {
        PageRankOptions {
            damping: 0.85,
            tolerance: 1e-10,
            max_iterations: 200,
        }
    }
}

fn normalize_sum<T: Scalar>(x: &mut [T]) {
    let total = ordered_sum(x);
    x.iter_mut().for_each(|v| *v = *v / total);
}

/// Dominant eigenvector of the chosen adjacency, scaled to sum to 1.
///
/// Iterates `x <- (A + I) x`. The identity shift leaves the eigenvectors
/// alone but keeps bipartite graphs (stars, trees) from oscillating
/// between the `+lambda` and `-lambda` eigenspaces.
pub fn eigenvector_centrality<T: Scalar>(g: &DirectedGraph, options: &EigenvectorOptions) -> Result<MetricVector<T>> {
    let n = g.node_count();
    if g.edge_count() == 0 {
        return Err(Error::UndefinedMetric(
            "eigenvector centrality needs at least one edge".into(),
        ));
    }
    let tolerance = T::lit(options.tolerance);
    let mut x = vec![T::one() / T::from_count(n); n];
    let mut residual = T::infinity();

    for _ in 0..options.max_iterations {
        let mut next: Vec<T> = (0..n)
            .into_par_iter()
            .map(|v| {
                let nbrs = match options.mode {
                    EigenMode::Undirected => g.undirected_neighbors(v),
                    EigenMode::DirectedIn => g.in_neighbors(v),
                };
                nbrs.iter().fold(x[v], |acc, &u| acc + x[u])
            })
            .collect();
        normalize_sum(&mut next);
        residual = x.iter().zip(&next).fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()));
        x = next;
        if residual < tolerance {
            return Ok(MetricVector::for_graph(MetricKind::Eigenvector, g, x));
        }
    }
    Err(Error::Convergence {
        algorithm: "eigenvector centrality",
        iterations: options.max_iterations,
        residual: residual.as_f64(),
    })
}

/// Damped random-surfer scores. Mass sitting on nodes without out-edges
/// is spread uniformly over all nodes on every iteration.
pub fn pagerank<T: Scalar>(g: &DirectedGraph, options: &PageRankOptions) -> Result<MetricVector<T>> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::UndefinedMetric("pagerank needs at least one node".into()));
    }
    let damping = T::lit(options.damping);
    let tolerance = T::lit(options.tolerance);
    let size = T::from_count(n);
    let teleport = (T::one() - damping) / size;
    let inv_out: Vec<Option<T>> = (0..n)
        .map(|v| match g.out_degree(v) {
            0 => None,
            d => Some(T::one() / T::from_count(d)),
        })
        .collect();

    let mut rank = vec![T::one() / size; n];
    let mut residual = T::infinity();
    for _ in 0..options.max_iterations {
        let dangling = inv_out
            .iter()
            .zip(&rank)
            .filter(|(w, _)| w.is_none())
            .fold(T::zero(), |acc, (_, &r)| acc + r);
        let base = teleport + damping * dangling / size;
        let share: Vec<T> = rank
            .iter()
            .zip(&inv_out)
            .map(|(&r, w)| w.map_or(T::zero(), |w| r * w))
            .collect();
        let next: Vec<T> = (0..n)
            .into_par_iter()
            .map(|v| {
                let inflow = g.in_neighbors(v).iter().fold(T::zero(), |acc, &u| acc + share[u]);
                base + damping * inflow
            })
            .collect();
        residual = rank
            .iter()
            .zip(&next)
            .fold(T::zero(), |acc, (&a, &b)| acc + (a - b).abs());
        rank = next;
        if residual < tolerance {
            normalize_sum(&mut rank);
            return Ok(MetricVector::for_graph(MetricKind::Pagerank, g, rank));
        }
    }
    Err(Error::Convergence {
        algorithm: "pagerank",
        iterations: options.max_iterations,
        residual: residual.as_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(edges: &[(&str, &str)]) -> DirectedGraph {
        DirectedGraph::from_edges(&[], edges).unwrap()
    }

    fn undirected(edges: &[(&str, &str)]) -> DirectedGraph {
        let both: Vec<(&str, &str)> = edges.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect();
        g(&both)
    }

    #[test]
    fn triangle_is_uniform() {
        let e = eigenvector_centrality::<f64>(&undirected(&[("a", "b"), ("b", "c"), ("a", "c")]), &Default::default())
            .unwrap();
        for v in e.values() {
            assert!((v - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn star_matches_closed_form() {
        // lambda = sqrt(3): center = sqrt(3) * leaf
        let star = g(&[("c", "x"), ("c", "y"), ("c", "z")]);
        let e = eigenvector_centrality::<f64>(&star, &Default::default()).unwrap();
        let root3 = 3f64.sqrt();
        assert!((e.get("c").unwrap() - root3 / (3.0 + root3)).abs() < 1e-9);
        assert!((e.get("x").unwrap() - 1.0 / (3.0 + root3)).abs() < 1e-9);
    }

    #[test]
    fn eigenvector_needs_edges() {
        let lonely = DirectedGraph::from_edges(&["a", "b"], &[]).unwrap();
        assert!(matches!(
            eigenvector_centrality::<f64>(&lonely, &Default::default()),
            Err(Error::UndefinedMetric(_))
        ));
    }

    #[test]
    fn eigenvector_reports_non_convergence() {
        let path = g(&[("a", "b"), ("b", "c"), ("c", "d")]);
        let opts = EigenvectorOptions {
            mode: EigenMode::DirectedIn,
            tolerance: 1e-14,
            max_iterations: 5,
        };
        match eigenvector_centrality::<f64>(&path, &opts) {
            Err(Error::Convergence {
                iterations, residual, ..
            }) => {
                assert_eq!(iterations, 5);
                assert!(residual > 0.0);
            }
            other => panic!("expected convergence error, got {other:?}"),
        }
    }

    #[test]
    fn directed_in_cycle_is_uniform() {
        let cycle = g(&[("a", "b"), ("b", "c"), ("c", "a")]);
        let opts = EigenvectorOptions {
            mode: EigenMode::DirectedIn,
            ..Default::default()
        };
        let e = eigenvector_centrality::<f64>(&cycle, &opts).unwrap();
        assert!(e.values().iter().all(|v| (v - 1.0 / 3.0).abs() < 1e-12));
    }

    #[test]
    fn four_cycle_pagerank() {
        let p = pagerank::<f64>(
            &g(&[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")]),
            &Default::default(),
        )
        .unwrap();
        assert!(p.values().iter().all(|v| (v - 0.25).abs() < 1e-12));
    }

    #[test]
    fn mutual_pair_pagerank() {
        let p = pagerank::<f64>(&g(&[("a", "b"), ("b", "a")]), &Default::default()).unwrap();
        assert!(p.values().iter().all(|v| (v - 0.5).abs() < 1e-12));
    }

    #[test]
    fn dangling_pair_pagerank() {
        // Fixed point solved by hand:
        //   r_a = 0.075 + 0.425 r_b,  r_a + r_b = 1  =>  r_a = 0.5 / 1.425
        let p = pagerank::<f64>(&g(&[("a", "b")]), &Default::default()).unwrap();
        assert!((p.get("a").unwrap() - 0.5 / 1.425).abs() < 1e-10);
        assert!((p.get("b").unwrap() - 0.925 / 1.425).abs() < 1e-10);
    }

    #[test]
    fn pagerank_of_empty_graph_is_undefined() {
        assert!(pagerank::<f64>(&DirectedGraph::default(), &Default::default()).is_err());
    }
}
