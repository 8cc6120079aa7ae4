// SPDX-License-Identifier: Apache-2.0

//! Brandes accumulation for unweighted shortest-path betweenness.

use std::collections::VecDeque;

use rayon::prelude::*;

use super::paths::neighbors;
use super::{MetricKind, MetricVector, PathMode, BLOCK};
use crate::graph::DirectedGraph;
use crate::scalar::Scalar;

/// Per-block scratch space, reset between sources by walking the visit
/// stack instead of refilling whole arrays.
struct Workspace<T> {
    dist: Vec<usize>,
    sigma: Vec<T>,
    delta: Vec<T>,
    stack: Vec<usize>,
    queue: VecDeque<usize>,
}

impl<T: Scalar> Workspace<T> {
    fn new(n: usize) -> Self {
        Workspace {
            dist: vec![usize::MAX; n],
            sigma: vec![T::zero(); n],
            delta: vec![T::zero(); n],
            stack: Vec::with_capacity(n),
            queue: VecDeque::with_capacity(n),
        }
    }

    fn accumulate_source(&mut self, g: &DirectedGraph, mode: PathMode, s: usize, acc: &mut [T]) {
        self.dist[s] = 0;
        self.sigma[s] = T::one();
        self.queue.push_back(s);
        while let Some(v) = self.queue.pop_front() {
            self.stack.push(v);
            let next = self.dist[v] + 1;
            for &w in neighbors(g, mode, v) {
                if self.dist[w] == usize::MAX {
                    self.dist[w] = next;
                    self.queue.push_back(w);
                }
                if self.dist[w] == next {
                    self.sigma[w] = self.sigma[w] + self.sigma[v];
                }
            }
        }

        // Predecessors of w are its reverse neighbours one level closer.
        while let Some(w) = self.stack.pop() {
            let coeff = (T::one() + self.delta[w]) / self.sigma[w];
            let level = self.dist[w];
            if level > 0 {
                let preds = match mode {
                    PathMode::Directed => g.in_neighbors(w),
                    PathMode::Undirected => g.undirected_neighbors(w),
                };
                for &v in preds {
                    if self.dist[v] == level - 1 {
                        self.delta[v] = self.delta[v] + self.sigma[v] * coeff;
                    }
                }
                acc[w] = acc[w] + self.delta[w];
            }
            self.dist[w] = usize::MAX;
            self.sigma[w] = T::zero();
            self.delta[w] = T::zero();
        }
    }
}

/// Unnormalized betweenness.
///
/// Directed mode sums pair dependencies over ordered source/target pairs.
/// Undirected mode runs on the symmetric closure and halves the result so
/// that each unordered pair counts once.
pub fn betweenness_centrality<T: Scalar>(g: &DirectedGraph, mode: PathMode) -> MetricVector<T> {
    let n = g.node_count();
    let sources: Vec<usize> = (0..n).collect();
    let partials: Vec<Vec<T>> = sources
        .par_chunks(BLOCK)
        .map(|block| {
            let mut ws = Workspace::new(n);
            let mut acc = vec![T::zero(); n];
            for &s in block {
                ws.accumulate_source(g, mode, s, &mut acc);
            }
            acc
        })
        .collect();

    let mut scores = vec![T::zero(); n];
    for partial in &partials {
        for (total, &p) in scores.iter_mut().zip(partial) {
            *total = *total + p;
        }
    }
    if mode == PathMode::Undirected {
        let half = T::lit(0.5);
        scores.iter_mut().for_each(|x| *x = *x * half);
    }
    MetricVector::for_graph(MetricKind::Betweenness, g, scores)
}
