// SPDX-License-Identifier: Apache-2.0

use std::collections::VecDeque;

use rayon::prelude::*;

use super::{PathMode, BLOCK};
use crate::error::{Error, Result};
use crate::graph::DirectedGraph;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicStats<T> {
    /// Mean over ordered pairs at finite positive distance.
    pub average: T,
    pub diameter: usize,
    /// Number of ordered pairs contributing to the mean.
    pub reachable_pairs: u64,
}

pub(crate) fn neighbors(g: &DirectedGraph, mode: PathMode, v: usize) -> &[usize] {
    match mode {
        PathMode::Directed => g.out_neighbors(v),
        PathMode::Undirected => g.undirected_neighbors(v),
    }
}

#[derive(Default, Clone, Copy)]
struct Tally {
    distance_sum: u64,
    pairs: u64,
    diameter: usize,
}

impl Tally {
    fn merge(self, other: Tally) -> Tally {
        Tally {
            distance_sum: self.distance_sum + other.distance_sum,
            pairs: self.pairs + other.pairs,
            diameter: self.diameter.max(other.diameter),
        }
    }
}

/// Breadth-first distances over every ordered pair. Unreachable pairs are
/// left out of both the mean and the diameter.
pub fn geodesic_stats<T: Scalar>(g: &DirectedGraph, mode: PathMode) -> Result<GeodesicStats<T>> {
    let n = g.node_count();
    let sources: Vec<usize> = (0..n).collect();
    let tally = sources
        .par_chunks(BLOCK)
        .map(|block| {
            let mut dist = vec![usize::MAX; n];
            let mut queue = VecDeque::new();
            let mut visited = Vec::new();
            let mut tally = Tally::default();
            for &s in block {
                dist[s] = 0;
                queue.push_back(s);
                visited.push(s);
                while let Some(v) = queue.pop_front() {
                    let d = dist[v];
                    if d > 0 {
                        tally.distance_sum += d as u64;
                        tally.pairs += 1;
                        tally.diameter = tally.diameter.max(d);
                    }
                    for &w in neighbors(g, mode, v) {
                        if dist[w] == usize::MAX {
                            dist[w] = d + 1;
                            queue.push_back(w);
                            visited.push(w);
                        }
                    }
                }
                for v in visited.drain(..) {
                    dist[v] = usize::MAX;
                }
            }
            tally
        })
        .reduce(Tally::default, Tally::merge);

    if tally.pairs == 0 {
        return Err(Error::UndefinedMetric("no pair of nodes at finite distance".into()));
    }
    Ok(GeodesicStats {
        average: T::lit(tally.distance_sum as f64) / T::lit(tally.pairs as f64),
        diameter: tally.diameter,
        reachable_pairs: tally.pairs,
    })
}
