// SPDX-License-Identifier: Apache-2.0

//! Dense-matrix reference implementations used as test oracles. They share
//! no code with the library and favour obviousness over speed.

#![allow(dead_code)]

use std::collections::BTreeSet;

use citynet::DirectedGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const INF: usize = usize::MAX / 4;

/// A small graph as node count plus index pairs.
#[derive(Debug, Clone)]
pub struct Spec {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

pub fn node_id(i: usize) -> String {
    format!("v{i:03}")
}

impl Spec {
    pub fn new(n: usize, raw: &[(usize, usize)]) -> Spec {
        let set: BTreeSet<(usize, usize)> = raw
            .iter()
            .map(|&(a, b)| (a % n.max(1), b % n.max(1)))
            .filter(|(a, b)| a != b)
            .collect();
        Spec {
            n,
            edges: set.into_iter().collect(),
        }
    }

    pub fn random(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Spec {
        let raw: Vec<(usize, usize)> = (0..m)
            .map(|_| (rng.random_range(0..n), rng.random_range(0..n)))
            .collect();
        Spec::new(n, &raw)
    }

    pub fn graph(&self) -> DirectedGraph {
        self.graph_with(node_id)
    }

    pub fn graph_with(&self, name: impl Fn(usize) -> String) -> DirectedGraph {
        let nodes: Vec<String> = (0..self.n).map(&name).collect();
        let edges: Vec<(String, String)> = self.edges.iter().map(|&(a, b)| (name(a), name(b))).collect();
        DirectedGraph::from_edges(&nodes, &edges).expect("valid spec")
    }

    pub fn adjacency(&self, undirected: bool) -> Vec<Vec<bool>> {
        let mut a = vec![vec![false; self.n]; self.n];
        for &(s, t) in &self.edges {
            a[s][t] = true;
            if undirected {
                a[t][s] = true;
            }
        }
        a
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn floyd_warshall(adj: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut d = vec![vec![INF; n]; n];
    for i in 0..n {
        d[i][i] = 0;
        for j in 0..n {
            if adj[i][j] {
                d[i][j] = 1;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// (mean over finite positive distances, diameter, pair count)
pub fn geodesic_oracle(adj: &[Vec<bool>]) -> (f64, usize, u64) {
    let d = floyd_warshall(adj);
    let (mut sum, mut pairs, mut diameter) = (0usize, 0u64, 0usize);
    for row in &d {
        for &x in row {
            if x > 0 && x < INF {
                sum += x;
                pairs += 1;
                diameter = diameter.max(x);
            }
        }
    }
    let mean = if pairs == 0 {
        f64::NAN
    } else {
        sum as f64 / pairs as f64
    };
    (mean, diameter, pairs)
}

fn walk(adj: &[Vec<bool>], d: &[Vec<usize>], path: &mut Vec<usize>, target: usize, out: &mut Vec<Vec<usize>>) {
    let last = *path.last().unwrap();
    if last == target {
        out.push(path.clone());
        return;
    }
    for next in 0..adj.len() {
        if adj[last][next] && d[next][target] < INF && d[next][target] + 1 == d[last][target] {
            path.push(next);
            walk(adj, d, path, target, out);
            path.pop();
        }
    }
}

/// Betweenness by explicit enumeration of every shortest path. Ordered
/// pairs are summed; the undirected variant halves the total.
pub fn betweenness_oracle(adj: &[Vec<bool>], undirected: bool) -> Vec<f64> {
    let n = adj.len();
    let d = floyd_warshall(adj);
    let mut score = vec![0.0; n];
    for s in 0..n {
        for t in 0..n {
            if s == t || d[s][t] >= INF {
                continue;
            }
            let mut paths = Vec::new();
            walk(adj, &d, &mut vec![s], t, &mut paths);
            let total = paths.len() as f64;
            for p in &paths {
                for &v in &p[1..p.len() - 1] {
                    score[v] += 1.0 / total;
                }
            }
        }
    }
    if undirected {
        score.iter_mut().for_each(|x| *x /= 2.0);
    }
    score
}

/// Weak components as sorted member sets, found by repeated flood fill.
pub fn components_oracle(spec: &Spec) -> BTreeSet<Vec<usize>> {
    let adj = spec.adjacency(true);
    let mut seen = vec![false; spec.n];
    let mut out = BTreeSet::new();
    for start in 0..spec.n {
        if seen[start] {
            continue;
        }
        let mut members = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < members.len() {
            let v = members[i];
            for w in 0..spec.n {
                if adj[v][w] && !seen[w] {
                    seen[w] = true;
                    members.push(w);
                }
            }
            i += 1;
        }
        members.sort_unstable();
        out.insert(members);
    }
    out
}

pub fn clustering_oracle(spec: &Spec) -> Vec<f64> {
    let adj = spec.adjacency(true);
    (0..spec.n)
        .map(|v| {
            let nb: Vec<usize> = (0..spec.n).filter(|&w| adj[v][w]).collect();
            let k = nb.len();
            if k < 2 {
                return 0.0;
            }
            let mut links = 0;
            for i in 0..k {
                for j in i + 1..k {
                    if adj[nb[i]][nb[j]] {
                        links += 1;
                    }
                }
            }
            2.0 * links as f64 / (k * (k - 1)) as f64
        })
        .collect()
}

/// Largest absolute deviation from the PageRank fixed-point equation.
pub fn pagerank_residual(spec: &Spec, pr: &[f64], damping: f64) -> f64 {
    let n = spec.n as f64;
    let mut out_deg = vec![0usize; spec.n];
    for &(s, _) in &spec.edges {
        out_deg[s] += 1;
    }
    let dangling: f64 = (0..spec.n).filter(|&v| out_deg[v] == 0).map(|v| pr[v]).sum();
    let mut next = vec![(1.0 - damping) / n + damping * dangling / n; spec.n];
    for &(s, t) in &spec.edges {
        next[t] += damping * pr[s] / out_deg[s] as f64;
    }
    next.iter().zip(pr).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

/// Values of a metric vector in spec index order.
pub fn by_index(v: &citynet::MetricVector, n: usize) -> Vec<f64> {
    (0..n).map(|i| v.get(&node_id(i)).expect("node present")).collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
