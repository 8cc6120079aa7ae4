// SPDX-License-Identifier: Apache-2.0

//! Directed simple graphs keyed by account id, layer unions and weak
//! connectivity.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::ingest::{LayeredNetwork, RelationKind};

/// Immutable directed simple graph.
///
/// Nodes keep their registration order; `out` and `in` adjacency lists are
/// sorted by node index, and `und` holds the merged undirected
/// neighbourhood.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DirectedGraph {
    nodes: Vec<String>,
    index: HashMap<String, usize>,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
    und_adj: Vec<Vec<usize>>,
    edge_count: usize,
}

impl DirectedGraph {
    /// Builds a graph from explicit nodes and edges. Edge endpoints that are
    /// not listed are appended after `nodes` in first-seen order.
    pub fn from_edges<S: AsRef<str>>(nodes: &[S], edges: &[(S, S)]) -> Result<Self> {
        let mut builder = GraphBuilder::new();
        for n in nodes {
            builder.add_node(n.as_ref());
        }
        for (s, t) in edges {
            builder.add_edge(s.as_ref(), t.as_ref())?;
        }
        Ok(builder.build())
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node_ids(&self) -> &[String] {
        &self.nodes
    }

    pub fn node_id(&self, v: usize) -> &str {
        &self.nodes[v]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out_adj[v]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.in_adj[v]
    }

    /// Neighbours in the underlying undirected simple graph.
    pub fn undirected_neighbors(&self, v: usize) -> &[usize] {
        &self.und_adj[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_adj[v].len()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_adj[v].len()
    }

    pub fn has_edge(&self, source: &str, target: &str) -> bool {
        match (self.index_of(source), self.index_of(target)) {
            (Some(s), Some(t)) => self.out_adj[s].binary_search(&t).is_ok(),
            _ => false,
        }
    }

    /// Edges as index pairs, ordered by source then target index.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(s, targets)| targets.iter().map(move |&t| (s, t)))
    }

    /// Edges as id pairs in lexicographic order.
    pub fn sorted_edge_ids(&self) -> Vec<(&str, &str)> {
        let mut edges: Vec<(&str, &str)> = self
            .edges()
            .map(|(s, t)| (self.nodes[s].as_str(), self.nodes[t].as_str()))
            .collect();
        edges.sort_unstable();
        edges
    }

    /// Node indices ordered by id.
    pub fn sorted_node_indices(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.nodes.len()).collect();
        order.sort_unstable_by(|&a, &b| self.nodes[a].cmp(&self.nodes[b]));
        order
    }

    /// Number of edges in the underlying undirected simple graph.
    pub fn undirected_edge_count(&self) -> usize {
        self.und_adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn reversed(&self) -> DirectedGraph {
        let mut g = self.clone();
        std::mem::swap(&mut g.out_adj, &mut g.in_adj);
        g
    }

    /// Rescans the edge set and checks that every adjacency index agrees
    /// with it.
    pub fn check_invariants(&self) -> Result<()> {
        let mut in_rebuilt = vec![Vec::new(); self.nodes.len()];
        let mut count = 0;
        for (s, targets) in self.out_adj.iter().enumerate() {
            if targets.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Graph(format!(
                    "unsorted or duplicate out-edges at {}",
                    self.nodes[s]
                )));
            }
            for &t in targets {
                if t == s {
                    return Err(Error::Graph(format!("self-loop at {}", self.nodes[s])));
                }
                in_rebuilt[t].push(s);
                count += 1;
            }
        }
        if in_rebuilt != self.in_adj {
            return Err(Error::Graph("in-adjacency disagrees with edge set".into()));
        }
        if count != self.edge_count {
            return Err(Error::Graph("edge count disagrees with edge set".into()));
        }
        for (v, und) in self.und_adj.iter().enumerate() {
            let expected: BTreeSet<usize> = self.out_adj[v].iter().chain(&self.in_adj[v]).copied().collect();
            if !und.iter().copied().eq(expected) {
                return Err(Error::Graph(format!(
                    "undirected adjacency disagrees at {}",
                    self.nodes[v]
                )));
            }
        }
        for (i, id) in self.nodes.iter().enumerate() {
            if self.index.get(id) != Some(&i) {
                return Err(Error::Graph(format!("index disagrees for {id}")));
            }
        }
        Ok(())
    }
}

/// Accumulates nodes and deduplicated edges for a [`DirectedGraph`].
#[derive(Debug, Default)]
pub struct GraphBuilder {
    nodes: Vec<String>,
    index: HashMap<String, usize>,
    edges: BTreeSet<(usize, usize)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, id: &str) -> usize {
        if let Some(&i) = self.index.get(id) {
            return i;
        }
        let i = self.nodes.len();
        self.nodes.push(id.to_owned());
        self.index.insert(id.to_owned(), i);
        i
    }

    /// Returns `Ok(false)` when the edge was already present.
    pub fn add_edge(&mut self, source: &str, target: &str) -> Result<bool> {
        if source == target {
            return Err(Error::Graph(format!("self-loop on {source:?}")));
        }
        let s = self.add_node(source);
        let t = self.add_node(target);
        Ok(self.edges.insert((s, t)))
    }

    pub fn build(self) -> DirectedGraph {
        let n = self.nodes.len();
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        // BTreeSet order keeps both lists sorted.
        for &(s, t) in &self.edges {
            out_adj[s].push(t);
            in_adj[t].push(s);
        }
        let und_adj = (0..n)
            .map(|v| {
                let mut merged: Vec<usize> = out_adj[v].iter().chain(&in_adj[v]).copied().collect();
                merged.sort_unstable();
                merged.dedup();
                merged
            })
            .collect();
        DirectedGraph {
            nodes: self.nodes,
            index: self.index,
            out_adj,
            in_adj,
            und_adj,
            edge_count: self.edges.len(),
        }
    }
}

/// Union of the selected layers with cross-layer edge deduplication.
///
/// The node set is every edge endpoint of the selected layers, plus all
/// core tweeters when the follow layer is selected. Nodes are registered
/// in sorted id order.
pub fn union_layers(network: &LayeredNetwork, kinds: &[RelationKind]) -> Result<DirectedGraph> {
    if kinds.is_empty() {
        return Err(Error::Usage("union_layers needs at least one layer".into()));
    }
    let selected: BTreeSet<RelationKind> = kinds.iter().copied().collect();

    let mut nodes: BTreeSet<&str> = BTreeSet::new();
    let mut edges: BTreeSet<(&str, &str)> = BTreeSet::new();
    if selected.contains(&RelationKind::F) {
        nodes.extend(network.core_tweeters.iter().map(String::as_str));
    }
    for kind in &selected {
        let layer = network.layer(*kind);
        for (s, t) in layer.edges() {
            let (s, t) = (layer.node_id(s), layer.node_id(t));
            nodes.insert(s);
            nodes.insert(t);
            edges.insert((s, t));
        }
    }

    let mut builder = GraphBuilder::new();
    for n in nodes {
        builder.add_node(n);
    }
    for (s, t) in edges {
        builder.add_edge(s, t)?;
    }
    Ok(builder.build())
}

/// Weakly connected components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentPartition {
    /// Component id per node index; ids index into `components`.
    pub component_of: Vec<usize>,
    /// Member node indices per component, sorted by size descending and
    /// then by smallest member id.
    pub components: Vec<Vec<usize>>,
}

impl ComponentPartition {
    pub fn count(&self) -> usize {
        self.components.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.components.iter().map(Vec::len).collect()
    }

    pub fn largest(&self) -> Option<&[usize]> {
        self.components.first().map(Vec::as_slice)
    }
}

struct DisjointSet {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}

pub fn weakly_connected_components(g: &DirectedGraph) -> ComponentPartition {
    let n = g.node_count();
    let mut dsu = DisjointSet::new(n);
    for (s, t) in g.edges() {
        dsu.union(s, t);
    }

    let mut by_root: HashMap<usize, Vec<usize>> = HashMap::new();
    for v in 0..n {
        by_root.entry(dsu.find(v)).or_default().push(v);
    }
    let mut components: Vec<Vec<usize>> = by_root.into_values().collect();
    let min_id = |c: &Vec<usize>| c.iter().map(|&v| g.node_id(v)).min().unwrap_or("");
    components.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| min_id(a).cmp(min_id(b))));

    let mut component_of = vec![0; n];
    for (cid, members) in components.iter().enumerate() {
        for &v in members {
            component_of[v] = cid;
        }
    }
    ComponentPartition {
        component_of,
        components,
    }
}
