//! Modularity-based community detection: Louvain-style local moving with
//! coarsening (PLM) and the Leiden variant with a refinement phase.
//!
//! Both run on [`WeightedGraph`], which after coarsening carries edge weights
//! and self-loops. Nodes are visited in ascending id and ties between equally
//! good target communities go to the smallest community id, so results are
//! reproducible.

mod leiden;
mod louvain;

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::Partition;
use crate::error::{Error, Result};
use crate::rin::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommunityMethod {
    Plm,
    Leiden,
}

impl FromStr for CommunityMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "plm" | "louvain" => Ok(Self::Plm),
            "leiden" => Ok(Self::Leiden),
            other => Err(Error::InvalidConfig(format!("unknown community method {other:?}"))),
        }
    }
}

// Gains closer than this are treated as equal.
const GAIN_EPS: f64 = 1e-12;
const MAX_LEVELS: usize = 64;
const MAX_SWEEPS: usize = 1000;

/// Newman-Girvan modularity with resolution `gamma`:
/// `Q = Σ_c [ e_c/m - gamma (deg_c / 2m)^2 ]`. Edgeless graphs score 0.
pub fn modularity(graph: &Graph, partition: &Partition, gamma: f64) -> Result<f64> {
    if partition.len() != graph.node_count() {
        return Err(Error::LengthMismatch { expected: graph.node_count(), actual: partition.len() });
    }
    let m = graph.edge_count() as f64;
    if m == 0.0 {
        return Ok(0.0);
    }
    let k = partition.community_count();
    let labels = partition.labels();
    let mut internal = vec![0.0; k];
    let mut degree = vec![0.0; k];
    for v in 0..graph.node_count() {
        degree[labels[v]] += graph.degree(v) as f64;
    }
    for (i, j) in graph.edges() {
        if labels[i] == labels[j] {
            internal[labels[i]] += 1.0;
        }
    }
    Ok((0..k).map(|c| internal[c] / m - gamma * (degree[c] / (2.0 * m)).powi(2)).sum())
}

/// Detects communities maximising modularity at resolution `gamma`. The
/// seed drives the randomised merge choice of the Leiden refinement; PLM is
/// fully determined by the node order.
pub fn community_detect(graph: &Graph, method: CommunityMethod, gamma: f64, seed: u64) -> Result<Partition> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidConfig(format!("resolution must be positive, got {gamma}")));
    }
    let n = graph.node_count();
    if graph.edge_count() == 0 {
        return Ok(Partition::singletons(n));
    }
    let wg = WeightedGraph::from_graph(graph);
    let labels = match method {
        CommunityMethod::Plm => louvain::run(&wg, gamma),
        CommunityMethod::Leiden => leiden::run(&wg, gamma, seed),
    };
    Ok(Partition::from_labels(&labels))
}

/// Undirected weighted graph with optional self-loops, as produced by
/// coarsening. `strength[v]` counts self-loop weight twice.
#[derive(Debug, Clone)]
pub(crate) struct WeightedGraph {
    adjacency: Vec<Vec<(usize, f64)>>,
    self_loop: Vec<f64>,
    strength: Vec<f64>,
    total_weight: f64,
}

impl WeightedGraph {
    fn from_graph(graph: &Graph) -> Self {
        let n = graph.node_count();
        let adjacency: Vec<Vec<(usize, f64)>> = (0..n).map(|v| graph.neighbors(v).iter().map(|&u| (u, 1.0)).collect()).collect();
        let strength = (0..n).map(|v| graph.degree(v) as f64).collect();
        Self { adjacency, self_loop: vec![0.0; n], strength, total_weight: graph.edge_count() as f64 }
    }

    fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    /// Collapses each community of `labels` (dense, `0..k`) into one node.
    /// Community `c` becomes node `c`, so order is preserved when labels are
    /// numbered by first occurrence.
    fn aggregate(&self, labels: &[usize], k: usize) -> Self {
        let mut self_loop = vec![0.0; k];
        let mut strength = vec![0.0; k];
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); k];
        for v in 0..self.node_count() {
            let cv = labels[v];
            self_loop[cv] += self.self_loop[v];
            strength[cv] += self.strength[v];
            for &(u, w) in &self.adjacency[v] {
                let cu = labels[u];
                if cu == cv {
                    // each internal edge is seen from both endpoints
                    self_loop[cv] += 0.5 * w;
                } else {
                    rows[cv].push((cu, w));
                }
            }
        }
        let adjacency = rows
            .into_iter()
            .map(|mut row| {
                row.sort_unstable_by_key(|&(u, _)| u);
                let mut merged: Vec<(usize, f64)> = Vec::with_capacity(row.len());
                for (u, w) in row {
                    match merged.last_mut() {
                        Some((last, acc)) if *last == u => *acc += w,
                        _ => merged.push((u, w)),
                    }
                }
                merged
            })
            .collect();
        Self { adjacency, self_loop, strength, total_weight: self.total_weight }
    }
}

/// Renumbers labels by first occurrence; returns the community count.
fn canonicalize(labels: &mut [usize]) -> usize {
    let size = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut map = vec![usize::MAX; size];
    let mut next = 0;
    for l in labels.iter_mut() {
        if map[*l] == usize::MAX {
            map[*l] = next;
            next += 1;
        }
        *l = map[*l];
    }
    next
}

/// Per-community strength totals plus scratch space for neighbor weights,
/// shared by the local-moving phases.
struct MoveState {
    community: Vec<usize>,
    community_strength: Vec<f64>,
    neighbor_weight: Vec<f64>,
    is_touched: Vec<bool>,
    touched: Vec<usize>,
}

impl MoveState {
    fn new(g: &WeightedGraph, initial: Vec<usize>) -> Self {
        let n = g.node_count();
        let mut community_strength = vec![0.0; n];
        for v in 0..n {
            community_strength[initial[v]] += g.strength[v];
        }
        Self { community: initial, community_strength, neighbor_weight: vec![0.0; n], is_touched: vec![false; n], touched: Vec::new() }
    }

    /// Best community for `v` given the others' assignment. Returns the
    /// target, or the current community when no strictly better one exists.
    fn best_move(&mut self, g: &WeightedGraph, v: usize, gamma: f64) -> usize {
        let m2 = 2.0 * g.total_weight;
        let current = self.community[v];
        let kv = g.strength[v];

        for &c in &self.touched {
            self.neighbor_weight[c] = 0.0;
            self.is_touched[c] = false;
        }
        self.touched.clear();
        self.touched.push(current);
        self.is_touched[current] = true;
        for &(u, w) in &g.adjacency[v] {
            let c = self.community[u];
            if !self.is_touched[c] {
                self.is_touched[c] = true;
                self.touched.push(c);
            }
            self.neighbor_weight[c] += w;
        }

        // gain of inserting v into c, with v already removed from `current`
        let gain = |weight_to: f64, strength_c: f64| weight_to - gamma * kv * strength_c / m2;
        let stay = gain(self.neighbor_weight[current], self.community_strength[current] - kv);

        let mut best = current;
        let mut best_gain = f64::NEG_INFINITY;
        let mut candidates: Vec<usize> = self.touched.iter().copied().filter(|&c| c != current).collect();
        candidates.sort_unstable();
        for c in candidates {
            let gc = gain(self.neighbor_weight[c], self.community_strength[c]);
            if gc > best_gain + GAIN_EPS {
                best_gain = gc;
                best = c;
            }
        }
        if best != current && best_gain > stay + GAIN_EPS {
            best
        } else {
            current
        }
    }

    fn relocate(&mut self, g: &WeightedGraph, v: usize, target: usize) {
        let kv = g.strength[v];
        self.community_strength[self.community[v]] -= kv;
        self.community_strength[target] += kv;
        self.community[v] = target;
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn two_cliques() -> Graph {
        let mut edges = Vec::new();
        for base in [0, 4] {
            for i in 0..4 {
                for j in i + 1..4 {
                    edges.push((base + i, base + j));
                }
            }
        }
        edges.push((3, 4));
        Graph::from_edges(8, edges).unwrap()
    }

    fn triangle() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn modularity_closed_forms() {
        for gamma in [0.5, 1.0, 2.0] {
            let q = modularity(&triangle(), &Partition::singletons(3), gamma).unwrap();
            assert!((q + gamma / 3.0).abs() < 1e-15);
            let q = modularity(&triangle(), &Partition::whole(3), gamma).unwrap();
            assert!((q - (1.0 - gamma)).abs() < 1e-15);
        }
        assert_eq!(modularity(&Graph::empty(4), &Partition::whole(4), 1.0).unwrap(), 0.0);
    }

    #[test]
    fn modularity_checks_length() {
        assert!(modularity(&triangle(), &Partition::whole(4), 1.0).is_err());
    }

    #[test]
    fn both_methods_find_two_cliques() {
        let expected = Partition::from_labels(&[0, 0, 0, 0, 1, 1, 1, 1]);
        for method in [CommunityMethod::Plm, CommunityMethod::Leiden] {
            for seed in 0..5 {
                assert_eq!(community_detect(&two_cliques(), method, 1.0, seed).unwrap(), expected, "{method:?} seed {seed}");
            }
        }
    }

    #[test]
    fn edgeless_graph_gives_singletons() {
        for method in [CommunityMethod::Plm, CommunityMethod::Leiden] {
            assert_eq!(community_detect(&Graph::empty(4), method, 1.0, 0).unwrap(), Partition::singletons(4));
        }
    }

    #[test]
    fn rejects_non_positive_resolution() {
        assert!(community_detect(&triangle(), CommunityMethod::Plm, 0.0, 0).is_err());
    }

    #[test]
    fn aggregation_preserves_weight() {
        let g = WeightedGraph::from_graph(&two_cliques());
        let agg = g.aggregate(&[0, 0, 0, 0, 1, 1, 1, 1], 2);
        assert_eq!(agg.self_loop, vec![6.0, 6.0]);
        assert_eq!(agg.adjacency[0], vec![(1, 1.0)]);
        assert_eq!(agg.strength, vec![13.0, 13.0]);
        assert_eq!(agg.total_weight, 13.0);
    }
}
