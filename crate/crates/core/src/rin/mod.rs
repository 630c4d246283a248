//! Residue interaction networks: one node per residue, an undirected edge
//! whenever the residue-residue distance is within the cut-off (inclusive).

mod build;
mod components;
mod distance;
mod grid;
mod incremental;

pub use build::{build_rin, contact_pairs};
pub use components::connected_components;
pub use distance::{atomic_mass, center_of_mass, representative_points, residue_distance};
pub use grid::CellGrid;
pub use incremental::{apply_cutoff_change, apply_frame_change, edge_diff};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DistanceCriterion {
    #[serde(rename = "calpha")]
    CAlpha,
    #[serde(rename = "com")]
    CenterOfMass,
    #[serde(rename = "min")]
    MinimumAtomDistance,
}

impl DistanceCriterion {
    pub const ALL: [DistanceCriterion; 3] = [Self::CAlpha, Self::CenterOfMass, Self::MinimumAtomDistance];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::CAlpha => "calpha",
            Self::CenterOfMass => "com",
            Self::MinimumAtomDistance => "min",
        }
    }
}

impl fmt::Display for DistanceCriterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DistanceCriterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "calpha" | "ca" => Ok(Self::CAlpha),
            "com" | "center-of-mass" => Ok(Self::CenterOfMass),
            "min" | "minimum" => Ok(Self::MinimumAtomDistance),
            other => Err(Error::InvalidConfig(format!("unknown distance criterion {other:?}"))),
        }
    }
}

/// Slider range (Å) advertised to interactive clients.
pub const CUTOFF_SLIDER_RANGE: (f64, f64) = (4.0, 8.5);
pub const CUTOFF_SLIDER_STEP: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RinConfig {
    pub criterion: DistanceCriterion,
    /// Å, compared inclusively.
    pub cutoff: f64,
    #[serde(default)]
    pub exclude_backbone_neighbors: bool,
}

impl Default for RinConfig {
    fn default() -> Self {
        Self { criterion: DistanceCriterion::MinimumAtomDistance, cutoff: 4.5, exclude_backbone_neighbors: false }
    }
}

impl RinConfig {
    pub fn new(criterion: DistanceCriterion, cutoff: f64) -> Self {
        Self { criterion, cutoff, exclude_backbone_neighbors: false }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cutoff.is_finite() && self.cutoff > 0.0) {
            return Err(Error::InvalidConfig(format!("cutoff must be positive and finite, got {}", self.cutoff)));
        }
        Ok(())
    }
}

/// Undirected simple graph stored as strictly sorted neighbor lists.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    pub fn empty(node_count: usize) -> Self {
        Self { adjacency: vec![Vec::new(); node_count], edge_count: 0 }
    }

    /// Builds a graph from arbitrary pairs; orientation and duplicates are
    /// normalised away. Self-loops and out-of-range endpoints are rejected.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut pairs = Vec::new();
        for (i, j) in edges {
            if i == j {
                return Err(Error::InvalidConfig(format!("self-loop on node {i}")));
            }
            if i >= node_count || j >= node_count {
                return Err(Error::InvalidConfig(format!("edge ({i}, {j}) out of range for {node_count} nodes")));
            }
            pairs.push((i.min(j), i.max(j)));
        }
        pairs.sort_unstable();
        pairs.dedup();
        Ok(Self::from_sorted_pairs(node_count, &pairs))
    }

    /// `pairs` must be sorted, unique and normalised (`i < j < node_count`).
    pub(crate) fn from_sorted_pairs(node_count: usize, pairs: &[(usize, usize)]) -> Self {
        let mut adjacency = vec![Vec::new(); node_count];
        for &(i, j) in pairs {
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
        // lexicographic pair order pushes every lower neighbor of a node
        // before its upper ones, both ascending
        debug_assert!(adjacency.iter().all(|l| l.windows(2).all(|w| w[0] < w[1])));
        Self { adjacency, edge_count: pairs.len() }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i < self.node_count() && self.adjacency[i].binary_search(&j).is_ok()
    }

    /// Edges as `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(i, list)| list.iter().copied().filter(move |&j| j > i).map(move |j| (i, j)))
    }

    pub fn edge_vec(&self) -> Vec<(usize, usize)> {
        self.edges().collect()
    }

    /// Relabels nodes: node `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self::from_edges(self.node_count(), self.edges().map(|(i, j)| (perm[i], perm[j]))).expect("permutation preserves validity")
    }
}

/// A graph built from one frame under one configuration. Values are
/// immutable; updates return new values.
#[derive(Debug, Clone, PartialEq)]
pub struct Rin {
    graph: Graph,
    config: RinConfig,
    frame_index: usize,
}

impl Rin {
    pub fn new(graph: Graph, config: RinConfig, frame_index: usize) -> Self {
        Self { graph, config, frame_index }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn config(&self) -> &RinConfig {
        &self.config
    }

    pub fn frame_index(&self) -> usize {
        self.frame_index
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }
}

/// Edge-set change between two graphs over the same nodes. Pairs are
/// normalised (`i < j`) and sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeDelta {
    pub added: Vec<(usize, usize)>,
    pub removed: Vec<(usize, usize)>,
}

impl EdgeDelta {
    pub fn is_empty(&self) -> bool {
        self.added.is_empty() && self.removed.is_empty()
    }

    pub fn len(&self) -> usize {
        self.added.len() + self.removed.len()
    }
}
