//! Node centralities, community detection and partition comparison.

mod centrality;
pub mod community;
mod nmi;
mod pagerank;

pub use centrality::{betweenness, betweenness_normalized, closeness, degree, ClosenessVariant};
pub use community::{community_detect, modularity, CommunityMethod};
pub use nmi::nmi;
pub use pagerank::{pagerank, pagerank_with_limit, PageRankOutcome, DEFAULT_DAMPING, DEFAULT_TOLERANCE, MAX_ITERATIONS};

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rin::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasureId {
    Degree,
    Closeness,
    Betweenness,
    #[serde(rename = "pagerank")]
    PageRank,
    #[serde(rename = "pagerank-norm")]
    PageRankNormalized,
}

impl MeasureId {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Degree => "degree",
            Self::Closeness => "closeness",
            Self::Betweenness => "betweenness",
            Self::PageRank => "pagerank",
            Self::PageRankNormalized => "pagerank-norm",
        }
    }
}

impl fmt::Display for MeasureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One real value per node for a centrality measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeScores {
    pub measure: MeasureId,
    pub values: Vec<f64>,
}

impl NodeScores {
    pub fn new(measure: MeasureId, values: Vec<f64>) -> Self {
        debug_assert!(values.iter().all(|v| v.is_finite()));
        Self { measure, values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Community labels, dense in `0..community_count`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    labels: Vec<usize>,
    community_count: usize,
}

impl Partition {
    /// Canonicalises arbitrary labels: communities are renumbered in order of
    /// first occurrence along the node order.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut map = HashMap::new();
        let dense: Vec<usize> = labels
            .iter()
            .map(|l| {
                let next = map.len();
                *map.entry(*l).or_insert(next)
            })
            .collect();
        Self { labels: dense, community_count: map.len() }
    }

    /// Labels already known to be dense in `0..community_count`.
    pub(crate) fn from_dense(labels: Vec<usize>, community_count: usize) -> Self {
        debug_assert!(labels.iter().all(|&l| l < community_count));
        Self { labels, community_count }
    }

    pub fn singletons(n: usize) -> Self {
        Self { labels: (0..n).collect(), community_count: n }
    }

    pub fn whole(n: usize) -> Self {
        Self { labels: vec![0; n], community_count: usize::from(n > 0) }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn community_count(&self) -> usize {
        self.community_count
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Member lists per community, each ascending.
    pub fn communities(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.community_count];
        for (v, &l) in self.labels.iter().enumerate() {
            out[l].push(v);
        }
        out
    }
}

/// Element-wise `current - buffer`.
pub fn score_delta(current: &NodeScores, buffer: &NodeScores) -> Result<NodeScores> {
    if current.measure != buffer.measure {
        return Err(Error::MeasureMismatch { left: current.measure.to_string(), right: buffer.measure.to_string() });
    }
    if current.len() != buffer.len() {
        return Err(Error::LengthMismatch { expected: current.len(), actual: buffer.len() });
    }
    let values = current.values.iter().zip(&buffer.values).map(|(a, b)| a - b).collect();
    Ok(NodeScores::new(current.measure, values))
}

/// Everything the measure slider can select.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Measure {
    Degree,
    Closeness,
    Betweenness,
    #[serde(rename = "pagerank")]
    PageRank,
    #[serde(rename = "pagerank-norm")]
    PageRankNormalized,
    Plm,
    Leiden,
}

impl Measure {
    pub const ALL: [Measure; 7] =
        [Self::Degree, Self::Closeness, Self::Betweenness, Self::PageRank, Self::PageRankNormalized, Self::Plm, Self::Leiden];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Degree => "degree",
            Self::Closeness => "closeness",
            Self::Betweenness => "betweenness",
            Self::PageRank => "pagerank",
            Self::PageRankNormalized => "pagerank-norm",
            Self::Plm => "plm",
            Self::Leiden => "leiden",
        }
    }

    pub fn is_community(self) -> bool {
        matches!(self, Self::Plm | Self::Leiden)
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.as_str() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::InvalidConfig(format!("unknown measure {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalysisParams {
    pub closeness: ClosenessVariant,
    pub damping: f64,
    pub tolerance: f64,
    pub gamma: f64,
    pub seed: u64,
}

impl Default for AnalysisParams {
    fn default() -> Self {
        Self { closeness: ClosenessVariant::Harmonic, damping: DEFAULT_DAMPING, tolerance: DEFAULT_TOLERANCE, gamma: 1.0, seed: 0 }
    }
}

/// Result of evaluating a [`Measure`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Analysis {
    Scores(NodeScores),
    Communities(Partition),
}

impl Analysis {
    /// Scalar view used for coloring: scores, or community labels as reals.
    pub fn values(&self) -> Vec<f64> {
        match self {
            Self::Scores(s) => s.values.clone(),
            Self::Communities(p) => p.labels().iter().map(|&l| l as f64).collect(),
        }
    }

    pub fn as_scores(&self) -> Option<&NodeScores> {
        match self {
            Self::Scores(s) => Some(s),
            Self::Communities(_) => None,
        }
    }
}

pub fn compute_measure(graph: &Graph, measure: Measure, params: &AnalysisParams) -> Result<Analysis> {
    Ok(match measure {
        Measure::Degree => Analysis::Scores(degree(graph)),
        Measure::Closeness => Analysis::Scores(closeness(graph, params.closeness)),
        Measure::Betweenness => Analysis::Scores(betweenness(graph)),
        Measure::PageRank => Analysis::Scores(pagerank(graph, params.damping, params.tolerance, false)?.scores),
        Measure::PageRankNormalized => Analysis::Scores(pagerank(graph, params.damping, params.tolerance, true)?.scores),
        Measure::Plm => Analysis::Communities(community_detect(graph, CommunityMethod::Plm, params.gamma, params.seed)?),
        Measure::Leiden => Analysis::Communities(community_detect(graph, CommunityMethod::Leiden, params.gamma, params.seed)?),
    })
}
