use tracing::warn;

use super::{MeasureId, NodeScores};
use crate::error::{Error, Result};
use crate::rin::Graph;

pub const DEFAULT_DAMPING: f64 = 0.85;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const MAX_ITERATIONS: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct PageRankOutcome {
    pub scores: NodeScores,
    pub iterations: usize,
    /// False when the iteration cap was hit before the L1 change fell below
    /// the tolerance; `scores` then holds the last iterate.
    pub converged: bool,
}

/// Power-iteration PageRank on the undirected graph (each edge is a link in
/// both directions). Isolated nodes link to every node.
///
/// With `normalized`, every score is divided by its lower bound
/// `(1 - damping) / n`, so all values are `>= 1` and comparable across
/// graphs of different sizes.
pub fn pagerank(graph: &Graph, damping: f64, tol: f64, normalized: bool) -> Result<PageRankOutcome> {
    pagerank_with_limit(graph, damping, tol, normalized, MAX_ITERATIONS)
}

/// [`pagerank`] with an explicit iteration cap.
pub fn pagerank_with_limit(graph: &Graph, damping: f64, tol: f64, normalized: bool, max_iterations: usize) -> Result<PageRankOutcome> {
    if !(damping > 0.0 && damping < 1.0) {
        return Err(Error::InvalidConfig(format!("damping must lie in (0, 1), got {damping}")));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidConfig(format!("tolerance must be positive, got {tol}")));
    }
    let n = graph.node_count();
    let measure = if normalized { MeasureId::PageRankNormalized } else { MeasureId::PageRank };
    if n == 0 {
        return Ok(PageRankOutcome { scores: NodeScores::new(measure, Vec::new()), iterations: 0, converged: true });
    }

    let nf = n as f64;
    let teleport = (1.0 - damping) / nf;
    let inv_degree: Vec<f64> = (0..n).map(|v| if graph.degree(v) > 0 { 1.0 / graph.degree(v) as f64 } else { 0.0 }).collect();
    let dangling: Vec<usize> = (0..n).filter(|&v| graph.degree(v) == 0).collect();

    let mut rank = vec![1.0 / nf; n];
    let mut next = vec![0.0; n];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iterations {
        iterations += 1;
        let dangling_mass: f64 = dangling.iter().map(|&v| rank[v]).sum();
        let base = teleport + damping * dangling_mass / nf;
        for (v, slot) in next.iter_mut().enumerate() {
            let inflow: f64 = graph.neighbors(v).iter().map(|&u| rank[u] * inv_degree[u]).sum();
            *slot = base + damping * inflow;
        }
        let change: f64 = rank.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut rank, &mut next);
        if change < tol {
            converged = true;
            break;
        }
    }
    if !converged {
        warn!(iterations, "pagerank did not converge");
    }
    if normalized {
        rank.iter_mut().for_each(|r| *r /= teleport);
    }
    Ok(PageRankOutcome { scores: NodeScores::new(measure, rank), iterations, converged })
}
