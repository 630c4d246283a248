use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{MeasureId, NodeScores};
use crate::rin::Graph;

// Sources per parallel work item. Fixed so that the reduction order, and
// hence every bit of the result, does not depend on the thread count.
const SOURCE_CHUNK: usize = 32;

pub fn degree(graph: &Graph) -> NodeScores {
    NodeScores::new(MeasureId::Degree, (0..graph.node_count()).map(|v| graph.degree(v) as f64).collect())
}

/// Exact betweenness (Brandes), counting each unordered source-target pair
/// once, endpoints excluded, unnormalised.
pub fn betweenness(graph: &Graph) -> NodeScores {
    let n = graph.node_count();
    let csr = Csr::new(graph);
    let sources: Vec<usize> = (0..n).collect();
    let partials: Vec<Vec<f64>> = sources
        .par_chunks(SOURCE_CHUNK)
        .map(|chunk| {
            let mut acc = vec![0.0; n];
            let mut work = BrandesWork::new(n, csr.targets.len());
            for &s in chunk {
                work.accumulate(&csr, s, &mut acc);
            }
            acc
        })
        .collect();
    let mut values = vec![0.0; n];
    for part in partials {
        for (v, x) in values.iter_mut().zip(part) {
            *v += x;
        }
    }
    // every unordered pair was counted from both endpoints
    for v in &mut values {
        *v *= 0.5;
    }
    NodeScores::new(MeasureId::Betweenness, values)
}

/// Betweenness divided by the number of pairs not involving the node,
/// `(n-1)(n-2)/2`, which maps it into `[0, 1]`.
pub fn betweenness_normalized(graph: &Graph) -> NodeScores {
    let n = graph.node_count() as f64;
    let mut scores = betweenness(graph);
    let pairs = (n - 1.0) * (n - 2.0) / 2.0;
    if pairs > 0.0 {
        scores.values.iter_mut().for_each(|v| *v /= pairs);
    }
    scores
}

struct Csr {
    offsets: Vec<u32>,
    targets: Vec<u32>,
}

impl Csr {
    fn new(graph: &Graph) -> Self {
        let mut offsets = Vec::with_capacity(graph.node_count() + 1);
        let mut targets = Vec::with_capacity(2 * graph.edge_count());
        offsets.push(0);
        for v in 0..graph.node_count() {
            targets.extend(graph.neighbors(v).iter().map(|&w| w as u32));
            offsets.push(targets.len() as u32);
        }
        Self { offsets, targets }
    }

    #[inline]
    fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v] as usize..self.offsets[v + 1] as usize]
    }
}

#[derive(Clone, Copy)]
struct NodeState {
    dist: u32,
    pred_len: u32,
    sigma: f64,
    delta: f64,
}

const UNSEEN: NodeState = NodeState { dist: u32::MAX, pred_len: 0, sigma: 0.0, delta: 0.0 };

struct BrandesWork {
    state: Vec<NodeState>,
    order: Vec<u32>,
    // shortest-path predecessors of `w` live in `preds[offsets[w]..][..pred_len]`
    preds: Vec<u32>,
}

impl BrandesWork {
    fn new(n: usize, slots: usize) -> Self {
        Self { state: vec![UNSEEN; n], order: Vec::with_capacity(n), preds: vec![0; slots] }
    }

    fn accumulate(&mut self, csr: &Csr, s: usize, acc: &mut [f64]) {
        // reset only what the previous source touched
        for &v in &self.order {
            self.state[v as usize] = UNSEEN;
        }
        self.order.clear();

        self.state[s] = NodeState { dist: 0, pred_len: 0, sigma: 1.0, delta: 0.0 };
        self.order.push(s as u32);
        let mut head = 0;
        while head < self.order.len() {
            let v = self.order[head];
            head += 1;
            let NodeState { dist, sigma: sv, .. } = self.state[v as usize];
            let next = dist + 1;
            for &w in csr.neighbors(v as usize) {
                let st = &mut self.state[w as usize];
                if st.dist == u32::MAX {
                    st.dist = next;
                    self.order.push(w);
                } else if st.dist != next {
                    continue;
                }
                st.sigma += sv;
                self.preds[(csr.offsets[w as usize] + st.pred_len) as usize] = v;
                st.pred_len += 1;
            }
        }
        for &w in self.order[1..].iter().rev() {
            let w = w as usize;
            let NodeState { pred_len, sigma, delta, .. } = self.state[w];
            let coeff = (1.0 + delta) / sigma;
            let start = csr.offsets[w] as usize;
            for &v in &self.preds[start..start + pred_len as usize] {
                let sv = &mut self.state[v as usize];
                sv.delta += sv.sigma * coeff;
            }
            acc[w] += delta;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosenessVariant {
    /// `(1/(n-1)) Σ 1/d(v,u)`, unreachable nodes contribute 0.
    #[default]
    Harmonic,
    /// Classic closeness inside the node's component, scaled by the component
    /// share `(r-1)/(n-1)`.
    ComponentRestricted,
}

fn bfs_distances(graph: &Graph, s: usize, dist: &mut [i64], queue: &mut VecDeque<usize>) {
    dist.fill(-1);
    dist[s] = 0;
    queue.push_back(s);
    while let Some(v) = queue.pop_front() {
        for &w in graph.neighbors(v) {
            if dist[w] < 0 {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
}

pub fn closeness(graph: &Graph, variant: ClosenessVariant) -> NodeScores {
    let n = graph.node_count();
    let values = (0..n)
        .into_par_iter()
        .map_init(
            || (vec![-1i64; n], VecDeque::new()),
            |(dist, queue), v| {
                if n < 2 {
                    return 0.0;
                }
                bfs_distances(graph, v, dist, queue);
                let norm = (n - 1) as f64;
                match variant {
                    ClosenessVariant::Harmonic => {
                        let sum: f64 = dist.iter().filter(|&&d| d > 0).map(|&d| 1.0 / d as f64).sum();
                        sum / norm
                    }
                    ClosenessVariant::ComponentRestricted => {
                        let (reached, total) = dist.iter().filter(|&&d| d > 0).fold((0usize, 0i64), |(r, t), &d| (r + 1, t + d));
                        if reached == 0 {
                            0.0
                        } else {
                            let r1 = reached as f64;
                            (r1 / total as f64) * (r1 / norm)
                        }
                    }
                }
            },
        )
        .collect();
    NodeScores::new(MeasureId::Closeness, values)
}
