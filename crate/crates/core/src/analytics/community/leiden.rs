use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{canonicalize, MoveState, WeightedGraph, GAIN_EPS, MAX_LEVELS};

// Randomness of the refinement merge choice.
const THETA: f64 = 0.01;

/// Queue-based local moving: only neighbors of moved nodes are revisited.
fn move_nodes_fast(g: &WeightedGraph, state: &mut MoveState, gamma: f64) {
    let n = g.node_count();
    let mut queue: VecDeque<usize> = (0..n).collect();
    let mut queued = vec![true; n];
    while let Some(v) = queue.pop_front() {
        queued[v] = false;
        let target = state.best_move(g, v, gamma);
        if target == state.community[v] {
            continue;
        }
        state.relocate(g, v, target);
        for &(u, _) in &g.adjacency[v] {
            if !queued[u] && state.community[u] != target {
                queued[u] = true;
                queue.push_back(u);
            }
        }
    }
}

/// Splits each community of `labels` into well-connected sub-communities by
/// merging singletons, starting from the singleton partition.
fn refine(g: &WeightedGraph, labels: &[usize], k: usize, gamma: f64, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let n = g.node_count();
    let m2 = 2.0 * g.total_weight;

    let mut members: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut parent_strength = vec![0.0; k];
    for v in 0..n {
        members[labels[v]].push(v);
        parent_strength[labels[v]] += g.strength[v];
    }

    let mut refined: Vec<usize> = (0..n).collect();
    let mut size = vec![1usize; n];
    let mut strength = g.strength.clone();
    // weight from each refined community to the rest of its parent community
    let mut external: Vec<f64> = (0..n)
        .map(|v| g.adjacency[v].iter().filter(|&&(u, _)| labels[u] == labels[v]).map(|&(_, w)| w).sum())
        .collect();

    let mut weight_to = vec![0.0; n];
    let mut touched: Vec<usize> = Vec::new();

    for (c, nodes) in members.iter().enumerate() {
        let total = parent_strength[c];
        for &v in nodes {
            if size[refined[v]] != 1 {
                continue;
            }
            let kv = g.strength[v];
            if external[v] < gamma * kv * (total - kv) / m2 - GAIN_EPS {
                continue;
            }

            for &r in &touched {
                weight_to[r] = 0.0;
            }
            touched.clear();
            for &(u, w) in &g.adjacency[v] {
                if labels[u] != c {
                    continue;
                }
                let r = refined[u];
                // weights are positive, so zero means not seen yet
                if weight_to[r] == 0.0 {
                    touched.push(r);
                }
                weight_to[r] += w;
            }
            touched.sort_unstable();

            let own = refined[v];
            let mut options: Vec<(usize, f64)> = vec![(own, 0.0)];
            for &r in &touched {
                if r == own {
                    continue;
                }
                let well_connected = external[r] >= gamma * strength[r] * (total - strength[r]) / m2 - GAIN_EPS;
                let gain = weight_to[r] - gamma * kv * strength[r] / m2;
                if well_connected && gain >= 0.0 {
                    options.push((r, gain));
                }
            }
            if options.len() == 1 {
                continue;
            }

            let best = options.iter().map(|o| o.1).fold(f64::NEG_INFINITY, f64::max);
            let weights: Vec<f64> = options.iter().map(|o| ((o.1 - best) / THETA).exp()).collect();
            let mut draw = rng.random::<f64>() * weights.iter().sum::<f64>();
            let mut chosen = options[options.len() - 1].0;
            for (o, w) in options.iter().zip(&weights) {
                if draw < *w {
                    chosen = o.0;
                    break;
                }
                draw -= w;
            }
            if chosen == own {
                continue;
            }

            external[chosen] += external[v] - 2.0 * weight_to[chosen];
            strength[chosen] += kv;
            strength[own] -= kv;
            size[chosen] += 1;
            size[own] -= 1;
            refined[v] = chosen;
        }
    }
    refined
}

pub(super) fn run(g: &WeightedGraph, gamma: f64, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut graph = g.clone();
    let mut membership: Vec<usize> = (0..g.node_count()).collect();
    let mut partition: Vec<usize> = (0..g.node_count()).collect();

    for _ in 0..MAX_LEVELS {
        let mut state = MoveState::new(&graph, partition.clone());
        move_nodes_fast(&graph, &mut state, gamma);
        let mut labels = state.community;
        let k = canonicalize(&mut labels);
        if k == graph.node_count() {
            partition = labels;
            break;
        }

        let mut refined = refine(&graph, &labels, k, gamma, &mut rng);
        let mut kr = canonicalize(&mut refined);
        if kr == graph.node_count() {
            // refinement merged nothing; coarsen by the moved partition instead
            refined = labels.clone();
            kr = k;
        }
        let mut next_partition = vec![0; kr];
        for v in 0..graph.node_count() {
            next_partition[refined[v]] = labels[v];
        }
        for m in membership.iter_mut() {
            *m = refined[*m];
        }
        graph = graph.aggregate(&refined, kr);
        partition = next_partition;
    }
    membership.iter().map(|&v| partition[v]).collect()
}
