use std::collections::VecDeque;

use super::Graph;
use crate::analytics::Partition;

/// Connected components labelled `0..k` in order of each component's smallest
/// node.
pub fn connected_components(graph: &Graph) -> Partition {
    let n = graph.node_count();
    let mut labels = vec![usize::MAX; n];
    let mut next = 0;
    let mut queue = VecDeque::new();
    for start in 0..n {
        if labels[start] != usize::MAX {
            continue;
        }
        labels[start] = next;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            for &u in graph.neighbors(v) {
                if labels[u] == usize::MAX {
                    labels[u] = next;
                    queue.push_back(u);
                }
            }
        }
        next += 1;
    }
    Partition::from_dense(labels, next)
}
