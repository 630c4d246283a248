use super::{canonicalize, MoveState, WeightedGraph, MAX_LEVELS, MAX_SWEEPS};

/// Local moving in ascending node order until a full sweep moves nothing.
/// Returns whether any node changed community.
fn local_moving(g: &WeightedGraph, state: &mut MoveState, gamma: f64) -> bool {
    let mut any = false;
    for _ in 0..MAX_SWEEPS {
        let mut moved = false;
        for v in 0..g.node_count() {
            let target = state.best_move(g, v, gamma);
            if target != state.community[v] {
                state.relocate(g, v, target);
                moved = true;
            }
        }
        if !moved {
            break;
        }
        any = true;
    }
    any
}

/// Louvain: local moving, then coarsen communities into nodes, until a
/// level makes no move. Returns a label per original node.
pub(super) fn run(g: &WeightedGraph, gamma: f64) -> Vec<usize> {
    let mut membership: Vec<usize> = (0..g.node_count()).collect();
    let mut graph = g.clone();
    for _ in 0..MAX_LEVELS {
        let mut state = MoveState::new(&graph, (0..graph.node_count()).collect());
        let moved = local_moving(&graph, &mut state, gamma);
        let mut labels = state.community;
        let k = canonicalize(&mut labels);
        for m in membership.iter_mut() {
            *m = labels[*m];
        }
        if !moved || k == graph.node_count() {
            break;
        }
        graph = graph.aggregate(&labels, k);
    }
    membership
}
