//! Cut-off and frame transitions that return the new graph together with the
//! edge delta.

use super::build::{admissible_pairs, check_frame, is_backbone_neighbor};
use super::distance::{min_atom_distance, representative_points};
use super::{DistanceCriterion, EdgeDelta, Graph, Rin, RinConfig};
use crate::error::{Error, Result};
use crate::geometry;
use crate::trajectory::{Frame, Topology};

/// Symmetric difference of two sorted edge lists.
pub fn edge_diff(old: &Graph, new: &Graph) -> EdgeDelta {
    let (a, b) = (old.edge_vec(), new.edge_vec());
    let mut delta = EdgeDelta::default();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) if x == y => {
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                delta.removed.push(*x);
                i += 1;
            }
            (Some(x), None) => {
                delta.removed.push(*x);
                i += 1;
            }
            (_, Some(y)) => {
                delta.added.push(*y);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    delta
}

/// Moves `rin` to `new_cutoff` on the frame it was built from. Lowering the
/// cut-off filters the existing edges; raising it searches for the new
/// contacts only. The result equals [`super::build_rin`] at `new_cutoff`.
pub fn apply_cutoff_change(rin: &Rin, frame: &Frame, topo: Topology<'_>, new_cutoff: f64) -> Result<(Rin, EdgeDelta)> {
    check_frame(frame, topo)?;
    if frame.index != rin.frame_index() {
        return Err(Error::InvalidConfig(format!("graph belongs to frame {}, got frame {}", rin.frame_index(), frame.index)));
    }
    let config = RinConfig { cutoff: new_cutoff, ..*rin.config() };
    config.validate()?;
    let old_cutoff = rin.config().cutoff;
    let n = topo.residues.len();

    if new_cutoff == old_cutoff {
        return Ok((Rin::new(rin.graph().clone(), config, frame.index), EdgeDelta::default()));
    }

    if new_cutoff < old_cutoff {
        let kept_and_dropped: Vec<((usize, usize), bool)> = match config.criterion {
            DistanceCriterion::MinimumAtomDistance => rin
                .graph()
                .edges()
                .map(|(i, j)| ((i, j), min_atom_distance(frame, topo, i, j) <= new_cutoff))
                .collect(),
            criterion => {
                let points = representative_points(frame, topo, criterion)?;
                rin.graph().edges().map(|(i, j)| ((i, j), geometry::distance(points[i], points[j]) <= new_cutoff)).collect()
            }
        };
        let mut kept = Vec::with_capacity(kept_and_dropped.len());
        let mut removed = Vec::new();
        for (pair, keep) in kept_and_dropped {
            if keep {
                kept.push(pair);
            } else {
                removed.push(pair);
            }
        }
        let graph = Graph::from_sorted_pairs(n, &kept);
        return Ok((Rin::new(graph, config, frame.index), EdgeDelta { added: Vec::new(), removed }));
    }

    // Raising the threshold only adds edges: every old edge stays admissible.
    let candidates = admissible_pairs(frame, topo, &config)?;
    let added: Vec<(usize, usize)> = candidates.iter().copied().filter(|&(i, j)| !rin.graph().has_edge(i, j)).collect();
    debug_assert!(candidates.len() == rin.edge_count() + added.len());
    debug_assert!(added.iter().all(|&(i, j)| !config.exclude_backbone_neighbors || !is_backbone_neighbor(topo, i, j)));
    let graph = Graph::from_sorted_pairs(n, &candidates);
    Ok((Rin::new(graph, config, frame.index), EdgeDelta { added, removed: Vec::new() }))
}

/// Rebuilds for a new frame with the same configuration and residue table;
/// node identities are the residue indices and stay stable across frames.
pub fn apply_frame_change(config: &RinConfig, topo: Topology<'_>, new_frame: &Frame) -> Result<Rin> {
    super::build_rin(new_frame, topo, config)
}
