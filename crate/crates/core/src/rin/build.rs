use super::distance::representative_points;
use super::grid::{group_pairs_within, pairs_within};
use super::{DistanceCriterion, Graph, Rin, RinConfig};
use crate::error::{Error, Result};
use crate::trajectory::{Frame, Topology};

pub(crate) fn check_frame(frame: &Frame, topo: Topology<'_>) -> Result<()> {
    if frame.positions.len() != topo.atoms.len() {
        return Err(Error::InconsistentTopology(format!(
            "frame {} has {} atoms, residue table expects {}",
            frame.index,
            frame.positions.len(),
            topo.atoms.len()
        )));
    }
    Ok(())
}

/// Residue pairs `(i, j)`, `i < j`, whose distance under `criterion` is at
/// most `cutoff`, sorted lexicographically. No sequence-neighbor filtering.
pub fn contact_pairs(frame: &Frame, topo: Topology<'_>, criterion: DistanceCriterion, cutoff: f64) -> Result<Vec<(usize, usize)>> {
    check_frame(frame, topo)?;
    match criterion {
        DistanceCriterion::CAlpha | DistanceCriterion::CenterOfMass => {
            let points = representative_points(frame, topo, criterion)?;
            Ok(pairs_within(&points, cutoff))
        }
        DistanceCriterion::MinimumAtomDistance => {
            let group_of: Vec<usize> = topo.atoms.iter().map(|a| a.residue_index).collect();
            Ok(group_pairs_within(&frame.positions, &group_of, cutoff))
        }
    }
}

pub(crate) fn is_backbone_neighbor(topo: Topology<'_>, i: usize, j: usize) -> bool {
    i.abs_diff(j) <= 1 && topo.residues[i].chain_id == topo.residues[j].chain_id
}

pub(crate) fn admissible_pairs(frame: &Frame, topo: Topology<'_>, config: &RinConfig) -> Result<Vec<(usize, usize)>> {
    let mut pairs = contact_pairs(frame, topo, config.criterion, config.cutoff)?;
    if config.exclude_backbone_neighbors {
        pairs.retain(|&(i, j)| !is_backbone_neighbor(topo, i, j));
    }
    Ok(pairs)
}

/// Builds the RIN of `frame`: edge `{i, j}` iff the residue distance is
/// `<= config.cutoff` (and, when requested, `i`/`j` are not sequence
/// neighbors on the same chain). Every residue is a node.
pub fn build_rin(frame: &Frame, topo: Topology<'_>, config: &RinConfig) -> Result<Rin> {
    config.validate()?;
    let pairs = admissible_pairs(frame, topo, config)?;
    Ok(Rin::new(Graph::from_sorted_pairs(topo.residues.len(), &pairs), *config, frame.index))
}
