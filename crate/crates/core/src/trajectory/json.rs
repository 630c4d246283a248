//! Compact JSON interchange format:
//!
//! ```json
//! {"residues": [{"name": "ALA", "chain": "A", "seq": 1,
//!                "atoms": [{"name": "CA", "element": "C"}]}],
//!  "frames": [[[x, y, z], ...], ...]}
//! ```
//!
//! Atoms are listed residue by residue; each frame holds one coordinate
//! triple (Å) per atom in that order.

use serde::{Deserialize, Serialize};

use super::{Atom, Frame, Residue, Trajectory};
use crate::error::{Error, Result};
use crate::geometry::Vec3;

#[derive(Debug, Serialize, Deserialize)]
struct TrajectoryDoc {
    residues: Vec<ResidueDoc>,
    frames: Vec<Vec<Vec3>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ResidueDoc {
    name: String,
    chain: String,
    seq: i32,
    atoms: Vec<AtomDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct AtomDoc {
    name: String,
    element: String,
}

fn violation(path: impl Into<String>, reason: impl Into<String>) -> Error {
    Error::SchemaViolation { path: path.into(), reason: reason.into() }
}

pub fn parse_traj_json(bytes: &[u8]) -> Result<Trajectory> {
    let de = &mut serde_json::Deserializer::from_slice(bytes);
    let doc: TrajectoryDoc = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        violation(path, e.into_inner().to_string())
    })?;

    if doc.residues.is_empty() {
        return Err(violation("residues", "empty: at least one residue required"));
    }
    if doc.frames.is_empty() {
        return Err(violation("frames", "empty: at least one frame required"));
    }

    let mut residues = Vec::with_capacity(doc.residues.len());
    let mut atoms = Vec::new();
    for (r, res) in doc.residues.into_iter().enumerate() {
        let mut chain = res.chain.chars();
        let chain_id = match (chain.next(), chain.next()) {
            (Some(c), None) => c,
            _ => return Err(violation(format!("residues[{r}].chain"), "expected a single character")),
        };
        if res.atoms.is_empty() {
            return Err(violation(format!("residues[{r}].atoms"), "empty: every residue needs atoms"));
        }
        let start = atoms.len();
        for atom in res.atoms {
            atoms.push(Atom { serial: atoms.len() as i64 + 1, name: atom.name, element: atom.element, residue_index: r });
        }
        residues.push(Residue { index: r, name: res.name, chain_id, seq_number: res.seq, atom_indices: (start..atoms.len()).collect() });
    }

    let mut frames = Vec::with_capacity(doc.frames.len());
    for (k, positions) in doc.frames.into_iter().enumerate() {
        if positions.len() != atoms.len() {
            return Err(violation(
                format!("frames[{k}]"),
                format!("{} coordinates, topology has {} atoms", positions.len(), atoms.len()),
            ));
        }
        frames.push(Frame { index: k, positions });
    }

    Trajectory::new(residues, atoms, frames, "")
}

/// Serialises `traj` in the interchange format. Residue atom lists are written
/// in topology order, so a trajectory whose residues own contiguous atom
/// ranges (anything produced by the parsers) round-trips exactly.
pub fn write_traj_json(traj: &Trajectory) -> String {
    let doc = TrajectoryDoc {
        residues: traj
            .residues()
            .iter()
            .map(|res| ResidueDoc {
                name: res.name.clone(),
                chain: res.chain_id.to_string(),
                seq: res.seq_number,
                atoms: res
                    .atom_indices
                    .iter()
                    .map(|&a| AtomDoc { name: traj.atoms()[a].name.clone(), element: traj.atoms()[a].element.clone() })
                    .collect(),
            })
            .collect(),
        frames: traj
            .frames()
            .iter()
            .map(|f| traj.residues().iter().flat_map(|res| res.atom_indices.iter().map(|&a| f.positions[a])).collect())
            .collect(),
    };
    serde_json::to_string(&doc).expect("trajectory document is always serialisable")
}
