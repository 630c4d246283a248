//! In-memory trajectories: a shared residue/atom topology plus one
//! coordinate array per frame.

mod json;
mod pdb;
mod select;

pub use json::{parse_traj_json, write_traj_json};
pub use pdb::parse_pdb;
pub use select::{is_standard_amino_acid, select_protein_residues, select_residues, SelectOptions, STANDARD_AMINO_ACIDS};

use crate::error::{Error, Result};
use crate::geometry::{self, Vec3};

/// Topology entry for one atom. Coordinates live in [`Frame`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub serial: i64,
    pub name: String,
    pub element: String,
    pub residue_index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Residue {
    pub index: usize,
    pub name: String,
    pub chain_id: char,
    pub seq_number: i32,
    pub atom_indices: Vec<usize>,
}

/// Atom coordinates (Å) of one snapshot, indexed like [`Trajectory::atoms`].
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub index: usize,
    pub positions: Vec<Vec3>,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    residues: Vec<Residue>,
    atoms: Vec<Atom>,
    frames: Vec<Frame>,
    source_path: String,
}

impl Trajectory {
    /// Assembles a trajectory and checks the topology invariants: at least one
    /// residue and frame, every atom owned by exactly one residue, strictly
    /// increasing atom indices per residue, equal atom counts and finite
    /// coordinates in every frame.
    pub fn new(residues: Vec<Residue>, atoms: Vec<Atom>, frames: Vec<Frame>, source_path: impl Into<String>) -> Result<Self> {
        if residues.is_empty() {
            return Err(Error::Empty("trajectory has no residues".into()));
        }
        if frames.is_empty() {
            return Err(Error::Empty("trajectory has no frames".into()));
        }
        let mut owner = vec![usize::MAX; atoms.len()];
        for (r, res) in residues.iter().enumerate() {
            if res.index != r {
                return Err(Error::InconsistentTopology(format!("residue {r} carries index {}", res.index)));
            }
            if res.atom_indices.is_empty() {
                return Err(Error::InconsistentTopology(format!("residue {r} has no atoms")));
            }
            if res.atom_indices.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InconsistentTopology(format!("residue {r} atom indices not strictly increasing")));
            }
            for &a in &res.atom_indices {
                let slot = owner.get_mut(a).ok_or_else(|| Error::InconsistentTopology(format!("residue {r} references missing atom {a}")))?;
                if *slot != usize::MAX {
                    return Err(Error::InconsistentTopology(format!("atom {a} belongs to residues {} and {r}", *slot)));
                }
                *slot = r;
            }
        }
        for (a, (atom, &r)) in atoms.iter().zip(&owner).enumerate() {
            if r == usize::MAX {
                return Err(Error::InconsistentTopology(format!("atom {a} belongs to no residue")));
            }
            if atom.residue_index != r {
                return Err(Error::InconsistentTopology(format!("atom {a} points at residue {} but is listed by {r}", atom.residue_index)));
            }
        }
        for (k, frame) in frames.iter().enumerate() {
            if frame.positions.len() != atoms.len() {
                return Err(Error::InconsistentTopology(format!(
                    "frame {k} has {} atoms, topology has {}",
                    frame.positions.len(),
                    atoms.len()
                )));
            }
            if let Some(a) = frame.positions.iter().position(|p| !geometry::is_finite(*p)) {
                return Err(Error::InconsistentTopology(format!("frame {k} atom {a} has non-finite coordinates")));
            }
        }
        Ok(Self { residues, atoms, frames, source_path: source_path.into() })
    }

    pub fn residues(&self) -> &[Residue] {
        &self.residues
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn frame(&self, index: usize) -> Option<&Frame> {
        self.frames.get(index)
    }

    pub fn frame_count(&self) -> usize {
        self.frames.len()
    }

    pub fn residue_count(&self) -> usize {
        self.residues.len()
    }

    pub fn source_path(&self) -> &str {
        &self.source_path
    }

    pub fn with_source_path(mut self, path: impl Into<String>) -> Self {
        self.source_path = path.into();
        self
    }

    /// Borrowed view of the topology, which is what the graph and layout
    /// code needs alongside a frame.
    pub fn topology(&self) -> Topology<'_> {
        Topology { residues: &self.residues, atoms: &self.atoms }
    }

    /// Same topology and coordinates within `tol` Å.
    pub fn approx_eq(&self, other: &Trajectory, tol: f64) -> bool {
        self.residues == other.residues
            && self.atoms.len() == other.atoms.len()
            && self.atoms.iter().zip(&other.atoms).all(|(a, b)| a.name == b.name && a.element == b.element && a.residue_index == b.residue_index)
            && self.frames.len() == other.frames.len()
            && self.frames.iter().zip(&other.frames).all(|(f, g)| {
                f.positions.iter().zip(&g.positions).all(|(p, q)| (0..3).all(|k| (p[k] - q[k]).abs() <= tol))
            })
    }
}

/// Residue table plus atom records shared by all frames.
#[derive(Debug, Clone, Copy)]
pub struct Topology<'a> {
    pub residues: &'a [Residue],
    pub atoms: &'a [Atom],
}

impl<'a> Topology<'a> {
    /// Index of the atom named `CA` in residue `r`.
    pub fn ca_atom(&self, r: usize) -> Option<usize> {
        self.residues[r].atom_indices.iter().copied().find(|&a| self.atoms[a].name == "CA")
    }
}
