//! 3D node coordinates: the protein layout (CA positions) and the
//! Maxent-Stress layout.

mod maxent;
mod repulsion;

pub use maxent::{maxent_stress_layout, stress_energy, stress_term, MaxentReport, MaxentSolver, EXACT_ENTROPY_LIMIT};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::trajectory::{Frame, Topology};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LayoutKind {
    Protein,
    MaxentStress,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layout3D {
    pub kind: LayoutKind,
    pub coords: Vec<Vec3>,
}

impl Layout3D {
    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
}

/// Solver knobs for [`maxent_stress_layout`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LayoutParams {
    pub target_edge_length: f64,
    pub alpha_init: f64,
    pub alpha_decay: f64,
    pub alpha_min: f64,
    pub max_rounds: usize,
    /// Stop once the mean node movement of a round, relative to the target
    /// edge length, drops below this.
    pub tol: f64,
    pub seed: u64,
    /// Repulsion exponent; only the logarithmic case `q = 0` is supported.
    pub q: f64,
}

impl Default for LayoutParams {
    fn default() -> Self {
        Self { target_edge_length: 1.0, alpha_init: 1.0, alpha_decay: 0.3, alpha_min: 0.008, max_rounds: 50, tol: 1e-3, seed: 0, q: 0.0 }
    }
}

impl LayoutParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidConfig(format!("layout parameter {what}")));
        if !(self.target_edge_length > 0.0 && self.target_edge_length.is_finite()) {
            return bad("target_edge_length must be positive");
        }
        if !(self.alpha_decay > 0.0 && self.alpha_decay < 1.0) {
            return bad("alpha_decay must lie in (0, 1)");
        }
        if !(self.alpha_init >= 0.0 && self.alpha_min >= 0.0) {
            return bad("alpha values must be non-negative");
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return bad("tol must be positive");
        }
        if self.max_rounds < 1 {
            return bad("max_rounds must be at least 1");
        }
        if self.q != 0.0 {
            return bad("q other than 0 is not supported");
        }
        Ok(())
    }
}

/// Node `i` placed at the CA atom of residue `i` (Å).
pub fn protein_layout(frame: &Frame, topo: Topology<'_>) -> Result<Layout3D> {
    let coords = (0..topo.residues.len())
        .map(|r| topo.ca_atom(r).map(|a| frame.positions[a]).ok_or(Error::MissingCAlpha { residue: r }))
        .collect::<Result<Vec<_>>>()?;
    Ok(Layout3D { kind: LayoutKind::Protein, coords })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trajectory::{Atom, Residue, Trajectory};

    fn two_residues(second_name: &str) -> Trajectory {
        let atoms = vec![
            Atom { serial: 1, name: "N".into(), element: "N".into(), residue_index: 0 },
            Atom { serial: 2, name: "CA".into(), element: "C".into(), residue_index: 0 },
            Atom { serial: 3, name: second_name.into(), element: "C".into(), residue_index: 1 },
        ];
        let residues = vec![
            Residue { index: 0, name: "ALA".into(), chain_id: 'A', seq_number: 1, atom_indices: vec![0, 1] },
            Residue { index: 1, name: "GLY".into(), chain_id: 'A', seq_number: 2, atom_indices: vec![2] },
        ];
        let positions = vec![[0.0, 0.0, 0.0], [1.0, 2.0, 3.0], [4.0, 5.0, 6.0]];
        Trajectory::new(residues, atoms, vec![Frame { index: 0, positions }], "").unwrap()
    }

    #[test]
    fn protein_layout_uses_ca() {
        let t = two_residues("CA");
        let layout = protein_layout(&t.frames()[0], t.topology()).unwrap();
        assert_eq!(layout.kind, LayoutKind::Protein);
        assert_eq!(layout.coords, vec![[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]);
    }

    #[test]
    fn protein_layout_translates_with_frame() {
        let t = two_residues("CA");
        let shifted = Frame { index: 1, positions: t.frames()[0].positions.iter().map(|p| [p[0] + 1.0, p[1] - 2.0, p[2]]).collect() };
        let a = protein_layout(&t.frames()[0], t.topology()).unwrap();
        let b = protein_layout(&shifted, t.topology()).unwrap();
        for (p, q) in a.coords.iter().zip(&b.coords) {
            assert_eq!([p[0] + 1.0, p[1] - 2.0, p[2]], *q);
        }
    }

    #[test]
    fn protein_layout_requires_ca() {
        let t = two_residues("CB");
        assert!(matches!(protein_layout(&t.frames()[0], t.topology()), Err(Error::MissingCAlpha { residue: 1 })));
    }

    #[test]
    fn params_validation() {
        assert!(LayoutParams::default().validate().is_ok());
        assert!(LayoutParams { alpha_decay: 1.0, ..Default::default() }.validate().is_err());
        assert!(LayoutParams { max_rounds: 0, ..Default::default() }.validate().is_err());
        assert!(LayoutParams { q: 0.5, ..Default::default() }.validate().is_err());
    }
}
