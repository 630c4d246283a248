use tracing::warn;

use super::DistanceCriterion;
use crate::error::{Error, Result};
use crate::geometry::{self, Vec3};
use crate::trajectory::{Frame, Topology};

const DEFAULT_MASS: f64 = 12.011;

/// Standard atomic mass for the elements found in proteins.
pub fn atomic_mass(element: &str) -> Option<f64> {
    match element.to_ascii_uppercase().as_str() {
        "H" | "D" => Some(1.008),
        "C" => Some(12.011),
        "N" => Some(14.007),
        "O" => Some(15.999),
        "S" => Some(32.06),
        _ => None,
    }
}

fn mass_or_default(element: &str) -> (f64, bool) {
    match atomic_mass(element) {
        Some(m) => (m, true),
        None => (DEFAULT_MASS, false),
    }
}

/// Mass-weighted centroid of residue `r`. Unknown elements weigh as carbon.
pub fn center_of_mass(frame: &Frame, topo: Topology<'_>, r: usize) -> Vec3 {
    com_inner(frame, topo, r).0
}

fn com_inner(frame: &Frame, topo: Topology<'_>, r: usize) -> (Vec3, bool) {
    let mut acc = [0.0; 3];
    let mut total = 0.0;
    let mut all_known = true;
    for &a in &topo.residues[r].atom_indices {
        let (m, known) = mass_or_default(&topo.atoms[a].element);
        all_known &= known;
        acc = geometry::add(acc, geometry::scale(frame.positions[a], m));
        total += m;
    }
    (geometry::scale(acc, 1.0 / total), all_known)
}

fn ca_position(frame: &Frame, topo: Topology<'_>, r: usize) -> Result<Vec3> {
    topo.ca_atom(r).map(|a| frame.positions[a]).ok_or(Error::MissingCAlpha { residue: r })
}

/// One point per residue for the point-based criteria (CA position or center
/// of mass). `MinimumAtomDistance` has no representative point and yields an
/// error.
pub fn representative_points(frame: &Frame, topo: Topology<'_>, criterion: DistanceCriterion) -> Result<Vec<Vec3>> {
    let n = topo.residues.len();
    match criterion {
        DistanceCriterion::CAlpha => (0..n).map(|r| ca_position(frame, topo, r)).collect(),
        DistanceCriterion::CenterOfMass => {
            let mut unknown = 0usize;
            let points = (0..n)
                .map(|r| {
                    let (p, known) = com_inner(frame, topo, r);
                    unknown += usize::from(!known);
                    p
                })
                .collect();
            if unknown > 0 {
                warn!(residues = unknown, "unknown element masses, using carbon mass");
            }
            Ok(points)
        }
        DistanceCriterion::MinimumAtomDistance => {
            Err(Error::InvalidConfig("minimum atom distance has no representative point".into()))
        }
    }
}

/// Residue-residue distance in Å under `criterion`. Symmetric in `(i, j)`.
pub fn residue_distance(frame: &Frame, topo: Topology<'_>, i: usize, j: usize, criterion: DistanceCriterion) -> Result<f64> {
    match criterion {
        DistanceCriterion::CAlpha => Ok(geometry::distance(ca_position(frame, topo, i)?, ca_position(frame, topo, j)?)),
        DistanceCriterion::CenterOfMass => {
            Ok(geometry::distance(center_of_mass(frame, topo, i), center_of_mass(frame, topo, j)))
        }
        DistanceCriterion::MinimumAtomDistance => Ok(min_atom_distance(frame, topo, i, j)),
    }
}

pub(crate) fn min_atom_distance(frame: &Frame, topo: Topology<'_>, i: usize, j: usize) -> f64 {
    let mut best = f64::INFINITY;
    for &a in &topo.residues[i].atom_indices {
        for &b in &topo.residues[j].atom_indices {
            best = best.min(geometry::distance(frame.positions[a], frame.positions[b]));
        }
    }
    best
}
