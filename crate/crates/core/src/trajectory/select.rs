use super::{Atom, Frame, Residue, Trajectory};
use crate::error::{Error, Result};

pub const STANDARD_AMINO_ACIDS: [&str; 20] = [
    "ALA", "ARG", "ASN", "ASP", "CYS", "GLN", "GLU", "GLY", "HIS", "ILE", "LEU", "LYS", "MET", "PHE", "PRO", "SER", "THR", "TRP", "TYR", "VAL",
];

pub fn is_standard_amino_acid(code: &str) -> bool {
    STANDARD_AMINO_ACIDS.contains(&code)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SelectOptions {
    pub include_hydrogens: bool,
    /// Keep any residue that has a CA atom, not only the 20 standard codes.
    pub permissive: bool,
}

fn is_hydrogen(atom: &Atom) -> bool {
    matches!(atom.element.as_str(), "H" | "D")
}

/// Keeps only standard amino-acid residues; drops hydrogens unless asked not to.
pub fn select_protein_residues(traj: &Trajectory, include_hydrogens: bool) -> Result<Trajectory> {
    select_residues(traj, &SelectOptions { include_hydrogens, permissive: false })
}

pub fn select_residues(traj: &Trajectory, opts: &SelectOptions) -> Result<Trajectory> {
    let topo = traj.topology();
    let mut residues = Vec::new();
    let mut atoms = Vec::new();
    let mut kept_atoms = Vec::new();

    for (r, res) in traj.residues().iter().enumerate() {
        let keep = is_standard_amino_acid(&res.name) || (opts.permissive && topo.ca_atom(r).is_some());
        if !keep {
            continue;
        }
        let new_index = residues.len();
        let mut atom_indices = Vec::new();
        for &a in &res.atom_indices {
            let atom = &traj.atoms()[a];
            if !opts.include_hydrogens && is_hydrogen(atom) {
                continue;
            }
            atom_indices.push(atoms.len());
            atoms.push(Atom { residue_index: new_index, ..atom.clone() });
            kept_atoms.push(a);
        }
        if atom_indices.is_empty() {
            continue;
        }
        residues.push(Residue { index: new_index, atom_indices, ..res.clone() });
    }
    if residues.is_empty() {
        return Err(Error::Empty("no amino-acid residues selected".into()));
    }

    let frames = traj
        .frames()
        .iter()
        .map(|f| Frame { index: f.index, positions: kept_atoms.iter().map(|&a| f.positions[a]).collect() })
        .collect();
    Trajectory::new(residues, atoms, frames, traj.source_path())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residue(index: usize, name: &str, atom_names: &[(&str, &str)], atoms: &mut Vec<Atom>) -> Residue {
        let start = atoms.len();
        for (n, e) in atom_names {
            atoms.push(Atom { serial: atoms.len() as i64 + 1, name: n.to_string(), element: e.to_string(), residue_index: index });
        }
        Residue { index, name: name.into(), chain_id: 'A', seq_number: index as i32 + 1, atom_indices: (start..atoms.len()).collect() }
    }

    fn build(specs: &[(&str, &[(&str, &str)])]) -> Trajectory {
        let mut atoms = Vec::new();
        let residues: Vec<_> = specs.iter().enumerate().map(|(i, (n, a))| residue(i, n, a, &mut atoms)).collect();
        let positions = (0..atoms.len()).map(|i| [i as f64, 0.0, 0.0]).collect();
        Trajectory::new(residues, atoms, vec![Frame { index: 0, positions }], "t").unwrap()
    }

    #[test]
    fn keeps_amino_acids_only() {
        let water: (&str, &[(&str, &str)]) = ("HOH", &[("O", "O"), ("H1", "H"), ("H2", "H")]);
        let ala: (&str, &[(&str, &str)]) = ("ALA", &[("CA", "C")]);
        // 73 amino acids with 200 waters spread between them
        let specs: Vec<_> = (0..273).map(|i| if i % 3 == 0 && i < 219 { ala } else { water }).collect();
        assert_eq!(specs.iter().filter(|s| s.0 == "ALA").count(), 73);
        let traj = build(&specs);
        let sel = select_protein_residues(&traj, false).unwrap();
        assert_eq!(sel.residue_count(), 73);
        assert!(sel.residues().iter().enumerate().all(|(i, r)| r.index == i && r.name == "ALA"));
    }

    #[test]
    fn drops_hydrogens_by_default() {
        let traj = build(&[("GLY", &[("N", "N"), ("CA", "C"), ("C", "C"), ("O", "O"), ("H", "H")])]);
        let sel = select_protein_residues(&traj, false).unwrap();
        assert_eq!(sel.atoms().len(), 4);
        assert_eq!(sel.frames()[0].positions[3], [3.0, 0.0, 0.0]);
        assert_eq!(select_protein_residues(&traj, true).unwrap().atoms().len(), 5);
    }

    #[test]
    fn only_water_is_empty() {
        let traj = build(&[("HOH", &[("O", "O")]), ("HOH", &[("O", "O")])]);
        assert!(matches!(select_protein_residues(&traj, false), Err(Error::Empty(_))));
    }

    #[test]
    fn permissive_keeps_modified_residues_with_ca() {
        let traj = build(&[("MSE", &[("CA", "C")]), ("ALA", &[("CA", "C")]), ("LIG", &[("C1", "C")])]);
        assert_eq!(select_protein_residues(&traj, false).unwrap().residue_count(), 1);
        let sel = select_residues(&traj, &SelectOptions { include_hydrogens: false, permissive: true }).unwrap();
        assert_eq!(sel.residue_count(), 2);
    }

    #[test]
    fn selection_is_idempotent() {
        let traj = build(&[("HOH", &[("O", "O")]), ("GLY", &[("CA", "C"), ("HA", "H")]), ("LYS", &[("CA", "C"), ("NZ", "N")])]);
        let once = select_protein_residues(&traj, false).unwrap();
        let twice = select_protein_residues(&once, false).unwrap();
        assert!(once.approx_eq(&twice, 0.0));
    }
}
