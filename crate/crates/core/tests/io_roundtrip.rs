use std::fmt::Write;

use rinx_core::export::{graph_from_json, graph_to_graphml, graph_to_json, layout_from_json, layout_to_json};
use rinx_core::layout::{maxent_stress_layout, LayoutParams};
use rinx_core::rin::build_rin;
use rinx_core::synthetic::{helix_bundle, lattice_protein};
use rinx_core::trajectory::{parse_pdb, parse_traj_json, select_protein_residues, write_traj_json};
use rinx_core::{DistanceCriterion, RinConfig, Trajectory};

fn to_pdb(traj: &Trajectory) -> String {
    let mut out = String::new();
    for frame in traj.frames() {
        writeln!(out, "MODEL     {:>4}", frame.index + 1).unwrap();
        for (a, atom) in traj.atoms().iter().enumerate() {
            let res = &traj.residues()[atom.residue_index];
            let name = if atom.name.len() < 4 { format!(" {:<3}", atom.name) } else { atom.name.clone() };
            let [x, y, z] = frame.positions[a];
            writeln!(
                out,
                "ATOM  {:>5} {name} {:>3} {}{:>4}    {x:>8.3}{y:>8.3}{z:>8.3}  1.00  0.00          {:>2}",
                atom.serial, res.name, res.chain_id, res.seq_number, atom.element
            )
            .unwrap();
        }
        out.push_str("ENDMDL\n");
    }
    out.push_str("END\n");
    out
}

#[test]
fn pdb_json_round_trip() {
    let original = lattice_protein(40, 4, 0.5, 12).unwrap();
    let from_pdb = parse_pdb(to_pdb(&original).as_bytes()).unwrap();
    assert_eq!(from_pdb.frame_count(), 4);
    assert_eq!(from_pdb.residue_count(), 40);
    assert!(from_pdb.approx_eq(&original, 5.1e-4));
    let json = write_traj_json(&from_pdb);
    let back = parse_traj_json(json.as_bytes()).unwrap();
    assert!(back.approx_eq(&from_pdb, 1e-6));
    assert_eq!(write_traj_json(&back), json);
}

#[test]
fn selection_keeps_protein_from_pdb() {
    let bundle = helix_bundle(2, 0.2, 3).unwrap();
    let mut pdb = to_pdb(&bundle);
    // a water after the protein in every model
    pdb = pdb.replace(
        "ENDMDL",
        "HETATM 9999  O   HOH W   1      30.000  30.000  30.000  1.00  0.00           O\nENDMDL",
    );
    let parsed = parse_pdb(pdb.as_bytes()).unwrap();
    assert_eq!(parsed.residue_count(), bundle.residue_count() + 1);
    let protein = select_protein_residues(&parsed, false).unwrap();
    assert_eq!(protein.residue_count(), bundle.residue_count());
    assert!(protein.approx_eq(&bundle, 5.1e-4));
}

#[test]
fn exported_documents_round_trip() {
    let traj = lattice_protein(80, 1, 0.4, 5).unwrap();
    let rin = build_rin(traj.frame(0).unwrap(), traj.topology(), &RinConfig::new(DistanceCriterion::MinimumAtomDistance, 4.5)).unwrap();
    let json = graph_to_json(&rin);
    assert_eq!(graph_from_json(json.as_bytes()).unwrap(), rin);
    assert_eq!(graph_to_json(&rin), json);

    let xml = graph_to_graphml(&rin);
    let doc = roxmltree::Document::parse(&xml).unwrap();
    assert_eq!(doc.descendants().filter(|n| n.has_tag_name("node")).count(), 80);
    assert_eq!(doc.descendants().filter(|n| n.has_tag_name("edge")).count(), rin.edge_count());

    let params = LayoutParams::default();
    let (layout, _) = maxent_stress_layout(rin.graph(), &params, None).unwrap();
    let doc = layout_to_json(&layout, Some(&params));
    assert_eq!(layout_from_json(doc.as_bytes()).unwrap(), layout);
}
