//! Multi-model PDB reader (fixed-column ATOM/HETATM records).

use super::{Atom, Frame, Residue, Trajectory};
use crate::error::{Error, Result};
use crate::geometry::Vec3;

#[derive(Debug, Clone)]
struct AtomRecord {
    line: usize,
    serial: i64,
    name: String,
    element: String,
    res_name: String,
    chain: char,
    res_seq: i32,
    icode: char,
    position: Vec3,
}

impl AtomRecord {
    fn residue_key(&self) -> (char, i32, char, &str) {
        (self.chain, self.res_seq, self.icode, self.res_name.as_str())
    }
}

/// Parses PDB text into a trajectory. `MODEL`/`ENDMDL` delimit frames; a file
/// without `MODEL` records is a single frame. Topology comes from the first
/// model and every later model must repeat its atom list in the same order.
///
/// Alternate locations other than `' '` and `'A'` are skipped.
pub fn parse_pdb(bytes: &[u8]) -> Result<Trajectory> {
    let text = String::from_utf8_lossy(bytes);
    let mut models: Vec<Vec<AtomRecord>> = Vec::new();
    let mut current: Option<Vec<AtomRecord>> = None;
    let mut explicit_models = 0usize;
    let mut fallback_serial = 0i64;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end_matches('\r');
        let record = line.get(..6.min(line.len())).unwrap_or("");
        match record.trim_end() {
            "MODEL" => {
                explicit_models += 1;
                if let Some(prev) = current.take() {
                    models.push(prev);
                }
                current = Some(Vec::new());
            }
            "ENDMDL" => {
                models.push(current.take().unwrap_or_default());
            }
            "ATOM" | "HETATM" => {
                fallback_serial += 1;
                if let Some(rec) = parse_atom_line(line, line_no, fallback_serial)? {
                    current.get_or_insert_with(Vec::new).push(rec);
                }
            }
            _ => {}
        }
    }
    if let Some(last) = current.take() {
        if !last.is_empty() || explicit_models > models.len() {
            models.push(last);
        }
    }
    if models.iter().all(|m| m.is_empty()) {
        return Err(Error::Empty("no ATOM records".into()));
    }

    let first = &models[0];
    let mut residues: Vec<Residue> = Vec::new();
    let mut atoms: Vec<Atom> = Vec::with_capacity(first.len());
    let mut prev_key = None;
    for (a, rec) in first.iter().enumerate() {
        let key = rec.residue_key();
        if prev_key != Some(key) {
            residues.push(Residue {
                index: residues.len(),
                name: rec.res_name.clone(),
                chain_id: rec.chain,
                seq_number: rec.res_seq,
                atom_indices: Vec::new(),
            });
            prev_key = Some(key);
        }
        let r = residues.len() - 1;
        residues[r].atom_indices.push(a);
        atoms.push(Atom { serial: rec.serial, name: rec.name.clone(), element: rec.element.clone(), residue_index: r });
    }

    let mut frames = Vec::with_capacity(models.len());
    for (k, model) in models.iter().enumerate() {
        if model.len() != first.len() {
            return Err(Error::InconsistentTopology(format!(
                "model {} has {} atoms, model 1 has {}",
                k + 1,
                model.len(),
                first.len()
            )));
        }
        if k > 0 {
            for (rec, reference) in model.iter().zip(first) {
                if rec.name != reference.name || rec.residue_key() != reference.residue_key() {
                    return Err(Error::InconsistentTopology(format!(
                        "line {}: atom {} {}{} does not match model 1 ({} {}{})",
                        rec.line, rec.name, rec.res_name, rec.res_seq, reference.name, reference.res_name, reference.res_seq
                    )));
                }
            }
        }
        frames.push(Frame { index: k, positions: model.iter().map(|r| r.position).collect() });
    }

    Trajectory::new(residues, atoms, frames, "")
}

fn column(line: &str, from: usize, to: usize) -> &str {
    // 1-based inclusive PDB columns
    let end = to.min(line.len());
    line.get(from - 1..end).unwrap_or("")
}

fn parse_atom_line(line: &str, line_no: usize, fallback_serial: i64) -> Result<Option<AtomRecord>> {
    let malformed = |reason: String| Error::MalformedRecord { line: line_no, reason };
    if !line.is_ascii() {
        return Err(malformed("non-ASCII characters in coordinate record".into()));
    }
    if line.len() < 54 {
        return Err(malformed(format!("record has {} columns, coordinates need 54", line.len())));
    }
    let alt_loc = line.as_bytes()[16] as char;
    if alt_loc != ' ' && alt_loc != 'A' {
        return Ok(None);
    }
    let coord = |from, to, axis: &str| -> Result<f64> {
        let field = column(line, from, to).trim();
        field
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| malformed(format!("bad {axis} coordinate {field:?}")))
    };
    let position = [coord(31, 38, "x")?, coord(39, 46, "y")?, coord(47, 54, "z")?];

    let name = column(line, 13, 16).trim().to_string();
    if name.is_empty() {
        return Err(malformed("empty atom name".into()));
    }
    let res_name = column(line, 18, 20).trim().to_string();
    let seq_field = column(line, 23, 26).trim();
    let res_seq = seq_field.parse::<i32>().map_err(|_| malformed(format!("bad residue sequence number {seq_field:?}")))?;
    let chain = line.as_bytes()[21] as char;
    let icode = line.as_bytes()[26] as char;
    // Large files overflow the serial column; fall back to record order.
    let serial = column(line, 7, 11).trim().parse::<i64>().unwrap_or(fallback_serial);
    let element = match column(line, 77, 78).trim() {
        "" => infer_element(&name),
        e => normalize_element(e),
    };

    Ok(Some(AtomRecord { line: line_no, serial, name, element, res_name, chain, res_seq, icode, position }))
}

fn normalize_element(e: &str) -> String {
    let mut chars = e.chars();
    match chars.next() {
        Some(first) => first.to_ascii_uppercase().to_string() + &chars.as_str().to_ascii_lowercase(),
        None => String::new(),
    }
}

fn infer_element(name: &str) -> String {
    name.chars().find(|c| c.is_ascii_alphabetic()).map(|c| c.to_ascii_uppercase().to_string()).unwrap_or_default()
}
