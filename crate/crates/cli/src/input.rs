use std::path::Path;
use std::str::FromStr;

use rinx_core::trajectory::{parse_pdb, parse_traj_json, select_protein_residues};
use rinx_core::{Error, Result, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Pdb,
    Json,
}

impl FromStr for InputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pdb" => Ok(Self::Pdb),
            "json" => Ok(Self::Json),
            other => Err(Error::InvalidConfig(format!("unknown input format {other:?}"))),
        }
    }
}

impl InputFormat {
    /// `.json` means trajectory JSON, anything else PDB.
    pub fn guess(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Self::Json,
            _ => Self::Pdb,
        }
    }
}

/// Reads a trajectory and keeps its protein residues.
pub fn load_trajectory(path: &Path, format: Option<InputFormat>) -> Result<Trajectory> {
    let bytes = std::fs::read(path)?;
    let traj = match format.unwrap_or_else(|| InputFormat::guess(path)) {
        InputFormat::Pdb => parse_pdb(&bytes)?,
        InputFormat::Json => parse_traj_json(&bytes)?,
    };
    select_protein_residues(&traj.with_source_path(path.display().to_string()), false)
}

/// Comma-separated list, e.g. `4.5,6,8.5`.
pub fn parse_list<T: FromStr>(text: &str) -> std::result::Result<Vec<T>, T::Err> {
    text.split(',').map(str::trim).filter(|s| !s.is_empty()).map(T::from_str).collect()
}
