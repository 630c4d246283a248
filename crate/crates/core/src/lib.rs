//! Residue interaction networks (RINs) built from molecular-dynamics
//! trajectories.
//!
//! The crate is organised along the exploration pipeline:
//!
//! * [`trajectory`]: PDB / JSON ingestion and residue selection.
//! * [`rin`]: per-frame graph construction under a distance criterion and
//!   cut-off, plus incremental updates when the cut-off or frame changes.
//! * [`analytics`]: centralities, community detection, modularity and NMI.
//! * [`layout`]: protein-coordinate and Maxent-Stress 3D layouts.
//! * [`export`]: JSON / GraphML documents for graphs, scores and layouts.
//! * [`synthetic`]: reproducible synthetic proteins for tests and benchmarks.

pub mod analytics;
pub mod error;
pub mod export;
pub mod geometry;
pub mod layout;
pub mod rin;
pub mod synthetic;
pub mod trajectory;

pub use error::{Error, Result};
pub use rin::{DistanceCriterion, EdgeDelta, Graph, Rin, RinConfig};
pub use trajectory::{Atom, Frame, Residue, Trajectory};
