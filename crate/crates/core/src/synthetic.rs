//! Seeded synthetic proteins for tests and benchmarks: a compact lattice
//! chain of arbitrary length and a three-helix bundle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, UnitSphere};

use crate::error::{Error, Result};
use crate::geometry::{self, Vec3};
use crate::trajectory::{Atom, Frame, Residue, Trajectory};

/// Distance between consecutive Cα atoms.
pub const CA_SPACING: f64 = 3.8;

const LATTICE_NAMES: [&str; 8] = ["ALA", "LEU", "GLU", "LYS", "SER", "VAL", "ASP", "ILE"];

#[derive(Default)]
struct Builder {
    residues: Vec<Residue>,
    atoms: Vec<Atom>,
    positions: Vec<Vec3>,
}

impl Builder {
    fn push_residue(&mut self, name: &str, chain: char, atoms: &[(&str, Vec3)]) {
        let index = self.residues.len();
        let first = self.atoms.len();
        for (name, pos) in atoms {
            self.atoms.push(Atom {
                serial: self.atoms.len() as i64 + 1,
                name: (*name).to_string(),
                element: name[..1].to_string(),
                residue_index: index,
            });
            self.positions.push(*pos);
        }
        self.residues.push(Residue {
            index,
            name: name.to_string(),
            chain_id: chain,
            seq_number: index as i32 + 1,
            atom_indices: (first..self.atoms.len()).collect(),
        });
    }

    /// Frame 0 is the reference structure. Later frames displace every residue
    /// rigidly by N(0, σ²) per axis and every atom by a further N(0, (σ/3)²).
    fn finish(self, frames: usize, sigma: f64, rng: &mut ChaCha8Rng, source: &str) -> Result<Trajectory> {
        if frames == 0 {
            return Err(Error::InvalidConfig("at least one frame is required".into()));
        }
        let coarse = Normal::new(0.0, sigma.max(0.0)).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        let fine = Normal::new(0.0, sigma.max(0.0) / 3.0).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        let mut out = vec![Frame { index: 0, positions: self.positions.clone() }];
        for k in 1..frames {
            let mut positions = self.positions.clone();
            for res in &self.residues {
                let shift = [coarse.sample(rng), coarse.sample(rng), coarse.sample(rng)];
                for &a in &res.atom_indices {
                    let jitter = [fine.sample(rng), fine.sample(rng), fine.sample(rng)];
                    positions[a] = geometry::add(geometry::add(positions[a], shift), jitter);
                }
            }
            out.push(Frame { index: k, positions });
        }
        Trajectory::new(self.residues, self.atoms, out, source)
    }
}

fn unit(v: Vec3) -> Vec3 {
    geometry::scale(v, 1.0 / geometry::norm(v))
}

fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Heavy atoms around a Cα given the chain direction `t` and a side-chain
/// direction `u` (both unit, roughly orthogonal).
fn residue_atoms(ca: Vec3, t: Vec3, u: Vec3, glycine: bool) -> Vec<(&'static str, Vec3)> {
    let n = geometry::add(ca, geometry::scale(unit(geometry::add(geometry::scale(t, -1.0), geometry::scale(u, -0.6))), 1.46));
    let c = geometry::add(ca, geometry::scale(unit(geometry::add(t, geometry::scale(u, -0.6))), 1.52));
    let w = unit(cross(t, u));
    let o = geometry::add(c, geometry::scale(w, 1.23));
    let mut atoms = vec![("N", n), ("CA", ca), ("C", c), ("O", o)];
    if !glycine {
        atoms.push(("CB", geometry::add(ca, geometry::scale(u, 1.53))));
        atoms.push(("CG", geometry::add(ca, geometry::scale(u, 2.9))));
    }
    atoms
}

fn orthogonal_to(t: Vec3, rng: &mut ChaCha8Rng) -> Vec3 {
    loop {
        let r: [f64; 3] = UnitSphere.sample(rng);
        let along = r[0] * t[0] + r[1] * t[1] + r[2] * t[2];
        let v = geometry::sub(r, geometry::scale(t, along));
        if geometry::norm(v) > 0.3 {
            return unit(v);
        }
    }
}

/// Boustrophedon walk through an s×s×s cube so that consecutive points are
/// lattice neighbours.
fn serpentine(n: usize) -> Vec<[i64; 3]> {
    let side = (1..).find(|s: &usize| s * s * s >= n).unwrap_or(1) as i64;
    let mut out = Vec::with_capacity(n);
    'outer: for z in 0..side {
        for yi in 0..side {
            let y = if z % 2 == 0 { yi } else { side - 1 - yi };
            for xi in 0..side {
                let row = z * side + yi;
                let x = if row % 2 == 0 { xi } else { side - 1 - xi };
                out.push([x, y, z]);
                if out.len() == n {
                    break 'outer;
                }
            }
        }
    }
    out
}

/// Compact globule of `n_residues` on a cubic lattice of spacing
/// [`CA_SPACING`] with Cα jitter of 0.3 Å, backbone N/C/O and two side-chain
/// atoms. Frames follow the thermal model described on `Builder::finish`.
pub fn lattice_protein(n_residues: usize, frames: usize, sigma: f64, seed: u64) -> Result<Trajectory> {
    if n_residues == 0 {
        return Err(Error::InvalidConfig("at least one residue is required".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cas: Vec<Vec3> = serpentine(n_residues)
        .into_iter()
        .map(|p| {
            let mut ca = [p[0] as f64 * CA_SPACING, p[1] as f64 * CA_SPACING, p[2] as f64 * CA_SPACING];
            for c in &mut ca {
                *c += rng.random_range(-0.3..0.3);
            }
            ca
        })
        .collect();
    let mut builder = Builder::default();
    for i in 0..n_residues {
        let t = match (i.checked_sub(1), cas.get(i + 1)) {
            (_, Some(next)) if n_residues > 1 => unit(geometry::sub(*next, cas[i])),
            (Some(prev), _) => unit(geometry::sub(cas[i], cas[prev])),
            _ => [1.0, 0.0, 0.0],
        };
        let u = orthogonal_to(t, &mut rng);
        let name = LATTICE_NAMES[rng.random_range(0..LATTICE_NAMES.len())];
        builder.push_residue(name, 'A', &residue_atoms(cas[i], t, u, false));
    }
    builder.finish(frames, sigma, &mut rng, &format!("synthetic:lattice-{n_residues}"))
}

/// Segment lengths of the bundle: helix, loop, helix, loop, helix.
pub const BUNDLE_SEGMENTS: [usize; 5] = [22, 3, 23, 3, 22];

const HELIX_RADIUS: f64 = 2.3;
const HELIX_RISE: f64 = 1.5;
const HELIX_TWIST_DEG: f64 = 100.0;
const AXIS_SEPARATION: f64 = 10.0;
const HEPTAD: [&str; 7] = ["LEU", "GLU", "ALA", "ILE", "LYS", "GLU", "ALA"];

/// Antiparallel three-helix bundle (73 residues by default) with helix axes
/// on an equilateral triangle and short glycine-rich loops.
pub fn helix_bundle(frames: usize, sigma: f64, seed: u64) -> Result<Trajectory> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = AXIS_SEPARATION / 2.0;
    let axes: [[f64; 2]; 3] = [[-half, 0.0], [half, 0.0], [0.0, AXIS_SEPARATION * 3f64.sqrt() / 2.0]];
    let centre = [0.0, AXIS_SEPARATION * 3f64.sqrt() / 6.0];
    let helix_lengths = [BUNDLE_SEGMENTS[0], BUNDLE_SEGMENTS[2], BUNDLE_SEGMENTS[4]];
    let height = helix_lengths.iter().copied().max().unwrap_or(0) as f64 * HELIX_RISE;

    let mut helices: Vec<Vec<(Vec3, Vec3, Vec3)>> = Vec::new();
    for (h, &len) in helix_lengths.iter().enumerate() {
        let up = h % 2 == 0;
        let mut res = Vec::with_capacity(len);
        for k in 0..len {
            let theta = (k as f64 * HELIX_TWIST_DEG).to_radians();
            let z = if up { k as f64 * HELIX_RISE } else { height - k as f64 * HELIX_RISE };
            let radial = [theta.cos(), theta.sin(), 0.0];
            let ca = [axes[h][0] + HELIX_RADIUS * radial[0], axes[h][1] + HELIX_RADIUS * radial[1], z];
            let tangent = unit([-theta.sin() * HELIX_RADIUS, theta.cos() * HELIX_RADIUS, if up { 1.0 } else { -1.0 } * HELIX_RISE]);
            res.push((ca, tangent, radial));
        }
        helices.push(res);
    }

    let mut builder = Builder::default();
    let mut heptad = 0usize;
    for (h, helix) in helices.iter().enumerate() {
        for &(ca, t, u) in helix {
            builder.push_residue(HEPTAD[heptad % HEPTAD.len()], 'A', &residue_atoms(ca, t, u, false));
            heptad += 1;
        }
        let Some(next) = helices.get(h + 1) else { break };
        let loop_len = BUNDLE_SEGMENTS[2 * h + 1];
        let start = helix[helix.len() - 1].0;
        let end = next[0].0;
        let mid = geometry::scale(geometry::add(start, end), 0.5);
        let outward = unit([mid[0] - centre[0], mid[1] - centre[1], 0.0]);
        let cap = [0.0, 0.0, if h % 2 == 0 { 1.0 } else { -1.0 }];
        for k in 1..=loop_len {
            let s = k as f64 / (loop_len + 1) as f64;
            let bulge = 4.0 * s * (1.0 - s);
            let ca = geometry::add(
                geometry::add(start, geometry::scale(geometry::sub(end, start), s)),
                geometry::add(geometry::scale(outward, 2.0 * bulge), geometry::scale(cap, 2.5 * bulge)),
            );
            let t = unit(geometry::sub(end, start));
            let u = orthogonal_to(t, &mut rng);
            let name = if k == 2 { "PRO" } else { "GLY" };
            builder.push_residue(name, 'A', &residue_atoms(ca, t, u, name == "GLY"));
            heptad = 0;
        }
    }
    builder.finish(frames, sigma, &mut rng, "synthetic:three-helix-bundle")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serpentine_steps_are_unit() {
        let walk = serpentine(125);
        assert_eq!(walk.len(), 125);
        for w in walk.windows(2) {
            let d: i64 = (0..3).map(|k| (w[0][k] - w[1][k]).abs()).sum();
            assert_eq!(d, 1);
        }
        let mut sorted = walk.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 125);
    }

    #[test]
    fn lattice_is_seeded() {
        let a = lattice_protein(30, 3, 0.4, 7).unwrap();
        let b = lattice_protein(30, 3, 0.4, 7).unwrap();
        let c = lattice_protein(30, 3, 0.4, 8).unwrap();
        assert!(a.approx_eq(&b, 0.0));
        assert!(!a.approx_eq(&c, 1e-3));
        assert_eq!(a.residue_count(), 30);
        assert_eq!(a.frame_count(), 3);
        assert_eq!(a.atoms().len(), 30 * 6);
    }

    #[test]
    fn bundle_shape() {
        let t = helix_bundle(1, 0.0, 0).unwrap();
        assert_eq!(t.residue_count(), BUNDLE_SEGMENTS.iter().sum::<usize>());
        let topo = t.topology();
        let frame = t.frame(0).unwrap();
        for r in 1..t.residue_count() {
            let a = frame.positions[topo.ca_atom(r - 1).unwrap()];
            let b = frame.positions[topo.ca_atom(r).unwrap()];
            let d = geometry::distance(a, b);
            assert!((2.0..=4.5).contains(&d), "ca {r} step {d}");
        }
    }

    #[test]
    fn zero_residues_rejected() {
        assert!(lattice_protein(0, 1, 0.1, 0).is_err());
        assert!(lattice_protein(3, 0, 0.1, 0).is_err());
    }
}
