//! Maxent-Stress layout: stress on edges plus a logarithmic entropy term on
//! non-adjacent pairs,
//!
//! `H(x) = Σ_{ij∈E} w (|x_i - x_j| - d)^2 - α Σ_{ij∉E} ln |x_i - x_j|`, `w = 1/d²`,
//!
//! minimised by rounds of stress majorisation. Per-node work in a round reads
//! only the previous round's positions and all reductions run in a fixed
//! order, so the result does not depend on the thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use tracing::warn;

use super::repulsion::approximate_repulsion;
use super::{Layout3D, LayoutKind, LayoutParams};
use crate::error::{Error, Result};
use crate::geometry::{self, Vec3};
use crate::rin::Graph;

/// Above this node count the entropy term is approximated on a cell grid.
pub const EXACT_ENTROPY_LIMIT: usize = 2000;

const COINCIDENT: f64 = 1e-9;
// Weight μ of the proximal term. Keeps the system positive definite and
// limits how far a component can drift in one round.
const PROXIMAL: f64 = 0.05;
const CG_MAX_ITERATIONS: usize = 100;
const CG_RELATIVE_TOLERANCE: f64 = 1e-6;
const JITTER: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct MaxentReport {
    pub rounds: usize,
    pub converged: bool,
    pub final_alpha: f64,
    pub final_movement: f64,
    pub warm_started: bool,
    /// True when the entropy term used the grid approximation.
    pub approximate_entropy: bool,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministic unit vector for separating coincident nodes `a` and `b`;
/// antisymmetric in its arguments.
fn jitter_direction(a: usize, b: usize, seed: u64) -> Vec3 {
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut h = splitmix(seed ^ ((lo as u64) << 32) ^ hi as u64);
    let mut comp = [0.0; 3];
    for c in &mut comp {
        h = splitmix(h);
        *c = (h >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
    }
    let len = geometry::norm(comp).max(1e-12);
    geometry::scale(comp, sign / len)
}

fn separate_coincident(coords: &mut [Vec3], seed: u64) {
    // grid lookup keeps this linear; only the later node of a pair moves
    let pairs = crate::rin::CellGrid::new(coords, COINCIDENT);
    let mut moves = Vec::new();
    for (i, &p) in coords.iter().enumerate() {
        pairs.for_each_candidate(p, |j| {
            if j < i && geometry::distance(p, coords[j]) < COINCIDENT {
                moves.push((i, j));
            }
        });
    }
    moves.sort_unstable();
    moves.dedup_by_key(|m| m.0);
    for (i, j) in moves {
        coords[i] = geometry::add(coords[i], geometry::scale(jitter_direction(i, j, seed), JITTER));
    }
}

/// Iterative solver state. Exposed so callers can drive single rounds at a
/// fixed α, e.g. to observe the stress decrease.
pub struct MaxentSolver<'a> {
    graph: &'a Graph,
    params: LayoutParams,
    coords: Vec<Vec3>,
    warm_started: bool,
}

impl<'a> MaxentSolver<'a> {
    pub fn new(graph: &'a Graph, params: LayoutParams, warm_start: Option<&Layout3D>) -> Result<Self> {
        params.validate()?;
        let n = graph.node_count();
        let (mut coords, warm_started) = match warm_start {
            Some(w) if w.len() == n => (w.coords.clone(), true),
            Some(w) => {
                warn!(expected = n, got = w.len(), "warm start ignored: node count differs");
                (random_cube(n, params.seed), false)
            }
            None => (random_cube(n, params.seed), false),
        };
        if coords.iter().any(|p| !geometry::is_finite(*p)) {
            return Err(Error::InvalidConfig("warm start contains non-finite coordinates".into()));
        }
        separate_coincident(&mut coords, params.seed);
        Ok(Self { graph, params, coords, warm_started })
    }

    pub fn coords(&self) -> &[Vec3] {
        &self.coords
    }

    pub fn uses_approximation(&self) -> bool {
        self.graph.node_count() > EXACT_ENTROPY_LIMIT
    }

    /// One majorisation round at entropy weight `alpha`. Returns the mean node
    /// movement relative to the target edge length.
    ///
    /// The stress is majorised at the current positions `z` by a quadratic
    /// with the weighted graph Laplacian `L`; the entropy force is linearised
    /// at `z`. The round minimises that model plus a proximal term,
    /// `(L + μD) x = c(z) + μDz`, with Jacobi-preconditioned conjugate
    /// gradients started at `z`. Every CG iterate lowers the model, so at
    /// `alpha = 0` the stress never increases.
    pub fn round(&mut self, alpha: f64) -> f64 {
        let n = self.graph.node_count();
        if n == 0 {
            return 0.0;
        }
        let d = self.params.target_edge_length;
        let w = 1.0 / (d * d);
        let seed = self.params.seed;
        let graph = self.graph;
        let z = &self.coords;

        let approx = (alpha > 0.0 && self.uses_approximation()).then(|| approximate_repulsion(graph, z));

        // right-hand side, evaluated from the previous positions only
        let rhs: Vec<Vec3> = (0..n)
            .into_par_iter()
            .map(|i| {
                let neighbors = graph.neighbors(i);
                if neighbors.is_empty() {
                    return [0.0; 3];
                }
                let xi = z[i];
                let mut pull = [0.0; 3];
                for &j in neighbors {
                    let diff = geometry::sub(xi, z[j]);
                    let r = geometry::norm(diff);
                    let unit = if r < COINCIDENT { jitter_direction(i, j, seed) } else { geometry::scale(diff, 1.0 / r) };
                    pull = geometry::add(pull, unit);
                }
                let mut c = geometry::scale(pull, w * d);
                if alpha > 0.0 {
                    let repulse = match &approx {
                        Some(field) => field[i],
                        None => exact_repulsion(i, neighbors, z),
                    };
                    c = geometry::add(c, geometry::scale(repulse, 0.5 * alpha));
                }
                let rho = w * neighbors.len() as f64;
                geometry::add(c, geometry::scale(xi, PROXIMAL * rho))
            })
            .collect();

        let next = solve_proximal(graph, w, &rhs, z);
        let moved: f64 = next.iter().zip(z).map(|(a, b)| geometry::distance(*a, *b)).sum();
        self.coords = next;
        moved / n as f64 / d
    }

    /// Runs the α schedule: start at `alpha_init` (or at `alpha_min` when warm
    /// started), multiply by `alpha_decay` each round, never below
    /// `alpha_min`. Once α is at its floor the solver stops as soon as a
    /// round's relative movement is below `tol`.
    pub fn run(mut self) -> (Layout3D, MaxentReport) {
        let p = self.params;
        let mut alpha = if self.warm_started { p.alpha_min } else { p.alpha_init.max(p.alpha_min) };
        let mut report = MaxentReport {
            rounds: 0,
            converged: false,
            final_alpha: alpha,
            final_movement: f64::INFINITY,
            warm_started: self.warm_started,
            approximate_entropy: self.uses_approximation(),
        };
        for _ in 0..p.max_rounds {
            let movement = self.round(alpha);
            report.rounds += 1;
            report.final_alpha = alpha;
            report.final_movement = movement;
            if alpha <= p.alpha_min && movement < p.tol {
                report.converged = true;
                break;
            }
            alpha = (alpha * p.alpha_decay).max(p.alpha_min);
        }
        (Layout3D { kind: LayoutKind::MaxentStress, coords: self.coords }, report)
    }
}

/// `(L + μD) x` for the weighted Laplacian `L` (edge weight `w`) and its
/// diagonal `D`. Isolated nodes have empty rows.
fn apply_system(graph: &Graph, w: f64, x: &[Vec3]) -> Vec<Vec3> {
    (0..x.len())
        .into_par_iter()
        .map(|i| {
            let neighbors = graph.neighbors(i);
            let mut acc = geometry::scale(x[i], (1.0 + PROXIMAL) * w * neighbors.len() as f64);
            for &j in neighbors {
                acc = geometry::sub(acc, geometry::scale(x[j], w));
            }
            acc
        })
        .collect()
}

fn dot3(a: &[Vec3], b: &[Vec3]) -> Vec3 {
    // sequential so the sum order is fixed
    let mut acc = [0.0; 3];
    for (p, q) in a.iter().zip(b) {
        for k in 0..3 {
            acc[k] += p[k] * q[k];
        }
    }
    acc
}

/// Preconditioned CG on the three coordinate columns at once, starting from
/// `start`. Isolated nodes keep their start position.
fn solve_proximal(graph: &Graph, w: f64, rhs: &[Vec3], start: &[Vec3]) -> Vec<Vec3> {
    let n = start.len();
    let inv_diag: Vec<f64> = (0..n)
        .map(|i| {
            let deg = graph.degree(i);
            if deg == 0 { 0.0 } else { 1.0 / ((1.0 + PROXIMAL) * w * deg as f64) }
        })
        .collect();
    let mut x = start.to_vec();
    let ax = apply_system(graph, w, &x);
    let mut r: Vec<Vec3> = (0..n).map(|i| if inv_diag[i] == 0.0 { [0.0; 3] } else { geometry::sub(rhs[i], ax[i]) }).collect();
    let mut zr: Vec<Vec3> = r.iter().zip(&inv_diag).map(|(ri, &m)| geometry::scale(*ri, m)).collect();
    let mut p = zr.clone();
    let mut rz = dot3(&r, &zr);
    let r0 = dot3(&r, &r);
    let mut done = [false; 3];
    for k in 0..3 {
        done[k] = r0[k] <= f64::MIN_POSITIVE;
    }

    for _ in 0..CG_MAX_ITERATIONS {
        if done.iter().all(|&d| d) {
            break;
        }
        let ap = apply_system(graph, w, &p);
        let pap = dot3(&p, &ap);
        let mut step = [0.0; 3];
        for k in 0..3 {
            if !done[k] && pap[k] > 0.0 {
                step[k] = rz[k] / pap[k];
            } else {
                done[k] = true;
            }
        }
        for i in 0..n {
            for k in 0..3 {
                x[i][k] += step[k] * p[i][k];
                r[i][k] -= step[k] * ap[i][k];
            }
        }
        let rr = dot3(&r, &r);
        for k in 0..3 {
            if rr[k] <= CG_RELATIVE_TOLERANCE * CG_RELATIVE_TOLERANCE * r0[k] {
                done[k] = true;
            }
        }
        for i in 0..n {
            zr[i] = geometry::scale(r[i], inv_diag[i]);
        }
        let rz_next = dot3(&r, &zr);
        for k in 0..3 {
            let beta = if done[k] || rz[k] == 0.0 { 0.0 } else { rz_next[k] / rz[k] };
            for i in 0..n {
                p[i][k] = if done[k] { 0.0 } else { zr[i][k] + beta * p[i][k] };
            }
        }
        rz = rz_next;
    }
    x
}

/// Σ_{j ∉ N(i), j ≠ i} (x_i - x_j) / |x_i - x_j|², summed in index order.
fn exact_repulsion(i: usize, neighbors: &[usize], coords: &[Vec3]) -> Vec3 {
    let xi = coords[i];
    let mut acc = [0.0; 3];
    let mut next_neighbor = neighbors.iter().peekable();
    for (j, &xj) in coords.iter().enumerate() {
        if next_neighbor.peek() == Some(&&j) {
            next_neighbor.next();
            continue;
        }
        if j == i {
            continue;
        }
        let diff = geometry::sub(xi, xj);
        let r2 = geometry::norm_sq(diff);
        if r2 < COINCIDENT * COINCIDENT {
            continue;
        }
        acc = geometry::add(acc, geometry::scale(diff, 1.0 / r2));
    }
    acc
}

fn random_cube(n: usize, seed: u64) -> Vec<Vec3> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| [rng.random::<f64>(), rng.random::<f64>(), rng.random::<f64>()]).collect()
}

/// Lays out `graph` in 3D. `warm_start` seeds the solver with existing
/// coordinates (ignored if its node count differs); otherwise the start is a
/// seeded random point set in the unit cube.
pub fn maxent_stress_layout(graph: &Graph, params: &LayoutParams, warm_start: Option<&Layout3D>) -> Result<(Layout3D, MaxentReport)> {
    Ok(MaxentSolver::new(graph, *params, warm_start)?.run())
}

/// Edge stress `Σ_{ij∈E} w (|x_i - x_j| - d)^2`.
pub fn stress_term(graph: &Graph, coords: &[Vec3], d: f64) -> f64 {
    let w = 1.0 / (d * d);
    graph.edges().map(|(i, j)| w * (geometry::distance(coords[i], coords[j]) - d).powi(2)).sum()
}

/// Full objective `H(x)` at entropy weight `alpha`, with the entropy term
/// summed exactly over all non-adjacent pairs.
pub fn stress_energy(graph: &Graph, layout: &Layout3D, params: &LayoutParams, alpha: f64) -> Result<f64> {
    let n = graph.node_count();
    if layout.len() != n {
        return Err(Error::LengthMismatch { expected: n, actual: layout.len() });
    }
    let coords = &layout.coords;
    let stress = stress_term(graph, coords, params.target_edge_length);
    let mut entropy = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            if graph.has_edge(i, j) {
                continue;
            }
            let r = geometry::distance(coords[i], coords[j]);
            if r == 0.0 {
                return Err(Error::CoincidentPoints { i, j });
            }
            entropy += r.ln();
        }
    }
    Ok(stress - alpha * entropy)
}
