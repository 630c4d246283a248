//! Uniform cell grid for fixed-radius neighbor search.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::geometry::{self, Vec3};

type Cell = (i64, i64, i64);

/// Buckets points into cubic cells of side `cell_size`. A query radius up to
/// the cell size only has to visit the 27 surrounding cells.
#[derive(Debug, Clone)]
pub struct CellGrid {
    inv_cell: f64,
    cells: HashMap<Cell, Vec<usize>>,
}

impl CellGrid {
    /// The cell is padded slightly above `radius` so that rounding in the cell
    /// coordinates can never push a pair at exactly `radius` two cells apart.
    pub fn new(points: &[Vec3], radius: f64) -> Self {
        let cell = radius * (1.0 + 1e-6) + f64::MIN_POSITIVE;
        let inv_cell = 1.0 / cell;
        let mut cells: HashMap<Cell, Vec<usize>> = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            cells.entry(Self::cell_of(inv_cell, *p)).or_default().push(i);
        }
        Self { inv_cell, cells }
    }

    fn cell_of(inv_cell: f64, p: Vec3) -> Cell {
        (
            (p[0] * inv_cell).floor() as i64,
            (p[1] * inv_cell).floor() as i64,
            (p[2] * inv_cell).floor() as i64,
        )
    }

    pub fn occupied_cells(&self) -> usize {
        self.cells.len()
    }

    /// Calls `f(j)` for every candidate `j` in the 27 cells around `p`.
    /// Candidates are a superset of the points within the grid radius.
    pub fn for_each_candidate(&self, p: Vec3, mut f: impl FnMut(usize)) {
        let (cx, cy, cz) = Self::cell_of(self.inv_cell, p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(members) = self.cells.get(&(cx + dx, cy + dy, cz + dz)) {
                        members.iter().copied().for_each(&mut f);
                    }
                }
            }
        }
    }
}

/// All pairs `(a, b)`, `a < b`, with `distance(points[a], points[b]) <= radius`,
/// sorted lexicographically. Exact: candidates are filtered with the same
/// distance function used everywhere else.
pub(crate) fn pairs_within(points: &[Vec3], radius: f64) -> Vec<(usize, usize)> {
    let grid = CellGrid::new(points, radius);
    let per_point: Vec<Vec<usize>> = (0..points.len())
        .into_par_iter()
        .map(|a| {
            let mut hits = Vec::new();
            grid.for_each_candidate(points[a], |b| {
                if b > a && geometry::distance(points[a], points[b]) <= radius {
                    hits.push(b);
                }
            });
            hits.sort_unstable();
            hits
        })
        .collect();
    per_point.into_iter().enumerate().flat_map(|(a, hits)| hits.into_iter().map(move |b| (a, b))).collect()
}

/// Distinct group pairs `(g, h)`, `g < h`, having at least one member pair
/// within `radius`. `group_of[i]` names the group of point `i`.
pub(crate) fn group_pairs_within(points: &[Vec3], group_of: &[usize], radius: f64) -> Vec<(usize, usize)> {
    let grid = CellGrid::new(points, radius);
    let mut pairs: Vec<(usize, usize)> = (0..points.len())
        .into_par_iter()
        .map(|a| {
            let ga = group_of[a];
            let mut hits = Vec::new();
            grid.for_each_candidate(points[a], |b| {
                let gb = group_of[b];
                if ga < gb && geometry::distance(points[a], points[b]) <= radius {
                    hits.push(gb);
                }
            });
            hits.sort_unstable();
            hits.dedup();
            hits.into_iter().map(|gb| (ga, gb)).collect::<Vec<_>>()
        })
        .flatten()
        .collect();
    pairs.sort_unstable();
    pairs.dedup();
    pairs
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute(points: &[Vec3], radius: f64) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..points.len() {
            for b in a + 1..points.len() {
                if geometry::distance(points[a], points[b]) <= radius {
                    out.push((a, b));
                }
            }
        }
        out
    }

    #[test]
    fn matches_all_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for radius in [0.5, 1.0, 2.5, 7.0] {
            let pts: Vec<Vec3> = (0..400).map(|_| [rng.random_range(-8.0..8.0), rng.random_range(-8.0..8.0), rng.random_range(-8.0..8.0)]).collect();
            assert_eq!(pairs_within(&pts, radius), brute(&pts, radius));
        }
    }

    #[test]
    fn pair_at_exact_radius_on_cell_boundary() {
        let pts = [[0.0, 0.0, 0.0], [3.0, 0.0, 0.0], [-3.0, 0.0, 0.0], [0.3 * 10.0, 0.1 * 3.0, 0.0]];
        assert_eq!(pairs_within(&pts, 3.0), brute(&pts, 3.0));
    }

    #[test]
    fn group_pairs_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let pts: Vec<Vec3> = (0..300).map(|_| [rng.random_range(0.0..10.0), rng.random_range(0.0..10.0), rng.random_range(0.0..10.0)]).collect();
        let group_of: Vec<usize> = (0..300).map(|i| i / 5).collect();
        let mut expected: Vec<(usize, usize)> = brute(&pts, 1.3).into_iter().map(|(a, b)| (group_of[a], group_of[b])).filter(|(g, h)| g != h).collect();
        expected.sort_unstable();
        expected.dedup();
        assert_eq!(group_pairs_within(&pts, &group_of, 1.3), expected);
    }
}
