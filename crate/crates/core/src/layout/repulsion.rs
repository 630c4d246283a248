//! Grid approximation of the entropy force for large graphs: points in the
//! 27 cells around a node interact exactly, farther cells through their
//! centroid.

use crate::geometry::{self, Vec3};
use crate::rin::Graph;

struct CellSummary {
    members: Vec<usize>,
    centroid: Vec3,
}

pub(super) fn approximate_repulsion(graph: &Graph, coords: &[Vec3]) -> Vec<Vec3> {
    let n = coords.len();
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for p in coords {
        for k in 0..3 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    // about sqrt(27 n) cells balances far-cell and near-point work
    let target_cells = (27.0 * n as f64).sqrt();
    let per_axis = target_cells.cbrt().ceil().max(1.0) as usize;
    let extent: Vec3 = [0, 1, 2].map(|k| (hi[k] - lo[k]).max(1e-9) / per_axis as f64);
    let cell_of = |p: Vec3| -> [usize; 3] { [0, 1, 2].map(|k| (((p[k] - lo[k]) / extent[k]) as usize).min(per_axis - 1)) };
    let index = |c: [usize; 3]| (c[0] * per_axis + c[1]) * per_axis + c[2];

    let mut cells: Vec<CellSummary> = (0..per_axis.pow(3)).map(|_| CellSummary { members: Vec::new(), centroid: [0.0; 3] }).collect();
    let node_cell: Vec<[usize; 3]> = coords.iter().map(|&p| cell_of(p)).collect();
    for (i, c) in node_cell.iter().enumerate() {
        let cell = &mut cells[index(*c)];
        cell.members.push(i);
        cell.centroid = geometry::add(cell.centroid, coords[i]);
    }
    for cell in &mut cells {
        if !cell.members.is_empty() {
            cell.centroid = geometry::scale(cell.centroid, 1.0 / cell.members.len() as f64);
        }
    }

    use rayon::prelude::*;
    (0..n)
        .into_par_iter()
        .map(|i| {
            let xi = coords[i];
            let ci = node_cell[i];
            let mut acc = [0.0; 3];
            let mut push = |diff: Vec3, weight: f64| {
                let r2 = geometry::norm_sq(diff);
                if r2 > 1e-18 {
                    acc = geometry::add(acc, geometry::scale(diff, weight / r2));
                }
            };
            for (idx, cell) in cells.iter().enumerate() {
                if cell.members.is_empty() {
                    continue;
                }
                let c = [idx / (per_axis * per_axis), (idx / per_axis) % per_axis, idx % per_axis];
                let near = (0..3).all(|k| c[k].abs_diff(ci[k]) <= 1);
                if near {
                    for &j in &cell.members {
                        if j != i {
                            push(geometry::sub(xi, coords[j]), 1.0);
                        }
                    }
                } else {
                    push(geometry::sub(xi, cell.centroid), cell.members.len() as f64);
                }
            }
            // the entropy term only covers non-adjacent pairs
            for &j in graph.neighbors(i) {
                push(geometry::sub(xi, coords[j]), -1.0);
            }
            acc
        })
        .collect()
}
