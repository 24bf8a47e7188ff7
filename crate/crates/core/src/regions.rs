//! Zero-velocity structure in the plane.
//!
//! Motion at Jacobi constant C is confined to positions with
//! 2 Omega - C >= 0. A [`RegionGrid`] samples that field at the nodes of a
//! rectangular grid (z = 0 throughout, matching the planar figures the
//! regions are meant for); [`contours`] extracts the zero level by
//! 16-case marching squares, and the component counters measure how the
//! allowed and forbidden sets split, which is how topology transitions at
//! the equilibrium levels are detected.

use crate::error::{Error, Result};
use crate::hill::{self, MassRatio};
use crate::r4bp::R4bp;
use crate::state::PlanarPoint;
use std::collections::{HashMap, VecDeque};

/// Nodes closer than this to a singularity of the potential are flagged
/// instead of evaluated. The kernel diverges to +infinity there, so a
/// flagged node always counts as allowed; flagging beats clipping to a
/// large number because no resolution-dependent artifact is introduced.
pub const SINGULAR_NODE_RADIUS: f64 = 1e-9;

/// Samples of 2 Omega - C on a rectangular grid, row-major with the x
/// index fastest. `None` marks a node inside [`SINGULAR_NODE_RADIUS`].
#[derive(Debug, Clone, PartialEq)]
pub struct RegionGrid {
    pub x_bounds: [f64; 2],
    pub y_bounds: [f64; 2],
    pub nx: usize,
    pub ny: usize,
    pub c: f64,
    values: Vec<Option<f64>>,
}

impl RegionGrid {
    /// Builds a grid from an arbitrary field; the closure returns `None`
    /// to flag a singular node.
    pub fn from_fn(
        x_bounds: [f64; 2],
        y_bounds: [f64; 2],
        nx: usize,
        ny: usize,
        c: f64,
        field: impl Fn(PlanarPoint) -> Option<f64>,
    ) -> Result<Self> {
        for (name, [lo, hi]) in [("x_bounds", x_bounds), ("y_bounds", y_bounds)] {
            if !lo.is_finite() || !hi.is_finite() || lo >= hi {
                return Err(Error::InvalidArgument(format!(
                    "{name} = [{lo}, {hi}] must be a nonempty finite interval"
                )));
            }
        }
        if nx < 2 || ny < 2 {
            return Err(Error::InvalidArgument(format!(
                "grid resolution {nx}x{ny} must be at least 2x2"
            )));
        }
        if !c.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "level constant {c} must be finite"
            )));
        }
        let mut grid = Self {
            x_bounds,
            y_bounds,
            nx,
            ny,
            c,
            values: Vec::with_capacity(nx * ny),
        };
        for j in 0..ny {
            for i in 0..nx {
                let value = field(grid.node(i, j));
                if let Some(v) = value {
                    if !v.is_finite() {
                        return Err(Error::InvalidArgument(format!(
                            "field value {v} at node ({i}, {j}) is not finite"
                        )));
                    }
                }
                grid.values.push(value);
            }
        }
        Ok(grid)
    }

    /// Node spacing along each axis.
    pub fn cell_size(&self) -> (f64, f64) {
        (
            (self.x_bounds[1] - self.x_bounds[0]) / (self.nx - 1) as f64,
            (self.y_bounds[1] - self.y_bounds[0]) / (self.ny - 1) as f64,
        )
    }

    /// Node position. Indices count from the lower-left corner; the two
    /// endpoint nodes land exactly on the bounds, and the halves mirror so
    /// symmetric bounds produce exactly antipodal node pairs.
    pub fn node(&self, i: usize, j: usize) -> PlanarPoint {
        let (dx, dy) = self.cell_size();
        let x = if 2 * i < self.nx {
            self.x_bounds[0] + i as f64 * dx
        } else {
            self.x_bounds[1] - (self.nx - 1 - i) as f64 * dx
        };
        let y = if 2 * j < self.ny {
            self.y_bounds[0] + j as f64 * dy
        } else {
            self.y_bounds[1] - (self.ny - 1 - j) as f64 * dy
        };
        PlanarPoint::new(x, y)
    }

    /// Field value at a node, `None` at flagged singular nodes.
    pub fn value(&self, i: usize, j: usize) -> Option<f64> {
        assert!(i < self.nx && j < self.ny, "node ({i}, {j}) out of range");
        self.values[j * self.nx + i]
    }

    /// Whether motion is energetically allowed at a node. Singular nodes
    /// are allowed: the potential diverges to +infinity there.
    pub fn allowed(&self, i: usize, j: usize) -> bool {
        match self.value(i, j) {
            None => true,
            Some(v) => v >= 0.0,
        }
    }
}

/// Limit-problem grid of 2 Omega - c at mass ratio `mu`.
pub fn region_grid_limit(
    mu: MassRatio,
    c: f64,
    x_bounds: [f64; 2],
    y_bounds: [f64; 2],
    nx: usize,
    ny: usize,
) -> Result<RegionGrid> {
    RegionGrid::from_fn(x_bounds, y_bounds, nx, ny, c, |p| {
        if p.norm() < SINGULAR_NODE_RADIUS {
            None
        } else {
            let omega = hill::omega_planar(p, mu).expect("node outside the singular guard");
            Some(2.0 * omega - c)
        }
    })
}

/// Full-problem grid of 2 Omega - c; nodes near any vertex carrying
/// positive mass are flagged.
pub fn region_grid_full(
    problem: &R4bp,
    c: f64,
    x_bounds: [f64; 2],
    y_bounds: [f64; 2],
    nx: usize,
    ny: usize,
) -> Result<RegionGrid> {
    let masses = problem.masses().as_array();
    let vertices = problem.triangle().as_array();
    RegionGrid::from_fn(x_bounds, y_bounds, nx, ny, c, |p| {
        let near_massive = masses
            .iter()
            .zip(vertices)
            .any(|(m, v)| *m > 0.0 && p.dist(v) < SINGULAR_NODE_RADIUS);
        if near_massive {
            None
        } else {
            let omega = problem
                .omega([p.x, p.y, 0.0])
                .expect("node outside the singular guard");
            Some(2.0 * omega - c)
        }
    })
}

/// Polylines approximating the zero level of a grid's field. A closed
/// contour repeats its first vertex at the end.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ContourSet {
    pub polylines: Vec<Vec<PlanarPoint>>,
}

fn point_key(p: &PlanarPoint) -> (u64, u64) {
    (p.x.to_bits(), p.y.to_bits())
}

/// Zero crossing on the edge from node `a` to node `b` by linear
/// interpolation. Callers pass nodes in a fixed left-to-right or
/// bottom-to-top order so the two cells sharing an edge compute the
/// crossing with identical bits.
fn edge_point(a: PlanarPoint, va: f64, b: PlanarPoint, vb: f64) -> PlanarPoint {
    let t = va / (va - vb);
    PlanarPoint::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))
}

/// Extracts the zero level of the grid field by marching squares with
/// linear edge interpolation. Cells touching a singular node are skipped;
/// the ambiguous saddle configurations are split by the sign of the corner
/// mean, which is the bilinear value at the cell center. Deterministic:
/// cells are scanned row-major and chaining follows insertion order.
pub fn contours(grid: &RegionGrid) -> ContourSet {
    let mut segments: Vec<(PlanarPoint, PlanarPoint)> = Vec::new();
    for j in 0..grid.ny - 1 {
        for i in 0..grid.nx - 1 {
            let corner_values = [
                grid.value(i, j),
                grid.value(i + 1, j),
                grid.value(i + 1, j + 1),
                grid.value(i, j + 1),
            ];
            let [Some(v0), Some(v1), Some(v2), Some(v3)] = corner_values else {
                continue;
            };
            let nodes = [
                grid.node(i, j),
                grid.node(i + 1, j),
                grid.node(i + 1, j + 1),
                grid.node(i, j + 1),
            ];
            let inside = [v0 >= 0.0, v1 >= 0.0, v2 >= 0.0, v3 >= 0.0];
            let case = inside
                .iter()
                .enumerate()
                .fold(0usize, |acc, (bit, &is_in)| acc | (usize::from(is_in) << bit));
            if case == 0 || case == 15 {
                continue;
            }
            // Edge crossings in canonical node order: bottom and top run
            // left to right, left and right run bottom to top.
            let crossing = |edge: usize| -> PlanarPoint {
                match edge {
                    0 => edge_point(nodes[0], v0, nodes[1], v1),
                    1 => edge_point(nodes[1], v1, nodes[2], v2),
                    2 => edge_point(nodes[3], v3, nodes[2], v2),
                    _ => edge_point(nodes[0], v0, nodes[3], v3),
                }
            };
            let mut emit = |ea: usize, eb: usize| {
                let a = crossing(ea);
                let b = crossing(eb);
                if point_key(&a) != point_key(&b) {
                    segments.push((a, b));
                }
            };
            match case {
                1 => emit(3, 0),
                2 => emit(0, 1),
                3 => emit(3, 1),
                4 => emit(1, 2),
                5 => {
                    if (v0 + v1 + v2 + v3) * 0.25 >= 0.0 {
                        emit(3, 2);
                        emit(0, 1);
                    } else {
                        emit(3, 0);
                        emit(1, 2);
                    }
                }
                6 => emit(0, 2),
                7 => emit(3, 2),
                8 => emit(3, 2),
                9 => emit(0, 2),
                10 => {
                    if (v0 + v1 + v2 + v3) * 0.25 >= 0.0 {
                        emit(3, 0);
                        emit(1, 2);
                    } else {
                        emit(3, 2);
                        emit(0, 1);
                    }
                }
                11 => emit(1, 2),
                12 => emit(3, 1),
                13 => emit(0, 1),
                _ => emit(0, 3),
            }
        }
    }
    chain(segments)
}

/// Takes the first unused segment incident to `tip` and returns its other
/// endpoint.
fn take_next(
    adjacency: &HashMap<(u64, u64), Vec<usize>>,
    segments: &[(PlanarPoint, PlanarPoint)],
    used: &mut [bool],
    tip: PlanarPoint,
) -> Option<PlanarPoint> {
    for &idx in adjacency.get(&point_key(&tip))? {
        if used[idx] {
            continue;
        }
        used[idx] = true;
        let (a, b) = segments[idx];
        return Some(if point_key(&a) == point_key(&tip) { b } else { a });
    }
    None
}

/// Joins segments sharing endpoints (bitwise) into polylines.
fn chain(segments: Vec<(PlanarPoint, PlanarPoint)>) -> ContourSet {
    let mut adjacency: HashMap<(u64, u64), Vec<usize>> = HashMap::new();
    for (idx, (a, b)) in segments.iter().enumerate() {
        adjacency.entry(point_key(a)).or_default().push(idx);
        adjacency.entry(point_key(b)).or_default().push(idx);
    }
    let mut used = vec![false; segments.len()];
    let mut polylines = Vec::new();
    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let (a, b) = segments[start];
        let mut line: VecDeque<PlanarPoint> = VecDeque::from([a, b]);
        let mut closed = false;
        while let Some(next) = take_next(&adjacency, &segments, &mut used, *line.back().unwrap())
        {
            line.push_back(next);
            if point_key(&next) == point_key(line.front().unwrap()) {
                closed = true;
                break;
            }
        }
        if !closed {
            while let Some(prev) =
                take_next(&adjacency, &segments, &mut used, *line.front().unwrap())
            {
                line.push_front(prev);
            }
        }
        polylines.push(line.into_iter().collect());
    }
    ContourSet { polylines }
}

fn component_count(grid: &RegionGrid, target: bool) -> usize {
    let mut visited = vec![false; grid.nx * grid.ny];
    let mut queue = VecDeque::new();
    let mut count = 0;
    for start in 0..visited.len() {
        if visited[start] {
            continue;
        }
        let (i0, j0) = (start % grid.nx, start / grid.nx);
        if grid.allowed(i0, j0) != target {
            continue;
        }
        count += 1;
        visited[start] = true;
        queue.push_back((i0, j0));
        while let Some((i, j)) = queue.pop_front() {
            let mut visit = |ni: usize, nj: usize, visited: &mut Vec<bool>| {
                let idx = nj * grid.nx + ni;
                if !visited[idx] && grid.allowed(ni, nj) == target {
                    visited[idx] = true;
                    queue.push_back((ni, nj));
                }
            };
            if i > 0 {
                visit(i - 1, j, &mut visited);
            }
            if i + 1 < grid.nx {
                visit(i + 1, j, &mut visited);
            }
            if j > 0 {
                visit(i, j - 1, &mut visited);
            }
            if j + 1 < grid.ny {
                visit(i, j + 1, &mut visited);
            }
        }
    }
    count
}

/// Number of 4-connected components of allowed nodes.
pub fn allowed_components(grid: &RegionGrid) -> usize {
    component_count(grid, true)
}

/// Number of 4-connected components of forbidden nodes.
pub fn forbidden_components(grid: &RegionGrid) -> usize {
    component_count(grid, false)
}
