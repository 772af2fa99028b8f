//! Geometry on the qubit grid `[L]^f`: axis lines and planes, AB graphs,
//! star graphs and star planes, and axis-ordered routes.
//!
//! Cells are stored with doubled coordinates: the vertex `(a, b)` is
//! `[2a, 2b]`, the edge from `(a, b)` to `(a+1, b)` is `[2a+1, 2b]` and the
//! square with lower corner `(a, b)` is `[2a+1, 2b+1]`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::css::Point;

/// A cell of the grid in doubled coordinates.
pub type Cell = Vec<i32>;

pub fn vertex_cell(p: &[usize]) -> Cell {
    p.iter().map(|&a| 2 * a as i32).collect()
}

/// The edge joining two grid points at L1 distance one.
pub fn edge_cell(p: &[usize], q: &[usize]) -> Cell {
    p.iter().zip(q).map(|(&a, &b)| (a + b) as i32).collect()
}

/// Number of odd coordinates, i.e. the dimension of the cell.
pub fn cell_dim(c: &[i32]) -> usize {
    c.iter().filter(|v| v.rem_euclid(2) == 1).count()
}

/// An axis-parallel line through the grid: coordinate `axis` varies and the
/// others equal those of `anchor` (whose `axis` entry is zero).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Line {
    pub axis: usize,
    pub anchor: Point,
}

impl Line {
    pub fn through(p: &[usize], axis: usize) -> Line {
        let mut anchor = p.to_vec();
        anchor[axis] = 0;
        Line { axis, anchor }
    }

    /// Vertices and edges of the line in `[L]^f`.
    pub fn cells(&self, side: usize) -> Vec<Cell> {
        let mut out = Vec::with_capacity(2 * side);
        let base = vertex_cell(&self.anchor);
        for t in 1..=side as i32 {
            let mut v = base.clone();
            v[self.axis] = 2 * t;
            out.push(v.clone());
            if t < side as i32 {
                v[self.axis] = 2 * t + 1;
                out.push(v);
            }
        }
        out
    }

    pub fn edges(&self, side: usize) -> Vec<Cell> {
        self.cells(side).into_iter().filter(|c| cell_dim(c) == 1).collect()
    }
}

/// An axis-parallel plane: coordinates `axes.0 < axes.1` vary, the others
/// equal those of `anchor` (whose varying entries are zero).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Plane {
    pub axes: (usize, usize),
    pub anchor: Point,
}

impl Plane {
    pub fn through(p: &[usize], i: usize, j: usize) -> Plane {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        let mut anchor = p.to_vec();
        anchor[i] = 0;
        anchor[j] = 0;
        Plane { axes: (i, j), anchor }
    }

    /// All vertices, edges and squares of the plane in `[L]^f`.
    pub fn cells(&self, side: usize) -> Vec<Cell> {
        let base = vertex_cell(&self.anchor);
        let top = 2 * side as i32;
        let mut out = Vec::with_capacity(4 * side * side);
        for u in 2..=top {
            for v in 2..=top {
                let mut c = base.clone();
                c[self.axes.0] = u;
                c[self.axes.1] = v;
                out.push(c);
            }
        }
        out
    }

    pub fn faces(&self, side: usize) -> Vec<Cell> {
        self.cells(side).into_iter().filter(|c| cell_dim(c) == 2).collect()
    }
}

/// Subgraph of the grid: a vertex set and a set of unit edges.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridGraph {
    pub f: usize,
    pub side: usize,
    pub vertices: BTreeSet<Cell>,
    pub edges: BTreeSet<Cell>,
}

impl GridGraph {
    pub fn empty(f: usize, side: usize) -> Self {
        GridGraph { f, side, vertices: BTreeSet::new(), edges: BTreeSet::new() }
    }

    /// Union of full lines (each with all of its edges).
    pub fn from_lines<'a>(f: usize, side: usize, lines: impl IntoIterator<Item = &'a Line>) -> Self {
        let mut g = GridGraph::empty(f, side);
        for line in lines {
            g.add_cells(line.cells(side));
        }
        g
    }

    pub fn add_cells(&mut self, cells: impl IntoIterator<Item = Cell>) {
        for c in cells {
            match cell_dim(&c) {
                0 => {
                    self.vertices.insert(c);
                }
                1 => {
                    self.edges.insert(c);
                }
                _ => {}
            }
        }
    }

    pub fn union(&self, other: &GridGraph) -> GridGraph {
        let mut g = self.clone();
        g.vertices.extend(other.vertices.iter().cloned());
        g.edges.extend(other.edges.iter().cloned());
        g
    }

    pub fn contains_path(&self, path: &[Point]) -> bool {
        path.iter().all(|p| self.vertices.contains(&vertex_cell(p)))
            && path.windows(2).all(|w| self.edges.contains(&edge_cell(&w[0], &w[1])))
    }

    /// `dim H_1` of the graph: `|E| - |V| + components`.
    pub fn cycle_rank(&self) -> usize {
        let verts: Vec<&Cell> = self.vertices.iter().collect();
        let index: std::collections::HashMap<&Cell, usize> = verts.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let mut parent: Vec<usize> = (0..verts.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        let mut components = verts.len();
        for e in &self.edges {
            let ends = edge_endpoints(e);
            let a = find(&mut parent, index[&ends.0]);
            let b = find(&mut parent, index[&ends.1]);
            if a != b {
                parent[a] = b;
                components -= 1;
            }
        }
        self.edges.len() + components - self.vertices.len()
    }
}

/// The two endpoint vertices of an edge cell.
pub fn edge_endpoints(e: &[i32]) -> (Cell, Cell) {
    let axis = e.iter().position(|v| v.rem_euclid(2) == 1).expect("edge has an odd coordinate");
    let mut a = e.to_vec();
    let mut b = e.to_vec();
    a[axis] -= 1;
    b[axis] += 1;
    (a, b)
}

/// The grid point of a vertex cell.
pub fn cell_point(v: &[i32]) -> Point {
    v.iter().map(|&c| (c / 2) as usize).collect()
}

/// Lines of the AB graph of `q` (f = 2): the line along axis 1 through `q`
/// (fixed first coordinate) and the line along axis 0 (fixed second coordinate).
pub fn ab_lines(q: &[usize]) -> [Line; 2] {
    [Line::through(q, 1), Line::through(q, 0)]
}

/// `AB(q) = (a x [L]) u ([L] x b)`, the union of the two grid lines through `q`.
pub fn ab_graph(q: &[usize], side: usize) -> GridGraph {
    GridGraph::from_lines(2, side, ab_lines(q).iter())
}

/// Lines through `q` along the axes in `axes` (all axes for the full star graph).
pub fn star_lines(q: &[usize], axes: &[usize]) -> Vec<Line> {
    axes.iter().map(|&i| Line::through(q, i)).collect()
}

/// The star graph `lambda(q)`: all axis lines through `q`.
pub fn star_graph(q: &[usize], side: usize) -> GridGraph {
    let axes: Vec<usize> = (0..q.len()).collect();
    GridGraph::from_lines(q.len(), side, star_lines(q, &axes).iter())
}

/// Partial star graph `lambda_S(q)` over the axes in `subset`.
pub fn star_graph_subset(q: &[usize], side: usize, subset: &[usize]) -> GridGraph {
    GridGraph::from_lines(q.len(), side, star_lines(q, subset).iter())
}

/// Axis planes through `q` for every pair of axes.
pub fn star_plane_list(q: &[usize]) -> Vec<Plane> {
    let f = q.len();
    let mut out = Vec::new();
    for i in 0..f {
        for j in i + 1..f {
            out.push(Plane::through(q, i, j));
        }
    }
    out
}

/// The star plane `Lambda(q)`: all cells of the axis planes through `q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarPlane {
    pub center: Point,
    pub vertices: BTreeSet<Cell>,
    pub edges: BTreeSet<Cell>,
    pub faces: BTreeSet<Cell>,
}

pub fn star_plane(q: &[usize], side: usize) -> StarPlane {
    let mut sp =
        StarPlane { center: q.to_vec(), vertices: BTreeSet::new(), edges: BTreeSet::new(), faces: BTreeSet::new() };
    for plane in star_plane_list(q) {
        for c in plane.cells(side) {
            match cell_dim(&c) {
                0 => sp.vertices.insert(c),
                1 => sp.edges.insert(c),
                _ => sp.faces.insert(c),
            };
        }
    }
    sp
}

/// Route from `from` to `to` that changes the coordinates one axis at a
/// time, in the order given by `axes`, moving by unit steps.
pub fn axis_route(from: &[usize], to: &[usize], axes: &[usize]) -> Vec<Point> {
    let mut cur = from.to_vec();
    let mut out = vec![cur.clone()];
    for &i in axes {
        while cur[i] != to[i] {
            if cur[i] < to[i] {
                cur[i] += 1;
            } else {
                cur[i] -= 1;
            }
            out.push(cur.clone());
        }
    }
    out
}

/// The AB route: first along axis 0 (the row direction), then along axis 1.
pub fn ab_route(q1: &[usize], q2: &[usize]) -> Vec<Point> {
    axis_route(q1, q2, &[0, 1])
}
