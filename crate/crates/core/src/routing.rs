//! Routing on the qubit grid: line and plane colorings that give every check
//! its transverse coordinates, color routes between qubits sharing a check,
//! and the defect paths joining overlapping X- and Z-checks.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::coloring::{bipartite_edge_coloring, color_count, greedy_vertex_coloring};
use crate::css::{grid_points, overlap, CssCode, Point, QubitArrangement};
use crate::error::{Error, Result, Side};
use crate::grid::{
    ab_lines, axis_route, cell_point, edge_cell, edge_endpoints, star_plane_list, vertex_cell, Cell, GridGraph, Line,
    Plane,
};

/// Line colors `eta` and plane colors `omega` (both 1-based) for one side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorAssignment {
    pub eta: Vec<usize>,
    pub omega: Vec<usize>,
    pub chi: usize,
    pub zeta: usize,
    /// Greedy upper bound `max degree + 1` of the line conflict graph.
    pub chi_bound: usize,
    /// Greedy upper bound for the plane colors (max over classes).
    pub zeta_bound: usize,
}

fn conflict_graph<T: Ord + Clone>(items: &[BTreeSet<T>]) -> Vec<Vec<usize>> {
    let mut owners: BTreeMap<&T, Vec<usize>> = BTreeMap::new();
    for (i, set) in items.iter().enumerate() {
        for t in set {
            owners.entry(t).or_default().push(i);
        }
    }
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); items.len()];
    for list in owners.values() {
        for &a in list {
            for &b in list {
                if a != b {
                    adj[a].insert(b);
                }
            }
        }
    }
    adj.into_iter().map(|s| s.into_iter().collect()).collect()
}

fn max_degree(adj: &[Vec<usize>]) -> usize {
    adj.iter().map(Vec::len).max().unwrap_or(0)
}

/// Greedy coloring of the conflict graph "share an element"; returns 1-based colors.
fn color_by_conflicts<T: Ord + Clone>(items: &[BTreeSet<T>]) -> (Vec<usize>, usize) {
    let adj = conflict_graph(items);
    let colors = greedy_vertex_coloring(&adj);
    (colors.iter().map(|c| c + 1).collect(), max_degree(&adj) + 1)
}

/// Audits that within each color class the given cell sets are disjoint.
fn audit_disjoint(classes: &BTreeMap<Vec<usize>, Vec<usize>>, cells: &[BTreeSet<Cell>], what: &str) -> Result<()> {
    for (key, members) in classes {
        let mut seen: BTreeSet<&Cell> = BTreeSet::new();
        for &m in members {
            for c in &cells[m] {
                if !seen.insert(c) {
                    return Err(Error::DecongestionFailure(format!("{what} {c:?} used twice in color class {key:?}")));
                }
            }
        }
    }
    Ok(())
}

fn classes_of(keys: impl Iterator<Item = Vec<usize>>) -> BTreeMap<Vec<usize>, Vec<usize>> {
    let mut out: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (i, k) in keys.enumerate() {
        out.entry(k).or_default().push(i);
    }
    out
}

/// Lines of the AB graph of every check on one side (f = 2).
pub fn ab_check_lines(code: &CssCode, arr: &QubitArrangement, side: Side) -> Vec<BTreeSet<Line>> {
    (0..code.num_checks(side))
        .map(|c| code.support(side, c).iter().flat_map(|&q| ab_lines(arr.point(q))).collect())
        .collect()
}

fn line_edges(lines: &BTreeSet<Line>, side_len: usize) -> BTreeSet<Cell> {
    lines.iter().flat_map(|l| l.edges(side_len)).collect()
}

/// Line coloring for f = 2: checks conflict when their supported qubits share
/// a row or a column; greedy in check order. The AB graphs of each color
/// class are audited to be edge-disjoint.
pub fn line_coloring_4d(code: &CssCode, arr: &QubitArrangement, side: Side) -> Result<ColorAssignment> {
    let lines = ab_check_lines(code, arr, side);
    let (eta, chi_bound) = color_by_conflicts(&lines);
    let edges: Vec<BTreeSet<Cell>> = lines.iter().map(|l| line_edges(l, arr.side)).collect();
    audit_disjoint(&classes_of(eta.iter().map(|&e| vec![e])), &edges, "grid edge")?;
    Ok(ColorAssignment { chi: color_count_1(&eta), eta, omega: Vec::new(), zeta: 0, chi_bound, zeta_bound: 0 })
}

fn color_count_1(colors: &[usize]) -> usize {
    colors.iter().copied().max().unwrap_or(0)
}

/// Plane coloring for f = 2: within each line-color class, checks receive
/// the distinct values `1, 2, ...` in check order.
pub fn plane_coloring_4d(assignment: &ColorAssignment, side: Side, side_len: usize) -> Result<ColorAssignment> {
    let mut next: BTreeMap<usize, usize> = BTreeMap::new();
    let mut omega = Vec::with_capacity(assignment.eta.len());
    for &e in &assignment.eta {
        let w = next.entry(e).or_insert(0);
        *w += 1;
        omega.push(*w);
    }
    for (&class, &size) in &next {
        if size > side_len {
            return Err(Error::ClassTooLarge { side, class, size, side_len });
        }
    }
    let zeta = color_count_1(&omega);
    Ok(ColorAssignment { omega, zeta, zeta_bound: zeta, ..assignment.clone() })
}

/// Edge coloring of a 2D routing problem with injective sources and
/// destinations: returns a color per packet such that within each color the
/// sources have distinct second coordinates and the destinations distinct
/// first coordinates, so the greedy routes (first along axis 0, then along
/// axis 1) of a class are edge-disjoint.
pub fn color_route_2d(sources: &[Point], destinations: &[Point], side_len: usize) -> Result<Vec<usize>> {
    let distinct = |v: &[Point]| v.iter().collect::<BTreeSet<_>>().len() == v.len();
    if sources.len() != destinations.len() || !distinct(sources) || !distinct(destinations) {
        return Err(Error::DensityViolation("2D color routing needs injective sources and destinations".into()));
    }
    // Left vertices: rows (second coordinate of the source); right: columns (first coordinate of the destination).
    let left: Vec<bool> = (0..2 * side_len).map(|v| v < side_len).collect();
    let edges: Vec<(usize, usize)> =
        sources.iter().zip(destinations).map(|(s, d)| (s[1] - 1, side_len + d[0] - 1)).collect();
    let colors = bipartite_edge_coloring(&left, &edges)?;
    if color_count(&colors) > side_len {
        return Err(Error::DensityViolation("2D color routing used more than L colors".into()));
    }
    Ok(colors.into_iter().map(|c| c + 1).collect())
}

/// Induced routing problem: one packet per unordered pair of distinct qubits
/// sharing a check, oriented from the lexicographically smaller point.
/// Packets are listed in the order of (source point, destination point).
pub fn packets(code: &CssCode, arr: &QubitArrangement) -> Vec<(usize, usize)> {
    let mut set: BTreeSet<(Point, Point)> = BTreeSet::new();
    for side in [Side::X, Side::Z] {
        for c in 0..code.num_checks(side) {
            let s = code.support(side, c);
            for (i, &a) in s.iter().enumerate() {
                for &b in &s[i + 1..] {
                    let (pa, pb) = (arr.point(a).clone(), arr.point(b).clone());
                    set.insert(if pa < pb { (pa, pb) } else { (pb, pa) });
                }
            }
        }
    }
    let at = arr.qubit_at();
    set.into_iter().map(|(a, b)| (at[&a], at[&b])).collect()
}

/// Waypoints of every packet in traversal order together with the density audit data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorRouteTable {
    /// Packets as (source qubit, destination qubit).
    pub packets: Vec<(usize, usize)>,
    /// Waypoints per packet in traversal order; the first is the source and the last the destination.
    pub waypoints: Vec<Vec<Point>>,
    /// Number of edge colors used on the projected multigraph.
    pub colors: usize,
    /// Colors grouped into one intermediate coordinate.
    pub group_size: usize,
    /// Recorded per-point, per-waypoint load bound.
    pub density_bound: usize,
    /// Largest measured load.
    pub max_load: usize,
}

fn max_multiplicity<'a>(points: impl Iterator<Item = &'a Point>) -> usize {
    let mut counts: HashMap<&Point, usize> = HashMap::new();
    for p in points {
        *counts.entry(p).or_default() += 1;
    }
    counts.into_values().max().unwrap_or(0)
}

/// Edge-colors the multigraph joining the projections of sources and
/// destinations onto the first two coordinates. Returns the 0-based color of
/// every listed pair and the number of colors.
fn project_and_color(pairs: &[(Point, Point)], idx: &[usize], side_len: usize) -> Result<(Vec<usize>, usize)> {
    let proj = |p: &Point| (p[0] - 1) * side_len + (p[1] - 1);
    let sq = side_len * side_len;
    let left: Vec<bool> = (0..2 * sq).map(|v| v < sq).collect();
    let edges: Vec<(usize, usize)> = idx.iter().map(|&i| (proj(&pairs[i].0), sq + proj(&pairs[i].1))).collect();
    let colors = bipartite_edge_coloring(&left, &edges)?;
    let n = color_count(&colors);
    Ok((colors, n))
}

/// Density audit: the load of every waypoint index at every point must not exceed `bound`.
fn audit_density(waypoints: &[Vec<Point>], bound: usize) -> Result<usize> {
    let len = waypoints.first().map_or(0, Vec::len);
    let mut worst = 0;
    for s in 0..len {
        let load = max_multiplicity(waypoints.iter().map(|w| &w[s]));
        if load > bound {
            return Err(Error::DensityViolation(format!("waypoint {s} has load {load} > {bound}")));
        }
        worst = worst.max(load);
    }
    Ok(worst)
}

/// Color routes for f = 3. Each packet gets the waypoints source,
/// `(a0, b0, c1)`, `(a1, b1, c1)` and destination, where `c1` groups the
/// edge colors of the projected source/destination multigraph into blocks of
/// `ceil(colors / L)`. A packet whose source equals its destination stays put.
pub fn color_route_5d_points(pairs: &[(Point, Point)], side_len: usize) -> Result<ColorRouteTable> {
    let live: Vec<usize> = (0..pairs.len()).filter(|&i| pairs[i].0 != pairs[i].1).collect();
    let (colors, ncolors) = project_and_color(pairs, &live, side_len)?;
    let group = ncolors.div_ceil(side_len).max(1);
    let mut waypoints: Vec<Vec<Point>> = pairs.iter().map(|(s, _)| vec![s.clone(); 4]).collect();
    for (k, &i) in live.iter().enumerate() {
        let (s, d) = &pairs[i];
        let c1 = colors[k] / group + 1;
        waypoints[i] = vec![s.clone(), vec![s[0], s[1], c1], vec![d[0], d[1], c1], d.clone()];
    }
    let bound =
        max_multiplicity(pairs.iter().map(|p| &p.0)).max(max_multiplicity(pairs.iter().map(|p| &p.1))).max(group);
    let max_load = audit_density(&waypoints, bound)?;
    Ok(ColorRouteTable {
        packets: Vec::new(),
        waypoints,
        colors: ncolors,
        group_size: group,
        density_bound: bound,
        max_load,
    })
}

/// Color routes of the induced routing problem of a code on `[L]^3`.
pub fn color_route_5d(code: &CssCode, arr: &QubitArrangement) -> Result<ColorRouteTable> {
    let packets = packets(code, arr);
    let pairs: Vec<(Point, Point)> =
        packets.iter().map(|&(a, b)| (arr.point(a).clone(), arr.point(b).clone())).collect();
    let mut table = color_route_5d_points(&pairs, arr.side)?;
    table.packets = packets;
    Ok(table)
}

/// Recursive color routes on `[L]^f` for any `f >= 1`.
///
/// Waypoints are indexed by bit strings of length `ceil(f/2)` read as binary
/// numbers, most significant bit first, and returned in that counting order,
/// which is also the traversal order. For `f <= 2` the route is
/// (source, destination). Otherwise the projections onto the first two
/// coordinates are edge-colored, colors are grouped into a point `xi` of
/// `[L]^(f-2)`, and the two halves route inside the fibres over the source
/// and destination projections. Returns the waypoints and the recorded density bound.
pub fn color_route_any_d(pairs: &[(Point, Point)], side_len: usize, f: usize) -> Result<(Vec<Vec<Point>>, usize)> {
    let bits = f.div_ceil(2).max(1);
    let count = 1usize << bits;
    let base_bound = max_multiplicity(pairs.iter().map(|p| &p.0)).max(max_multiplicity(pairs.iter().map(|p| &p.1)));
    if f <= 2 {
        let w: Vec<Vec<Point>> = pairs.iter().map(|(s, d)| vec![s.clone(), d.clone()]).collect();
        return Ok((w, base_bound));
    }
    let live: Vec<usize> = (0..pairs.len()).filter(|&i| pairs[i].0 != pairs[i].1).collect();
    let (colors, ncolors) = project_and_color(pairs, &live, side_len)?;
    let fibre = grid_points(side_len, f - 2);
    let group = ncolors.div_ceil(fibre.len()).max(1);
    let mut xi: HashMap<usize, Point> = HashMap::new();
    for (k, &i) in live.iter().enumerate() {
        xi.insert(i, fibre[colors[k] / group].clone());
    }
    let mut out: Vec<Vec<Point>> = pairs.iter().map(|(s, _)| vec![s.clone(); count]).collect();
    let mut bound = base_bound.max(group);
    // First half: inside the fibre over the source projection.
    let half = count / 2;
    for first in [true, false] {
        let mut groups: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for &i in &live {
            let p = if first { &pairs[i].0 } else { &pairs[i].1 };
            groups.entry((p[0], p[1])).or_default().push(i);
        }
        for ((a, b), members) in groups {
            let sub: Vec<(Point, Point)> = members
                .iter()
                .map(|&i| {
                    let x = xi[&i].clone();
                    if first {
                        (pairs[i].0[2..].to_vec(), x)
                    } else {
                        (x, pairs[i].1[2..].to_vec())
                    }
                })
                .collect();
            let (sw, sb) = color_route_any_d(&sub, side_len, f - 2)?;
            bound = bound.max(sb);
            for (k, &i) in members.iter().enumerate() {
                for (s, w) in sw[k].iter().enumerate() {
                    let mut p = vec![a, b];
                    p.extend_from_slice(w);
                    out[i][if first { s } else { half + s }] = p;
                }
            }
        }
    }
    audit_density(&out, bound)?;
    Ok((out, bound))
}

/// Audits the first clause of the one-plane-at-a-time property: waypoints
/// whose indices agree on the first `i` bits agree on the first `2i` coordinates.
pub fn audit_prefix_property(waypoints: &[Vec<Point>], f: usize) -> bool {
    let bits = f.div_ceil(2).max(1);
    waypoints.iter().all(|w| {
        (0..w.len()).all(|s| {
            (0..w.len()).all(|t| {
                (0..=bits).all(|i| {
                    let same_prefix = i == 0 || (s >> (bits - i)) == (t >> (bits - i));
                    !same_prefix || w[s][..(2 * i).min(f)] == w[t][..(2 * i).min(f)]
                })
            })
        })
    })
}

/// Walk through the waypoints of a route, changing one axis at a time in
/// increasing axis order between consecutive waypoints.
pub fn route_walk(waypoints: &[Point]) -> Vec<Point> {
    let f = waypoints.first().map_or(0, Vec::len);
    let axes: Vec<usize> = (0..f).collect();
    let mut out: Vec<Point> = vec![waypoints[0].clone()];
    for w in waypoints.windows(2) {
        let seg = axis_route(&w[0], &w[1], &axes);
        out.extend(seg.into_iter().skip(1));
    }
    out
}

/// Star lines of a check: all axis lines through its qubits and through
/// every waypoint of every packet whose endpoints it supports.
pub fn star_check_lines(
    code: &CssCode,
    arr: &QubitArrangement,
    table: &ColorRouteTable,
    side: Side,
) -> Vec<BTreeSet<Line>> {
    check_points(code, arr, table, side)
        .into_iter()
        .map(|pts| pts.iter().flat_map(|p| (0..arr.f).map(move |i| Line::through(p, i))).collect())
        .collect()
}

/// Star planes of a check, from the same points as [`star_check_lines`].
pub fn star_check_planes(
    code: &CssCode,
    arr: &QubitArrangement,
    table: &ColorRouteTable,
    side: Side,
) -> Vec<BTreeSet<Plane>> {
    check_points(code, arr, table, side)
        .into_iter()
        .map(|pts| pts.iter().flat_map(|p| star_plane_list(p)).collect())
        .collect()
}

fn check_points(code: &CssCode, arr: &QubitArrangement, table: &ColorRouteTable, side: Side) -> Vec<BTreeSet<Point>> {
    let index: HashMap<(usize, usize), usize> = table.packets.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    (0..code.num_checks(side))
        .map(|c| {
            let s = code.support(side, c);
            let mut pts: BTreeSet<Point> = s.iter().map(|&q| arr.point(q).clone()).collect();
            for (i, &a) in s.iter().enumerate() {
                for &b in &s[i + 1..] {
                    let key = if arr.point(a) < arr.point(b) { (a, b) } else { (b, a) };
                    pts.extend(table.waypoints[index[&key]].iter().cloned());
                }
            }
            pts
        })
        .collect()
}

/// Line coloring for f >= 3: checks conflict when their star graphs share a
/// line; greedy in check order, with an edge-disjointness audit per class.
pub fn line_coloring_5d(lines: &[BTreeSet<Line>], side_len: usize) -> Result<ColorAssignment> {
    let (eta, chi_bound) = color_by_conflicts(lines);
    let edges: Vec<BTreeSet<Cell>> = lines.iter().map(|l| line_edges(l, side_len)).collect();
    audit_disjoint(&classes_of(eta.iter().map(|&e| vec![e])), &edges, "grid edge")?;
    Ok(ColorAssignment { chi: color_count_1(&eta), eta, omega: Vec::new(), zeta: 0, chi_bound, zeta_bound: 0 })
}

/// Plane coloring for f >= 3: within each line-color class, checks conflict
/// when their star planes share a plane; greedy in check order, with a
/// face-disjointness audit per (eta, omega) class.
pub fn plane_coloring_5d(
    assignment: &ColorAssignment,
    planes: &[BTreeSet<Plane>],
    side_len: usize,
) -> Result<ColorAssignment> {
    let mut omega = vec![0; planes.len()];
    let mut zeta_bound = 0;
    for members in classes_of(assignment.eta.iter().map(|&e| vec![e])).values() {
        let sub: Vec<BTreeSet<Plane>> = members.iter().map(|&m| planes[m].clone()).collect();
        let (colors, bound) = color_by_conflicts(&sub);
        zeta_bound = zeta_bound.max(bound);
        for (k, &m) in members.iter().enumerate() {
            omega[m] = colors[k];
        }
    }
    let faces: Vec<BTreeSet<Cell>> =
        planes.iter().map(|ps| ps.iter().flat_map(|p| p.faces(side_len)).collect()).collect();
    let keys = assignment.eta.iter().zip(&omega).map(|(&e, &w)| vec![e, w]);
    audit_disjoint(&classes_of(keys), &faces, "grid face")?;
    Ok(ColorAssignment { zeta: color_count_1(&omega), omega, zeta_bound, ..assignment.clone() })
}

/// Defect routes for f = 2: vertex-disjoint L-shaped paths pairing up the
/// overlap points of an X-check and a Z-check inside `AB(x) n AB(z)`.
///
/// Overlap points are grouped by their first coordinate. Inside a group,
/// consecutive points are paired along the group's line. When a group has an
/// odd number of unpaired points, its extreme point is carried to the next
/// group and joined to that group's extreme point on the matching side: by
/// moving along axis 0 first when the carried point lies beyond the group's
/// range, and along axis 1 first otherwise. Whenever consecutive pairing in
/// lexicographic order is already disjoint, the result coincides with it.
pub fn defect_route_4d(points: &[Point]) -> Vec<Vec<Point>> {
    let mut groups: BTreeMap<usize, Vec<Point>> = BTreeMap::new();
    for p in points {
        groups.entry(p[0]).or_default().push(p.clone());
    }
    let mut out = Vec::new();
    let pair_consecutive = |pts: &[Point], out: &mut Vec<Vec<Point>>| {
        for pair in pts.chunks(2) {
            out.push(axis_route(&pair[0], &pair[1], &[0, 1]));
        }
    };
    // carried point and whether it left its group as the maximum
    let mut carry: Option<(Point, bool)> = None;
    for (_, mut group) in groups {
        group.sort();
        match carry.take() {
            None => {
                if group.len() % 2 == 0 {
                    pair_consecutive(&group, &mut out);
                } else {
                    let exit = group.pop().expect("nonempty group");
                    pair_consecutive(&group, &mut out);
                    carry = Some((exit, true));
                }
            }
            Some((c, exit_max)) => {
                let (lo, hi) = (group[0][1], group[group.len() - 1][1]);
                let (entry_is_max, axes) = if c[1] <= lo {
                    (false, [0, 1])
                } else if c[1] >= hi {
                    (true, [0, 1])
                } else {
                    (exit_max, [1, 0])
                };
                let entry = if entry_is_max { group.pop() } else { Some(group.remove(0)) }.expect("nonempty group");
                out.push(axis_route(&c, &entry, &axes));
                if group.len() % 2 == 1 {
                    let exit = if entry_is_max { group.remove(0) } else { group.pop().expect("nonempty") };
                    carry = Some((exit, !entry_is_max));
                }
                pair_consecutive(&group, &mut out);
            }
        }
    }
    out
}

/// Defect paths for f >= 3: the walks along the color routes of consecutive
/// overlap pairs are summed mod 2, reduced to a forest with the same odd
/// vertices, and split into edge-disjoint simple paths joining those vertices.
pub fn defect_paths_5d(points: &[Point], routes: &[Vec<Point>]) -> Result<Vec<Vec<Point>>> {
    let mut edges: BTreeSet<Cell> = BTreeSet::new();
    for walk in routes {
        for w in walk.windows(2) {
            let e = edge_cell(&w[0], &w[1]);
            if !edges.remove(&e) {
                edges.insert(e);
            }
        }
    }
    let paths = disjoint_paths(&edges);
    let mut odd: BTreeSet<Point> = BTreeSet::new();
    for p in &paths {
        for end in [&p[0], &p[p.len() - 1]] {
            if !odd.remove(end) {
                odd.insert(end.clone());
            }
        }
    }
    let expected: BTreeSet<Point> = points.iter().cloned().collect();
    if odd != expected || paths.len() * 2 != points.len() {
        return Err(Error::BoundaryMismatch(format!("path ends {odd:?} differ from overlap {expected:?}")));
    }
    Ok(paths)
}

/// Splits an edge set into edge-disjoint simple paths whose endpoints pair up
/// the odd-degree vertices. A breadth-first spanning forest is grown from the
/// lexicographically smallest odd vertex of each component, the forest edges
/// separating an odd number of odd vertices are kept, and path stubs are
/// paired bottom-up at the vertex where they meet.
pub fn disjoint_paths(edges: &BTreeSet<Cell>) -> Vec<Vec<Point>> {
    let mut adj: BTreeMap<Cell, Vec<Cell>> = BTreeMap::new();
    for e in edges {
        let (a, b) = edge_endpoints(e);
        adj.entry(a.clone()).or_default().push(b.clone());
        adj.entry(b).or_default().push(a);
    }
    for list in adj.values_mut() {
        list.sort();
    }
    let odd: BTreeSet<Cell> = adj.iter().filter(|(_, n)| n.len() % 2 == 1).map(|(v, _)| v.clone()).collect();
    let mut visited: BTreeSet<Cell> = BTreeSet::new();
    let mut paths = Vec::new();
    for root in &odd {
        if visited.contains(root) {
            continue;
        }
        // Breadth-first tree of the component.
        let mut order = vec![root.clone()];
        let mut parent: HashMap<Cell, Cell> = HashMap::new();
        visited.insert(root.clone());
        let mut queue = VecDeque::from([root.clone()]);
        while let Some(v) = queue.pop_front() {
            for u in &adj[&v] {
                if visited.insert(u.clone()) {
                    parent.insert(u.clone(), v.clone());
                    order.push(u.clone());
                    queue.push_back(u.clone());
                }
            }
        }
        // Bottom-up: every vertex collects stubs (paths ending at it, starting at an odd vertex).
        let mut stubs: HashMap<Cell, Vec<Vec<Cell>>> = HashMap::new();
        for v in order.iter().rev() {
            let mut here = stubs.remove(v).unwrap_or_default();
            if odd.contains(v) {
                here.insert(0, vec![v.clone()]);
            }
            while here.len() >= 2 {
                let a = here.remove(0);
                let b = here.remove(0);
                let mut path = a;
                path.extend(b.into_iter().rev().skip(1));
                if path[0] > path[path.len() - 1] {
                    path.reverse();
                }
                paths.push(path.iter().map(|c| cell_point(c)).collect::<Vec<Point>>());
            }
            if let Some(mut stub) = here.pop() {
                let p = parent.get(v).expect("an unpaired stub never reaches the root").clone();
                stub.push(p.clone());
                stubs.entry(p).or_default().push(stub);
            }
        }
    }
    paths.sort();
    paths
}

/// Options that change the routing plan.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanOptions {
    /// Size the transverse axes by the greedy color bounds instead of the colors used.
    pub boost_colors: bool,
    /// Omit the contracting layer of checks whose route geometry has no cycle.
    pub prune_contracting: bool,
}

/// Placement of one check layer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckPlan {
    /// Transverse coordinate: x-hat for X-checks, z-hat for Z-checks (1-based).
    pub eta: usize,
    /// Coordinate of the contracting layer along the other transverse axis, when attached.
    pub omega: Option<usize>,
    /// Route geometry in the qubit grid.
    pub graph: GridGraph,
    /// Cells (doubled grid coordinates) of the contracting layer.
    pub contracting: Vec<Cell>,
}

/// Defect paths between one X-check and one Z-check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefectPlan {
    pub x: usize,
    pub z: usize,
    pub paths: Vec<Vec<Point>>,
}

/// Everything the layer builder needs to know about the geometry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoutingPlan {
    pub dimension: usize,
    pub f: usize,
    pub side: usize,
    pub l_x: usize,
    pub l_z: usize,
    pub x_colors: ColorAssignment,
    pub z_colors: ColorAssignment,
    pub x_checks: Vec<CheckPlan>,
    pub z_checks: Vec<CheckPlan>,
    pub defects: Vec<DefectPlan>,
    pub color_routes: Option<ColorRouteTable>,
    pub options: PlanOptions,
}

fn full_plane_cells(side_len: usize) -> Vec<Cell> {
    let mut out = Plane::through(&[1, 1], 0, 1).cells(side_len);
    out.sort();
    out
}

fn check_plans(
    graphs: Vec<GridGraph>,
    colors: &ColorAssignment,
    contracting: impl Fn(usize) -> Vec<Cell>,
    options: PlanOptions,
) -> Vec<CheckPlan> {
    graphs
        .into_iter()
        .enumerate()
        .map(|(c, graph)| {
            let attach = !(options.prune_contracting && graph.cycle_rank() == 0) && !colors.omega.is_empty();
            CheckPlan {
                eta: colors.eta[c],
                omega: if attach { Some(colors.omega[c]) } else { None },
                contracting: if attach { contracting(c) } else { Vec::new() },
                graph,
            }
        })
        .collect()
}

fn overlapping_pairs(code: &CssCode, arr: &QubitArrangement) -> Result<Vec<(usize, usize, Vec<usize>)>> {
    let mut out = Vec::new();
    for x in 0..code.num_checks(Side::X) {
        for z in 0..code.num_checks(Side::Z) {
            let o = overlap(code, arr, x, z)?;
            if !o.is_empty() {
                out.push((x, z, o));
            }
        }
    }
    Ok(out)
}

/// Routing plan for the 3D construction: qubits on a line, every check
/// spanning the whole line at its own transverse coordinate.
///
/// The transverse extents are `max(|X|, L)` and `max(|Z|, L)`. With only
/// `|X|` and `|Z|` vertices a code with a single Z-check gets X layers
/// without any ẑ faces, and an X-layer edge between two defect strings
/// becomes a weight-1 logical (the [[4,2,2]] code is an example).
pub fn plan_3d(code: &CssCode, arr: &QubitArrangement) -> Result<RoutingPlan> {
    if arr.f != 1 {
        return Err(Error::UnsupportedDimension(arr.f + 2));
    }
    let line = GridGraph::from_lines(1, arr.side, [Line { axis: 0, anchor: vec![0] }].iter());
    let colors = |side: Side| {
        let n = code.num_checks(side);
        ColorAssignment { eta: (1..=n).collect(), omega: Vec::new(), chi: n, zeta: 0, chi_bound: n, zeta_bound: 0 }
    };
    let (xc, zc) = (colors(Side::X), colors(Side::Z));
    let plans =
        |c: &ColorAssignment| check_plans(vec![line.clone(); c.eta.len()], c, |_| Vec::new(), PlanOptions::default());
    let mut defects = Vec::new();
    for (x, z, o) in overlapping_pairs(code, arr)? {
        let paths = o.chunks(2).map(|p| axis_route(arr.point(p[0]), arr.point(p[1]), &[0])).collect();
        defects.push(DefectPlan { x, z, paths });
    }
    Ok(RoutingPlan {
        dimension: 3,
        f: 1,
        side: arr.side,
        l_x: xc.chi.max(arr.side),
        l_z: zc.chi.max(arr.side),
        x_checks: plans(&xc),
        z_checks: plans(&zc),
        x_colors: xc,
        z_colors: zc,
        defects,
        color_routes: None,
        options: PlanOptions::default(),
    })
}

/// Routing plan for the 4D construction (f = 2).
pub fn plan_4d(code: &CssCode, arr: &QubitArrangement, options: PlanOptions) -> Result<RoutingPlan> {
    if arr.f != 2 {
        return Err(Error::UnsupportedDimension(arr.f + 2));
    }
    let l = arr.side;
    let mut colors = Vec::new();
    let mut plans = Vec::new();
    for side in [Side::X, Side::Z] {
        let eta = line_coloring_4d(code, arr, side)?;
        let c = plane_coloring_4d(&eta, side, l)?;
        let graphs: Vec<GridGraph> =
            ab_check_lines(code, arr, side).iter().map(|ls| GridGraph::from_lines(2, l, ls.iter())).collect();
        plans.push(check_plans(graphs, &c, |_| full_plane_cells(l), options));
        colors.push(c);
    }
    let mut defects = Vec::new();
    for (x, z, o) in overlapping_pairs(code, arr)? {
        let pts: Vec<Point> = o.iter().map(|&q| arr.point(q).clone()).collect();
        defects.push(DefectPlan { x, z, paths: defect_route_4d(&pts) });
    }
    let zc = colors.pop().expect("two sides");
    let xc = colors.pop().expect("two sides");
    let zp = plans.pop().expect("two sides");
    let xp = plans.pop().expect("two sides");
    let (cx, cz) = if options.boost_colors { (xc.chi_bound, zc.chi_bound) } else { (xc.chi, zc.chi) };
    Ok(RoutingPlan {
        dimension: 4,
        f: 2,
        side: l,
        l_x: cx.max(l),
        l_z: cz.max(l),
        x_checks: xp,
        z_checks: zp,
        x_colors: xc,
        z_colors: zc,
        defects,
        color_routes: None,
        options,
    })
}

/// Routing plan for f >= 3 (D >= 5). For f = 3 the color routes come from
/// [`color_route_5d`]; larger f uses the recursive [`color_route_any_d`].
pub fn plan_star(code: &CssCode, arr: &QubitArrangement, options: PlanOptions) -> Result<RoutingPlan> {
    let f = arr.f;
    if f < 3 {
        return Err(Error::UnsupportedDimension(f + 2));
    }
    let l = arr.side;
    let table = if f == 3 {
        color_route_5d(code, arr)?
    } else {
        let pk = packets(code, arr);
        let pairs: Vec<(Point, Point)> =
            pk.iter().map(|&(a, b)| (arr.point(a).clone(), arr.point(b).clone())).collect();
        let (waypoints, bound) = color_route_any_d(&pairs, l, f)?;
        let max_load = audit_density(&waypoints, bound)?;
        ColorRouteTable { packets: pk, waypoints, colors: 0, group_size: 0, density_bound: bound, max_load }
    };
    let mut colors = Vec::new();
    let mut plans = Vec::new();
    for side in [Side::X, Side::Z] {
        let lines = star_check_lines(code, arr, &table, side);
        let planes = star_check_planes(code, arr, &table, side);
        let eta = line_coloring_5d(&lines, l)?;
        let c = plane_coloring_5d(&eta, &planes, l)?;
        let graphs: Vec<GridGraph> = lines.iter().map(|ls| GridGraph::from_lines(f, l, ls.iter())).collect();
        let contracting = |i: usize| -> Vec<Cell> {
            let set: BTreeSet<Cell> = planes[i].iter().flat_map(|p| p.cells(l)).collect();
            set.into_iter().collect()
        };
        plans.push(check_plans(graphs, &c, contracting, options));
        colors.push(c);
    }
    let index: HashMap<(usize, usize), usize> = table.packets.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut defects = Vec::new();
    for (x, z, o) in overlapping_pairs(code, arr)? {
        let pts: Vec<Point> = o.iter().map(|&q| arr.point(q).clone()).collect();
        let walks: Vec<Vec<Point>> = o.chunks(2).map(|p| route_walk(&table.waypoints[index[&(p[0], p[1])]])).collect();
        defects.push(DefectPlan { x, z, paths: defect_paths_5d(&pts, &walks)? });
    }
    let zc = colors.pop().expect("two sides");
    let xc = colors.pop().expect("two sides");
    let zp = plans.pop().expect("two sides");
    let xp = plans.pop().expect("two sides");
    let (cx, cz, wx, wz) = if options.boost_colors {
        (xc.chi_bound, zc.chi_bound, xc.zeta_bound, zc.zeta_bound)
    } else {
        (xc.chi, zc.chi, xc.zeta, zc.zeta)
    };
    Ok(RoutingPlan {
        dimension: f + 2,
        f,
        side: l,
        l_x: cx.max(wz).max(1),
        l_z: cz.max(wx).max(1),
        x_checks: xp,
        z_checks: zp,
        x_colors: xc,
        z_colors: zc,
        defects,
        color_routes: Some(table),
        options,
    })
}

/// Routing plan for dimension `d` (3, 4, or at least 5).
pub fn plan(code: &CssCode, arr: &QubitArrangement, d: usize, options: PlanOptions) -> Result<RoutingPlan> {
    match d {
        3 => plan_3d(code, arr),
        4 => plan_4d(code, arr, options),
        d if d >= 5 => plan_star(code, arr, options),
        d => Err(Error::UnsupportedDimension(d)),
    }
}

/// Audit results for a routing plan, recomputed from the plan's geometry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoutingAudit {
    /// Largest number of same-eta check geometries sharing a grid edge.
    pub eta_edge_multiplicity: usize,
    /// Largest number of same-(eta, omega) contracting layers sharing a grid face.
    pub eta_omega_face_multiplicity: usize,
    /// Largest number of checks sharing an (eta, omega) pair (f = 2 only; 0 otherwise).
    pub eta_omega_class_size: usize,
    /// Every defect path lies in both check geometries.
    pub defects_contained: bool,
    /// Defect paths of each pair are vertex-disjoint (f <= 2) or edge-disjoint (f >= 3).
    pub defects_disjoint: bool,
    /// Odd endpoints of each pair's defect paths equal the overlap.
    pub defect_boundaries_match: bool,
}

/// Recomputes the routing invariants of a plan.
pub fn audit_plan(code: &CssCode, arr: &QubitArrangement, plan: &RoutingPlan) -> Result<RoutingAudit> {
    let mut eta_edge = 0;
    let mut face = 0;
    let mut class_size = 0;
    for checks in [&plan.x_checks, &plan.z_checks] {
        let mut edge_counts: HashMap<(usize, &Cell), usize> = HashMap::new();
        let mut face_counts: HashMap<(usize, usize, &Cell), usize> = HashMap::new();
        let mut classes: HashMap<(usize, usize), usize> = HashMap::new();
        for c in checks.iter() {
            for e in &c.graph.edges {
                let k = edge_counts.entry((c.eta, e)).or_default();
                *k += 1;
                eta_edge = eta_edge.max(*k);
            }
            if let Some(w) = c.omega {
                for cell in c.contracting.iter().filter(|cell| crate::grid::cell_dim(cell) == 2) {
                    let k = face_counts.entry((c.eta, w, cell)).or_default();
                    *k += 1;
                    face = face.max(*k);
                }
                let k = classes.entry((c.eta, w)).or_default();
                *k += 1;
                if plan.f == 2 {
                    class_size = class_size.max(*k);
                }
            }
        }
    }
    let mut contained = true;
    let mut disjoint = true;
    let mut boundaries = true;
    for d in &plan.defects {
        let gx = &plan.x_checks[d.x].graph;
        let gz = &plan.z_checks[d.z].graph;
        contained &= d.paths.iter().all(|p| gx.contains_path(p) && gz.contains_path(p));
        let mut used: BTreeSet<Cell> = BTreeSet::new();
        for p in &d.paths {
            let cells: Vec<Cell> = if plan.f <= 2 {
                p.iter().map(|v| vertex_cell(v)).collect()
            } else {
                p.windows(2).map(|w| edge_cell(&w[0], &w[1])).collect()
            };
            for c in cells {
                disjoint &= used.insert(c);
            }
            // simple path: no repeated vertices
            let verts: BTreeSet<&Point> = p.iter().collect();
            disjoint &= verts.len() == p.len();
        }
        let mut ends: BTreeSet<Point> = BTreeSet::new();
        for p in &d.paths {
            for e in [&p[0], &p[p.len() - 1]] {
                if !ends.remove(e) {
                    ends.insert(e.clone());
                }
            }
        }
        let o: BTreeSet<Point> = overlap(code, arr, d.x, d.z)?.iter().map(|&q| arr.point(q).clone()).collect();
        boundaries &= ends == o && d.paths.len() * 2 == o.len();
    }
    Ok(RoutingAudit {
        eta_edge_multiplicity: eta_edge,
        eta_omega_face_multiplicity: face,
        eta_omega_class_size: class_size,
        defects_contained: contained,
        defects_disjoint: disjoint,
        defect_boundaries_match: boundaries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::css::{arrange_qubits, fixtures, ArrangementMode};

    #[test]
    fn shor_colors() {
        let code = fixtures::shor();
        let arr = arrange_qubits(&code, 2, &ArrangementMode::Spiral).unwrap();
        let x = line_coloring_4d(&code, &arr, Side::X).unwrap();
        assert_eq!(x.chi, 2);
        let z = line_coloring_4d(&code, &arr, Side::Z).unwrap();
        assert!(z.chi <= 6);
        let xw = plane_coloring_4d(&x, Side::X, 3).unwrap();
        assert!(xw.omega.iter().all(|&w| (1..=3).contains(&w)));
    }

    #[test]
    fn single_check_one_color() {
        let code = CssCode::from_dense(&[vec![1, 1]], &[], 2).unwrap();
        let arr = arrange_qubits(&code, 2, &ArrangementMode::RowMajor).unwrap();
        let x = plane_coloring_4d(&line_coloring_4d(&code, &arr, Side::X).unwrap(), Side::X, 2).unwrap();
        assert_eq!((x.eta.clone(), x.omega.clone()), (vec![1], vec![1]));
    }

    #[test]
    fn snake_on_two_by_three_block() {
        // Six points on a 2x3 block: lexicographic pairing cannot be made vertex-disjoint.
        let pts: Vec<Point> = vec![vec![1, 1], vec![1, 2], vec![1, 3], vec![2, 1], vec![2, 2], vec![2, 3]];
        let paths = defect_route_4d(&pts);
        assert_eq!(paths.len(), 3);
        let mut seen = BTreeSet::new();
        for p in &paths {
            for v in p {
                assert!(seen.insert(v.clone()), "vertex {v:?} reused");
            }
        }
    }

    #[test]
    fn snake_matches_lex_pairing_when_even_rows() {
        let pts: Vec<Point> = vec![vec![1, 1], vec![1, 3], vec![2, 2], vec![3, 2]];
        let paths = defect_route_4d(&pts);
        assert_eq!(paths[0], vec![vec![1, 1], vec![1, 2], vec![1, 3]]);
        assert_eq!(paths[1], vec![vec![2, 2], vec![3, 2]]);
    }

    #[test]
    fn color_route_degenerate_and_planes() {
        let pairs =
            vec![(vec![1, 1, 1], vec![1, 1, 1]), (vec![1, 1, 1], vec![2, 2, 2]), (vec![1, 2, 1], vec![2, 1, 2])];
        let t = color_route_5d_points(&pairs, 2).unwrap();
        assert!(t.waypoints[0].iter().all(|p| *p == pairs[0].0));
        for w in &t.waypoints[1..] {
            assert_eq!(w[0][..2], w[1][..2]);
            assert_eq!(w[1][2], w[2][2]);
            assert_eq!(w[2][..2], w[3][..2]);
        }
        let (any, _) = color_route_any_d(&pairs, 2, 3).unwrap();
        assert_eq!(any, t.waypoints);
    }

    #[test]
    fn disjoint_paths_from_colliding_walks() {
        // Two walks sharing the edge (1,2,1)-(2,2,1).
        let walks =
            vec![vec![vec![1, 1, 1], vec![1, 2, 1], vec![2, 2, 1]], vec![vec![1, 2, 1], vec![2, 2, 1], vec![3, 2, 1]]];
        let pts = vec![vec![1, 1, 1], vec![1, 2, 1], vec![2, 2, 1], vec![3, 2, 1]];
        let paths = defect_paths_5d(&pts, &walks).unwrap();
        assert_eq!(paths.len(), 2);
        let mut edges = BTreeSet::new();
        for p in &paths {
            for w in p.windows(2) {
                assert!(edges.insert(edge_cell(&w[0], &w[1])));
            }
        }
    }

    #[test]
    fn two_d_color_routing_is_injective_per_class() {
        let sources = vec![vec![1, 1], vec![2, 1], vec![3, 2]];
        let dests = vec![vec![3, 3], vec![3, 2], vec![1, 1]];
        let colors = color_route_2d(&sources, &dests, 3).unwrap();
        for c in 1..=3 {
            let members: Vec<usize> = (0..3).filter(|&i| colors[i] == c).collect();
            let rows: BTreeSet<usize> = members.iter().map(|&i| sources[i][1]).collect();
            let cols: BTreeSet<usize> = members.iter().map(|&i| dests[i][0]).collect();
            assert_eq!(rows.len(), members.len());
            assert_eq!(cols.len(), members.len());
        }
    }
}
