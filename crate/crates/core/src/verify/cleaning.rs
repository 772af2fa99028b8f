//! Constructive syndrome cleaning inside one layer, realized as Pauli paths
//! whose intermediate syndrome weight is measured.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap};

use serde::{Deserialize, Serialize};

use crate::css::{validate_css, WeightProfile};
use crate::error::{Error, Result};
use crate::f2::{solve, xor_sorted, SparseBoolMatrix};
use crate::layers::{skeleton_path, LayerCode, LayerKind};

/// A Pauli path flipping one grade-1 cell per step. `flips[t]` is the cell
/// flipped at step `t + 1`, so `gamma(t)` is the sum of the first `t` flips
/// and consecutive chains differ in exactly one cell.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PauliPath {
    /// Global grade-1 indices in flip order.
    pub flips: Vec<usize>,
    /// Start positions in `flips` of independently measured segments.
    pub segments: Vec<usize>,
}

impl PauliPath {
    /// Step bound `c` of the path.
    pub const STEP: usize = 1;

    /// Support of the final chain.
    pub fn endpoint(&self) -> Vec<usize> {
        let mut set = BTreeSet::new();
        for &e in &self.flips {
            if !set.remove(&e) {
                set.insert(e);
            }
        }
        set.into_iter().collect()
    }

    /// `max_t |d gamma(t)|` for the flips in `range`, starting from the zero chain.
    fn energy_of(flips: &[usize], d1_t: &SparseBoolMatrix) -> usize {
        let mut syndrome: BTreeSet<usize> = BTreeSet::new();
        let mut worst = 0;
        for &e in flips {
            for &r in d1_t.row(e) {
                if !syndrome.remove(&r) {
                    syndrome.insert(r);
                }
            }
            worst = worst.max(syndrome.len());
        }
        worst
    }

    /// Largest syndrome weight along the whole path; `d1_t` is the transpose of the total `d1`.
    pub fn energy(&self, d1_t: &SparseBoolMatrix) -> usize {
        Self::energy_of(&self.flips, d1_t)
    }

    /// Largest syndrome weight along each segment, each measured from the zero chain.
    pub fn segment_energies(&self, d1_t: &SparseBoolMatrix) -> Vec<usize> {
        let mut bounds = self.segments.clone();
        bounds.push(self.flips.len());
        bounds.windows(2).map(|w| Self::energy_of(&self.flips[w[0]..w[1]], d1_t)).collect()
    }
}

/// Result of cleaning a syndrome on one layer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleanResult {
    /// Support of the correction (global grade-1 indices, sorted).
    pub correction: Vec<usize>,
    pub path: PauliPath,
    /// Measured energy: the whole path for X and qubit layers, the largest segment for Z layers.
    pub energy: usize,
    /// Bound the measured energy is compared against.
    pub bound: usize,
    /// Set when the path did not come from the structured construction and
    /// had to be ordered greedily from a linear solve.
    pub fallback: bool,
    /// For Z layers with an odd syndrome: the global grade-0 index of the anchor vertex.
    pub anchor: Option<usize>,
}

/// Precomputed transposes used by cleaning and extraction.
pub struct Cleaner<'a> {
    pub lc: &'a LayerCode,
    pub profile: WeightProfile,
    pub d1: SparseBoolMatrix,
    pub d1_t: SparseBoolMatrix,
    dx1_t: SparseBoolMatrix,
    gqx1_t: SparseBoolMatrix,
    pzx1_t: SparseBoolMatrix,
    x1_index: HashMap<(usize, Vec<i32>), usize>,
    q1_index: HashMap<(usize, Vec<i32>), usize>,
}

#[derive(Clone, Debug)]
struct Move {
    cells: Vec<usize>,
    faces: Vec<usize>,
    cost: (usize, usize),
}

impl<'a> Cleaner<'a> {
    pub fn new(lc: &'a LayerCode) -> Result<Self> {
        let (_, d1) = lc.total_differentials()?;
        let index = |k: LayerKind| lc.cells.get(k, 1).iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        Ok(Cleaner {
            profile: validate_css(&lc.code)?,
            d1_t: d1.transpose(),
            d1,
            dx1_t: lc.blocks.dx1.transpose(),
            gqx1_t: lc.blocks.gqx1.transpose(),
            pzx1_t: lc.blocks.pzx1.transpose(),
            x1_index: index(LayerKind::X),
            q1_index: index(LayerKind::Q),
            lc,
        })
    }

    /// Energy bound of the cleaning construction on a layer of `kind` for a syndrome of weight `s`.
    pub fn bound(&self, kind: LayerKind, s: usize) -> usize {
        let p = &self.profile;
        match kind {
            LayerKind::X => {
                let factor = match self.lc.dimension {
                    3 => p.w_x,
                    4 => p.w_x * p.q_z * p.w_x.min(p.w_z),
                    _ => p.w() * p.w() * p.q(),
                };
                (1 + factor) * s
            }
            LayerKind::Q => (1 + p.q_z) * s,
            LayerKind::Z => 2,
        }
    }

    /// Finds a correction `e` on `layer` with `d e = sigma` (for Z layers: up
    /// to the anchor vertex when `|sigma|` is odd). `sigma` lists indices into
    /// the layer kind's grade-0 cells.
    pub fn clean_syndrome(&self, layer: usize, sigma: &[usize]) -> Result<CleanResult> {
        let kind = self.lc.layers[layer].kind;
        let range = self.lc.layer_range(layer, 0);
        let sigma: BTreeSet<usize> = sigma.iter().copied().collect();
        if sigma.iter().any(|s| !range.contains(s)) {
            return Err(Error::NotInImage);
        }
        let sigma: Vec<usize> = sigma.into_iter().collect();
        let mut result = match kind {
            LayerKind::X => self.clean_x(layer, &sigma)?,
            LayerKind::Q => self.clean_q(layer, &sigma)?,
            LayerKind::Z => self.clean_z(layer, &sigma)?,
        };
        result.bound = self.bound(kind, sigma.len());
        result.energy = match kind {
            LayerKind::Z => result.path.segment_energies(&self.d1_t).into_iter().max().unwrap_or(0),
            _ => result.path.energy(&self.d1_t),
        };
        Ok(result)
    }

    fn finish(&self, flips: Vec<usize>, segments: Vec<usize>, fallback: bool, anchor: Option<usize>) -> CleanResult {
        let path = PauliPath { flips, segments };
        CleanResult { correction: path.endpoint(), path, energy: 0, bound: 0, fallback, anchor }
    }

    fn x_moves(&self, layer: usize) -> Vec<Move> {
        let lc = self.lc;
        let mut moves = Vec::new();
        let external = |cells: &[usize]| -> usize {
            let mut q: Vec<usize> = Vec::new();
            let mut z: Vec<usize> = Vec::new();
            for &c in cells {
                q = xor_sorted(&q, self.gqx1_t.row(c));
                z = xor_sorted(&z, self.pzx1_t.row(c));
            }
            q.len() + z.len()
        };
        for e in lc.layer_range(layer, 1) {
            let faces = self.dx1_t.row(e).to_vec();
            if matches!(faces.len(), 1 | 2) {
                moves.push(Move { cost: (external(&[e]), 1), cells: vec![e], faces });
            }
        }
        let spec = &lc.layers[layer];
        if spec.omega.is_some() {
            let check = &lc.plan.x_checks[spec.owner];
            let eta = 2 * check.eta as i32;
            for edge in &check.graph.edges {
                let cells: Option<Vec<usize>> = (1..=lc.extents.l_z as i32)
                    .map(|k| {
                        let mut c = vec![eta];
                        c.extend_from_slice(edge);
                        c.push(2 * k);
                        self.x1_index.get(&(layer, c)).copied()
                    })
                    .collect();
                let Some(cells) = cells else { continue };
                let mut faces: Vec<usize> = Vec::new();
                for &c in &cells {
                    faces = xor_sorted(&faces, self.dx1_t.row(c));
                }
                if matches!(faces.len(), 1 | 2) {
                    moves.push(Move { cost: (external(&cells), cells.len()), cells, faces });
                }
            }
        }
        moves
    }

    /// Cheapest sequence of moves from `start` to the layer boundary, listed from `start` outward.
    fn exit_route(moves: &[Move], by_face: &HashMap<usize, Vec<usize>>, start: usize) -> Option<Vec<usize>> {
        const EXIT: usize = usize::MAX;
        let mut dist: HashMap<usize, (usize, usize)> = HashMap::from([(start, (0, 0))]);
        let mut prev: HashMap<usize, (usize, usize)> = HashMap::new();
        let mut heap = BinaryHeap::from([Reverse(((0usize, 0usize), start))]);
        while let Some(Reverse((d, face))) = heap.pop() {
            if face == EXIT {
                let mut route = Vec::new();
                let mut cur = EXIT;
                while cur != start {
                    let (p, m) = prev[&cur];
                    route.push(m);
                    cur = p;
                }
                route.reverse();
                return Some(route);
            }
            if dist.get(&face).is_some_and(|&best| d > best) {
                continue;
            }
            for &m in by_face.get(&face).map(Vec::as_slice).unwrap_or(&[]) {
                let mv = &moves[m];
                let next = if mv.faces.len() == 1 {
                    EXIT
                } else if mv.faces[0] == face {
                    mv.faces[1]
                } else {
                    mv.faces[0]
                };
                let nd = (d.0 + mv.cost.0, d.1 + mv.cost.1);
                if dist.get(&next).is_none_or(|&best| nd < best) {
                    dist.insert(next, nd);
                    prev.insert(next, (face, m));
                    heap.push(Reverse((nd, next)));
                }
            }
        }
        None
    }

    /// X layers: every face is carried to the layer boundary along the
    /// cheapest sequence of single cells and z-hat columns, where cost counts
    /// the syndromes created on qubit and Z layers. Moves are flipped from
    /// the boundary inward so that at most one face of the layer is violated
    /// by the route in progress.
    fn clean_x(&self, layer: usize, sigma: &[usize]) -> Result<CleanResult> {
        let moves = self.x_moves(layer);
        let mut by_face: HashMap<usize, Vec<usize>> = HashMap::new();
        for (i, m) in moves.iter().enumerate() {
            for &f in &m.faces {
                by_face.entry(f).or_default().push(i);
            }
        }
        let x1_off = self.lc.cells.offset(LayerKind::X, 1);
        let mut flips = Vec::new();
        let mut segments = Vec::new();
        for &f in sigma {
            let Some(route) = Self::exit_route(&moves, &by_face, f) else {
                return self.fallback(layer, sigma, LayerKind::X);
            };
            segments.push(flips.len());
            for &m in route.iter().rev() {
                flips.extend(moves[m].cells.iter().map(|&c| c + x1_off));
            }
        }
        Ok(self.finish(flips, segments, false, None))
    }

    /// Qubit layers: a point `|i, q, k+>` is cleaned by the z-hat string
    /// `sum_{k' <= k} |i, q, k'>`, flipped from `k' = 1` upward.
    fn clean_q(&self, layer: usize, sigma: &[usize]) -> Result<CleanResult> {
        let lc = self.lc;
        let q0 = lc.cells.get(LayerKind::Q, 0);
        let q1_off = lc.cells.offset(LayerKind::Q, 1);
        let mut flips = Vec::new();
        let mut segments = Vec::new();
        for &s in sigma {
            let cell = &q0[s].1;
            let top = cell[cell.len() - 1];
            segments.push(flips.len());
            for k in (2..top).step_by(2) {
                let mut c = cell.clone();
                let last = c.len() - 1;
                c[last] = k;
                let i = self.q1_index.get(&(layer, c)).copied().ok_or(Error::NotInImage)?;
                flips.push(i + q1_off);
            }
        }
        Ok(self.finish(flips, segments, false, None))
    }

    /// Z layers: syndrome vertices are paired in cell order and joined by
    /// shortest paths of the layer's 1-skeleton, each flipped from its first
    /// endpoint. An unpaired vertex is joined to the anchor, the
    /// lexicographically smallest vertex of the layer.
    fn clean_z(&self, layer: usize, sigma: &[usize]) -> Result<CleanResult> {
        let lc = self.lc;
        let dz1 = &lc.blocks.dz1;
        let dz1_t = dz1.transpose();
        let z1_off = lc.cells.offset(LayerKind::Z, 1);
        let anchor_local = lc.layer_range(layer, 0).start;
        let mut points = sigma.to_vec();
        let mut anchor = None;
        if points.len() % 2 == 1 {
            anchor = Some(lc.global_index(LayerKind::Z, 0, anchor_local));
            if let Some(pos) = points.iter().position(|&p| p == anchor_local) {
                points.remove(pos);
            } else {
                points.push(anchor_local);
            }
        }
        let mut flips = Vec::new();
        let mut segments = Vec::new();
        for pair in points.chunks(2) {
            let path = skeleton_path(dz1, &dz1_t, pair[0], pair[1]).ok_or(Error::NotInImage)?;
            segments.push(flips.len());
            flips.extend(path.into_iter().map(|e| e + z1_off));
        }
        Ok(self.finish(flips, segments, false, anchor))
    }

    /// Linear solve on the layer followed by a greedy flip order that keeps
    /// the total syndrome as small as possible at every step.
    fn fallback(&self, layer: usize, sigma: &[usize], kind: LayerKind) -> Result<CleanResult> {
        let lc = self.lc;
        let r0: Vec<usize> = lc.layer_range(layer, 0).collect();
        let r1: Vec<usize> = lc.layer_range(layer, 1).collect();
        let block = lc.blocks.block(kind, kind, 1).expect("diagonal block").submatrix(&r0, &r1);
        let rhs: Vec<usize> = sigma.iter().map(|s| s - r0[0]).collect();
        let local = solve(&block, &rhs).ok_or(Error::NotInImage)?;
        let off = lc.cells.offset(kind, 1);
        let mut remaining: Vec<usize> = local.into_iter().map(|i| r1[i] + off).collect();
        let mut syndrome: BTreeSet<usize> = BTreeSet::new();
        let mut flips = Vec::new();
        while !remaining.is_empty() {
            let weight_after = |e: usize| {
                let row = self.d1_t.row(e);
                let hit = row.iter().filter(|r| syndrome.contains(r)).count();
                syndrome.len() + row.len() - 2 * hit
            };
            let (pos, _) =
                remaining.iter().enumerate().min_by_key(|(_, &e)| (weight_after(e), e)).expect("remaining is nonempty");
            let e = remaining.remove(pos);
            for &r in self.d1_t.row(e) {
                if !syndrome.remove(&r) {
                    syndrome.insert(r);
                }
            }
            flips.push(e);
        }
        Ok(self.finish(flips, vec![0], true, None))
    }

    /// Boundary of a global 1-chain in the total complex (global grade-0 indices).
    pub fn boundary(&self, chain: &[usize]) -> Vec<usize> {
        let mut out: BTreeSet<usize> = BTreeSet::new();
        for &e in chain {
            for &r in self.d1_t.row(e) {
                if !out.remove(&r) {
                    out.insert(r);
                }
            }
        }
        out.into_iter().collect()
    }

    /// Syndrome of a global 1-chain restricted to one layer, as indices into the layer kind's grade-0 list.
    pub fn layer_syndrome(&self, layer: usize, chain: &[usize]) -> Vec<usize> {
        let kind = self.lc.layers[layer].kind;
        let off = self.lc.cells.offset(kind, 0);
        let range = self.lc.layer_range(layer, 0);
        self.boundary(chain).into_iter().filter(|&r| r >= off && range.contains(&(r - off))).map(|r| r - off).collect()
    }
}
