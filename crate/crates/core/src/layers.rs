//! Assembly of the layer code: one surface-code layer per qubit, one check
//! layer per X- and Z-check, the gluing maps between check layers and qubit
//! layers, and the defect maps from X layers to Z layers.
//!
//! Every cell carries ambient doubled coordinates `[x-hat, grid..., z-hat]`.
//! Cells of the output complex are grouped by layer kind (X, then qubit, then
//! Z), then by layer, then sorted by coordinates.

use std::collections::{BTreeSet, HashMap, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::complex::{
    cubical_complex, homology_dims, repetition_complex, tensor_complex, transpose_complex, union_complex,
    ChainComplex3, GraphComplex,
};
use crate::css::{arrange_qubits, validate_css, ArrangementMode, CssCode, QubitArrangement};
use crate::error::{Error, Result, Side};
use crate::f2::{BitRow, SparseBoolMatrix};
use crate::grid::{edge_cell, edge_endpoints, vertex_cell, Cell, GridGraph};
use crate::routing::{plan, CheckPlan, PlanOptions, RoutingPlan};

/// Bundle format tag.
pub const FORMAT: &str = "layerforge-bundle-1";

/// Kind of a layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LayerKind {
    X,
    Q,
    Z,
}

impl LayerKind {
    pub const ALL: [LayerKind; 3] = [LayerKind::X, LayerKind::Q, LayerKind::Z];

    pub fn index(self) -> usize {
        match self {
            LayerKind::X => 0,
            LayerKind::Q => 1,
            LayerKind::Z => 2,
        }
    }
}

/// One layer of the output code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerSpec {
    pub kind: LayerKind,
    /// Index of the owning check or qubit in the input code.
    pub owner: usize,
    /// Transverse coordinate of a check layer.
    pub eta: Option<usize>,
    /// Coordinate of the contracting layer, when attached.
    pub omega: Option<usize>,
}

/// Extents of the ambient grid `[L_X] x [L]^f x [L_Z]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extents {
    pub side: usize,
    pub f: usize,
    pub l_x: usize,
    pub l_z: usize,
}

/// Settings of a build; recorded in the bundle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildConfig {
    pub dimension: usize,
    pub arrangement: ArrangementMode,
    pub boost_colors: bool,
    pub prune_contracting: bool,
}

impl BuildConfig {
    pub fn new(dimension: usize, arrangement: ArrangementMode) -> Self {
        BuildConfig { dimension, arrangement, boost_colors: false, prune_contracting: false }
    }
}

/// Input hash and color counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub input_sha256: String,
    pub chi_x: usize,
    pub chi_z: usize,
    pub zeta_x: usize,
    pub zeta_z: usize,
}

/// A cell of the output complex: owning layer (index into the layer list) and ambient coordinates.
pub type CellRef = (usize, Cell);

/// Cells per layer kind, each split by grade (`[grade0, grade1, grade2]`).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellTable {
    pub x: [Vec<CellRef>; 3],
    pub q: [Vec<CellRef>; 3],
    pub z: [Vec<CellRef>; 3],
}

impl CellTable {
    pub fn get(&self, kind: LayerKind, grade: usize) -> &[CellRef] {
        match kind {
            LayerKind::X => &self.x[grade],
            LayerKind::Q => &self.q[grade],
            LayerKind::Z => &self.z[grade],
        }
    }

    fn get_mut(&mut self, kind: LayerKind, grade: usize) -> &mut Vec<CellRef> {
        match kind {
            LayerKind::X => &mut self.x[grade],
            LayerKind::Q => &mut self.q[grade],
            LayerKind::Z => &mut self.z[grade],
        }
    }

    /// Number of cells of a grade over all kinds.
    pub fn grade_len(&self, grade: usize) -> usize {
        LayerKind::ALL.iter().map(|&k| self.get(k, grade).len()).sum()
    }

    /// Offset of the first cell of `kind` in the global list of `grade`.
    pub fn offset(&self, kind: LayerKind, grade: usize) -> usize {
        LayerKind::ALL.iter().take(kind.index()).map(|&k| self.get(k, grade).len()).sum()
    }
}

/// The blocks of the total differential. Names follow
/// `<map><grade of the source cell>`: `dx2` is the X-layer differential from
/// grade 2 to grade 1, `gqx1` maps X-layer grade-1 cells to qubit-layer
/// grade-0 cells, and so on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Blocks {
    pub dx2: SparseBoolMatrix,
    pub dx1: SparseBoolMatrix,
    pub dq2: SparseBoolMatrix,
    pub dq1: SparseBoolMatrix,
    pub dz2: SparseBoolMatrix,
    pub dz1: SparseBoolMatrix,
    pub gqx2: SparseBoolMatrix,
    pub gqx1: SparseBoolMatrix,
    pub gzq2: SparseBoolMatrix,
    pub gzq1: SparseBoolMatrix,
    pub pzx2: SparseBoolMatrix,
    pub pzx1: SparseBoolMatrix,
}

impl Blocks {
    /// Block of the differential from `source` cells of `grade` to `target` cells of `grade - 1`.
    pub fn block(&self, target: LayerKind, source: LayerKind, grade: usize) -> Option<&SparseBoolMatrix> {
        use LayerKind::*;
        let two = grade == 2;
        Some(match (target, source) {
            (X, X) => {
                if two {
                    &self.dx2
                } else {
                    &self.dx1
                }
            }
            (Q, Q) => {
                if two {
                    &self.dq2
                } else {
                    &self.dq1
                }
            }
            (Z, Z) => {
                if two {
                    &self.dz2
                } else {
                    &self.dz1
                }
            }
            (Q, X) => {
                if two {
                    &self.gqx2
                } else {
                    &self.gqx1
                }
            }
            (Z, Q) => {
                if two {
                    &self.gzq2
                } else {
                    &self.gzq1
                }
            }
            (Z, X) => {
                if two {
                    &self.pzx2
                } else {
                    &self.pzx1
                }
            }
            _ => return None,
        })
    }

    pub fn named(&self) -> [(&'static str, &SparseBoolMatrix); 12] {
        [
            ("dx2", &self.dx2),
            ("dx1", &self.dx1),
            ("dq2", &self.dq2),
            ("dq1", &self.dq1),
            ("dz2", &self.dz2),
            ("dz1", &self.dz1),
            ("gqx2", &self.gqx2),
            ("gqx1", &self.gqx1),
            ("gzq2", &self.gzq2),
            ("gzq1", &self.gzq1),
            ("pzx2", &self.pzx2),
            ("pzx1", &self.pzx1),
        ]
    }
}

/// The assembled layer code together with everything needed to re-verify it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerCode {
    pub format: String,
    pub dimension: usize,
    pub extents: Extents,
    pub config: BuildConfig,
    pub provenance: Provenance,
    pub code: CssCode,
    pub arrangement: QubitArrangement,
    pub plan: RoutingPlan,
    pub layers: Vec<LayerSpec>,
    pub cells: CellTable,
    pub blocks: Blocks,
}

/// Graph complex of a grid subgraph: edges in grade 1, vertices in grade 0.
pub fn grid_graph_complex(g: &GridGraph) -> GraphComplex<Cell> {
    let cells0: Vec<Cell> = g.vertices.iter().cloned().collect();
    let cells1: Vec<Cell> = g.edges.iter().cloned().collect();
    let idx: HashMap<&Cell, usize> = cells0.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let entries = cells1.iter().enumerate().flat_map(|(col, e)| {
        let (a, b) = edge_endpoints(e);
        [(idx[&a], col), (idx[&b], col)]
    });
    let d = SparseBoolMatrix::from_entries(cells0.len(), cells1.len(), entries).expect("edge endpoints are vertices");
    GraphComplex { cells1, cells0, d }
}

fn ambient(first: i32, grid: &[i32], last: i32) -> Cell {
    let mut c = Vec::with_capacity(grid.len() + 2);
    c.push(first);
    c.extend_from_slice(grid);
    c.push(last);
    c
}

/// Qubit layer `R_X (x) R_Z^T` placed at the grid point `point`.
pub fn build_qubit_layer(point: &[usize], l_x: usize, l_z: usize) -> Result<ChainComplex3<Cell>> {
    let t = tensor_complex(&repetition_complex(l_x), &repetition_complex(l_z).transpose());
    let v = vertex_cell(point);
    union_complex(&[t.map_labels(|(a, b)| ambient(*a, &v, *b))?])
}

/// Check layer of an X- or Z-check: the route geometry tensored with the
/// transverse repetition complex, unioned with the contracting layer when
/// attached. X layers are returned transposed, so that in both cases grade 2
/// holds the cells that become X-checks of the output code.
pub fn build_check_layer(side: Side, check: &CheckPlan, l_x: usize, l_z: usize) -> Result<ChainComplex3<Cell>> {
    let g = grid_graph_complex(&check.graph);
    let eta = 2 * check.eta as i32;
    let mut parts = Vec::new();
    match side {
        Side::X => {
            let t = tensor_complex(&g, &repetition_complex(l_z));
            parts.push(t.map_labels(|(c, k)| ambient(eta, c, *k))?);
        }
        Side::Z => {
            let t = tensor_complex(&repetition_complex(l_x), &g);
            parts.push(t.map_labels(|(i, c)| ambient(*i, c, eta))?);
        }
    }
    if let Some(omega) = check.omega {
        let w = 2 * omega as i32;
        let cells: BTreeSet<Cell> = check
            .contracting
            .iter()
            .map(|c| match side {
                Side::X => ambient(eta, c, w),
                Side::Z => ambient(w, c, eta),
            })
            .collect();
        parts.push(cubical_complex(&cells)?);
    }
    let union = union_complex(&parts)?;
    Ok(match side {
        Side::X => transpose_complex(&union),
        Side::Z => union,
    })
}

/// Index of every cell of one kind and grade, keyed by (layer, coordinates).
type CellIndex<'a> = HashMap<(usize, &'a [i32]), usize>;

fn cell_index(cells: &[CellRef]) -> CellIndex<'_> {
    cells.iter().enumerate().map(|(i, (l, c))| ((*l, c.as_slice()), i)).collect()
}

fn lookup(index: &CellIndex<'_>, layer: usize, cell: &[i32]) -> Result<usize> {
    index
        .get(&(layer, cell))
        .copied()
        .ok_or_else(|| Error::BoundaryMismatch(format!("cell {cell:?} missing from layer {layer}")))
}

/// SHA-256 of the canonical JSON of the input code.
pub fn input_hash(code: &CssCode) -> String {
    hex::encode(Sha256::digest(code.canonical_json().as_bytes()))
}

/// Builds the layer code of `code` in dimension `config.dimension`.
pub fn build(code: &CssCode, config: &BuildConfig) -> Result<LayerCode> {
    validate_css(code)?;
    if config.dimension < 3 {
        return Err(Error::UnsupportedDimension(config.dimension));
    }
    let arr = arrange_qubits(code, config.dimension - 2, &config.arrangement)?;
    let options = PlanOptions { boost_colors: config.boost_colors, prune_contracting: config.prune_contracting };
    let plan = plan(code, &arr, config.dimension, options)?;
    assemble(code, arr, plan, config.clone())
}

/// The conventional 3D construction with qubits on a line in input order.
pub fn build_3d(code: &CssCode) -> Result<LayerCode> {
    build(code, &BuildConfig::new(3, ArrangementMode::RowMajor))
}

/// Assembles layers, gluing maps and defect maps from a routing plan, and
/// checks the chain condition, the compatibility identity and the homology
/// of every layer.
pub fn assemble(code: &CssCode, arr: QubitArrangement, plan: RoutingPlan, config: BuildConfig) -> Result<LayerCode> {
    let (l_x, l_z) = (plan.l_x, plan.l_z);
    let mut layers = Vec::new();
    for (x, c) in plan.x_checks.iter().enumerate() {
        layers.push(LayerSpec { kind: LayerKind::X, owner: x, eta: Some(c.eta), omega: c.omega });
    }
    for q in 0..code.num_qubits() {
        layers.push(LayerSpec { kind: LayerKind::Q, owner: q, eta: None, omega: None });
    }
    for (z, c) in plan.z_checks.iter().enumerate() {
        layers.push(LayerSpec { kind: LayerKind::Z, owner: z, eta: Some(c.eta), omega: c.omega });
    }
    let complexes: Vec<ChainComplex3<Cell>> = layers
        .par_iter()
        .map(|spec| match spec.kind {
            LayerKind::X => build_check_layer(Side::X, &plan.x_checks[spec.owner], l_x, l_z),
            LayerKind::Z => build_check_layer(Side::Z, &plan.z_checks[spec.owner], l_x, l_z),
            LayerKind::Q => build_qubit_layer(arr.point(spec.owner), l_x, l_z),
        })
        .collect::<Result<_>>()?;
    let homology: Vec<[usize; 3]> = complexes.par_iter().map(homology_dims).collect::<Result<_>>()?;
    for (i, spec) in layers.iter().enumerate() {
        if spec.kind != LayerKind::Q && homology[i][1] != 0 && plan.dimension <= 5 {
            return Err(Error::CycleSurvived { layer: format!("{:?} {}", spec.kind, spec.owner), h1: homology[i][1] });
        }
    }

    let mut cells = CellTable::default();
    let mut diag: Vec<[Vec<(usize, usize)>; 2]> = vec![[Vec::new(), Vec::new()]; 3];
    for (i, (spec, c)) in layers.iter().zip(&complexes).enumerate() {
        let k = spec.kind;
        let off = [cells.get(k, 0).len(), cells.get(k, 1).len(), cells.get(k, 2).len()];
        diag[k.index()][0].extend(c.d1.entries().map(|(r, col)| (r + off[0], col + off[1])));
        diag[k.index()][1].extend(c.d2.entries().map(|(r, col)| (r + off[1], col + off[2])));
        for (g, list) in [&c.cells0, &c.cells1, &c.cells2].into_iter().enumerate() {
            cells.get_mut(k, g).extend(list.iter().map(|cell| (i, cell.clone())));
        }
    }
    let size = |k: LayerKind, g: usize| cells.get(k, g).len();
    let block = |k: LayerKind, g: usize, entries: &[(usize, usize)]| {
        SparseBoolMatrix::from_entries(size(k, g - 1), size(k, g), entries.iter().copied())
    };

    let layer_of = |kind: LayerKind, owner: usize| -> usize {
        match kind {
            LayerKind::X => owner,
            LayerKind::Q => plan.x_checks.len() + owner,
            LayerKind::Z => plan.x_checks.len() + code.num_qubits() + owner,
        }
    };
    let idx = |k: LayerKind, g: usize| cell_index(cells.get(k, g));
    let (ix, iq, iz) = (
        [idx(LayerKind::X, 0), idx(LayerKind::X, 1), idx(LayerKind::X, 2)],
        [idx(LayerKind::Q, 0), idx(LayerKind::Q, 1), idx(LayerKind::Q, 2)],
        [idx(LayerKind::Z, 0), idx(LayerKind::Z, 1), idx(LayerKind::Z, 2)],
    );

    // Gluing X layers into qubit layers: the x-hat = eta(x) column of every qubit layer of supp x.
    let (mut gqx2, mut gqx1) = (Vec::new(), Vec::new());
    for (x, c) in plan.x_checks.iter().enumerate() {
        let lx = layer_of(LayerKind::X, x);
        for &q in code.support(Side::X, x) {
            let lq = layer_of(LayerKind::Q, q);
            let v = vertex_cell(arr.point(q));
            for k in 2..=2 * l_z as i32 {
                let cell = ambient(2 * c.eta as i32, &v, k);
                if k % 2 == 0 {
                    gqx2.push((lookup(&iq[1], lq, &cell)?, lookup(&ix[2], lx, &cell)?));
                } else {
                    gqx1.push((lookup(&iq[0], lq, &cell)?, lookup(&ix[1], lx, &cell)?));
                }
            }
        }
    }
    // Gluing qubit layers into Z layers: the z-hat = eta(z) row of every qubit layer of supp z.
    let (mut gzq2, mut gzq1) = (Vec::new(), Vec::new());
    for (z, c) in plan.z_checks.iter().enumerate() {
        let lz = layer_of(LayerKind::Z, z);
        for &q in code.support(Side::Z, z) {
            let lq = layer_of(LayerKind::Q, q);
            let v = vertex_cell(arr.point(q));
            for a in 2..=2 * l_x as i32 {
                let cell = ambient(a, &v, 2 * c.eta as i32);
                if a % 2 == 1 {
                    gzq2.push((lookup(&iz[1], lz, &cell)?, lookup(&iq[2], lq, &cell)?));
                } else {
                    gzq1.push((lookup(&iz[0], lz, &cell)?, lookup(&iq[1], lq, &cell)?));
                }
            }
        }
    }
    // Defect maps along the defect paths at (x-hat, z-hat) = (eta(x), eta(z)).
    let (mut pzx2, mut pzx1) = (Vec::new(), Vec::new());
    for d in &plan.defects {
        let (lx, lz) = (layer_of(LayerKind::X, d.x), layer_of(LayerKind::Z, d.z));
        let (ex, ez) = (2 * plan.x_checks[d.x].eta as i32, 2 * plan.z_checks[d.z].eta as i32);
        for path in &d.paths {
            for w in path.windows(2) {
                let from = ambient(ex, &vertex_cell(&w[0]), ez);
                let mid = ambient(ex, &edge_cell(&w[0], &w[1]), ez);
                let to = ambient(ex, &vertex_cell(&w[1]), ez);
                pzx2.push((lookup(&iz[1], lz, &mid)?, lookup(&ix[2], lx, &from)?));
                pzx1.push((lookup(&iz[0], lz, &to)?, lookup(&ix[1], lx, &mid)?));
            }
        }
    }
    let cross = |tk: LayerKind, sk: LayerKind, g: usize, e: &[(usize, usize)], xor: bool| {
        let (r, c) = (size(tk, g - 1), size(sk, g));
        if xor {
            SparseBoolMatrix::from_xor_entries(r, c, e.iter().copied())
        } else {
            SparseBoolMatrix::from_entries(r, c, e.iter().copied())
        }
    };
    use LayerKind::{Q, X, Z};
    let blocks = Blocks {
        dx2: block(X, 2, &diag[0][1])?,
        dx1: block(X, 1, &diag[0][0])?,
        dq2: block(Q, 2, &diag[1][1])?,
        dq1: block(Q, 1, &diag[1][0])?,
        dz2: block(Z, 2, &diag[2][1])?,
        dz1: block(Z, 1, &diag[2][0])?,
        gqx2: cross(Q, X, 2, &gqx2, false)?,
        gqx1: cross(Q, X, 1, &gqx1, false)?,
        gzq2: cross(Z, Q, 2, &gzq2, false)?,
        gzq1: cross(Z, Q, 1, &gzq1, false)?,
        pzx2: cross(Z, X, 2, &pzx2, true)?,
        pzx1: cross(Z, X, 1, &pzx1, true)?,
    };
    let lc = LayerCode {
        format: FORMAT.to_string(),
        dimension: plan.dimension,
        extents: Extents { side: plan.side, f: plan.f, l_x, l_z },
        provenance: Provenance {
            input_sha256: input_hash(code),
            chi_x: plan.x_colors.chi,
            chi_z: plan.z_colors.chi,
            zeta_x: plan.x_colors.zeta,
            zeta_z: plan.z_colors.zeta,
        },
        config,
        code: code.clone(),
        arrangement: arr,
        plan,
        layers,
        cells,
        blocks,
    };
    let (d2, d1) = lc.total_differentials()?;
    let p = d1.mul(&d2)?;
    if !p.is_zero() {
        return Err(Error::ChainConditionViolated { nonzeros: p.nnz() });
    }
    let defect = lc.compatibility_defect()?;
    if !defect.is_zero() {
        return Err(Error::CompatibilityViolated { nonzeros: defect.nnz() });
    }
    Ok(lc)
}

impl LayerCode {
    /// Total differentials `(d2, d1)` assembled from the blocks.
    pub fn total_differentials(&self) -> Result<(SparseBoolMatrix, SparseBoolMatrix)> {
        let mut out = Vec::new();
        for g in [2, 1] {
            let mut entries = Vec::new();
            for t in LayerKind::ALL {
                for s in LayerKind::ALL {
                    if let Some(b) = self.blocks.block(t, s, g) {
                        let (ro, co) = (self.cells.offset(t, g - 1), self.cells.offset(s, g));
                        if b.rows() != self.cells.get(t, g - 1).len() || b.cols() != self.cells.get(s, g).len() {
                            return Err(Error::Bundle(format!("block {t:?}<-{s:?} of grade {g} has the wrong shape")));
                        }
                        entries.extend(b.entries().map(|(r, c)| (r + ro, c + co)));
                    }
                }
            }
            out.push(SparseBoolMatrix::from_entries(self.cells.grade_len(g - 1), self.cells.grade_len(g), entries)?);
        }
        let d1 = out.pop().expect("two grades");
        let d2 = out.pop().expect("two grades");
        Ok((d2, d1))
    }

    /// `g^{ZQ}_1 g^{QX}_2 + p_1 d^X_2 + d^Z_1 p_2`, zero exactly when the compatibility identity holds.
    pub fn compatibility_defect(&self) -> Result<SparseBoolMatrix> {
        let b = &self.blocks;
        b.gzq1.mul(&b.gqx2)?.add(&b.pzx1.mul(&b.dx2)?)?.add(&b.dz1.mul(&b.pzx2)?)
    }

    /// Output code: X-checks are grade-2 cells (`H_X = d2^T`), qubits grade-1
    /// cells and Z-checks grade-0 cells (`H_Z = d1`).
    pub fn output_code(&self) -> Result<CssCode> {
        let (d2, d1) = self.total_differentials()?;
        CssCode::new(d2.transpose(), d1)
    }

    /// Index range of a layer's cells inside its kind's list of `grade`.
    pub fn layer_range(&self, layer: usize, grade: usize) -> std::ops::Range<usize> {
        let list = self.cells.get(self.layers[layer].kind, grade);
        let start = list.partition_point(|(l, _)| *l < layer);
        let end = list.partition_point(|(l, _)| *l <= layer);
        start..end
    }

    /// Complex of one layer, cut out of the diagonal blocks.
    pub fn layer_complex(&self, layer: usize) -> Result<ChainComplex3<Cell>> {
        let kind = self.layers[layer].kind;
        let r: Vec<Vec<usize>> = (0..3).map(|g| self.layer_range(layer, g).collect()).collect();
        let list = |g: usize| -> Vec<Cell> { r[g].iter().map(|&i| self.cells.get(kind, g)[i].1.clone()).collect() };
        let d2 = self.blocks.block(kind, kind, 2).expect("diagonal block").submatrix(&r[1], &r[2]);
        let d1 = self.blocks.block(kind, kind, 1).expect("diagonal block").submatrix(&r[0], &r[1]);
        ChainComplex3::new(list(2), list(1), list(0), d2, d1)
    }

    /// Global index of a cell of `kind` and `grade` in the total complex.
    pub fn global_index(&self, kind: LayerKind, grade: usize, local: usize) -> usize {
        self.cells.offset(kind, grade) + local
    }

    /// Index of the layer of a given kind and owner.
    pub fn layer_of(&self, kind: LayerKind, owner: usize) -> usize {
        let nx = self.code.num_checks(Side::X);
        match kind {
            LayerKind::X => owner,
            LayerKind::Q => nx + owner,
            LayerKind::Z => nx + self.code.num_qubits() + owner,
        }
    }

    /// Canonical pretty JSON of the bundle.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// Parses a bundle and checks its shape.
    pub fn from_json(text: &str) -> Result<LayerCode> {
        let lc: LayerCode = serde_json::from_str(text)?;
        if lc.format != FORMAT {
            return Err(Error::Bundle(format!("unknown format {:?}", lc.format)));
        }
        let e = lc.extents;
        let p = &lc.plan;
        let dims = [lc.dimension, lc.config.dimension, p.dimension, e.f + 2, lc.arrangement.f + 2];
        if dims.iter().any(|&d| d != lc.dimension) {
            return Err(Error::Bundle(format!("inconsistent dimensions {dims:?}")));
        }
        if (e.side, e.l_x, e.l_z) != (p.side, p.l_x, p.l_z) || e.side != lc.arrangement.side {
            return Err(Error::Bundle("extents disagree with the routing plan".into()));
        }
        if lc.provenance.input_sha256 != input_hash(&lc.code) {
            return Err(Error::Bundle("input code does not match its recorded hash".into()));
        }
        if lc.layers.len() != lc.code.num_checks(Side::X) + lc.code.num_qubits() + lc.code.num_checks(Side::Z) {
            return Err(Error::Bundle("layer list does not match the input code".into()));
        }
        for k in LayerKind::ALL {
            for g in 0..3 {
                let list = lc.cells.get(k, g);
                if list.iter().any(|(l, _)| *l >= lc.layers.len() || lc.layers[*l].kind != k) {
                    return Err(Error::Bundle(format!("{k:?} cells of grade {g} point at foreign layers")));
                }
                if list.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::Bundle(format!("{k:?} cells of grade {g} are not sorted")));
                }
            }
        }
        lc.total_differentials()?;
        Ok(lc)
    }
}

/// Result of lifting an input logical.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lift {
    /// Support of the output 1-chain (global grade-1 indices, sorted).
    pub chain: Vec<usize>,
    /// Weight of the qubit-layer strings, `L_Z |l_A|`.
    pub string_weight: usize,
    /// Weight of the Z-layer connectors that close the strings into a cycle.
    pub connector_weight: usize,
}

/// Lifts an input X-logical (a set of qubits in `ker H_Z`) to a cycle of the
/// output complex.
///
/// Each qubit `q` of the logical contributes the z-hat string
/// `sum_k |1, q, k>` of its qubit layer at the smallest x-hat index. The
/// gluing into Z layers leaves, in every Z layer, an even set of vertices at
/// x-hat = 1; these are paired in point order and joined by shortest paths
/// of the layer's 1-skeleton so that the result is a cycle.
pub fn lift_logical(lc: &LayerCode, logical: &[usize]) -> Result<Lift> {
    let code = &lc.code;
    let n = code.num_qubits();
    let l: BTreeSet<usize> = logical.iter().copied().collect();
    if l.iter().any(|&q| q >= n) {
        return Err(Error::NotACycle);
    }
    let support: Vec<usize> = l.iter().copied().collect();
    if !code.hz.mul_support(&support).is_empty() {
        return Err(Error::NotACycle);
    }
    let mut chain: BTreeSet<usize> = BTreeSet::new();
    let q1 = cell_index(lc.cells.get(LayerKind::Q, 1));
    for &q in &support {
        let layer = lc.layer_of(LayerKind::Q, q);
        let v = vertex_cell(lc.arrangement.point(q));
        for k in 1..=lc.extents.l_z as i32 {
            let i = lookup(&q1, layer, &ambient(2, &v, 2 * k))?;
            chain.insert(lc.global_index(LayerKind::Q, 1, i));
        }
    }
    let string_weight = chain.len();
    let z0 = lc.cells.get(LayerKind::Z, 0);
    let z0_index = cell_index(z0);
    let dz1_t = lc.blocks.dz1.transpose();
    let mut connector: BTreeSet<usize> = BTreeSet::new();
    for z in 0..code.num_checks(Side::Z) {
        let layer = lc.layer_of(LayerKind::Z, z);
        let eta = 2 * lc.plan.z_checks[z].eta as i32;
        let mut pts: Vec<usize> = code.support(Side::Z, z).iter().copied().filter(|q| l.contains(q)).collect();
        lc.arrangement.sort_lex(&mut pts);
        for pair in pts.chunks(2) {
            let a = lookup(&z0_index, layer, &ambient(2, &vertex_cell(lc.arrangement.point(pair[0])), eta))?;
            let b = lookup(&z0_index, layer, &ambient(2, &vertex_cell(lc.arrangement.point(pair[1])), eta))?;
            for e in skeleton_path(&lc.blocks.dz1, &dz1_t, a, b).ok_or(Error::NotACycle)? {
                if !connector.remove(&e) {
                    connector.insert(e);
                }
            }
        }
    }
    let connector_weight = connector.len();
    for e in connector {
        chain.insert(lc.global_index(LayerKind::Z, 1, e));
    }
    let chain: Vec<usize> = chain.into_iter().collect();
    let (_, d1) = lc.total_differentials()?;
    if !d1.mul_support(&chain).is_empty() {
        return Err(Error::BoundaryMismatch("lifted chain is not a cycle".into()));
    }
    Ok(Lift { chain, string_weight, connector_weight })
}

/// Shortest path between two vertices of the 1-skeleton of a complex whose
/// grade-1 cells all have two boundary vertices. `d1` has rows indexed by
/// vertices; `d1_t` is its transpose. Returns the edge indices.
pub fn skeleton_path(d1: &SparseBoolMatrix, d1_t: &SparseBoolMatrix, from: usize, to: usize) -> Option<Vec<usize>> {
    let mut prev: HashMap<usize, (usize, usize)> = HashMap::new();
    let mut seen = BitRow::zeros(d1.rows());
    seen.set(from, true);
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        if v == to {
            let mut path = Vec::new();
            let mut cur = to;
            while cur != from {
                let (p, e) = prev[&cur];
                path.push(e);
                cur = p;
            }
            path.reverse();
            return Some(path);
        }
        for &e in d1.row(v) {
            for &u in d1_t.row(e) {
                if !seen.get(u) {
                    seen.set(u, true);
                    prev.insert(u, (v, e));
                    queue.push_back(u);
                }
            }
        }
    }
    None
}
