//! The input CSS code: parity-check matrices, validation, weight profile,
//! logical representatives and the arrangement of qubits on a grid.

use std::collections::{BTreeSet, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::complex::ChainComplex3;
use crate::error::{Error, Result, Side};
use crate::f2::{kernel_basis, rank_f2, BitRow, RowBasis, SparseBoolMatrix};

/// A CSS code given by its X-check matrix `hx` and Z-check matrix `hz`
/// (rows are checks, columns are qubits).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CssCode {
    pub hx: SparseBoolMatrix,
    pub hz: SparseBoolMatrix,
    pub qubit_labels: Vec<String>,
}

/// Maximum check weights and qubit degrees of a code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightProfile {
    pub w_x: usize,
    pub w_z: usize,
    pub q_x: usize,
    pub q_z: usize,
}

impl WeightProfile {
    pub fn w(&self) -> usize {
        self.w_x.max(self.w_z)
    }

    pub fn q(&self) -> usize {
        self.q_x.max(self.q_z)
    }
}

impl CssCode {
    /// Builds a code with default qubit labels `q1, q2, ...`.
    pub fn new(hx: SparseBoolMatrix, hz: SparseBoolMatrix) -> Result<Self> {
        if hx.cols() != hz.cols() {
            return Err(Error::DimensionMismatch(format!("hx has {} columns but hz has {}", hx.cols(), hz.cols())));
        }
        let qubit_labels = (1..=hx.cols()).map(|i| format!("q{i}")).collect();
        Ok(CssCode { hx, hz, qubit_labels })
    }

    pub fn from_dense(hx: &[Vec<u8>], hz: &[Vec<u8>], n: usize) -> Result<Self> {
        let build = |rows: &[Vec<u8>]| {
            if rows.is_empty() {
                Ok(SparseBoolMatrix::zeros(0, n))
            } else {
                SparseBoolMatrix::from_dense(rows)
            }
        };
        Self::new(build(hx)?, build(hz)?)
    }

    pub fn num_qubits(&self) -> usize {
        self.hx.cols()
    }

    pub fn num_checks(&self, side: Side) -> usize {
        self.checks(side).rows()
    }

    pub fn checks(&self, side: Side) -> &SparseBoolMatrix {
        match side {
            Side::X => &self.hx,
            Side::Z => &self.hz,
        }
    }

    /// Support of a check as sorted qubit indices.
    pub fn support(&self, side: Side, check: usize) -> &[usize] {
        self.checks(side).row(check)
    }

    /// Number of logical qubits `n - rank hx - rank hz`.
    pub fn k(&self) -> usize {
        self.num_qubits() - rank_f2(&self.hx) - rank_f2(&self.hz)
    }

    /// The code as a chain complex `X -> Q -> Z` with `d2 = hx^T`, `d1 = hz`.
    pub fn complex(&self) -> ChainComplex3<(u8, usize)> {
        ChainComplex3 {
            cells2: (0..self.hx.rows()).map(|i| (2, i)).collect(),
            cells1: (0..self.num_qubits()).map(|i| (1, i)).collect(),
            cells0: (0..self.hz.rows()).map(|i| (0, i)).collect(),
            d2: self.hx.transpose(),
            d1: self.hz.clone(),
        }
    }

    /// Basis of X-type logical representatives: cycles of `hz` independent modulo the rows of `hx`.
    pub fn x_logical_basis(&self) -> Vec<BitRow> {
        logical_basis(&self.hz, &self.hx)
    }

    /// Basis of Z-type logical representatives.
    pub fn z_logical_basis(&self) -> Vec<BitRow> {
        logical_basis(&self.hx, &self.hz)
    }

    /// Loads a code from the JSON input format. Matrices are either
    /// `{rows, cols, entries}` objects or strings naming an alist file
    /// relative to the JSON file's directory.
    pub fn load(path: &Path) -> Result<(CssCode, Option<Vec<Vec<usize>>>)> {
        let text = std::fs::read_to_string(path)?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::parse_input(&text, base)
    }

    pub fn parse_input(text: &str, base: &Path) -> Result<(CssCode, Option<Vec<Vec<usize>>>)> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum MatrixSource {
            Inline(SparseBoolMatrix),
            Alist(String),
        }
        #[derive(Deserialize)]
        struct Input {
            hx: MatrixSource,
            hz: MatrixSource,
            #[serde(default)]
            qubit_labels: Option<Vec<String>>,
            #[serde(default)]
            arrangement: Option<Vec<Vec<usize>>>,
        }
        let input: Input = serde_json::from_str(text)?;
        let load = |m: MatrixSource| -> Result<SparseBoolMatrix> {
            match m {
                MatrixSource::Inline(m) => Ok(m),
                MatrixSource::Alist(p) => SparseBoolMatrix::from_alist(&std::fs::read_to_string(base.join(p))?),
            }
        };
        let mut code = CssCode::new(load(input.hx)?, load(input.hz)?)?;
        if let Some(labels) = input.qubit_labels {
            if labels.len() != code.num_qubits() {
                return Err(Error::Parse(format!("{} qubit labels for {} qubits", labels.len(), code.num_qubits())));
            }
            code.qubit_labels = labels;
        }
        Ok((code, input.arrangement))
    }

    /// Canonical JSON text of the code (used for provenance hashing).
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("code serializes")
    }
}

fn logical_basis(cycle_check: &SparseBoolMatrix, boundaries: &SparseBoolMatrix) -> Vec<BitRow> {
    let mut span = RowBasis::from_matrix(boundaries);
    let mut out = Vec::new();
    for v in kernel_basis(cycle_check) {
        if span.insert(v.clone()) {
            out.push(v);
        }
    }
    out
}

/// Validates commutation and returns the exact weight profile.
pub fn validate_css(code: &CssCode) -> Result<WeightProfile> {
    if code.hx.cols() != code.hz.cols() || code.qubit_labels.len() != code.hx.cols() {
        return Err(Error::DimensionMismatch("hx, hz and the qubit labels disagree on the qubit count".into()));
    }
    let hzt = code.hz.transpose();
    for x in 0..code.hx.rows() {
        let mut counts: HashMap<usize, usize> = HashMap::new();
        for &q in code.hx.row(x) {
            for &z in hzt.row(q) {
                *counts.entry(z).or_default() += 1;
            }
        }
        let mut odd: Vec<(usize, usize)> = counts.into_iter().filter(|&(_, c)| c % 2 == 1).collect();
        odd.sort_unstable();
        if let Some(&(z, overlap)) = odd.first() {
            return Err(Error::AnticommutingChecks { x, z, overlap });
        }
    }
    for side in [Side::X, Side::Z] {
        if let Some(index) = (0..code.num_checks(side)).find(|&c| code.support(side, c).is_empty()) {
            return Err(Error::EmptyCheck { side, index });
        }
    }
    Ok(WeightProfile {
        w_x: code.hx.max_row_weight(),
        w_z: code.hz.max_row_weight(),
        q_x: code.hx.max_col_weight(),
        q_z: code.hz.max_col_weight(),
    })
}

/// A point of the grid `[L]^f` with 1-based coordinates.
pub type Point = Vec<usize>;

/// Bijection between qubits and points of `[L]^f`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QubitArrangement {
    pub f: usize,
    pub side: usize,
    /// `points[q]` is the grid point of qubit `q`.
    pub points: Vec<Point>,
}

impl QubitArrangement {
    /// Inverse map from grid points to qubits.
    pub fn qubit_at(&self) -> HashMap<Point, usize> {
        self.points.iter().cloned().enumerate().map(|(q, p)| (p, q)).collect()
    }

    pub fn point(&self, q: usize) -> &Point {
        &self.points[q]
    }

    /// Sorts qubits by the lexicographic order of their points.
    pub fn sort_lex(&self, qubits: &mut [usize]) {
        qubits.sort_by(|a, b| self.points[*a].cmp(&self.points[*b]));
    }
}

/// How qubits are placed on the grid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArrangementMode {
    RowMajor,
    Spiral,
    Table(Vec<Point>),
}

/// Smallest `L` with `L^f >= n` (and at least 1).
pub fn grid_side(n: usize, f: usize) -> usize {
    let mut side = 1usize;
    while side.pow(f as u32) < n {
        side += 1;
    }
    side
}

/// All points of `[L]^f` in lexicographic order.
pub fn grid_points(side: usize, f: usize) -> Vec<Point> {
    let mut out = vec![Vec::new()];
    for _ in 0..f {
        let mut next = Vec::with_capacity(out.len() * side);
        for p in &out {
            for a in 1..=side {
                let mut q = p.clone();
                q.push(a);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// Clockwise spiral through `[L]^2`: first row left to right, then down the
/// last column, back along the last row, up the first column, and inward.
pub fn spiral_points(side: usize) -> Vec<Point> {
    let mut out = Vec::with_capacity(side * side);
    let (mut top, mut bottom, mut left, mut right) = (1usize, side, 1usize, side);
    while top <= bottom && left <= right {
        for b in left..=right {
            out.push(vec![top, b]);
        }
        for a in top + 1..=bottom {
            out.push(vec![a, right]);
        }
        if top < bottom {
            for b in (left..right).rev() {
                out.push(vec![bottom, b]);
            }
        }
        if left < right {
            for a in (top + 1..bottom).rev() {
                out.push(vec![a, left]);
            }
        }
        top += 1;
        bottom = bottom.saturating_sub(1);
        left += 1;
        right = right.saturating_sub(1);
    }
    out
}

/// Places the qubits of `code` on `[L]^f` with `L` minimal.
pub fn arrange_qubits(code: &CssCode, f: usize, mode: &ArrangementMode) -> Result<QubitArrangement> {
    let n = code.num_qubits();
    let side = grid_side(n, f);
    let points = match mode {
        ArrangementMode::RowMajor => grid_points(side, f).into_iter().take(n).collect(),
        ArrangementMode::Spiral => match f {
            1 => grid_points(side, 1).into_iter().take(n).collect(),
            2 => spiral_points(side).into_iter().take(n).collect(),
            _ => return Err(Error::UnsupportedArrangement(format!("spiral is defined for f <= 2, got f = {f}"))),
        },
        ArrangementMode::Table(table) => {
            if table.len() != n {
                return Err(Error::BadTable(format!("{} points for {n} qubits", table.len())));
            }
            let mut seen = BTreeSet::new();
            for p in table {
                if p.len() != f || p.iter().any(|&a| a == 0 || a > side) {
                    return Err(Error::BadTable(format!("point {p:?} is not in [{side}]^{f}")));
                }
                if !seen.insert(p.clone()) {
                    return Err(Error::BadTable(format!("point {p:?} used twice")));
                }
            }
            table.clone()
        }
    };
    Ok(QubitArrangement { f, side, points })
}

/// Qubits adjacent to both `x` and `z`, in the lexicographic order of their points.
pub fn overlap(code: &CssCode, arrangement: &QubitArrangement, x: usize, z: usize) -> Result<Vec<usize>> {
    if x >= code.hx.rows() {
        return Err(Error::UnknownCheck { side: Side::X, index: x });
    }
    if z >= code.hz.rows() {
        return Err(Error::UnknownCheck { side: Side::Z, index: z });
    }
    let zs: BTreeSet<usize> = code.hz.row(z).iter().copied().collect();
    let mut out: Vec<usize> = code.hx.row(x).iter().copied().filter(|q| zs.contains(q)).collect();
    arrangement.sort_lex(&mut out);
    Ok(out)
}

/// Standard fixtures used by tests, examples and the CLI documentation.
pub mod fixtures {
    use super::*;

    /// Shor's nine-qubit code with X-checks on qubits 1..6 and 4..9 and
    /// weight-two Z-checks on neighbouring qubits of each block of three.
    pub fn shor() -> CssCode {
        let mut hx = vec![vec![0u8; 9]; 2];
        for q in 0..6 {
            hx[0][q] = 1;
            hx[1][q + 3] = 1;
        }
        let pairs = [(0, 1), (1, 2), (3, 4), (4, 5), (6, 7), (7, 8)];
        let hz: Vec<Vec<u8>> = pairs
            .iter()
            .map(|&(a, b)| {
                let mut r = vec![0u8; 9];
                r[a] = 1;
                r[b] = 1;
                r
            })
            .collect();
        CssCode::from_dense(&hx, &hz, 9).expect("valid Shor code")
    }

    /// The [[4,2,2]] code with checks XXXX and ZZZZ.
    pub fn four_two_two() -> CssCode {
        CssCode::from_dense(&[vec![1, 1, 1, 1]], &[vec![1, 1, 1, 1]], 4).expect("valid code")
    }

    /// A single qubit with no checks.
    pub fn single_qubit() -> CssCode {
        CssCode::from_dense(&[], &[], 1).expect("valid code")
    }

    /// The repetition code on `n` bits as a code with only Z-checks.
    pub fn repetition_z(n: usize) -> CssCode {
        let hz: Vec<Vec<u8>> = (0..n.saturating_sub(1))
            .map(|i| {
                let mut r = vec![0u8; n];
                r[i] = 1;
                r[i + 1] = 1;
                r
            })
            .collect();
        CssCode::from_dense(&[], &hz, n).expect("valid code")
    }
}
