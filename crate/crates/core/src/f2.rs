//! Linear algebra over GF(2): a sparse matrix type, rank, products, small
//! dense elimination helpers and the JSON / alist interchange formats.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Sparse matrix over GF(2) stored row-wise with sorted, duplicate-free column lists.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparseBoolMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<usize>>,
}

impl SparseBoolMatrix {
    /// The all-zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseBoolMatrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        SparseBoolMatrix { rows: n, cols: n, data: (0..n).map(|i| vec![i]).collect() }
    }

    /// Builds a matrix from a set of `(row, col)` pairs, rejecting duplicates.
    pub fn from_entries<I>(rows: usize, cols: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut data = vec![Vec::new(); rows];
        for (r, c) in entries {
            if r >= rows || c >= cols {
                return Err(Error::IndexOutOfBounds { row: r, col: c, rows, cols });
            }
            data[r].push(c);
        }
        for (r, row) in data.iter_mut().enumerate() {
            row.sort_unstable();
            if let Some(w) = row.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicateEntry { row: r, col: w[0] });
            }
        }
        Ok(SparseBoolMatrix { rows, cols, data })
    }

    /// Builds a matrix by summing `(row, col)` contributions mod 2, so pairs
    /// listed an even number of times cancel.
    pub fn from_xor_entries<I>(rows: usize, cols: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut data = vec![Vec::new(); rows];
        for (r, c) in entries {
            if r >= rows || c >= cols {
                return Err(Error::IndexOutOfBounds { row: r, col: c, rows, cols });
            }
            data[r].push(c);
        }
        for row in data.iter_mut() {
            row.sort_unstable();
            *row = cancel_pairs(row);
        }
        Ok(SparseBoolMatrix { rows, cols, data })
    }

    /// Builds a matrix from per-row column supports (mod 2 semantics).
    pub fn from_row_supports(cols: usize, rows: Vec<Vec<usize>>) -> Result<Self> {
        let n = rows.len();
        Self::from_xor_entries(
            n,
            cols,
            rows.into_iter().enumerate().flat_map(|(r, row)| row.into_iter().map(move |c| (r, c))),
        )
    }

    /// Builds a matrix from a dense 0/1 table.
    pub fn from_dense(rows: &[Vec<u8>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::new();
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!("row {r} has length {} != {cols}", row.len())));
            }
            entries.extend(row.iter().enumerate().filter(|(_, &v)| v & 1 == 1).map(|(c, _)| (r, c)));
        }
        Self::from_entries(rows.len(), cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    /// Sorted column indices of the nonzero entries of row `r`.
    pub fn row(&self, r: usize) -> &[usize] {
        &self.data[r]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].binary_search(&c).is_ok()
    }

    /// All nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.data.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |&c| (r, c)))
    }

    pub fn transpose(&self) -> SparseBoolMatrix {
        let mut data = vec![Vec::new(); self.cols];
        for (r, row) in self.data.iter().enumerate() {
            for &c in row {
                data[c].push(r);
            }
        }
        SparseBoolMatrix { rows: self.cols, cols: self.rows, data }
    }

    /// Matrix product `self * other` over GF(2).
    pub fn mul(&self, other: &SparseBoolMatrix) -> Result<SparseBoolMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut data = Vec::with_capacity(self.rows);
        let mut acc = vec![false; other.cols];
        let mut touched = Vec::new();
        for row in &self.data {
            for &k in row {
                for &c in &other.data[k] {
                    if !acc[c] {
                        touched.push(c);
                    }
                    acc[c] = !acc[c];
                }
            }
            let mut out: Vec<usize> = touched.iter().copied().filter(|&c| acc[c]).collect();
            out.sort_unstable();
            out.dedup();
            for &c in &touched {
                acc[c] = false;
            }
            touched.clear();
            data.push(out);
        }
        Ok(SparseBoolMatrix { rows: self.rows, cols: other.cols, data })
    }

    /// Entrywise sum over GF(2).
    pub fn add(&self, other: &SparseBoolMatrix) -> Result<SparseBoolMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| xor_sorted(a, b)).collect();
        Ok(SparseBoolMatrix { rows: self.rows, cols: self.cols, data })
    }

    /// Image of a vector given by its support (sorted or not); returns the sorted support of `self * v`.
    pub fn mul_support(&self, support: &[usize]) -> Vec<usize> {
        let t = self.transpose();
        t.combine_rows(support)
    }

    /// Sum of the listed rows, as a sorted support.
    pub fn combine_rows(&self, rows: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = rows.iter().flat_map(|&r| self.data[r].iter().copied()).collect();
        out.sort_unstable();
        cancel_pairs(&out)
    }

    pub fn row_weights(&self) -> Vec<usize> {
        self.data.iter().map(Vec::len).collect()
    }

    pub fn col_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.cols];
        for row in &self.data {
            for &c in row {
                w[c] += 1;
            }
        }
        w
    }

    pub fn max_row_weight(&self) -> usize {
        self.data.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn max_col_weight(&self) -> usize {
        self.col_weights().into_iter().max().unwrap_or(0)
    }

    /// Restriction to the given rows and columns (in the given order).
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> SparseBoolMatrix {
        let mut col_map = HashMap::with_capacity(cols.len());
        for (j, &c) in cols.iter().enumerate() {
            col_map.insert(c, j);
        }
        let data = rows
            .iter()
            .map(|&r| {
                let mut row: Vec<usize> = self.data[r].iter().filter_map(|c| col_map.get(c).copied()).collect();
                row.sort_unstable();
                row
            })
            .collect();
        SparseBoolMatrix { rows: rows.len(), cols: cols.len(), data }
    }

    /// Same matrix with rows and columns permuted: entry `(r, c)` moves to `(row_perm[r], col_perm[c])`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> SparseBoolMatrix {
        let mut data = vec![Vec::new(); self.rows];
        for (r, row) in self.data.iter().enumerate() {
            data[row_perm[r]] = row.iter().map(|&c| col_perm[c]).collect();
            data[row_perm[r]].sort_unstable();
        }
        SparseBoolMatrix { rows: self.rows, cols: self.cols, data }
    }

    /// Stacks `self` above `other`.
    pub fn vstack(&self, other: &SparseBoolMatrix) -> Result<SparseBoolMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch("vstack column counts differ".into()));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(SparseBoolMatrix { rows: self.rows + other.rows, cols: self.cols, data })
    }

    /// Dense copy of the rows as bit vectors.
    pub fn to_bit_rows(&self) -> Vec<BitRow> {
        self.data.iter().map(|row| BitRow::from_support(self.cols, row)).collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        self.data
            .iter()
            .map(|row| {
                let mut v = vec![0u8; self.cols];
                for &c in row {
                    v[c] = 1;
                }
                v
            })
            .collect()
    }

    /// Writes the matrix in the alist format (`cols rows` header, column lists, then row lists).
    pub fn to_alist(&self) -> String {
        let t = self.transpose();
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", self.cols, self.rows);
        let _ = writeln!(s, "{} {}", t.max_row_weight(), self.max_row_weight());
        let _ = writeln!(s, "{}", join(t.row_weights()));
        let _ = writeln!(s, "{}", join(self.row_weights()));
        let col_pad = t.max_row_weight();
        for c in 0..self.cols {
            let _ = writeln!(s, "{}", join(padded(t.row(c), col_pad)));
        }
        let row_pad = self.max_row_weight();
        for r in 0..self.rows {
            let _ = writeln!(s, "{}", join(padded(self.row(r), row_pad)));
        }
        s
    }

    /// Parses the alist format. Zero padding in the index lists is accepted.
    /// The column lists and row lists must describe the same matrix.
    pub fn from_alist(text: &str) -> Result<SparseBoolMatrix> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.starts_with('#'));
        let mut header = || -> Result<Vec<usize>> {
            let line = lines.next().ok_or_else(|| Error::Parse("alist ended early".into()))?;
            parse_numbers(line)
        };
        let dims = header()?;
        if dims.len() != 2 {
            return Err(Error::Parse("alist header must contain `cols rows`".into()));
        }
        let (cols, rows) = (dims[0], dims[1]);
        let _max = header()?;
        let col_weights = header()?;
        let row_weights = header()?;
        if col_weights.len() != cols || row_weights.len() != rows {
            return Err(Error::Parse("alist weight lists do not match the header".into()));
        }
        let mut from_cols = Vec::new();
        for (c, &w) in col_weights.iter().enumerate() {
            let idx: Vec<usize> = header()?.into_iter().filter(|&v| v != 0).collect();
            if idx.len() != w {
                return Err(Error::Parse(format!("alist column {c} lists {} entries, expected {w}", idx.len())));
            }
            for r in idx {
                if r > rows {
                    return Err(Error::IndexOutOfBounds { row: r - 1, col: c, rows, cols });
                }
                from_cols.push((r - 1, c));
            }
        }
        let mut from_rows = Vec::new();
        for (r, &w) in row_weights.iter().enumerate() {
            let idx: Vec<usize> = header()?.into_iter().filter(|&v| v != 0).collect();
            if idx.len() != w {
                return Err(Error::Parse(format!("alist row {r} lists {} entries, expected {w}", idx.len())));
            }
            for c in idx {
                if c > cols {
                    return Err(Error::IndexOutOfBounds { row: r, col: c - 1, rows, cols });
                }
                from_rows.push((r, c - 1));
            }
        }
        let a = SparseBoolMatrix::from_entries(rows, cols, from_cols)?;
        let b = SparseBoolMatrix::from_entries(rows, cols, from_rows)?;
        if a != b {
            return Err(Error::Parse("alist column and row lists disagree".into()));
        }
        Ok(a)
    }
}

fn parse_numbers(line: &str) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|e| Error::Parse(format!("bad alist number {t:?}: {e}"))))
        .collect()
}

fn padded(v: &[usize], width: usize) -> Vec<usize> {
    let mut out: Vec<usize> = v.iter().map(|x| x + 1).collect();
    out.resize(width.max(v.len()), 0);
    out
}

fn join(v: Vec<usize>) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

/// Removes adjacent equal pairs from a sorted list (mod-2 multiplicity).
fn cancel_pairs(sorted: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(sorted.len());
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        if (j - i) % 2 == 1 {
            out.push(sorted[i]);
        }
        i = j;
    }
    out
}

/// Symmetric difference of two sorted, duplicate-free lists.
pub fn xor_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// GF(2) rank by sparse elimination.
///
/// Columns are relabelled by ascending weight (ties by index) and rows are
/// processed lightest first; each row is reduced against the pivots found so
/// far, always eliminating its lowest relabelled column. Sparse columns make
/// good pivots because they create little fill-in.
pub fn rank_f2(m: &SparseBoolMatrix) -> usize {
    let weights = m.col_weights();
    let mut order: Vec<usize> = (0..m.cols).collect();
    order.sort_by_key(|&c| (weights[c], c));
    let mut relabel = vec![0; m.cols];
    for (new, &old) in order.iter().enumerate() {
        relabel[old] = new;
    }
    let mut rows: Vec<Vec<usize>> = m
        .data
        .iter()
        .filter(|r| !r.is_empty())
        .map(|r| {
            let mut v: Vec<usize> = r.iter().map(|&c| relabel[c]).collect();
            v.sort_unstable();
            v
        })
        .collect();
    rows.sort_by_key(Vec::len);
    let mut pivots: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut rank = 0;
    for mut row in rows {
        while let Some(&lead) = row.first() {
            match pivots.get(&lead) {
                Some(p) => row = xor_sorted(&row, p),
                None => {
                    pivots.insert(lead, row);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

/// Dense bit vector used by the small-matrix routines.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitRow {
    len: usize,
    words: Vec<u64>,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        BitRow { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn from_support(len: usize, support: &[usize]) -> Self {
        let mut b = BitRow::zeros(len);
        for &i in support {
            b.flip(i);
        }
        b
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, v: bool) {
        if self.get(i) != v {
            self.flip(i);
        }
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn xor_with(&mut self, other: &BitRow) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn dot(&self, other: &BitRow) -> bool {
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum::<u32>() % 2 == 1
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i)).collect()
    }
}

/// Incrementally built row echelon basis of a subspace of GF(2)^n.
#[derive(Clone, Debug)]
pub struct RowBasis {
    len: usize,
    rows: BTreeMap<usize, BitRow>,
}

impl RowBasis {
    pub fn new(len: usize) -> Self {
        RowBasis { len, rows: BTreeMap::new() }
    }

    /// Basis of the row space of `m`.
    pub fn from_matrix(m: &SparseBoolMatrix) -> Self {
        let mut b = RowBasis::new(m.cols());
        for r in 0..m.rows() {
            b.insert(BitRow::from_support(m.cols(), m.row(r)));
        }
        b
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis; the result is zero iff `v` lies in the span.
    pub fn reduce(&self, mut v: BitRow) -> BitRow {
        for (&pivot, row) in &self.rows {
            if v.get(pivot) {
                v.xor_with(row);
            }
        }
        v
    }

    pub fn contains(&self, v: &BitRow) -> bool {
        self.reduce(v.clone()).is_zero()
    }

    /// Adds `v` to the span; returns false when it was already contained.
    pub fn insert(&mut self, v: BitRow) -> bool {
        assert_eq!(v.len(), self.len, "vector length must match the basis");
        let v = self.reduce(v);
        match v.first_one() {
            None => false,
            Some(p) => {
                for row in self.rows.values_mut() {
                    if row.get(p) {
                        row.xor_with(&v);
                    }
                }
                self.rows.insert(p, v);
                true
            }
        }
    }
}

/// Basis of the kernel of `m` (vectors `v` with `m v = 0`).
pub fn kernel_basis(m: &SparseBoolMatrix) -> Vec<BitRow> {
    let n = m.cols();
    // Reduced row echelon form of m.
    let mut basis = RowBasis::from_matrix(m);
    let pivots: Vec<usize> = basis.rows.keys().copied().collect();
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; n];
        for &p in &pivots {
            v[p] = true;
        }
        v
    };
    let rows: Vec<(usize, BitRow)> = std::mem::take(&mut basis.rows).into_iter().collect();
    (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = BitRow::zeros(n);
            v.flip(f);
            for (p, row) in &rows {
                if row.get(f) {
                    v.flip(*p);
                }
            }
            v
        })
        .collect()
}

/// Solves `m x = b` over GF(2) for `x`, where `b` is given by its support.
/// Returns the support of one solution, or `None` when `b` is not in the image.
pub fn solve(m: &SparseBoolMatrix, b: &[usize]) -> Option<Vec<usize>> {
    let n = m.cols();
    // Augment each row with its right-hand-side bit in position n.
    let mut rhs = vec![false; m.rows()];
    for &r in b {
        rhs[r] ^= true;
    }
    let mut pivots: BTreeMap<usize, BitRow> = BTreeMap::new();
    for (r, &bit) in rhs.iter().enumerate() {
        let mut v = BitRow::from_support(n + 1, m.row(r));
        v.set(n, bit);
        for (&p, row) in &pivots {
            if v.get(p) {
                v.xor_with(row);
            }
        }
        match v.first_one() {
            None => {}
            Some(p) if p == n => return None,
            Some(p) => {
                for row in pivots.values_mut() {
                    if row.get(p) {
                        row.xor_with(&v);
                    }
                }
                pivots.insert(p, v);
            }
        }
    }
    let mut x: Vec<usize> = pivots.iter().filter(|(_, row)| row.get(n)).map(|(&p, _)| p).collect();
    x.sort_unstable();
    Some(x)
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    entries: Vec<[usize; 2]>,
}

impl Serialize for SparseBoolMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson { rows: self.rows, cols: self.cols, entries: self.entries().map(|(r, c)| [r, c]).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SparseBoolMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = MatrixJson::deserialize(d)?;
        SparseBoolMatrix::from_entries(m.rows, m.cols, m.entries.into_iter().map(|[r, c]| (r, c)))
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_rank(rows: &[Vec<u8>]) -> usize {
        let m = SparseBoolMatrix::from_dense(rows).unwrap();
        RowBasis::from_matrix(&m).dim()
    }

    #[test]
    fn identity_rank() {
        assert_eq!(rank_f2(&SparseBoolMatrix::identity(3)), 3);
    }

    #[test]
    fn duplicate_rows_rank_one() {
        let m = SparseBoolMatrix::from_dense(&[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(rank_f2(&m), 1);
    }

    #[test]
    fn shor_hx_rank_two() {
        let rows = vec![vec![1, 1, 1, 1, 1, 1, 0, 0, 0], vec![0, 0, 0, 1, 1, 1, 1, 1, 1]];
        let m = SparseBoolMatrix::from_dense(&rows).unwrap();
        assert_eq!(rank_f2(&m), 2);
        assert_eq!(dense_rank(&rows), 2);
    }

    #[test]
    fn rejects_duplicates_and_out_of_range() {
        assert!(matches!(
            SparseBoolMatrix::from_entries(2, 2, [(0, 1), (0, 1)]),
            Err(Error::DuplicateEntry { row: 0, col: 1 })
        ));
        assert!(matches!(SparseBoolMatrix::from_entries(2, 2, [(2, 0)]), Err(Error::IndexOutOfBounds { .. })));
    }

    #[test]
    fn xor_entries_cancel() {
        let m = SparseBoolMatrix::from_xor_entries(1, 3, [(0, 1), (0, 1), (0, 2)]).unwrap();
        assert_eq!(m.row(0), &[2]);
    }

    #[test]
    fn alist_round_trip_with_empty_rows() {
        let m = SparseBoolMatrix::from_dense(&[vec![1, 0, 1], vec![0, 0, 0], vec![0, 1, 1]]).unwrap();
        let back = SparseBoolMatrix::from_alist(&m.to_alist()).unwrap();
        assert_eq!(m, back);
        let z = SparseBoolMatrix::zeros(2, 3);
        assert_eq!(SparseBoolMatrix::from_alist(&z.to_alist()).unwrap(), z);
    }

    #[test]
    fn json_round_trip() {
        let m = SparseBoolMatrix::from_dense(&[vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"rows":2,"cols":3,"entries":[[0,0],[0,2],[1,1],[1,2]]}"#);
        let back: SparseBoolMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn solve_and_kernel() {
        let m = SparseBoolMatrix::from_dense(&[vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
        let x = solve(&m, &[0]).unwrap();
        assert_eq!(m.mul_support(&x), vec![0]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].support(), vec![0, 1, 2]);
        let single = SparseBoolMatrix::from_dense(&[vec![1, 1]]).unwrap();
        assert!(solve(&single.vstack(&single).unwrap(), &[0]).is_none());
    }

    #[test]
    fn product_and_transpose() {
        let a = SparseBoolMatrix::from_dense(&[vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
        let p = a.mul(&a.transpose()).unwrap();
        assert_eq!(p.to_dense(), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(a.transpose().transpose(), a);
    }
}
