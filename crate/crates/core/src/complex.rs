//! Chain complexes over GF(2) with labelled cells: graph complexes,
//! three-term complexes, tensor products, unions, transposes and homology.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Debug;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::f2::{rank_f2, SparseBoolMatrix};

/// Requirements on cell labels: ordered (for canonical cell order) and hashable.
pub trait CellKey: Clone + Ord + Hash + Debug {}
impl<T: Clone + Ord + Hash + Debug> CellKey for T {}

/// Two-term complex `C_1 -> C_0`, for example the vertex/edge complex of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphComplex<L> {
    pub cells1: Vec<L>,
    pub cells0: Vec<L>,
    /// Boundary map with rows indexed by `cells0` and columns by `cells1`.
    pub d: SparseBoolMatrix,
}

impl<L: CellKey> GraphComplex<L> {
    pub fn new(cells1: Vec<L>, cells0: Vec<L>, d: SparseBoolMatrix) -> Result<Self> {
        check_unique(&cells1, 1)?;
        check_unique(&cells0, 0)?;
        if d.rows() != cells0.len() || d.cols() != cells1.len() {
            return Err(Error::DimensionMismatch(format!(
                "graph boundary is {}x{} for {} vertices and {} edges",
                d.rows(),
                d.cols(),
                cells0.len(),
                cells1.len()
            )));
        }
        Ok(GraphComplex { cells1, cells0, d })
    }

    /// The cocomplex: grades swap and the boundary map is transposed.
    pub fn transpose(&self) -> GraphComplex<L> {
        GraphComplex { cells1: self.cells0.clone(), cells0: self.cells1.clone(), d: self.d.transpose() }
    }

    /// Homology dimensions `(dim H_1, dim H_0)`.
    pub fn homology(&self) -> (usize, usize) {
        let r = rank_f2(&self.d);
        (self.cells1.len() - r, self.cells0.len() - r)
    }
}

/// The repetition code complex `R(L)`: vertices `i = 1..L` labelled by the
/// doubled coordinate `2i`, edges `i+ = 1..L-1` labelled by `2i+1`, with
/// boundary `|i+> -> |i> + |i+1>`.
pub fn repetition_complex(len: usize) -> GraphComplex<i32> {
    let cells0: Vec<i32> = (1..=len as i32).map(|i| 2 * i).collect();
    let cells1: Vec<i32> = (1..len as i32).map(|i| 2 * i + 1).collect();
    let entries = (0..cells1.len()).flat_map(|e| [(e, e), (e + 1, e)]);
    let d = SparseBoolMatrix::from_entries(cells0.len(), cells1.len(), entries).expect("valid repetition boundary");
    GraphComplex { cells1, cells0, d }
}

/// Three-term complex `C_2 -> C_1 -> C_0` with labelled cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex3<L> {
    pub cells2: Vec<L>,
    pub cells1: Vec<L>,
    pub cells0: Vec<L>,
    /// Rows indexed by `cells1`, columns by `cells2`.
    pub d2: SparseBoolMatrix,
    /// Rows indexed by `cells0`, columns by `cells1`.
    pub d1: SparseBoolMatrix,
}

impl<L: CellKey> ChainComplex3<L> {
    /// Checks label uniqueness and matrix shapes. The chain condition is not
    /// enforced here so that damaged complexes can still be inspected; see
    /// [`ChainComplex3::check_chain_condition`].
    pub fn new(
        cells2: Vec<L>,
        cells1: Vec<L>,
        cells0: Vec<L>,
        d2: SparseBoolMatrix,
        d1: SparseBoolMatrix,
    ) -> Result<Self> {
        check_unique(&cells2, 2)?;
        check_unique(&cells1, 1)?;
        check_unique(&cells0, 0)?;
        if d2.rows() != cells1.len() || d2.cols() != cells2.len() {
            return Err(Error::DimensionMismatch("d2 shape does not match the cells".into()));
        }
        if d1.rows() != cells0.len() || d1.cols() != cells1.len() {
            return Err(Error::DimensionMismatch("d1 shape does not match the cells".into()));
        }
        Ok(ChainComplex3 { cells2, cells1, cells0, d2, d1 })
    }

    pub fn sizes(&self) -> (usize, usize, usize) {
        (self.cells2.len(), self.cells1.len(), self.cells0.len())
    }

    pub fn check_chain_condition(&self) -> Result<()> {
        let p = self.d1.mul(&self.d2)?;
        if p.is_zero() {
            Ok(())
        } else {
            Err(Error::ChainConditionViolated { nonzeros: p.nnz() })
        }
    }

    /// Index maps from labels to positions, per grade `[grade0, grade1, grade2]`.
    pub fn index_maps(&self) -> [HashMap<L, usize>; 3] {
        let idx = |cells: &[L]| cells.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        [idx(&self.cells0), idx(&self.cells1), idx(&self.cells2)]
    }

    /// Boundary of the cell at `index` in `grade`, as labels (empty for grade 0).
    pub fn boundary_labels(&self, grade: usize, index: usize, transposed: &[SparseBoolMatrix; 2]) -> Vec<L> {
        match grade {
            2 => transposed[1].row(index).iter().map(|&r| self.cells1[r].clone()).collect(),
            1 => transposed[0].row(index).iter().map(|&r| self.cells0[r].clone()).collect(),
            _ => Vec::new(),
        }
    }

    /// Relabels every cell with `f`, keeping the differentials.
    pub fn map_labels<M: CellKey>(&self, f: impl Fn(&L) -> M) -> Result<ChainComplex3<M>> {
        ChainComplex3::new(
            self.cells2.iter().map(&f).collect(),
            self.cells1.iter().map(&f).collect(),
            self.cells0.iter().map(&f).collect(),
            self.d2.clone(),
            self.d1.clone(),
        )
    }
}

fn check_unique<L: CellKey>(cells: &[L], grade: usize) -> Result<()> {
    let mut seen = BTreeSet::new();
    for c in cells {
        if !seen.insert(c) {
            return Err(Error::DuplicateLabel { grade, label: format!("{c:?}") });
        }
    }
    Ok(())
}

/// Homology dimensions `[dim H_0, dim H_1, dim H_2]`, computing each rank once.
pub fn homology_dims<L: CellKey>(c: &ChainComplex3<L>) -> Result<[usize; 3]> {
    c.check_chain_condition()?;
    let r1 = rank_f2(&c.d1);
    let r2 = rank_f2(&c.d2);
    Ok([c.cells0.len() - r1, c.cells1.len() - r1 - r2, c.cells2.len() - r2])
}

/// `dim H_grade = dim ker d_grade - rank d_(grade+1)`, with missing differentials zero.
pub fn homology_dim<L: CellKey>(c: &ChainComplex3<L>, grade: usize) -> Result<usize> {
    c.check_chain_condition()?;
    Ok(match grade {
        0 => c.cells0.len() - rank_f2(&c.d1),
        1 => c.cells1.len() - rank_f2(&c.d1) - rank_f2(&c.d2),
        2 => c.cells2.len() - rank_f2(&c.d2),
        _ => 0,
    })
}

/// Tensor product of two graph complexes with `d(a x b) = da x b + a x db`.
/// Product cells are labelled by pairs and listed in sorted order per grade.
pub fn tensor_complex<A: CellKey, B: CellKey>(a: &GraphComplex<A>, b: &GraphComplex<B>) -> ChainComplex3<(A, B)> {
    let at = a.d.transpose();
    let bt = b.d.transpose();
    let mut cells2: Vec<(A, B)> = Vec::new();
    for x in &a.cells1 {
        for y in &b.cells1 {
            cells2.push((x.clone(), y.clone()));
        }
    }
    let mut cells1: Vec<(A, B)> = Vec::new();
    for x in &a.cells1 {
        for y in &b.cells0 {
            cells1.push((x.clone(), y.clone()));
        }
    }
    for x in &a.cells0 {
        for y in &b.cells1 {
            cells1.push((x.clone(), y.clone()));
        }
    }
    let mut cells0: Vec<(A, B)> = Vec::new();
    for x in &a.cells0 {
        for y in &b.cells0 {
            cells0.push((x.clone(), y.clone()));
        }
    }
    cells2.sort();
    cells1.sort();
    cells0.sort();
    let a1: HashMap<&A, usize> = a.cells1.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let b1: HashMap<&B, usize> = b.cells1.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let idx1: HashMap<&(A, B), usize> = cells1.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let idx0: HashMap<&(A, B), usize> = cells0.iter().enumerate().map(|(i, l)| (l, i)).collect();

    let mut e2 = Vec::new();
    for (col, (x, y)) in cells2.iter().enumerate() {
        for &v in at.row(a1[x]) {
            e2.push((idx1[&(a.cells0[v].clone(), y.clone())], col));
        }
        for &v in bt.row(b1[y]) {
            e2.push((idx1[&(x.clone(), b.cells0[v].clone())], col));
        }
    }
    let mut e1 = Vec::new();
    for (col, (x, y)) in cells1.iter().enumerate() {
        if let Some(&i) = a1.get(x) {
            for &v in at.row(i) {
                e1.push((idx0[&(a.cells0[v].clone(), y.clone())], col));
            }
        } else {
            for &v in bt.row(b1[y]) {
                e1.push((idx0[&(x.clone(), b.cells0[v].clone())], col));
            }
        }
    }
    let d2 = SparseBoolMatrix::from_xor_entries(cells1.len(), cells2.len(), e2).expect("indices in range");
    let d1 = SparseBoolMatrix::from_xor_entries(cells0.len(), cells1.len(), e1).expect("indices in range");
    ChainComplex3 { cells2, cells1, cells0, d2, d1 }
}

/// Transpose (cocomplex): `(C^T)_i = C_(2-i)` with transposed differentials.
pub fn transpose_complex<L: CellKey>(c: &ChainComplex3<L>) -> ChainComplex3<L> {
    ChainComplex3 {
        cells2: c.cells0.clone(),
        cells1: c.cells1.clone(),
        cells0: c.cells2.clone(),
        d2: c.d1.transpose(),
        d1: c.d2.transpose(),
    }
}

/// Union of complexes that may share cells. Cells are merged by label and
/// listed in sorted order; every part containing a cell must assign it the
/// same boundary.
pub fn union_complex<L: CellKey>(parts: &[ChainComplex3<L>]) -> Result<ChainComplex3<L>> {
    // grade -> label -> boundary labels (sorted)
    let mut cells: [BTreeMap<L, Vec<L>>; 3] = [BTreeMap::new(), BTreeMap::new(), BTreeMap::new()];
    for part in parts {
        let tr = [part.d1.transpose(), part.d2.transpose()];
        let grades: [&Vec<L>; 3] = [&part.cells0, &part.cells1, &part.cells2];
        for (g, list) in grades.iter().enumerate() {
            for (i, label) in list.iter().enumerate() {
                let mut bd = part.boundary_labels(g, i, &tr);
                bd.sort();
                match cells[g].get(label) {
                    Some(existing) if *existing != bd => {
                        return Err(Error::OverlapConflict { cell: format!("{label:?}") });
                    }
                    Some(_) => {}
                    None => {
                        cells[g].insert(label.clone(), bd);
                    }
                }
            }
        }
    }
    let [c0, c1, c2] = cells;
    let cells0: Vec<L> = c0.keys().cloned().collect();
    let cells1: Vec<L> = c1.keys().cloned().collect();
    let cells2: Vec<L> = c2.keys().cloned().collect();
    let idx0: HashMap<&L, usize> = cells0.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let idx1: HashMap<&L, usize> = cells1.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let mut e1 = Vec::new();
    for (col, bd) in c1.values().enumerate() {
        for l in bd {
            let row = *idx0.get(l).ok_or_else(|| Error::OverlapConflict { cell: format!("{l:?}") })?;
            e1.push((row, col));
        }
    }
    let mut e2 = Vec::new();
    for (col, bd) in c2.values().enumerate() {
        for l in bd {
            let row = *idx1.get(l).ok_or_else(|| Error::OverlapConflict { cell: format!("{l:?}") })?;
            e2.push((row, col));
        }
    }
    let d1 = SparseBoolMatrix::from_entries(cells0.len(), cells1.len(), e1)?;
    let d2 = SparseBoolMatrix::from_entries(cells1.len(), cells2.len(), e2)?;
    Ok(ChainComplex3 { cells2, cells1, cells0, d2, d1 })
}

/// Intersection of two complexes: the cells present in both, with the
/// boundaries they share. Fails if the two disagree on a shared cell.
pub fn intersection_complex<L: CellKey>(a: &ChainComplex3<L>, b: &ChainComplex3<L>) -> Result<ChainComplex3<L>> {
    let union = union_complex(&[a.clone(), b.clone()])?;
    let in_a: [BTreeSet<&L>; 3] = [a.cells0.iter().collect(), a.cells1.iter().collect(), a.cells2.iter().collect()];
    let in_b: [BTreeSet<&L>; 3] = [b.cells0.iter().collect(), b.cells1.iter().collect(), b.cells2.iter().collect()];
    let keep = |g: usize, cells: &[L]| -> Vec<usize> {
        (0..cells.len()).filter(|&i| in_a[g].contains(&cells[i]) && in_b[g].contains(&cells[i])).collect()
    };
    let k0 = keep(0, &union.cells0);
    let k1 = keep(1, &union.cells1);
    let k2 = keep(2, &union.cells2);
    Ok(ChainComplex3 {
        cells2: k2.iter().map(|&i| union.cells2[i].clone()).collect(),
        cells1: k1.iter().map(|&i| union.cells1[i].clone()).collect(),
        cells0: k0.iter().map(|&i| union.cells0[i].clone()).collect(),
        d2: union.d2.submatrix(&k1, &k2),
        d1: union.d1.submatrix(&k0, &k1),
    })
}

/// Cubical complex spanned by a set of cells given as doubled coordinates.
/// A cell's dimension is its number of odd coordinates and its boundary
/// consists of the cells one unit away along each odd axis. Only dimensions
/// 0, 1 and 2 are accepted, and the set must be closed under taking faces.
pub fn cubical_complex(cells: &BTreeSet<Vec<i32>>) -> Result<ChainComplex3<Vec<i32>>> {
    let mut by_dim: [Vec<Vec<i32>>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for c in cells {
        let dim = c.iter().filter(|v| v.rem_euclid(2) == 1).count();
        if dim > 2 {
            return Err(Error::DimensionMismatch(format!("cell {c:?} has dimension {dim}")));
        }
        by_dim[dim].push(c.clone());
    }
    let [cells0, cells1, cells2] = by_dim;
    let idx0: HashMap<&Vec<i32>, usize> = cells0.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let idx1: HashMap<&Vec<i32>, usize> = cells1.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let faces = |c: &Vec<i32>| -> Vec<Vec<i32>> {
        let mut out = Vec::new();
        for (j, v) in c.iter().enumerate() {
            if v.rem_euclid(2) == 1 {
                for s in [-1, 1] {
                    let mut f = c.clone();
                    f[j] += s;
                    out.push(f);
                }
            }
        }
        out
    };
    let mut e1 = Vec::new();
    for (col, c) in cells1.iter().enumerate() {
        for f in faces(c) {
            let row = *idx0.get(&f).ok_or_else(|| Error::OverlapConflict { cell: format!("{f:?}") })?;
            e1.push((row, col));
        }
    }
    let mut e2 = Vec::new();
    for (col, c) in cells2.iter().enumerate() {
        for f in faces(c) {
            let row = *idx1.get(&f).ok_or_else(|| Error::OverlapConflict { cell: format!("{f:?}") })?;
            e2.push((row, col));
        }
    }
    let d1 = SparseBoolMatrix::from_entries(cells0.len(), cells1.len(), e1)?;
    let d2 = SparseBoolMatrix::from_entries(cells1.len(), cells2.len(), e2)?;
    Ok(ChainComplex3 { cells2, cells1, cells0, d2, d1 })
}

/// Graph complex of an undirected simple graph given by vertex and edge lists.
pub fn graph_complex<L: CellKey>(vertices: &[L], edges: &[(L, L)]) -> Result<GraphComplex<(L, L)>> {
    let mut cells0: Vec<(L, L)> = vertices.iter().map(|v| (v.clone(), v.clone())).collect();
    cells0.sort();
    let mut cells1: Vec<(L, L)> =
        edges.iter().map(|(a, b)| if a <= b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) }).collect();
    cells1.sort();
    let idx0: HashMap<&L, usize> = cells0.iter().enumerate().map(|(i, (l, _))| (l, i)).collect();
    let mut entries = Vec::new();
    for (col, (a, b)) in cells1.iter().enumerate() {
        for v in [a, b] {
            let row = *idx0.get(v).ok_or_else(|| Error::DimensionMismatch(format!("edge endpoint {v:?} missing")))?;
            entries.push((row, col));
        }
    }
    let d = SparseBoolMatrix::from_entries(cells0.len(), cells1.len(), entries)?;
    GraphComplex::new(cells1, cells0, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repetition_sizes_and_transpose() {
        let r = repetition_complex(3);
        assert_eq!((r.cells1.len(), r.cells0.len()), (2, 3));
        let t = r.transpose();
        assert_eq!((t.cells1.len(), t.cells0.len()), (3, 2));
    }

    #[test]
    fn tensor_sizes() {
        let r2 = repetition_complex(2);
        assert_eq!(tensor_complex(&r2, &r2).sizes(), (1, 4, 4));
        let c = tensor_complex(&repetition_complex(3), &repetition_complex(4).transpose());
        assert_eq!(c.sizes(), (8, 18, 9));
        c.check_chain_condition().unwrap();
    }

    #[test]
    fn surface_code_has_one_logical() {
        for l in [2, 3] {
            let c = tensor_complex(&repetition_complex(l), &repetition_complex(l).transpose());
            assert_eq!(homology_dim(&c, 1).unwrap(), 1);
        }
    }

    #[test]
    fn zero_differentials_give_all_cycles() {
        let c = ChainComplex3::new(
            vec![0],
            vec![1, 2, 3],
            vec![4],
            SparseBoolMatrix::zeros(3, 1),
            SparseBoolMatrix::zeros(1, 3),
        )
        .unwrap();
        assert_eq!(homology_dim(&c, 1).unwrap(), 3);
    }

    #[test]
    fn chain_condition_is_checked() {
        let c =
            ChainComplex3::new(vec![0], vec![1], vec![2], SparseBoolMatrix::identity(1), SparseBoolMatrix::identity(1))
                .unwrap();
        assert!(matches!(homology_dim(&c, 1), Err(Error::ChainConditionViolated { nonzeros: 1 })));
    }

    #[test]
    fn transpose_involution_and_duality() {
        let c = tensor_complex(&repetition_complex(3), &repetition_complex(2).transpose());
        let t = transpose_complex(&c);
        assert_eq!(transpose_complex(&t), c);
        for g in 0..3 {
            assert_eq!(homology_dim(&c, g).unwrap(), homology_dim(&t, 2 - g).unwrap());
        }
    }

    #[test]
    fn union_disjoint_and_idempotent() {
        let a = tensor_complex(&repetition_complex(2), &repetition_complex(2)).map_labels(|l| (0, *l)).unwrap();
        let b = a.map_labels(|&(_, l)| (1, l)).unwrap();
        let u = union_complex(&[a.clone(), b]).unwrap();
        assert_eq!(u.sizes(), (2, 8, 8));
        assert_eq!(union_complex(&[a.clone(), a.clone()]).unwrap(), a);
    }

    #[test]
    fn union_detects_conflict() {
        let a = ChainComplex3::new(
            vec![],
            vec!["e"],
            vec!["u", "v"],
            SparseBoolMatrix::zeros(1, 0),
            SparseBoolMatrix::from_dense(&[vec![1], vec![1]]).unwrap(),
        )
        .unwrap();
        let b = ChainComplex3::new(
            vec![],
            vec!["e"],
            vec!["u", "v"],
            SparseBoolMatrix::zeros(1, 0),
            SparseBoolMatrix::from_dense(&[vec![1], vec![0]]).unwrap(),
        )
        .unwrap();
        assert!(matches!(union_complex(&[a, b]), Err(Error::OverlapConflict { .. })));
    }

    #[test]
    fn capped_triangle_cylinder_is_acyclic() {
        // Triangle graph on vertices 0,1,2 tensored with R(3); cap one end with a 2-cell.
        let g = graph_complex(&[0, 1, 2], &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let cyl = tensor_complex(&g, &repetition_complex(3));
        assert_eq!(homology_dim(&cyl, 1).unwrap(), 1);
        let cap_edges: Vec<_> = g.cells1.iter().map(|&e| (e, 2)).collect();
        let cap_vertices: Vec<_> = g.cells0.iter().map(|&v| (v, 2)).collect();
        let face = ((9, 9), 2);
        let d1 = cyl.d1.submatrix(
            &cap_vertices.iter().map(|v| cyl.cells0.iter().position(|c| c == v).unwrap()).collect::<Vec<_>>(),
            &cap_edges.iter().map(|e| cyl.cells1.iter().position(|c| c == e).unwrap()).collect::<Vec<_>>(),
        );
        let cap = ChainComplex3::new(
            vec![face],
            cap_edges,
            cap_vertices,
            SparseBoolMatrix::from_dense(&[vec![1], vec![1], vec![1]]).unwrap(),
            d1,
        )
        .unwrap();
        let u = union_complex(&[cyl, cap]).unwrap();
        assert_eq!(homology_dims(&u).unwrap(), [1, 0, 0]);
    }

    #[test]
    fn cubical_square() {
        let cells: BTreeSet<Vec<i32>> = [[2, 2], [2, 3], [2, 4], [3, 2], [3, 3], [3, 4], [4, 2], [4, 3], [4, 4]]
            .iter()
            .map(|c| c.to_vec())
            .collect();
        let c = cubical_complex(&cells).unwrap();
        assert_eq!(c.sizes(), (1, 4, 4));
        assert_eq!(homology_dims(&c).unwrap(), [1, 0, 0]);
    }
}
