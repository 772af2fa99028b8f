//! Seeded generators of small CSS codes shared by the integration tests.

#![allow(dead_code)]

use layerforge::css::CssCode;
use layerforge::f2::{BitRow, RowBasis, SparseBoolMatrix};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// All subsets of `0..n` with size in `lo..=hi`, in lexicographic order.
fn subsets(n: usize, lo: usize, hi: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, hi: usize, start: usize, cur: &mut Vec<usize>, lo: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() >= lo {
            out.push(cur.clone());
        }
        if cur.len() == hi {
            return;
        }
        for q in start..n {
            cur.push(q);
            rec(n, hi, q + 1, cur, lo, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, hi, 0, &mut Vec::new(), lo, &mut out);
    out
}

/// A random CSS code on `n` qubits with every check of weight `2..=w` and
/// every qubit in at most `q` checks of each type.
///
/// X-checks are drawn first; Z-checks are then picked greedily from a
/// shuffled list of all supports that overlap every X-check evenly, keeping
/// them linearly independent.
pub fn random_css(n: usize, w: usize, q: usize, seed: u64) -> CssCode {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = w.min(n).max(2);
    let target_x = rng.random_range(1..=(n / 2).max(1));
    let mut x_rows: Vec<Vec<usize>> = Vec::new();
    let mut x_deg = vec![0usize; n];
    let mut basis = RowBasis::new(n);
    for _ in 0..4 * target_x {
        if x_rows.len() == target_x {
            break;
        }
        let mut free: Vec<usize> = (0..n).filter(|&i| x_deg[i] < q).collect();
        let weight = rng.random_range(2..=w);
        if free.len() < weight {
            break;
        }
        free.shuffle(&mut rng);
        let mut row: Vec<usize> = free[..weight].to_vec();
        row.sort_unstable();
        if basis.insert(BitRow::from_support(n, &row)) {
            for &i in &row {
                x_deg[i] += 1;
            }
            x_rows.push(row);
        }
    }
    let mut candidates: Vec<Vec<usize>> = subsets(n, 2, w)
        .into_iter()
        .filter(|s| x_rows.iter().all(|r| r.iter().filter(|i| s.binary_search(i).is_ok()).count() % 2 == 0))
        .collect();
    candidates.shuffle(&mut rng);
    let target_z = rng.random_range(1..=(n / 2).max(1));
    let mut z_rows: Vec<Vec<usize>> = Vec::new();
    let mut z_deg = vec![0usize; n];
    let mut basis = RowBasis::new(n);
    for s in candidates {
        if z_rows.len() == target_z {
            break;
        }
        if s.iter().any(|&i| z_deg[i] >= q) {
            continue;
        }
        if basis.insert(BitRow::from_support(n, &s)) {
            for &i in &s {
                z_deg[i] += 1;
            }
            z_rows.push(s);
        }
    }
    let hx = SparseBoolMatrix::from_row_supports(n, x_rows).expect("valid rows");
    let hz = SparseBoolMatrix::from_row_supports(n, z_rows).expect("valid rows");
    CssCode::new(hx, hz).expect("checks commute by construction")
}
