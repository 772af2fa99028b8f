//! Reduction of an output 1-chain to an input 1-chain: clean the X layers,
//! push the X-layer part into the qubit layers through a preimage under the
//! X-layer differential, clean the qubit layers, and read off the homology
//! class of every qubit layer.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::f2::{solve, BitRow, RowBasis};
use crate::layers::{LayerCode, LayerKind};
use crate::verify::cleaning::Cleaner;

fn toggle(set: &mut BTreeSet<usize>, items: impl IntoIterator<Item = usize>) {
    for i in items {
        if !set.remove(&i) {
            set.insert(i);
        }
    }
}

/// Maps an output 1-chain `e` (global grade-1 indices) to an input 1-chain
/// (qubit indices, sorted).
pub fn extract_logical(cleaner: &Cleaner<'_>, e: &[usize]) -> Result<Vec<usize>> {
    let lc: &LayerCode = cleaner.lc;
    let b = &lc.blocks;
    let x1_off = lc.cells.offset(LayerKind::X, 1);
    let q1_off = lc.cells.offset(LayerKind::Q, 1);
    let nx1 = lc.cells.get(LayerKind::X, 1).len();
    let nq1 = lc.cells.get(LayerKind::Q, 1).len();
    let mut ex: BTreeSet<usize> = BTreeSet::new();
    let mut eq: BTreeSet<usize> = BTreeSet::new();
    for &i in e {
        if (x1_off..x1_off + nx1).contains(&i) {
            toggle(&mut ex, [i - x1_off]);
        } else if (q1_off..q1_off + nq1).contains(&i) {
            toggle(&mut eq, [i - q1_off]);
        }
    }
    // X layers: clean, then solve for the preimage under the layer differential.
    let gqx2_t = b.gqx2.transpose();
    for (layer, spec) in lc.layers.iter().enumerate() {
        if spec.kind != LayerKind::X {
            continue;
        }
        let r1: Vec<usize> = lc.layer_range(layer, 1).collect();
        let here: Vec<usize> = ex.iter().copied().filter(|i| r1.binary_search(i).is_ok()).collect();
        let global: Vec<usize> = here.iter().map(|i| i + x1_off).collect();
        let sigma = cleaner.layer_syndrome(layer, &global);
        let cleaned = cleaner.clean_syndrome(layer, &sigma)?;
        let mut chain: BTreeSet<usize> = here.into_iter().collect();
        toggle(&mut chain, cleaned.correction.iter().map(|c| c - x1_off));
        if chain.is_empty() {
            continue;
        }
        let r2: Vec<usize> = lc.layer_range(layer, 2).collect();
        let block = b.dx2.submatrix(&r1, &r2);
        let rhs: Vec<usize> = chain.iter().map(|i| i - r1[0]).collect();
        let s =
            solve(&block, &rhs).ok_or_else(|| Error::SolveFailed(format!("X layer {} is not cleaned", spec.owner)))?;
        for j in s {
            toggle(&mut eq, gqx2_t.row(r2[j]).iter().copied());
        }
    }
    // Qubit layers: clean and pair with the x-hat co-string at z-hat = 1.
    let mut out = Vec::new();
    let q1 = lc.cells.get(LayerKind::Q, 1);
    for (layer, spec) in lc.layers.iter().enumerate() {
        if spec.kind != LayerKind::Q {
            continue;
        }
        let r1 = lc.layer_range(layer, 1);
        let mut chain: BTreeSet<usize> = eq.range(r1.clone()).copied().collect();
        let global: Vec<usize> = chain.iter().map(|i| i + q1_off).collect();
        let sigma = cleaner.layer_syndrome(layer, &global);
        let cleaned = cleaner.clean_syndrome(layer, &sigma)?;
        toggle(&mut chain, cleaned.correction.iter().map(|c| c - q1_off));
        let parity = chain
            .iter()
            .filter(|&&i| {
                let c = &q1[i].1;
                c[0] % 2 == 0 && c[c.len() - 1] == 2
            })
            .count();
        if parity % 2 == 1 {
            out.push(spec.owner);
        }
    }
    Ok(out)
}

/// Whether two input X-type chains differ by a sum of X-checks.
pub fn homologous(lc: &LayerCode, a: &[usize], b: &[usize]) -> bool {
    let n = lc.code.num_qubits();
    let mut v = BitRow::from_support(n, a);
    v.xor_with(&BitRow::from_support(n, b));
    RowBasis::from_matrix(&lc.code.hx).contains(&v)
}
