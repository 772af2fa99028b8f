//! Exhaustive oracles for small codes: minimum-weight logical operators and
//! the single-step energy barrier.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::css::CssCode;
use crate::error::{Error, Result, Side};
use crate::f2::{BitRow, RowBasis, SparseBoolMatrix};

/// Largest number of supports the distance oracle agrees to enumerate.
pub const DISTANCE_ENUMERATION_LIMIT: u128 = 200_000_000;

/// Outcome of a budgeted distance search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
pub enum Distance {
    /// The minimum weight of a nontrivial logical operator.
    Exact(usize),
    /// No nontrivial logical operator has weight at most the budget.
    GreaterThan(usize),
    /// The code encodes no logical qubits.
    NoLogicals,
}

/// Checks and stabilizers relevant to logical operators of one type:
/// X-type operators are detected by `H_Z` and trivial modulo the rows of `H_X`.
pub fn checks_and_stabilizers(code: &CssCode, kind: Side) -> (&SparseBoolMatrix, &SparseBoolMatrix) {
    match kind {
        Side::X => (&code.hz, &code.hx),
        Side::Z => (&code.hx, &code.hz),
    }
}

fn binomial_prefix(n: usize, budget: usize) -> u128 {
    let mut total: u128 = 0;
    let mut c: u128 = 1;
    for w in 0..=budget.min(n) {
        total = total.saturating_add(c);
        c = c.saturating_mul((n - w) as u128) / (w as u128 + 1);
    }
    total
}

/// Minimum weight of a logical operator of type `kind`, by enumerating all
/// supports of weight `1..=budget` in increasing weight.
pub fn distance_oracle(code: &CssCode, kind: Side, budget: usize) -> Result<Distance> {
    let n = code.num_qubits();
    if code.k() == 0 {
        return Ok(Distance::NoLogicals);
    }
    if binomial_prefix(n, budget) > DISTANCE_ENUMERATION_LIMIT {
        return Err(Error::BudgetTooLarge { n, budget });
    }
    let (checks, stabilizers) = checks_and_stabilizers(code, kind);
    let columns = checks.transpose().to_bit_rows();
    let span = RowBasis::from_matrix(stabilizers);
    for w in 1..=budget.min(n) {
        let mut chosen = Vec::with_capacity(w);
        let mut syndromes = vec![BitRow::zeros(checks.rows())];
        if search(&columns, &span, n, w, 0, &mut chosen, &mut syndromes) {
            return Ok(Distance::Exact(w));
        }
    }
    Ok(Distance::GreaterThan(budget))
}

fn search(
    columns: &[BitRow],
    span: &RowBasis,
    n: usize,
    w: usize,
    start: usize,
    chosen: &mut Vec<usize>,
    syndromes: &mut Vec<BitRow>,
) -> bool {
    if chosen.len() == w {
        let s = syndromes.last().expect("syndrome stack is never empty");
        return s.is_zero() && !span.contains(&BitRow::from_support(n, chosen));
    }
    let remaining = w - chosen.len();
    for q in start..=n - remaining {
        let mut s = syndromes.last().expect("syndrome stack is never empty").clone();
        s.xor_with(&columns[q]);
        chosen.push(q);
        syndromes.push(s);
        if search(columns, span, n, w, q + 1, chosen, syndromes) {
            return true;
        }
        chosen.pop();
        syndromes.pop();
    }
    false
}

/// Exact single-step energy barrier for logical operators of type `kind`:
/// the minimum, over paths from the identity to a nontrivial logical that
/// flip one qubit per step, of the largest syndrome weight along the path.
///
/// Runs a bottleneck shortest-path search over all `2^n` error patterns.
/// Returns `None` when the code has no logical operator of this type.
pub fn energy_barrier_oracle(code: &CssCode, kind: Side, n_limit: usize) -> Result<Option<usize>> {
    let n = code.num_qubits();
    if n > n_limit || n > 26 {
        return Err(Error::TooLarge { n, limit: n_limit.min(26) });
    }
    if code.k() == 0 {
        return Ok(None);
    }
    let (checks, stabilizers) = checks_and_stabilizers(code, kind);
    let words = checks.rows().div_ceil(64).max(1);
    // Syndrome of each qubit as packed words.
    let mut cols = vec![0u64; n * words];
    for (r, c) in checks.entries() {
        cols[c * words + r / 64] |= 1u64 << (r % 64);
    }
    let span = RowBasis::from_matrix(stabilizers);
    let size = 1usize << n;
    let mut syndrome = vec![0u64; size * words];
    let mut weight = vec![0u32; size];
    for mask in 1..size {
        let low = mask.trailing_zeros() as usize;
        let prev = mask & (mask - 1);
        let mut w = 0;
        for j in 0..words {
            let v = syndrome[prev * words + j] ^ cols[low * words + j];
            syndrome[mask * words + j] = v;
            w += v.count_ones();
        }
        weight[mask] = w;
    }
    let mut best = vec![u32::MAX; size];
    best[0] = 0;
    let mut heap = BinaryHeap::from([Reverse((0u32, 0usize))]);
    while let Some(Reverse((b, mask))) = heap.pop() {
        if b > best[mask] {
            continue;
        }
        if mask != 0 && weight[mask] == 0 {
            let support: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            if !span.contains(&BitRow::from_support(n, &support)) {
                return Ok(Some(b as usize));
            }
        }
        for i in 0..n {
            let next = mask ^ (1 << i);
            let nb = b.max(weight[next]);
            if nb < best[next] {
                best[next] = nb;
                heap.push(Reverse((nb, next)));
            }
        }
    }
    Ok(None)
}
