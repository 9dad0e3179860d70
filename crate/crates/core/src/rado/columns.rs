//! Rado's columns property.
//!
//! A matrix is partition regular over the positive integers exactly when
//! its columns split into ordered blocks `S_0, S_1, ..., S_d` such that the
//! columns of `S_0` sum to zero and every later block sums into the
//! rational span of all earlier columns.
//!
//! Search: if any valid partition exists, then starting from *any*
//! zero-sum `S_0` one can keep appending blocks whose sums fall into the
//! current span until every column is used (the pieces of the valid
//! partition that are not yet covered always qualify). So the search picks
//! `S_0` and then each later block greedily, testing block sums through the
//! linear residual map of the current span.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::linalg::{in_span, IntMatrix, Rational, SpanBasis};
use crate::error::{Error, Result};

pub const DEFAULT_COLUMN_CAP: usize = 12;

/// Ordered blocks of 0-based column indices, each sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ColumnsPartition {
    pub blocks: Vec<Vec<usize>>,
}

impl ColumnsPartition {
    /// Re-checks both defining clauses with [`in_span`], independently of
    /// the search that produced the partition.
    pub fn verify(&self, m: &IntMatrix) -> bool {
        let mut seen = vec![false; m.cols()];
        for &j in self.blocks.iter().flatten() {
            if j >= m.cols() || std::mem::replace(&mut seen[j], true) {
                return false;
            }
        }
        if !seen.iter().all(|&s| s) || self.blocks.iter().any(Vec::is_empty) {
            return false;
        }

        let cols = m.columns();
        let block_sum = |block: &[usize]| -> Vec<BigInt> {
            (0..m.nrows())
                .map(|r| block.iter().map(|&j| &cols[j][r]).sum())
                .collect()
        };
        if !block_sum(&self.blocks[0]).iter().all(Zero::is_zero) {
            return false;
        }
        let mut earlier: Vec<Vec<BigInt>> = Vec::new();
        for (i, block) in self.blocks.iter().enumerate() {
            if i > 0 && !in_span(&earlier, &block_sum(block)).unwrap_or(false) {
                return false;
            }
            earlier.extend(block.iter().map(|&j| cols[j].clone()));
        }
        true
    }
}

/// Among the nonempty subsets of `items` whose vectors sum to zero, the
/// one with most elements, ties broken by smallest bitmask over `items`.
/// `vectors[i]` belongs to `items[i]`.
fn best_zero_subset(items: &[usize], vectors: &[Vec<Rational>], dim: usize) -> Option<Vec<usize>> {
    let k = items.len();
    let mut sums: Vec<Vec<Rational>> = Vec::with_capacity(1 << k);
    sums.push(vec![Rational::zero(); dim]);
    let mut best: Option<(u32, usize)> = None;
    for mask in 1usize..(1 << k) {
        let low = mask.trailing_zeros() as usize;
        let prev = &sums[mask & (mask - 1)];
        let sum: Vec<Rational> = prev.iter().zip(&vectors[low]).map(|(a, b)| a + b).collect();
        if sum.iter().all(Zero::is_zero) {
            let size = mask.count_ones();
            if best.is_none_or(|(s, _)| size > s) {
                best = Some((size, mask));
            }
        }
        sums.push(sum);
    }
    best.map(|(_, mask)| (0..k).filter(|b| mask >> b & 1 == 1).map(|b| items[b]).collect())
}

/// Finds a columns partition, or `None` if the matrix has none.
///
/// Deterministic: every block is the largest admissible subset of the
/// remaining columns, ties broken by smallest index bitmask. Zero columns
/// always join `S_0` and do not count towards `cap`.
pub fn columns_property(m: &IntMatrix, cap: usize) -> Result<Option<ColumnsPartition>> {
    let n = m.cols();
    let dim = m.nrows();
    let cols: Vec<Vec<Rational>> = m
        .columns()
        .into_iter()
        .map(|c| c.into_iter().map(Rational::from_integer).collect())
        .collect();
    let (zero, nonzero): (Vec<usize>, Vec<usize>) = (0..n).partition(|&j| cols[j].iter().all(Zero::is_zero));
    if nonzero.len() > cap {
        return Err(Error::ColumnBudgetExceeded { cols: nonzero.len(), cap });
    }

    let nonzero_vecs: Vec<Vec<Rational>> = nonzero.iter().map(|&j| cols[j].clone()).collect();
    let mut first = zero;
    if let Some(extra) = best_zero_subset(&nonzero, &nonzero_vecs, dim) {
        first.extend(extra);
        first.sort_unstable();
    }
    if first.is_empty() {
        return Ok(None);
    }

    let mut used = vec![false; n];
    let mut span = SpanBasis::new(dim);
    let mut blocks = Vec::new();
    let mut next = Some(first);
    while let Some(block) = next.take() {
        for &j in &block {
            used[j] = true;
            span.insert(&cols[j]);
        }
        blocks.push(block);
        let remaining: Vec<usize> = (0..n).filter(|&j| !used[j]).collect();
        if remaining.is_empty() {
            let partition = ColumnsPartition { blocks };
            assert!(partition.verify(m), "columns partition failed re-verification");
            return Ok(Some(partition));
        }
        let residuals: Vec<Vec<Rational>> = remaining.iter().map(|&j| span.residual(&cols[j])).collect();
        next = best_zero_subset(&remaining, &residuals, dim);
    }
    Ok(None)
}

/// Rado's criterion: `Some(partition)` certifies partition regularity.
pub fn is_partition_regular(m: &IntMatrix) -> Result<Option<ColumnsPartition>> {
    columns_property(m, DEFAULT_COLUMN_CAP)
}

/// Single homogeneous equation `Σ c_i x_i = 0` with nonzero coefficients:
/// partition regular iff some nonempty subset of coefficients sums to zero.
pub fn single_equation_oracle(coeffs: &[i64]) -> bool {
    (1u64..(1 << coeffs.len())).any(|mask| {
        coeffs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &c)| c as i128)
            .sum::<i128>()
            == 0
    })
}
