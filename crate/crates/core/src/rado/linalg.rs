//! Exact linear algebra over `Q` for integer matrices.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Rectangular integer matrix. A matrix may have zero rows but always
/// knows its column count.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    cols: usize,
    rows: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn new(cols: usize, rows: Vec<Vec<BigInt>>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch { expected: cols, found: bad.len() });
        }
        Ok(Self { cols, rows })
    }

    pub fn empty(cols: usize) -> Self {
        Self { cols, rows: Vec::new() }
    }

    pub fn from_rows<R: AsRef<[i64]>>(cols: usize, rows: &[R]) -> Result<Self> {
        Self::new(
            cols,
            rows.iter().map(|r| r.as_ref().iter().map(|&v| BigInt::from(v)).collect()).collect(),
        )
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn scale_row(&mut self, row: usize, by: &BigInt) {
        for v in &mut self.rows[row] {
            *v *= by;
        }
    }

    /// `A·x`.
    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.rows.iter().map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    /// Entries as `i64`, if all of them fit.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|v| i64::try_from(v).ok()).collect())
            .collect()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

fn to_rational(v: &[BigInt]) -> Vec<Rational> {
    v.iter().map(|x| Rational::from_integer(x.clone())).collect()
}

/// Incrementally built reduced row-echelon basis of a subspace of `Q^dim`.
///
/// Every stored vector has a pivot entry equal to one, and every other
/// stored vector is zero at that pivot, so [`SpanBasis::residual`] is a
/// linear projection.
#[derive(Debug, Clone)]
pub struct SpanBasis {
    dim: usize,
    basis: Vec<(usize, Vec<Rational>)>,
}

impl SpanBasis {
    pub fn new(dim: usize) -> Self {
        Self { dim, basis: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn residual(&self, v: &[Rational]) -> Vec<Rational> {
        let mut r = v.to_vec();
        for (pivot, b) in &self.basis {
            if r[*pivot].is_zero() {
                continue;
            }
            let factor = r[*pivot].clone();
            for (x, y) in r.iter_mut().zip(b) {
                *x -= &factor * y;
            }
        }
        r
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.residual(v).iter().all(Zero::is_zero)
    }

    /// Adds `v`; returns false if it was already in the span.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        let mut r = self.residual(v);
        let Some(pivot) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = Rational::one() / r[pivot].clone();
        for x in &mut r {
            *x *= &inv;
        }
        for (_, b) in &mut self.basis {
            if b[pivot].is_zero() {
                continue;
            }
            let factor = b[pivot].clone();
            for (x, y) in b.iter_mut().zip(&r) {
                *x -= &factor * y;
            }
        }
        self.basis.push((pivot, r));
        true
    }
}

/// Rank over `Q` by fraction-based Gaussian elimination.
pub fn rank(m: &IntMatrix) -> usize {
    let mut rows: Vec<Vec<Rational>> = m.rows().iter().map(|r| to_rational(r)).collect();
    let mut rank = 0;
    for col in 0..m.cols() {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot_row = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let factor = &row[col] / &pivot_row[col];
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x -= &factor * y;
            }
        }
        rank += 1;
    }
    rank
}

/// Whether `target` is a rational combination of `vectors`. The empty
/// family spans only the zero vector.
pub fn in_span(vectors: &[Vec<BigInt>], target: &[BigInt]) -> Result<bool> {
    let dim = target.len();
    if let Some(bad) = vectors.iter().find(|v| v.len() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, found: bad.len() });
    }
    if target.iter().all(Zero::is_zero) {
        return Ok(true);
    }
    let as_matrix = |extra: Option<&[BigInt]>| {
        let mut rows: Vec<Vec<BigInt>> = vectors.to_vec();
        rows.extend(extra.map(<[BigInt]>::to_vec));
        IntMatrix { cols: dim, rows }
    };
    Ok(rank(&as_matrix(None)) == rank(&as_matrix(Some(target))))
}

/// `row` or `-row`, whichever has a positive leading entry.
pub fn sign_normalized(row: &[BigInt]) -> Vec<BigInt> {
    if row.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_negative) {
        row.iter().map(|x| -x).collect()
    } else {
        row.to_vec()
    }
}
