use std::collections::HashMap;

use super::series::TruncatedEGF;
use crate::error::{Error, Result};

/// Square matrix of truncated series sharing one truncation order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesMatrix {
    entries: Vec<Vec<TruncatedEGF>>,
}

impl SeriesMatrix {
    pub fn new(entries: Vec<Vec<TruncatedEGF>>) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::InvalidInput("empty matrix".into()));
        }
        if n > 24 {
            return Err(Error::InvalidInput(format!("dimension {n} is too large")));
        }
        let order = entries[0][0].order();
        for row in &entries {
            if row.len() != n {
                return Err(Error::InvalidInput("matrix is not square".into()));
            }
            if row.iter().any(|e| e.order() != order) {
                return Err(Error::InvalidInput("entries have different orders".into()));
            }
        }
        Ok(SeriesMatrix { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn order(&self) -> usize {
        self.entries[0][0].order()
    }

    pub fn entry(&self, row: usize, col: usize) -> &TruncatedEGF {
        &self.entries[row][col]
    }

    pub fn rows(&self) -> &[Vec<TruncatedEGF>] {
        &self.entries
    }

    /// Copy with row `row` replaced.
    pub fn with_row(&self, row: usize, values: Vec<TruncatedEGF>) -> Result<Self> {
        let mut entries = self.entries.clone();
        entries[row] = values;
        SeriesMatrix::new(entries)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[TruncatedEGF]) -> Vec<TruncatedEGF> {
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(TruncatedEGF::zero(self.order()), |acc, (a, x)| &acc + &(a * x))
            })
            .collect()
    }

    /// Exact determinant.
    pub fn det(&self) -> TruncatedEGF {
        series_det(self)
    }
}

/// Exact determinant by Laplace expansion along rows, memoized over the set
/// of columns still available. Uses only ring operations, so it is valid in
/// the truncated series ring even when no entry is invertible.
pub fn series_det(m: &SeriesMatrix) -> TruncatedEGF {
    let n = m.dim();
    let mut memo: HashMap<u32, TruncatedEGF> = HashMap::new();
    minor_det(m, 0, (1u32 << n) - 1, &mut memo)
}

fn minor_det(m: &SeriesMatrix, row: usize, cols: u32, memo: &mut HashMap<u32, TruncatedEGF>) -> TruncatedEGF {
    if let Some(hit) = memo.get(&cols) {
        return hit.clone();
    }
    let n = m.dim();
    let result = if row == n - 1 {
        m.entry(row, cols.trailing_zeros() as usize).clone()
    } else {
        let mut acc = TruncatedEGF::zero(m.order());
        let mut position = 0;
        for c in 0..n {
            if cols & (1 << c) == 0 {
                continue;
            }
            let a = m.entry(row, c);
            if a.coeffs().iter().any(|x| !num_traits::Zero::is_zero(x)) {
                let term = a * &minor_det(m, row + 1, cols & !(1 << c), memo);
                acc = if position % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            position += 1;
        }
        acc
    };
    memo.insert(cols, result.clone());
    result
}
