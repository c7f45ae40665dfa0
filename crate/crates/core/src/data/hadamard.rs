//! Sylvester Hadamard matrices and the dataset derived from them.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{BinaryDataset, Encoding};
use crate::error::{Error, Result};

/// Largest order [`sylvester_hadamard`] will build.
pub const DEFAULT_ORDER_CAP: usize = 4096;

/// A square ±1 matrix whose distinct rows agree in exactly half their positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HadamardMatrix {
    order: usize,
    entries: Vec<i8>,
}

impl HadamardMatrix {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, row: usize, col: usize) -> i8 {
        self.entries[row * self.order + col]
    }

    pub fn row(&self, row: usize) -> &[i8] {
        &self.entries[row * self.order..(row + 1) * self.order]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[i8]> + '_ {
        self.entries.chunks_exact(self.order)
    }

    /// Number of columns in which rows `a` and `b` hold the same entry.
    pub fn agreements(&self, a: usize, b: usize) -> usize {
        self.row(a)
            .iter()
            .zip(self.row(b))
            .filter(|(x, y)| x == y)
            .count()
    }
}

/// Builds the order-`2^exponent` matrix by Sylvester doubling,
/// `H(2n) = [[H(n), H(n)], [H(n), -H(n)]]`, starting from `H(1) = [1]`.
pub fn sylvester_hadamard(exponent: u32) -> Result<HadamardMatrix> {
    sylvester_hadamard_capped(exponent, DEFAULT_ORDER_CAP)
}

pub fn sylvester_hadamard_capped(exponent: u32, cap: usize) -> Result<HadamardMatrix> {
    let order = 1usize
        .checked_shl(exponent)
        .filter(|&n| n <= cap)
        .ok_or(Error::SizeLimit { exponent, cap })?;

    let mut entries = vec![1i8];
    let mut n = 1;
    while n < order {
        let m = 2 * n;
        let mut next = vec![0i8; m * m];
        for r in 0..n {
            for c in 0..n {
                let v = entries[r * n + c];
                next[r * m + c] = v;
                next[r * m + c + n] = v;
                next[(r + n) * m + c] = v;
                next[(r + n) * m + c + n] = -v;
            }
        }
        entries = next;
        n = m;
    }
    Ok(HadamardMatrix { order, entries })
}

/// Dataset from the order-`2^exponent` Sylvester matrix: the first `n - 1`
/// entries of each row are features, the last entry is the class (+1 → 1,
/// -1 → 0). The constant first column is kept.
pub fn hadamard_dataset(exponent: u32) -> Result<BinaryDataset> {
    if exponent == 0 {
        return Err(Error::NoFeatureColumns);
    }
    let h = sylvester_hadamard(exponent)?;
    dataset_from_matrix(&h)
}

pub fn dataset_from_matrix(h: &HadamardMatrix) -> Result<BinaryDataset> {
    let n = h.order();
    if n < 2 {
        return Err(Error::NoFeatureColumns);
    }
    let feature_names: Vec<String> = (1..n).map(|j| format!("x{j}")).collect();
    let mut rows = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for row in h.rows() {
        rows.push(row[..n - 1].iter().map(|&v| f64::from(v)).collect());
        labels.push(u8::from(row[n - 1] == 1));
    }
    BinaryDataset::new(
        format!("hadamard-{n}"),
        feature_names,
        Encoding::Signed,
        rows,
        labels,
    )
}
