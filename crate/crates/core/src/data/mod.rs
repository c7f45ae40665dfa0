//! Binary datasets and the three synthetic generators.

pub mod hadamard;
pub mod xor;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// How feature values are written. Both encodings treat `1.0` as the "high" value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Encoding {
    /// Values in {0, 1}; labels serialize as `TRUE` / `FALSE`.
    Boolean,
    /// Values in {-1, +1}; labels serialize as `1` / `-1`.
    Signed,
}

impl Encoding {
    pub fn low(self) -> f64 {
        match self {
            Encoding::Boolean => 0.0,
            Encoding::Signed => -1.0,
        }
    }

    pub fn high(self) -> f64 {
        1.0
    }

    pub fn admits(self, value: f64) -> bool {
        value == self.low() || value == self.high()
    }
}

/// A named sample matrix with binary class labels (0 or 1).
///
/// Rows are stored contiguously, row-major. All values are checked against
/// the dataset's [`Encoding`] at construction, so downstream code never sees
/// a missing or out-of-alphabet cell.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryDataset {
    name: String,
    feature_names: Vec<String>,
    encoding: Encoding,
    values: Vec<f64>,
    labels: Vec<u8>,
}

impl BinaryDataset {
    pub fn new(
        name: impl Into<String>,
        feature_names: Vec<String>,
        encoding: Encoding,
        rows: Vec<Vec<f64>>,
        labels: Vec<u8>,
    ) -> Result<Self> {
        let width = feature_names.len();
        if rows.len() != labels.len() {
            return Err(Error::InvalidDataset(format!(
                "{} rows but {} labels",
                rows.len(),
                labels.len()
            )));
        }
        let mut values = Vec::with_capacity(rows.len() * width);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != width {
                return Err(Error::InvalidDataset(format!(
                    "row {i} has width {} but there are {width} feature names",
                    row.len()
                )));
            }
            if let Some(v) = row.iter().find(|v| !encoding.admits(**v)) {
                return Err(Error::InvalidDataset(format!(
                    "row {i} holds {v}, outside the {encoding:?} alphabet"
                )));
            }
            values.extend_from_slice(row);
        }
        if let Some(l) = labels.iter().find(|l| **l > 1) {
            return Err(Error::InvalidDataset(format!("label {l} is not 0 or 1")));
        }
        Ok(Self {
            name: name.into(),
            feature_names,
            encoding,
            values,
            labels,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn encoding(&self) -> Encoding {
        self.encoding
    }

    /// Number of samples.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Number of features per sample.
    pub fn width(&self) -> usize {
        self.feature_names.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let d = self.width();
        &self.values[i * d..(i + 1) * d]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        (0..self.len()).map(move |i| self.row(i))
    }

    pub fn label(&self, i: usize) -> u8 {
        self.labels[i]
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    /// Sample counts of class 0 and class 1.
    pub fn class_counts(&self) -> [usize; 2] {
        let ones = self.labels.iter().filter(|l| **l == 1).count();
        [self.len() - ones, ones]
    }

    pub fn all(&self) -> Subset<'_> {
        Subset::new(self, (0..self.len()).collect())
    }
}

/// A selection of rows from a dataset, used as a training or validation split.
#[derive(Debug, Clone)]
pub struct Subset<'a> {
    data: &'a BinaryDataset,
    indices: Vec<usize>,
}

impl<'a> Subset<'a> {
    /// # Panics
    /// If an index is out of bounds for `data`.
    pub fn new(data: &'a BinaryDataset, indices: Vec<usize>) -> Self {
        assert!(
            indices.iter().all(|&i| i < data.len()),
            "subset index out of bounds"
        );
        Self { data, indices }
    }

    pub fn dataset(&self) -> &'a BinaryDataset {
        self.data
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn width(&self) -> usize {
        self.data.width()
    }

    pub fn encoding(&self) -> Encoding {
        self.data.encoding()
    }

    pub fn row(&self, i: usize) -> &'a [f64] {
        self.data.row(self.indices[i])
    }

    pub fn label(&self, i: usize) -> u8 {
        self.data.label(self.indices[i])
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = (&'a [f64], u8)> + '_ {
        let data = self.data;
        self.indices
            .iter()
            .map(move |&i| (data.row(i), data.label(i)))
    }

    pub fn class_counts(&self) -> [usize; 2] {
        let ones = self.iter().filter(|(_, l)| *l == 1).count();
        [self.len() - ones, ones]
    }
}
