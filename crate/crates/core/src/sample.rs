//! Observation matrices and row-subset views.

use crate::error::{Error, Result};

/// An `rows × cols` matrix of observations stored row-major. Each row is one
/// i.i.d. draw, each column one coordinate (model).
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    data: Vec<f64>,
    rows: usize,
    cols: usize,
}

impl Sample {
    /// Builds a sample from row-major data. All entries must be finite.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 {
            return Err(Error::domain("sample has no rows"));
        }
        if cols == 0 {
            return Err(Error::domain("sample has no columns"));
        }
        if data.len() != rows * cols {
            return Err(Error::input(format!(
                "expected {} entries for a {rows}x{cols} sample, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::input(format!(
                "non-finite entry at row {}, column {}",
                pos / cols + 1,
                pos % cols + 1
            )));
        }
        Ok(Self { data, rows, cols })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::input(format!(
                    "row {} has {} entries, expected {cols}",
                    i + 1,
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Self::new(rows.len(), cols, data)
    }

    /// Builds a sample from column vectors of equal length.
    pub fn from_columns<C: AsRef<[f64]>>(columns: &[C]) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map(|c| c.as_ref().len()).unwrap_or(0);
        if columns.iter().any(|c| c.as_ref().len() != rows) {
            return Err(Error::input("columns have unequal lengths"));
        }
        let mut data = vec![0.0; rows * cols];
        for (k, col) in columns.iter().enumerate() {
            for (i, v) in col.as_ref().iter().enumerate() {
                data[i * cols + k] = *v;
            }
        }
        Self::new(rows, cols, data)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn get(&self, i: usize, k: usize) -> f64 {
        self.data[i * self.cols + k]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn column(&self, k: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, k)).collect()
    }

    /// The sample with every entry negated; argmax inference on `self` is
    /// argmin inference on the result.
    pub fn negated(&self) -> Self {
        Self {
            data: self.data.iter().map(|v| -v).collect(),
            rows: self.rows,
            cols: self.cols,
        }
    }

    /// A copy with every column shifted to have zero sample mean.
    pub fn column_centered(&self) -> Self {
        let means = self.view().column_sums().into_iter().map(|s| s / self.rows as f64);
        let means: Vec<f64> = means.collect();
        let mut data = self.data.clone();
        for row in data.chunks_exact_mut(self.cols) {
            for (v, m) in row.iter_mut().zip(&means) {
                *v -= m;
            }
        }
        Self { data, rows: self.rows, cols: self.cols }
    }

    /// Materializes the given rows as a new sample.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &i in rows {
            data.extend_from_slice(self.row(i));
        }
        Self { data, rows: rows.len(), cols: self.cols }
    }

    /// View over every row.
    pub fn view(&self) -> View<'_> {
        View { sample: self, rows: None }
    }

    /// View over a subset of rows, in the given order.
    pub fn subset<'a>(&'a self, rows: &'a [usize]) -> View<'a> {
        View { sample: self, rows: Some(rows) }
    }
}

/// A borrowed subset of the rows of a [`Sample`]. Splits and resamples are
/// expressed as views so no observation data is copied.
#[derive(Debug, Clone, Copy)]
pub struct View<'a> {
    sample: &'a Sample,
    rows: Option<&'a [usize]>,
}

impl<'a> View<'a> {
    #[inline]
    pub fn len(&self) -> usize {
        match self.rows {
            Some(ix) => ix.len(),
            None => self.sample.rows,
        }
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.sample.cols
    }

    pub fn sample(&self) -> &'a Sample {
        self.sample
    }

    /// Row `j` of the view (not of the underlying sample).
    #[inline]
    pub fn row(&self, j: usize) -> &'a [f64] {
        match self.rows {
            Some(ix) => self.sample.row(ix[j]),
            None => self.sample.row(j),
        }
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &'a [f64]> + '_ {
        (0..self.len()).map(move |j| self.row(j))
    }

    /// Underlying sample row ids of the view.
    pub fn row_ids(&self) -> Vec<usize> {
        match self.rows {
            Some(ix) => ix.to_vec(),
            None => (0..self.sample.rows).collect(),
        }
    }

    /// Maps view-local positions to underlying row ids.
    pub fn global_ids(&self, local: &[usize]) -> Vec<usize> {
        match self.rows {
            Some(ix) => local.iter().map(|&j| ix[j]).collect(),
            None => local.to_vec(),
        }
    }

    pub fn column(&self, k: usize) -> Vec<f64> {
        self.iter_rows().map(|row| row[k]).collect()
    }

    pub(crate) fn column_into(&self, k: usize, out: &mut Vec<f64>) {
        out.clear();
        out.extend(self.iter_rows().map(|row| row[k]));
    }

    pub(crate) fn column_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.cols()];
        for row in self.iter_rows() {
            for (s, v) in sums.iter_mut().zip(row) {
                *s += v;
            }
        }
        sums
    }

    pub fn to_sample(&self) -> Sample {
        match self.rows {
            Some(ix) => self.sample.select_rows(ix),
            None => self.sample.clone(),
        }
    }
}
