//! Row-wise regularization of quasi-stochastic matrices.
//!
//! Each row is replaced by its projection onto the simplex with the given
//! row sum. Rows are independent, so they may be processed in parallel; the
//! result does not depend on scheduling.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::simplex::{project_values, TargetSum};
use crate::sum;

/// A dense, rectangular, row-major matrix of finite reals with at least one
/// row and one column.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixTable {
    data: Vec<f64>,
    rows: usize,
    cols: usize,
}

impl MatrixTable {
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let first = rows.first().ok_or(Error::EmptyInput)?;
        let cols = first.as_ref().len();
        if cols == 0 {
            return Err(Error::EmptyInput);
        }
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (r, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::RaggedMatrix {
                    row: r,
                    expected: cols,
                    found: row.len(),
                });
            }
            if let Some(c) = row.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFiniteEntry { row: r, column: c });
            }
            data.extend_from_slice(row);
        }
        Ok(Self {
            data,
            rows: rows.len(),
            cols,
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Ok(Self {
            data,
            rows: n,
            cols: n,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.cols)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.iter_rows().map(<[f64]>::to_vec).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowRecord {
    pub row: usize,
    pub support_size: usize,
    pub shift: f64,
    pub squared_distance: f64,
    /// The input row was identically zero; its projection is the uniform row.
    pub zero_row: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegularizationReport {
    pub records: Vec<RowRecord>,
    pub max_distance: f64,
    pub total_distance: f64,
}

impl RegularizationReport {
    fn from_records(records: Vec<RowRecord>) -> Self {
        let max_distance = records
            .iter()
            .map(|r| r.squared_distance)
            .fold(0.0, f64::max);
        let total_distance = sum::sum(records.iter().map(|r| r.squared_distance));
        Self {
            records,
            max_distance,
            total_distance,
        }
    }

    pub fn zero_rows(&self) -> impl Iterator<Item = usize> + '_ {
        self.records.iter().filter(|r| r.zero_row).map(|r| r.row)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

pub fn regularize_matrix(
    m: &MatrixTable,
    target_sum: TargetSum,
) -> Result<(MatrixTable, RegularizationReport)> {
    regularize_matrix_with(m, target_sum, Execution::default())
}

pub fn regularize_matrix_with(
    m: &MatrixTable,
    target_sum: TargetSum,
    execution: Execution,
) -> Result<(MatrixTable, RegularizationReport)> {
    let project_row = |(r, row): (usize, &[f64])| -> Result<(Vec<f64>, RowRecord)> {
        let p = project_values(row, target_sum)?;
        let record = RowRecord {
            row: r,
            support_size: p.support_size,
            shift: p.shift,
            squared_distance: p.squared_distance,
            zero_row: row.iter().all(|&v| v == 0.0),
        };
        Ok((p.x.into_inner(), record))
    };

    let projected: Vec<(Vec<f64>, RowRecord)> = match execution {
        Execution::Serial => m
            .iter_rows()
            .enumerate()
            .map(project_row)
            .collect::<Result<_>>()?,
        Execution::Parallel => m
            .data
            .par_chunks_exact(m.cols)
            .enumerate()
            .map(project_row)
            .collect::<Result<_>>()?,
    };

    let mut data = Vec::with_capacity(m.data.len());
    let mut records = Vec::with_capacity(m.rows);
    for (row, record) in projected {
        data.extend(row);
        records.push(record);
    }
    let out = MatrixTable {
        data,
        rows: m.rows,
        cols: m.cols,
    };
    Ok((out, RegularizationReport::from_records(records)))
}
