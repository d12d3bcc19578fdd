use std::io::{BufRead, Write};

use super::KernelKind;
use crate::error::{Error, Result};

/// Dense row-major kernel matrix. Square for Gram matrices, L x M for
/// cross kernels (rows are evaluation points, columns training points).
#[derive(Debug, Clone, PartialEq)]
pub struct KernelMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
    kind: KernelKind,
}

impl KernelMatrix {
    pub(crate) fn from_parts(rows: usize, cols: usize, data: Vec<f64>, kind: KernelKind) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data, kind }
    }

    /// Builds a matrix from nested rows; every row must have the same length.
    pub fn from_rows(rows: &[Vec<f64>], kind: KernelKind) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Self::from_parts(rows.len(), cols, data, kind))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn kind(&self) -> &KernelKind {
        &self.kind
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Exact symmetry check.
    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Selects the given rows and columns (indices into this matrix).
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> KernelMatrix {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &r in rows {
            let row = self.row(r);
            data.extend(cols.iter().map(|&c| row[c]));
        }
        Self::from_parts(rows.len(), cols.len(), data, self.kind.clone())
    }

    /// Writes comma-separated rows. `header` lines are emitted as `# ` comments.
    pub fn write_csv<W: Write>(&self, mut out: W, header: &[String]) -> Result<()> {
        for line in header {
            writeln!(out, "# {line}")?;
        }
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|v| format!("{v:?}")).collect();
            writeln!(out, "{}", line.join(","))?;
        }
        Ok(())
    }

    /// Reads the format produced by [`write_csv`](Self::write_csv).
    pub fn read_csv<R: BufRead>(input: R, kind: KernelKind) -> Result<Self> {
        let mut rows = Vec::new();
        for (n, line) in input.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .split(',')
                .enumerate()
                .map(|(c, cell)| {
                    cell.trim().parse::<f64>().map_err(|e| Error::Csv {
                        row: n + 1,
                        column: (c + 1).to_string(),
                        message: e.to_string(),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Self::from_rows(&rows, kind)
    }
}
