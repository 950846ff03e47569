//! Compressed sparse row matrices and the coordinate (triplet) text format.

use crate::error::{Error, Result};
use nalgebra::DMatrix;
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Builds a matrix from `(row, col, value)` entries, summing duplicates.
    /// The summation order is the input order, so the result is deterministic.
    pub fn from_triplets(nrows: usize, ncols: usize, triplets: &[(usize, usize, f64)]) -> Self {
        let mut counts = vec![0usize; nrows + 1];
        for &(i, j, _) in triplets {
            assert!(i < nrows && j < ncols, "triplet ({i}, {j}) out of bounds");
            counts[i + 1] += 1;
        }
        for i in 0..nrows {
            counts[i + 1] += counts[i];
        }
        let mut next = counts.clone();
        let mut cols = vec![0usize; triplets.len()];
        let mut vals = vec![0.0; triplets.len()];
        for &(i, j, v) in triplets {
            cols[next[i]] = j;
            vals[next[i]] = v;
            next[i] += 1;
        }
        let mut indptr = Vec::with_capacity(nrows + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        indptr.push(0);
        let mut row: Vec<(usize, f64)> = Vec::new();
        for i in 0..nrows {
            row.clear();
            row.extend((counts[i]..counts[i + 1]).map(|k| (cols[k], vals[k])));
            row.sort_by_key(|&(j, _)| j);
            let mut k = 0;
            while k < row.len() {
                let j = row[k].0;
                let mut sum = 0.0;
                while k < row.len() && row[k].0 == j {
                    sum += row[k].1;
                    k += 1;
                }
                indices.push(j);
                values.push(sum);
            }
            indptr.push(indices.len());
        }
        Self { nrows, ncols, indptr, indices, values }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.indptr[i]..self.indptr[i + 1];
        self.indices[range.clone()].iter().copied().zip(self.values[range].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let range = self.indptr[i]..self.indptr[i + 1];
        match self.indices[range.clone()].binary_search(&j) {
            Ok(k) => self.values[range.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn triplets(&self) -> Vec<(usize, usize, f64)> {
        (0..self.nrows).flat_map(|i| self.row(i).map(move |(j, v)| (i, j, v))).collect()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.ncols);
        (0..self.nrows).map(|i| self.row(i).map(|(j, v)| v * x[j]).sum()).collect()
    }

    /// `xᵀ A y`.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        (0..self.nrows).map(|i| x[i] * self.row(i).map(|(j, v)| v * y[j]).sum::<f64>()).sum()
    }

    pub fn quad_form(&self, x: &[f64]) -> f64 {
        self.bilinear(x, x)
    }

    pub fn sum_all(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.nrows.min(self.ncols)).map(|i| self.get(i, i)).collect()
    }

    /// Largest `|a_ij − a_ji|` relative to the largest entry.
    pub fn symmetry_defect(&self) -> f64 {
        let scale = self.values.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
        let mut worst = 0.0f64;
        for i in 0..self.nrows {
            for (j, v) in self.row(i) {
                worst = worst.max((v - self.get(j, i)).abs());
            }
        }
        worst / scale
    }

    /// `alpha * self + beta * other`.
    pub fn combine(&self, alpha: f64, other: &CsrMatrix, beta: f64) -> CsrMatrix {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let mut t: Vec<_> = self.triplets().into_iter().map(|(i, j, v)| (i, j, alpha * v)).collect();
        t.extend(other.triplets().into_iter().map(|(i, j, v)| (i, j, beta * v)));
        CsrMatrix::from_triplets(self.nrows, self.ncols, &t)
    }

    /// Principal submatrix on the given (sorted, distinct) indices.
    pub fn principal_submatrix(&self, keep: &[usize]) -> CsrMatrix {
        let mut map = vec![usize::MAX; self.nrows];
        for (new, &old) in keep.iter().enumerate() {
            map[old] = new;
        }
        let mut t = Vec::new();
        for (new_i, &old_i) in keep.iter().enumerate() {
            for (j, v) in self.row(old_i) {
                if map[j] != usize::MAX {
                    t.push((new_i, map[j], v));
                }
            }
        }
        CsrMatrix::from_triplets(keep.len(), keep.len(), &t)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut d = DMatrix::zeros(self.nrows, self.ncols);
        for i in 0..self.nrows {
            for (j, v) in self.row(i) {
                d[(i, j)] += v;
            }
        }
        d
    }

    /// Coordinate text format: a header line `%%triplet nrows ncols nnz`
    /// followed by one zero-based `row col value` line per stored entry.
    pub fn to_triplet_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "%%triplet {} {} {}", self.nrows, self.ncols, self.nnz());
        for i in 0..self.nrows {
            for (j, v) in self.row(i) {
                let _ = writeln!(s, "{i} {j} {v:.17e}");
            }
        }
        s
    }

    pub fn from_triplet_text(text: &str) -> Result<CsrMatrix> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty triplet file".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 || fields[0] != "%%triplet" {
            return Err(Error::Parse(format!("bad triplet header: {header}")));
        }
        let num = |s: &str| s.parse::<usize>().map_err(|e| Error::Parse(format!("{s}: {e}")));
        let (nrows, ncols, nnz) = (num(fields[1])?, num(fields[2])?, num(fields[3])?);
        let mut t = Vec::with_capacity(nnz);
        for line in lines {
            if line.starts_with('%') {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(Error::Parse(format!("bad triplet line: {line}")));
            }
            let (i, j) = (num(parts[0])?, num(parts[1])?);
            let v: f64 = parts[2].parse().map_err(|e| Error::Parse(format!("{}: {e}", parts[2])))?;
            if i >= nrows || j >= ncols {
                return Err(Error::Parse(format!("entry ({i}, {j}) outside {nrows}x{ncols}")));
            }
            t.push((i, j, v));
        }
        if t.len() != nnz {
            return Err(Error::Parse(format!("expected {nnz} entries, found {}", t.len())));
        }
        Ok(CsrMatrix::from_triplets(nrows, ncols, &t))
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
