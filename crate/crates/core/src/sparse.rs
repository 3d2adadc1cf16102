//! Compressed sparse row storage for the intra-network weight matrix.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    pub fn zeros(n: usize) -> Self {
        CsrMatrix {
            n,
            row_ptr: vec![0; n + 1],
            col_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Builds an `n x n` matrix from `(row, col, value)` triplets. Entries
    /// within a row are sorted by column. Callers must reject duplicates and
    /// out-of-range indices beforehand.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Self {
        let mut counts = vec![0usize; n + 1];
        for &(r, _, _) in triplets {
            counts[r + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let row_ptr = counts.clone();
        let mut next = counts;
        let mut col_idx = vec![0usize; triplets.len()];
        let mut values = vec![0.0; triplets.len()];
        for &(r, c, v) in triplets {
            let k = next[r];
            col_idx[k] = c;
            values[k] = v;
            next[r] += 1;
        }
        let mut m = CsrMatrix {
            n,
            row_ptr,
            col_idx,
            values,
        };
        m.sort_rows();
        m
    }

    fn sort_rows(&mut self) {
        for i in 0..self.n {
            let (a, b) = (self.row_ptr[i], self.row_ptr[i + 1]);
            let mut row: Vec<(usize, f64)> = self.col_idx[a..b]
                .iter()
                .copied()
                .zip(self.values[a..b].iter().copied())
                .collect();
            row.sort_by_key(|&(c, _)| c);
            for (k, (c, v)) in row.into_iter().enumerate() {
                self.col_idx[a + k] = c;
                self.values[a + k] = v;
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let (a, b) = (self.row_ptr[i], self.row_ptr[i + 1]);
        self.col_idx[a..b]
            .iter()
            .copied()
            .zip(self.values[a..b].iter().copied())
    }

    pub fn row_abs_sum(&self, i: usize) -> f64 {
        self.row(i).map(|(_, v)| v.abs()).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.row(i).find(|&(c, _)| c == j).map_or(0.0, |(_, v)| v)
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    /// `out = W x`
    pub fn mul_vec(&self, x: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate().take(self.n) {
            *o = self.row(i).map(|(j, v)| v * x[j]).sum();
        }
    }

    /// `out = W^T x`
    pub fn mul_vec_transposed(&self, x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for i in 0..self.n {
            let xi = x[i];
            if xi == 0.0 {
                continue;
            }
            for (j, v) in self.row(i) {
                out[j] += v * xi;
            }
        }
    }

    /// Maximum absolute row sum, i.e. the induced infinity norm.
    pub fn max_row_abs_sum(&self) -> f64 {
        (0..self.n).map(|i| self.row_abs_sum(i)).fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.n]; self.n];
        for (i, j, v) in self.triplets() {
            d[i][j] = v;
        }
        d
    }
}
