//! Compressed sparse row storage with a fixed pattern.

use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Zero matrix with the diagonal plus the given (sorted, diagonal-free)
    /// off-diagonal columns per row.
    pub fn from_neighbors(neighbors: &[Vec<usize>]) -> Self {
        let n = neighbors.len();
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::with_capacity(neighbors.iter().map(|r| r.len() + 1).sum());
        row_ptr.push(0);
        for (i, row) in neighbors.iter().enumerate() {
            let split = row.partition_point(|&j| j < i);
            col_idx.extend_from_slice(&row[..split]);
            col_idx.push(i);
            col_idx.extend_from_slice(&row[split..]);
            row_ptr.push(col_idx.len());
        }
        let nnz = col_idx.len();
        Self {
            n,
            row_ptr,
            col_idx,
            values: vec![0.0; nnz],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::from_neighbors(&vec![Vec::new(); n]);
        m.values.fill(1.0);
        m
    }

    /// Dense input, storing only nonzeros (and the diagonal).
    pub fn from_dense(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        let neighbors: Vec<Vec<usize>> = rows
            .iter()
            .enumerate()
            .map(|(i, r)| (0..n).filter(|&j| j != i && r[j] != 0.0).collect())
            .collect();
        let mut m = Self::from_neighbors(&neighbors);
        for (i, r) in rows.iter().enumerate() {
            for j in 0..n {
                if r[j] != 0.0 || i == j {
                    m.add(i, j, r[j]);
                }
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.col_idx.len()
    }

    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.col_idx[r.clone()], &self.values[r])
    }

    fn position(&self, i: usize, j: usize) -> Option<usize> {
        let (cols, _) = self.row(i);
        cols.binary_search(&j).ok().map(|k| self.row_ptr[i] + k)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.position(i, j).map_or(0.0, |k| self.values[k])
    }

    /// Adds `v` at `(i, j)`; the entry must be in the pattern.
    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let k = self
            .position(i, j)
            .unwrap_or_else(|| panic!("entry ({i}, {j}) outside the sparsity pattern"));
        self.values[k] += v;
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self
            .position(i, j)
            .unwrap_or_else(|| panic!("entry ({i}, {j}) outside the sparsity pattern"));
        self.values[k] = v;
    }

    pub fn scatter(&mut self, dofs: &[usize; 3], local: &[[f64; 3]; 3]) {
        for (a, &i) in dofs.iter().enumerate() {
            for (b, &j) in dofs.iter().enumerate() {
                self.add(i, j, local[a][b]);
            }
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn matvec_into(&self, x: &[f64], y: &mut [f64]) {
        y.par_iter_mut().with_min_len(4096).enumerate().for_each(|(i, yi)| {
            let (cols, vals) = self.row(i);
            *yi = cols.iter().zip(vals).map(|(&j, &v)| v * x[j]).sum();
        });
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.matvec_into(x, &mut y);
        y
    }

    /// `xᵀ A x`.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        self.matvec(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    /// Bitwise symmetry of values and pattern.
    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| {
            let (cols, vals) = self.row(i);
            cols.iter()
                .zip(vals)
                .all(|(&j, &v)| self.position(j, i).is_some_and(|k| self.values[k].to_bits() == v.to_bits()))
        })
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// `P A Pᵀ` where row `i` of the result is row `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut inv = vec![0; self.n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let neighbors: Vec<Vec<usize>> = perm
            .iter()
            .enumerate()
            .map(|(new, &old)| {
                let mut r: Vec<usize> = self.row(old).0.iter().map(|&j| inv[j]).filter(|&j| j != new).collect();
                r.sort_unstable();
                r
            })
            .collect();
        let mut out = Self::from_neighbors(&neighbors);
        for (new, &old) in perm.iter().enumerate() {
            let (cols, vals) = self.row(old);
            for (&j, &v) in cols.iter().zip(vals) {
                out.set(new, inv[j], v);
            }
        }
        out
    }

    /// Rows whose stored values differ bitwise between two matrices with the
    /// same pattern.
    pub fn differing_rows(&self, other: &Self) -> Vec<usize> {
        assert_eq!(self.row_ptr, other.row_ptr);
        assert_eq!(self.col_idx, other.col_idx);
        (0..self.n)
            .filter(|&i| {
                let r = self.row_ptr[i]..self.row_ptr[i + 1];
                self.values[r.clone()]
                    .iter()
                    .zip(&other.values[r])
                    .any(|(a, b)| a.to_bits() != b.to_bits())
            })
            .collect()
    }

    pub fn bitwise_eq(&self, other: &Self) -> bool {
        self.row_ptr == other.row_ptr
            && self.col_idx == other.col_idx
            && self.values.iter().zip(&other.values).all(|(a, b)| a.to_bits() == b.to_bits())
    }
}
