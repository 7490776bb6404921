//! Sparse rows and a banded LU with partial pivoting.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Row-wise sparse matrix; each row keeps its entries sorted by column.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    n: usize,
    rows: Vec<Vec<(usize, f64)>>,
}

impl SparseMatrix {
    pub fn from_rows(n: usize, mut rows: Vec<Vec<(usize, f64)>>) -> Self {
        assert_eq!(rows.len(), n);
        for row in &mut rows {
            row.sort_by_key(|&(c, _)| c);
        }
        Self { n, rows }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, k: usize) -> &[(usize, f64)] {
        &self.rows[k]
    }

    pub fn nonzeros(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.rows[i].iter().find(|&&(c, _)| c == j).map_or(0.0, |&(_, v)| v)
    }

    /// `(lower, upper)` bandwidths.
    pub fn bandwidths(&self) -> (usize, usize) {
        let mut kl = 0;
        let mut ku = 0;
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, _) in row {
                if j < i {
                    kl = kl.max(i - j);
                } else {
                    ku = ku.max(j - i);
                }
            }
        }
        (kl, ku)
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.rows.iter().map(|row| row.iter().map(|&(j, v)| x[j] * v).sum()).collect()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                m[(i, j)] += v;
            }
        }
        m
    }

    pub fn max_abs(&self) -> f64 {
        self.rows.iter().flatten().map(|&(_, v)| v.abs()).fold(0.0, f64::max)
    }
}

/// LU factors of a banded matrix, row interchanges applied as they happen.
#[derive(Debug, Clone)]
pub struct BandLu {
    n: usize,
    kl: usize,
    /// Upper bandwidth of `U`, `ku + kl` after fill-in.
    ku: usize,
    upper: Vec<f64>,
    mult: Vec<f64>,
    piv: Vec<usize>,
}

/// Pivots below this fraction of the largest entry count as zero.
pub const PIVOT_TOL: f64 = 1e-14;

impl BandLu {
    pub fn factor(a: &SparseMatrix) -> Result<Self> {
        let n = a.dim();
        let (kl, ku0) = a.bandwidths();
        let ku = ku0 + kl;
        let width = kl + ku + 1;
        let mut band = vec![0.0; n * width];
        let at = |i: usize, j: usize| i * width + (j + kl - i);
        for i in 0..n {
            for &(j, v) in a.row(i) {
                band[at(i, j)] += v;
            }
        }
        let tiny = PIVOT_TOL * a.max_abs().max(f64::MIN_POSITIVE);
        let mut mult = vec![0.0; n * kl.max(1)];
        let mut piv = vec![0; n];
        for k in 0..n {
            let last_row = (k + kl).min(n - 1);
            let last_col = (k + ku).min(n - 1);
            let mut p = k;
            let mut best = band[at(k, k)].abs();
            for i in k + 1..=last_row {
                let v = band[at(i, k)].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best <= tiny {
                return Err(Error::SingularSystem { row: k, pivot: best });
            }
            piv[k] = p;
            if p != k {
                for j in k..=last_col {
                    band.swap(at(k, j), at(p, j));
                }
            }
            let pivot = band[at(k, k)];
            for i in k + 1..=last_row {
                let l = band[at(i, k)] / pivot;
                mult[k * kl.max(1) + (i - k - 1)] = l;
                band[at(i, k)] = 0.0;
                if l != 0.0 {
                    for j in k + 1..=last_col {
                        band[at(i, j)] -= l * band[at(k, j)];
                    }
                }
            }
        }
        // keep only U, stored from the diagonal
        let mut upper = vec![0.0; n * (ku + 1)];
        for i in 0..n {
            for j in i..=(i + ku).min(n - 1) {
                upper[i * (ku + 1) + (j - i)] = band[at(i, j)];
            }
        }
        Ok(Self { n, kl, ku, upper, mult, piv })
    }

    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        let mut x = b.to_vec();
        for k in 0..n {
            x.swap(k, self.piv[k]);
            let xk = x[k];
            for i in k + 1..=(k + kl).min(n - 1) {
                x[i] -= xk * self.mult[k * kl.max(1) + (i - k - 1)];
            }
        }
        for i in (0..n).rev() {
            let row = &self.upper[i * (ku + 1)..(i + 1) * (ku + 1)];
            let mut acc = x[i];
            for j in i + 1..=(i + ku).min(n - 1) {
                acc -= x[j] * row[j - i];
            }
            x[i] = acc / row[0];
        }
        x
    }

    /// Bandwidths `(lower, upper)` of the factors.
    pub fn bandwidths(&self) -> (usize, usize) {
        (self.kl, self.ku)
    }
}
