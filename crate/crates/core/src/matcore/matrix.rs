use std::fmt;

use faer::{c64, Mat, MatRef};

use crate::error::{Error, Result};

/// Dense square complex matrix.
///
/// Entries are always finite and the dimension is at least one. Storage is
/// delegated to [`faer::Mat`]; the row-major view is what crosses the file
/// boundary.
#[derive(Clone)]
pub struct ComplexMatrix {
    inner: Mat<c64>,
}

impl ComplexMatrix {
    /// Builds a matrix from `dim * dim` entries in row-major order.
    pub fn from_row_major(dim: usize, entries: Vec<c64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Dimension("matrix dimension must be positive".into()));
        }
        if entries.len() != dim * dim {
            return Err(Error::Dimension(format!(
                "dim = {dim} requires {} entries, found {}",
                dim * dim,
                entries.len()
            )));
        }
        if let Some(pos) = entries.iter().position(|z| !z.is_finite()) {
            return Err(Error::Domain(format!(
                "entry ({}, {}) is not finite",
                pos / dim,
                pos % dim
            )));
        }
        Ok(Self {
            inner: Mat::from_fn(dim, dim, |i, j| entries[i * dim + j]),
        })
    }

    /// Convenience constructor from nested rows of `(re, im)` pairs.
    pub fn from_rows(rows: &[Vec<(f64, f64)>]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {dim}",
                    row.len()
                )));
            }
            entries.extend(row.iter().map(|&(re, im)| c64::new(re, im)));
        }
        Self::from_row_major(dim, entries)
    }

    /// Real matrix from nested rows.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<(f64, f64)>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| (x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn identity(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        Self {
            inner: Mat::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        Self {
            inner: Mat::zeros(dim, dim),
        }
    }

    pub fn from_diagonal(diag: &[c64]) -> Result<Self> {
        let n = diag.len();
        let mut entries = vec![c64::new(0.0, 0.0); n * n];
        for (i, &d) in diag.iter().enumerate() {
            entries[i * n + i] = d;
        }
        Self::from_row_major(n, entries)
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        let diag: Vec<c64> = diag.iter().map(|&x| c64::new(x, 0.0)).collect();
        Self::from_diagonal(&diag)
    }

    /// Wraps a faer matrix. Panics if it is not square, empty, or holds
    /// non-finite entries; kernels only call this on their own outputs.
    pub(crate) fn from_faer(inner: Mat<c64>) -> Self {
        assert_eq!(inner.nrows(), inner.ncols(), "matrix must be square");
        assert!(inner.nrows() > 0, "matrix dimension must be positive");
        Self { inner }
    }

    /// Fallible variant of [`from_faer`](Self::from_faer) for results that may
    /// have overflowed.
    pub(crate) fn try_from_faer(inner: Mat<c64>) -> Result<Self> {
        let n = inner.nrows();
        for j in 0..n {
            for i in 0..n {
                if !inner[(i, j)].is_finite() {
                    return Err(Error::Convergence(format!(
                        "non-finite entry ({i}, {j}) in computed matrix"
                    )));
                }
            }
        }
        Ok(Self::from_faer(inner))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> c64 {
        self.inner[(i, j)]
    }

    pub fn as_faer(&self) -> MatRef<'_, c64> {
        self.inner.as_ref()
    }

    pub fn row_major(&self) -> Vec<c64> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(self.inner[(i, j)]);
            }
        }
        out
    }

    pub fn diagonal(&self) -> Vec<c64> {
        (0..self.dim()).map(|i| self.inner[(i, i)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            inner: self.inner.adjoint().to_owned(),
        }
    }

    pub fn scale(&self, factor: c64) -> Self {
        let n = self.dim();
        Self {
            inner: Mat::from_fn(n, n, |i, j| self.inner[(i, j)] * factor),
        }
    }

    /// Entrywise `self - other`. Panics on dimension mismatch.
    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        let n = self.dim();
        Self {
            inner: Mat::from_fn(n, n, |i, j| self.inner[(i, j)] - other.inner[(i, j)]),
        }
    }

    /// Entrywise `self + other`. Panics on dimension mismatch.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        let n = self.dim();
        Self {
            inner: Mat::from_fn(n, n, |i, j| self.inner[(i, j)] + other.inner[(i, j)]),
        }
    }

    /// Largest entry modulus, `‖A‖_max`.
    pub fn max_abs(&self) -> f64 {
        let n = self.dim();
        let mut m = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                m = m.max(self.inner[(i, j)].norm());
            }
        }
        m
    }

    /// `‖self - other‖_max`. Panics on dimension mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim());
        let n = self.dim();
        let mut m = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                m = m.max((self.inner[(i, j)] - other.inner[(i, j)]).norm());
            }
        }
        m
    }

    /// `‖A - A†‖_max`.
    pub fn hermiticity_residual(&self) -> f64 {
        let n = self.dim();
        let mut m = 0.0f64;
        for j in 0..n {
            for i in 0..=j {
                m = m.max((self.inner[(i, j)] - self.inner[(j, i)].conj()).norm());
            }
        }
        m
    }

    /// `(A + A†) / 2`, exactly Hermitian.
    pub fn hermitian_part(&self) -> Self {
        let n = self.dim();
        Self {
            inner: Mat::from_fn(n, n, |i, j| {
                (self.inner[(i, j)] + self.inner[(j, i)].conj()) * 0.5
            }),
        }
    }

    /// `‖A†A - I‖_max`.
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.dim();
        let prod = self.inner.adjoint() * self.inner.as_ref();
        let mut m = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                m = m.max((prod[(i, j)] - c64::new(target, 0.0)).norm());
            }
        }
        m
    }
}

impl PartialEq for ComplexMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.dim() == other.dim() && self.row_major() == other.row_major()
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.dim();
        writeln!(f, "ComplexMatrix({n}x{n}) [")?;
        for i in 0..n {
            write!(f, "  ")?;
            for j in 0..n {
                let z = self.inner[(i, j)];
                write!(f, "{:+.6e}{:+.6e}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}
