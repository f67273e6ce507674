//! Minimal sparse complex linear algebra: CSR matrices with the handful of
//! operations the Fock-operator and Liouvillian machinery needs, plus a
//! left-looking sparse LU for the steady-state solves (see [`lu`]).

pub mod ilu;
pub mod lu;

use num_complex::Complex;

use crate::scalar::Scalar;

/// Compressed-sparse-row complex matrix. Column indices are `u32`; the
/// largest matrix in this crate is the vectorized Liouvillian, whose
/// dimension stays far below `u32::MAX` for any sane Fock cutoff.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix<T> {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<u32>,
    values: Vec<Complex<T>>,
}

impl<T: Scalar> CsrMatrix<T> {
    /// Build from (row, col, value) triplets; duplicates are summed and
    /// exact zeros dropped.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        mut triplets: Vec<(u32, u32, Complex<T>)>,
    ) -> Self {
        triplets.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut counts = vec![0usize; nrows];
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values: Vec<Complex<T>> = Vec::with_capacity(triplets.len());
        let mut last: Option<(u32, u32)> = None;
        for (r, c, v) in triplets {
            debug_assert!((r as usize) < nrows && (c as usize) < ncols);
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(c);
                values.push(v);
                counts[r as usize] += 1;
                last = Some((r, c));
            }
        }
        let mut row_ptr = vec![0usize; nrows + 1];
        for i in 0..nrows {
            row_ptr[i + 1] = row_ptr[i] + counts[i];
        }
        let mut m = Self {
            nrows,
            ncols,
            row_ptr,
            col_idx,
            values,
        };
        m.drop_zeros();
        m
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            row_ptr: vec![0; nrows + 1],
            col_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let one = Complex::new(T::one(), T::zero());
        Self {
            nrows: n,
            ncols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n as u32).collect(),
            values: vec![one; n],
        }
    }

    /// Diagonal matrix from the given entries.
    pub fn from_diagonal(diag: &[Complex<T>]) -> Self {
        let n = diag.len();
        let mut m = Self {
            nrows: n,
            ncols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n as u32).collect(),
            values: diag.to_vec(),
        };
        m.drop_zeros();
        m
    }

    fn drop_zeros(&mut self) {
        let zero = Complex::new(T::zero(), T::zero());
        if !self.values.contains(&zero) {
            return;
        }
        let mut new_ptr = vec![0usize; self.nrows + 1];
        let mut k = 0usize;
        for r in 0..self.nrows {
            for p in self.row_ptr[r]..self.row_ptr[r + 1] {
                if self.values[p] != zero {
                    self.col_idx[k] = self.col_idx[p];
                    self.values[k] = self.values[p];
                    k += 1;
                }
            }
            new_ptr[r + 1] = k;
        }
        self.col_idx.truncate(k);
        self.values.truncate(k);
        self.row_ptr = new_ptr;
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

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[u32] {
        &self.col_idx
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    /// Iterate the entries of one row as `(col, value)` pairs.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (u32, Complex<T>)> + '_ {
        let range = self.row_ptr[r]..self.row_ptr[r + 1];
        self.col_idx[range.clone()]
            .iter()
            .copied()
            .zip(self.values[range].iter().copied())
    }

    pub fn get(&self, r: usize, c: usize) -> Complex<T> {
        for (cc, v) in self.row(r) {
            if cc as usize == c {
                return v;
            }
        }
        Complex::new(T::zero(), T::zero())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        self.transpose_impl(true)
    }

    /// Plain transpose.
    pub fn transpose(&self) -> Self {
        self.transpose_impl(false)
    }

    /// Elementwise complex conjugate.
    pub fn conj(&self) -> Self {
        let mut out = self.clone();
        for v in &mut out.values {
            *v = v.conj();
        }
        out
    }

    fn transpose_impl(&self, conjugate: bool) -> Self {
        let mut counts = vec![0usize; self.ncols + 1];
        for &c in &self.col_idx {
            counts[c as usize + 1] += 1;
        }
        for i in 1..=self.ncols {
            counts[i] += counts[i - 1];
        }
        let row_ptr = counts.clone();
        let mut col_idx = vec![0u32; self.nnz()];
        let mut values = vec![Complex::new(T::zero(), T::zero()); self.nnz()];
        let mut next = counts;
        for r in 0..self.nrows {
            for p in self.row_ptr[r]..self.row_ptr[r + 1] {
                let c = self.col_idx[p] as usize;
                let dst = next[c];
                next[c] += 1;
                col_idx[dst] = r as u32;
                values[dst] = if conjugate {
                    self.values[p].conj()
                } else {
                    self.values[p]
                };
            }
        }
        Self {
            nrows: self.ncols,
            ncols: self.nrows,
            row_ptr,
            col_idx,
            values,
        }
    }

    /// Kronecker product `self (x) other`.
    pub fn kron(&self, other: &Self) -> Self {
        let nrows = self.nrows * other.nrows;
        let ncols = self.ncols * other.ncols;
        let nnz = self.nnz() * other.nnz();
        let mut row_ptr = Vec::with_capacity(nrows + 1);
        let mut col_idx = Vec::with_capacity(nnz);
        let mut values = Vec::with_capacity(nnz);
        row_ptr.push(0usize);
        for ra in 0..self.nrows {
            for rb in 0..other.nrows {
                for pa in self.row_ptr[ra]..self.row_ptr[ra + 1] {
                    let ca = self.col_idx[pa] as usize;
                    let va = self.values[pa];
                    for pb in other.row_ptr[rb]..other.row_ptr[rb + 1] {
                        let cb = other.col_idx[pb] as usize;
                        col_idx.push((ca * other.ncols + cb) as u32);
                        values.push(va * other.values[pb]);
                    }
                }
                row_ptr.push(col_idx.len());
            }
        }
        Self {
            nrows,
            ncols,
            row_ptr,
            col_idx,
            values,
        }
    }

    /// Sparse matrix product `self * other`.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.nrows, "matmul dimension mismatch");
        let zero = Complex::new(T::zero(), T::zero());
        let mut acc: Vec<Complex<T>> = vec![zero; other.ncols];
        let mut marker: Vec<u32> = vec![u32::MAX; other.ncols];
        let mut pattern: Vec<u32> = Vec::new();

        let mut row_ptr = Vec::with_capacity(self.nrows + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0usize);
        for r in 0..self.nrows {
            pattern.clear();
            for pa in self.row_ptr[r]..self.row_ptr[r + 1] {
                let k = self.col_idx[pa] as usize;
                let va = self.values[pa];
                for pb in other.row_ptr[k]..other.row_ptr[k + 1] {
                    let c = other.col_idx[pb] as usize;
                    if marker[c] != r as u32 {
                        marker[c] = r as u32;
                        acc[c] = zero;
                        pattern.push(c as u32);
                    }
                    acc[c] += va * other.values[pb];
                }
            }
            pattern.sort_unstable();
            for &c in &pattern {
                let v = acc[c as usize];
                if v != zero {
                    col_idx.push(c);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Self {
            nrows: self.nrows,
            ncols: other.ncols,
            row_ptr,
            col_idx,
            values,
        }
    }

    /// Linear combination `alpha * self + beta * other`.
    pub fn add_scaled(&self, alpha: Complex<T>, other: &Self, beta: Complex<T>) -> Self {
        assert_eq!(self.nrows, other.nrows);
        assert_eq!(self.ncols, other.ncols);
        let zero = Complex::new(T::zero(), T::zero());
        let mut row_ptr = Vec::with_capacity(self.nrows + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0usize);
        for r in 0..self.nrows {
            let (mut pa, ea) = (self.row_ptr[r], self.row_ptr[r + 1]);
            let (mut pb, eb) = (other.row_ptr[r], other.row_ptr[r + 1]);
            while pa < ea || pb < eb {
                let ca = if pa < ea { self.col_idx[pa] } else { u32::MAX };
                let cb = if pb < eb { other.col_idx[pb] } else { u32::MAX };
                let (c, v) = if ca < cb {
                    let v = alpha * self.values[pa];
                    pa += 1;
                    (ca, v)
                } else if cb < ca {
                    let v = beta * other.values[pb];
                    pb += 1;
                    (cb, v)
                } else {
                    let v = alpha * self.values[pa] + beta * other.values[pb];
                    pa += 1;
                    pb += 1;
                    (ca, v)
                };
                if v != zero {
                    col_idx.push(c);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Self {
            nrows: self.nrows,
            ncols: self.ncols,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn scale(&self, alpha: Complex<T>) -> Self {
        let mut out = self.clone();
        for v in &mut out.values {
            *v *= alpha;
        }
        out.drop_zeros();
        out
    }

    /// `y = self * x`.
    pub fn matvec(&self, x: &[Complex<T>], y: &mut [Complex<T>]) {
        assert_eq!(x.len(), self.ncols);
        assert_eq!(y.len(), self.nrows);
        let zero = Complex::new(T::zero(), T::zero());
        for r in 0..self.nrows {
            let mut s = zero;
            for p in self.row_ptr[r]..self.row_ptr[r + 1] {
                s += self.values[p] * x[self.col_idx[p] as usize];
            }
            y[r] = s;
        }
    }

    /// Max absolute-value norm over entries.
    pub fn max_norm(&self) -> T {
        self.values
            .iter()
            .map(|v| v.norm())
            .fold(T::zero(), |a, b| a.max(b))
    }

    /// Dense representation, row-major; intended for small matrices in tests.
    pub fn to_dense(&self) -> Vec<Complex<T>> {
        let mut out = vec![Complex::new(T::zero(), T::zero()); self.nrows * self.ncols];
        for r in 0..self.nrows {
            for (c, v) in self.row(r) {
                out[r * self.ncols + c as usize] = v;
            }
        }
        out
    }
}

/// Compressed-sparse-column view used by the LU factorization.
#[derive(Debug, Clone)]
pub struct CscMatrix<T> {
    nrows: usize,
    ncols: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<u32>,
    values: Vec<Complex<T>>,
}

impl<T: Scalar> CscMatrix<T> {
    pub fn from_csr(a: &CsrMatrix<T>) -> Self {
        let t = a.transpose();
        // transpose of CSR is this matrix in CSC layout
        Self {
            nrows: a.nrows,
            ncols: a.ncols,
            col_ptr: t.row_ptr,
            row_idx: t.col_idx,
            values: t.values,
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn col_ptr(&self) -> &[usize] {
        &self.col_ptr
    }

    pub fn row_idx(&self) -> &[u32] {
        &self.row_idx
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn col(&self, c: usize) -> impl Iterator<Item = (u32, Complex<T>)> + '_ {
        let range = self.col_ptr[c]..self.col_ptr[c + 1];
        self.row_idx[range.clone()]
            .iter()
            .copied()
            .zip(self.values[range].iter().copied())
    }

    /// `y = self * x` (used for residual checks).
    pub fn matvec(&self, x: &[Complex<T>], y: &mut [Complex<T>]) {
        let zero = Complex::new(T::zero(), T::zero());
        y.fill(zero);
        for c in 0..self.ncols {
            let xc = x[c];
            if xc == zero {
                continue;
            }
            for p in self.col_ptr[c]..self.col_ptr[c + 1] {
                let r = self.row_idx[p] as usize;
                y[r] += self.values[p] * xc;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn mat(nrows: usize, ncols: usize, entries: &[(u32, u32, f64, f64)]) -> CsrMatrix<f64> {
        CsrMatrix::from_triplets(
            nrows,
            ncols,
            entries
                .iter()
                .map(|&(r, c, re, im)| (r, c, Complex64::new(re, im)))
                .collect(),
        )
    }

    #[test]
    fn triplets_sum_duplicates_and_drop_zeros() {
        let m = mat(2, 2, &[(0, 1, 1.0, 0.0), (0, 1, 2.0, 0.0), (1, 0, 0.0, 0.0)]);
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(0, 1), Complex64::new(3.0, 0.0));
    }

    #[test]
    fn adjoint_conjugates_and_transposes() {
        let m = mat(2, 3, &[(0, 2, 1.0, 2.0), (1, 0, -1.0, 0.5)]);
        let a = m.adjoint();
        assert_eq!(a.nrows(), 3);
        assert_eq!(a.get(2, 0), Complex64::new(1.0, -2.0));
        assert_eq!(a.get(0, 1), Complex64::new(-1.0, -0.5));
        // involution
        assert_eq!(a.adjoint(), m);
    }

    #[test]
    fn kron_matches_dense() {
        let a = mat(2, 2, &[(0, 0, 1.0, 0.0), (0, 1, 2.0, 0.0), (1, 1, 3.0, 0.0)]);
        let b = mat(2, 2, &[(0, 1, 1.0, 0.0), (1, 0, -1.0, 0.0)]);
        let k = a.kron(&b);
        assert_eq!(k.get(0, 1), Complex64::new(1.0, 0.0)); // a00*b01
        assert_eq!(k.get(0, 3), Complex64::new(2.0, 0.0)); // a01*b01
        assert_eq!(k.get(3, 2), Complex64::new(-3.0, 0.0)); // a11*b10
        assert_eq!(k.nnz(), 6);
    }

    #[test]
    fn matmul_matches_dense_small() {
        let a = mat(2, 2, &[(0, 0, 1.0, 1.0), (0, 1, 2.0, 0.0), (1, 1, -1.0, 0.0)]);
        let b = mat(2, 2, &[(0, 0, 0.0, 1.0), (1, 0, 1.0, 0.0), (1, 1, 2.0, 2.0)]);
        let c = a.matmul(&b);
        // c00 = (1+i)(i) + 2*1 = i + i^2 + 2 = 1 + i
        assert_eq!(c.get(0, 0), Complex64::new(1.0, 1.0));
        // c01 = 2*(2+2i) = 4+4i
        assert_eq!(c.get(0, 1), Complex64::new(4.0, 4.0));
        // c10 = -1*1 = -1 ; c11 = -(2+2i)
        assert_eq!(c.get(1, 0), Complex64::new(-1.0, 0.0));
        assert_eq!(c.get(1, 1), Complex64::new(-2.0, -2.0));
    }

    #[test]
    fn add_scaled_merges_patterns() {
        let a = mat(1, 3, &[(0, 0, 1.0, 0.0), (0, 2, 1.0, 0.0)]);
        let b = mat(1, 3, &[(0, 1, 1.0, 0.0), (0, 2, -0.5, 0.0)]);
        let s = a.add_scaled(Complex64::new(1.0, 0.0), &b, Complex64::new(2.0, 0.0));
        assert_eq!(s.get(0, 0), Complex64::new(1.0, 0.0));
        assert_eq!(s.get(0, 1), Complex64::new(2.0, 0.0));
        assert_eq!(s.get(0, 2), Complex64::new(0.0, 0.0));
        assert_eq!(s.nnz(), 2);
    }

    #[test]
    fn csc_roundtrip_matvec() {
        let a = mat(3, 3, &[(0, 0, 2.0, 0.0), (1, 2, 1.0, -1.0), (2, 1, 0.5, 0.0)]);
        let csc = CscMatrix::from_csr(&a);
        let x = vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(2.0, 0.0),
        ];
        let mut y1 = vec![Complex64::default(); 3];
        let mut y2 = vec![Complex64::default(); 3];
        a.matvec(&x, &mut y1);
        csc.matvec(&x, &mut y2);
        assert_eq!(y1, y2);
    }
}
