//! Zero-fill incomplete LU preconditioner and BiCGSTAB, used as the fast
//! path for large steady-state systems (the direct factorization remains
//! the reference path and the fallback).

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::CsrMatrix;

/// ILU(0): incomplete LU on the sparsity pattern of `A` itself.
pub struct Ilu0<T> {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<u32>,
    values: Vec<Complex<T>>,
    /// position of the diagonal entry within each row
    diag: Vec<usize>,
}

impl<T: Scalar> Ilu0<T> {
    pub fn factor(a: &CsrMatrix<T>) -> Result<Self> {
        let n = a.nrows();
        let row_ptr = a.row_ptr().to_vec();
        let col_idx = a.col_idx().to_vec();
        let mut values = a.values().to_vec();
        let mut diag = vec![usize::MAX; n];
        for i in 0..n {
            for p in row_ptr[i]..row_ptr[i + 1] {
                if col_idx[p] as usize == i {
                    diag[i] = p;
                }
            }
            if diag[i] == usize::MAX {
                return Err(Error::Factorization(format!(
                    "ILU(0) requires a structurally present diagonal (row {i})"
                )));
            }
        }

        // row-wise IKJ incomplete elimination on the fixed pattern
        let mut w_pos: Vec<usize> = vec![usize::MAX; n];
        for i in 0..n {
            let (ri_s, ri_e) = (row_ptr[i], row_ptr[i + 1]);
            for p in ri_s..ri_e {
                w_pos[col_idx[p] as usize] = p;
            }
            for p in ri_s..ri_e {
                let k = col_idx[p] as usize;
                if k >= i {
                    break;
                }
                let pivot = values[diag[k]];
                if pivot.norm_sqr() == T::zero() {
                    return Err(Error::Factorization(format!("ILU(0) zero pivot at row {k}")));
                }
                let lik = values[p] / pivot;
                values[p] = lik;
                for pk in diag[k] + 1..row_ptr[k + 1] {
                    let j = col_idx[pk] as usize;
                    let pj = w_pos[j];
                    if pj != usize::MAX {
                        values[pj] = values[pj] - lik * values[pk];
                    }
                }
            }
            for p in ri_s..ri_e {
                w_pos[col_idx[p] as usize] = usize::MAX;
            }
        }
        Ok(Self {
            n,
            row_ptr,
            col_idx,
            values,
            diag,
        })
    }

    /// `x = (LU)^{-1} b` on the incomplete factors.
    pub fn solve(&self, b: &[Complex<T>], x: &mut [Complex<T>]) {
        x.copy_from_slice(b);
        // forward, unit lower
        for i in 0..self.n {
            let mut s = x[i];
            for p in self.row_ptr[i]..self.diag[i] {
                s -= self.values[p] * x[self.col_idx[p] as usize];
            }
            x[i] = s;
        }
        // backward
        for i in (0..self.n).rev() {
            let mut s = x[i];
            for p in self.diag[i] + 1..self.row_ptr[i + 1] {
                s -= self.values[p] * x[self.col_idx[p] as usize];
            }
            x[i] = s / self.values[self.diag[i]];
        }
    }
}

fn dot<T: Scalar>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter()
        .zip(b)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| {
            acc + x.conj() * *y
        })
}

fn norm2<T: Scalar>(a: &[Complex<T>]) -> T {
    a.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

/// Right-preconditioned BiCGSTAB for `A x = b`. Returns the solution once
/// the recursive relative residual drops below `tol`, or an error after
/// `max_iter` steps or on a breakdown.
pub fn bicgstab<T: Scalar>(
    a: &CsrMatrix<T>,
    b: &[Complex<T>],
    precond: &Ilu0<T>,
    tol: T,
    max_iter: usize,
) -> Result<Vec<Complex<T>>> {
    let n = b.len();
    let zero = Complex::new(T::zero(), T::zero());
    let b_norm = norm2(b).max(T::of(1e-300));

    let mut x = vec![zero; n];
    let mut r = b.to_vec(); // r = b - A x0, x0 = 0
    let r_hat = r.clone();
    let mut rho_prev = Complex::new(T::one(), T::zero());
    let mut alpha = Complex::new(T::one(), T::zero());
    let mut omega = Complex::new(T::one(), T::zero());
    let mut v = vec![zero; n];
    let mut p = vec![zero; n];
    let mut y = vec![zero; n];
    let mut z = vec![zero; n];
    let mut s = vec![zero; n];
    let mut t = vec![zero; n];

    for iter in 0..max_iter {
        let rho = dot(&r_hat, &r);
        if rho.norm() < T::of(1e-300) {
            return Err(Error::Factorization(format!(
                "BiCGSTAB breakdown (rho) at iteration {iter}"
            )));
        }
        let beta = (rho / rho_prev) * (alpha / omega);
        for i in 0..n {
            p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        precond.solve(&p, &mut y);
        a.matvec(&y, &mut v);
        let denom = dot(&r_hat, &v);
        if denom.norm() < T::of(1e-300) {
            return Err(Error::Factorization(format!(
                "BiCGSTAB breakdown (r_hat . v) at iteration {iter}"
            )));
        }
        alpha = rho / denom;
        for i in 0..n {
            s[i] = r[i] - alpha * v[i];
        }
        if norm2(&s) / b_norm < tol {
            for i in 0..n {
                x[i] += alpha * y[i];
            }
            return Ok(x);
        }
        precond.solve(&s, &mut z);
        a.matvec(&z, &mut t);
        let tt = dot(&t, &t);
        if tt.norm() < T::of(1e-300) {
            return Err(Error::Factorization(format!(
                "BiCGSTAB breakdown (t . t) at iteration {iter}"
            )));
        }
        omega = dot(&t, &s) / tt;
        for i in 0..n {
            x[i] = x[i] + alpha * y[i] + omega * z[i];
            r[i] = s[i] - omega * t[i];
        }
        if norm2(&r) / b_norm < tol {
            return Ok(x);
        }
        rho_prev = rho;
    }
    Err(Error::Factorization(format!(
        "BiCGSTAB did not converge within {max_iter} iterations"
    )))
}
