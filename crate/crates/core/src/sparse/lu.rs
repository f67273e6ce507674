//! Left-looking sparse LU with partial pivoting (Gilbert-Peierls), a
//! nested-dissection ordering for lattice-structured patterns, and a
//! switch-to-dense tail for the final separator block.
//!
//! The vectorized Liouvillian of the two-mode Fock space is, as a graph, a
//! four-dimensional lattice: every superoperator index decomposes into four
//! base-`d` digits (ket/bra Fock numbers of the two sites) and every coupling
//! moves each digit by at most one. Recursive coordinate bisection therefore
//! yields proper separators and near-optimal fill without a general-purpose
//! ordering package. The trailing columns of such an ordering form an almost
//! dense Schur complement, which is factored with a dense kernel instead of
//! sparse scatter updates.

use num_complex::Complex;

use super::CscMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Fill-reducing elimination order for a lattice graph whose node index is a
/// little-endian mixed-radix number over `extents`, assuming every edge moves
/// each coordinate by at most 1. Returns the column permutation: position
/// `k` holds the original index eliminated at step `k`.
pub fn lattice_nd_order(extents: &[usize]) -> Vec<u32> {
    let n: usize = extents.iter().product();
    let mut strides = vec![1usize; extents.len()];
    for k in 1..extents.len() {
        strides[k] = strides[k - 1] * extents[k - 1];
    }
    let mut order = Vec::with_capacity(n);
    let lo = vec![0usize; extents.len()];
    let hi = extents.to_vec();
    nd_recurse(&lo, &hi, &strides, &mut order);
    debug_assert_eq!(order.len(), n);
    order
}

fn nd_recurse(lo: &[usize], hi: &[usize], strides: &[usize], order: &mut Vec<u32>) {
    let volume: usize = lo.iter().zip(hi).map(|(&l, &h)| h - l).product();
    let (axis, width) = lo
        .iter()
        .zip(hi)
        .map(|(&l, &h)| h - l)
        .enumerate()
        .max_by_key(|&(_, w)| w)
        .unwrap();
    if volume <= 4 || width <= 2 {
        emit_box(lo, hi, strides, order);
        return;
    }
    let mid = lo[axis] + width / 2;
    let mut sub_hi = hi.to_vec();
    sub_hi[axis] = mid;
    nd_recurse(lo, &sub_hi, strides, order);
    let mut sub_lo = lo.to_vec();
    sub_lo[axis] = mid + 1;
    nd_recurse(&sub_lo, hi, strides, order);
    // separator slab, ordered recursively in the remaining axes
    let mut sep_lo = lo.to_vec();
    let mut sep_hi = hi.to_vec();
    sep_lo[axis] = mid;
    sep_hi[axis] = mid + 1;
    nd_recurse(&sep_lo, &sep_hi, strides, order);
}

fn emit_box(lo: &[usize], hi: &[usize], strides: &[usize], order: &mut Vec<u32>) {
    let dims = lo.len();
    let mut coord = lo.to_vec();
    loop {
        let idx: usize = coord.iter().zip(strides).map(|(&c, &s)| c * s).sum();
        order.push(idx as u32);
        let mut k = 0;
        loop {
            if k == dims {
                return;
            }
            coord[k] += 1;
            if coord[k] < hi[k] {
                break;
            }
            coord[k] = lo[k];
            k += 1;
        }
    }
}

const UNPIVOTED: u32 = u32::MAX;

/// Dense factorization of the trailing Schur complement.
struct DenseTail<T> {
    /// First pivot index covered by the dense block.
    start: usize,
    m: usize,
    /// `m x m` packed L\U, column-major.
    lu: Vec<Complex<T>>,
    /// Row-swap sequence, applied in order during the solve.
    ipiv: Vec<u32>,
}

/// Sparse LU factors of a row-scaled, row/column-permuted matrix:
/// `L * U = S * A[p, q]` where `S` is the row equilibration. The leading
/// columns are held sparse; the trailing block is a dense LU.
pub struct SparseLu<T> {
    n: usize,
    l_colptr: Vec<usize>,
    l_rowidx: Vec<u32>,
    l_values: Vec<Complex<T>>,
    // sparse U columns, then the above-block coupling of each dense column
    u_colptr: Vec<usize>,
    u_rowidx: Vec<u32>,
    u_values: Vec<Complex<T>>,
    /// pinv[original_row] = pivot position
    pinv: Vec<u32>,
    /// col order: q[k] = original column eliminated at step k
    q: Vec<u32>,
    /// row scales applied before factorization
    row_scale: Vec<T>,
    tail: Option<DenseTail<T>>,
}

impl<T: Scalar> SparseLu<T> {
    /// Factor `a` with the given column order (identity when `None`).
    /// `pivot_tol` in (0, 1]: the natural (diagonal) row is kept as pivot if
    /// its magnitude is at least `pivot_tol` times the column maximum.
    pub fn factor(a: &CscMatrix<T>, col_order: Option<&[u32]>, pivot_tol: T) -> Result<Self> {
        let n = a.nrows();
        if n != a.ncols() {
            return Err(Error::DimensionMismatch(a.nrows(), a.ncols()));
        }
        let q: Vec<u32> = match col_order {
            Some(o) => {
                debug_assert_eq!(o.len(), n);
                o.to_vec()
            }
            None => (0..n as u32).collect(),
        };

        // row equilibration: scale every row to unit max-norm
        let mut row_scale = vec![T::zero(); n];
        for c in 0..n {
            for (r, v) in a.col(c) {
                let m = v.norm();
                if m > row_scale[r as usize] {
                    row_scale[r as usize] = m;
                }
            }
        }
        for s in &mut row_scale {
            *s = if *s > T::zero() { T::one() / *s } else { T::one() };
        }

        // trailing block size at which the Schur complement goes dense;
        // for separator-based orderings the tail is nearly dense anyway
        let dense_from = if n >= 4 {
            (((n as f64).powf(0.75) * 1.15).ceil() as usize).clamp(16, n / 2)
        } else {
            0
        };

        let nnz_guess = a.values().len() * 8;
        let mut lu = Self {
            n,
            l_colptr: Vec::with_capacity(n + 1),
            l_rowidx: Vec::with_capacity(nnz_guess),
            l_values: Vec::with_capacity(nnz_guess),
            u_colptr: Vec::with_capacity(n + 1),
            u_rowidx: Vec::with_capacity(nnz_guess),
            u_values: Vec::with_capacity(nnz_guess),
            pinv: vec![UNPIVOTED; n],
            q,
            row_scale,
            tail: None,
        };
        lu.l_colptr.push(0);
        lu.u_colptr.push(0);

        let zero = Complex::new(T::zero(), T::zero());
        let mut x: Vec<Complex<T>> = vec![zero; n]; // dense accumulator
        let mut topo: Vec<u32> = Vec::with_capacity(64); // reach in topological order
        let mut stack: Vec<(u32, usize)> = Vec::with_capacity(64);
        let mut mark = vec![0u32; n];
        let mut stamp = 0u32;

        let k_dense = n - dense_from.min(n);
        for k in 0..k_dense {
            let col = lu.q[k] as usize;
            stamp += 1;
            topo.clear();
            lu.solve_column(a, col, stamp, &mut x, &mut topo, &mut stack, &mut mark);

            // pivot search among not-yet-pivotal rows
            let mut ipiv: Option<u32> = None;
            let mut amax = T::zero();
            for &i in &topo {
                if lu.pinv[i as usize] == UNPIVOTED {
                    let m = x[i as usize].norm();
                    if m > amax {
                        amax = m;
                        ipiv = Some(i);
                    }
                }
            }
            let mut ipiv = match ipiv {
                Some(i) if amax > T::zero() => i,
                _ => {
                    return Err(Error::Factorization(format!(
                        "structurally singular at column {col}"
                    )))
                }
            };
            // prefer the natural diagonal row when it is large enough
            if lu.pinv[col] == UNPIVOTED && x[col].norm() >= pivot_tol * amax {
                ipiv = col as u32;
            }
            let pivot = x[ipiv as usize];
            if pivot == zero {
                return Err(Error::Factorization(format!("zero pivot at column {col}")));
            }

            // U(:, k): rows already pivotal, plus the diagonal entry last
            for &i in &topo {
                let pi = lu.pinv[i as usize];
                if pi != UNPIVOTED {
                    let v = x[i as usize];
                    if v != zero {
                        lu.u_rowidx.push(pi);
                        lu.u_values.push(v);
                    }
                }
            }
            lu.u_rowidx.push(k as u32);
            lu.u_values.push(pivot);
            lu.u_colptr.push(lu.u_rowidx.len());

            // L(:, k): unit diagonal first, then below-diagonal rows scaled
            lu.pinv[ipiv as usize] = k as u32;
            lu.l_rowidx.push(ipiv);
            lu.l_values.push(Complex::new(T::one(), T::zero()));
            for &i in &topo {
                if lu.pinv[i as usize] == UNPIVOTED {
                    let v = x[i as usize];
                    if v != zero {
                        lu.l_rowidx.push(i);
                        lu.l_values.push(v / pivot);
                    }
                }
            }
            lu.l_colptr.push(lu.l_rowidx.len());
        }

        // dense tail: materialize the Schur complement of the remaining
        // block, then factor it with a dense kernel
        if k_dense < n {
            let m = n - k_dense;
            let mut slot_rows: Vec<u32> = Vec::with_capacity(m);
            let mut dense_slot = vec![u32::MAX; n];
            for i in 0..n {
                if lu.pinv[i] == UNPIVOTED {
                    dense_slot[i] = slot_rows.len() as u32;
                    slot_rows.push(i as u32);
                }
            }
            debug_assert_eq!(slot_rows.len(), m);

            let mut s = vec![zero; m * m];
            for t in 0..m {
                let col = lu.q[k_dense + t] as usize;
                stamp += 1;
                topo.clear();
                lu.solve_column(a, col, stamp, &mut x, &mut topo, &mut stack, &mut mark);
                for &i in &topo {
                    let v = x[i as usize];
                    if v == zero {
                        continue;
                    }
                    let pi = lu.pinv[i as usize];
                    if pi != UNPIVOTED {
                        lu.u_rowidx.push(pi);
                        lu.u_values.push(v);
                    } else {
                        s[dense_slot[i as usize] as usize + t * m] = v;
                    }
                }
                lu.u_colptr.push(lu.u_rowidx.len());
            }
            for (d, &orig) in slot_rows.iter().enumerate() {
                lu.pinv[orig as usize] = (k_dense + d) as u32;
            }
            let ipiv = dense_lu_in_place(&mut s, m)?;
            lu.tail = Some(DenseTail {
                start: k_dense,
                m,
                lu: s,
                ipiv,
            });
        }

        // remap L's row indices into pivot order
        for r in &mut lu.l_rowidx {
            *r = lu.pinv[*r as usize];
        }
        Ok(lu)
    }

    /// Sparse triangular solve `x = L \ A(:, col)` against the current
    /// partial factor: symbolic reach plus numeric scatter updates.
    #[allow(clippy::too_many_arguments)]
    fn solve_column(
        &self,
        a: &CscMatrix<T>,
        col: usize,
        stamp: u32,
        x: &mut [Complex<T>],
        topo: &mut Vec<u32>,
        stack: &mut Vec<(u32, usize)>,
        mark: &mut [u32],
    ) {
        let zero = Complex::new(T::zero(), T::zero());
        for (r, _) in a.col(col) {
            if mark[r as usize] != stamp {
                self.dfs(r, stamp, mark, stack, topo);
            }
        }
        for &i in topo.iter() {
            x[i as usize] = zero;
        }
        for (r, v) in a.col(col) {
            x[r as usize] = v * self.row_scale[r as usize];
        }
        for &j in topo.iter().rev() {
            let pj = self.pinv[j as usize];
            if pj == UNPIVOTED {
                continue;
            }
            let xj = x[j as usize];
            if xj == zero {
                continue;
            }
            let (s, e) = (
                self.l_colptr[pj as usize] + 1,
                self.l_colptr[pj as usize + 1],
            );
            let rows = &self.l_rowidx[s..e];
            let vals = &self.l_values[s..e];
            for (&r, &v) in rows.iter().zip(vals) {
                unsafe {
                    let xr = x.get_unchecked_mut(r as usize);
                    *xr -= v * xj;
                }
            }
        }
    }

    /// Iterative DFS through the current L structure; appends postorder.
    fn dfs(
        &self,
        start: u32,
        stamp: u32,
        mark: &mut [u32],
        stack: &mut Vec<(u32, usize)>,
        topo: &mut Vec<u32>,
    ) {
        stack.push((start, 0));
        mark[start as usize] = stamp;
        while let Some(&(node, child_pos)) = stack.last() {
            let pj = self.pinv[node as usize];
            let (s, e) = if pj == UNPIVOTED {
                (0, 0)
            } else {
                (
                    self.l_colptr[pj as usize] + 1,
                    self.l_colptr[pj as usize + 1],
                )
            };
            let mut pos = child_pos;
            let mut next_child = None;
            while s + pos < e {
                let child = self.l_rowidx[s + pos];
                pos += 1;
                if mark[child as usize] != stamp {
                    next_child = Some(child);
                    break;
                }
            }
            stack.last_mut().unwrap().1 = pos;
            match next_child {
                Some(child) => {
                    mark[child as usize] = stamp;
                    stack.push((child, 0));
                }
                None => {
                    topo.push(node);
                    stack.pop();
                }
            }
        }
    }

    /// Solve `A x = b` using the factors.
    pub fn solve(&self, b: &[Complex<T>]) -> Vec<Complex<T>> {
        let n = self.n;
        let zero = Complex::new(T::zero(), T::zero());
        let k_dense = self.tail.as_ref().map(|t| t.start).unwrap_or(n);

        // permute and scale: y[pinv[i]] = b[i] * row_scale[i]
        let mut y = vec![zero; n];
        for i in 0..n {
            y[self.pinv[i] as usize] = b[i] * self.row_scale[i];
        }
        // forward through the sparse columns
        for k in 0..k_dense {
            let yk = y[k];
            if yk == zero {
                continue;
            }
            let (s, e) = (self.l_colptr[k] + 1, self.l_colptr[k + 1]);
            let rows = &self.l_rowidx[s..e];
            let vals = &self.l_values[s..e];
            for (&r, &v) in rows.iter().zip(vals) {
                unsafe {
                    let yr = y.get_unchecked_mut(r as usize);
                    *yr -= v * yk;
                }
            }
        }
        // dense block: swaps, unit-lower forward, upper backward
        if let Some(tail) = &self.tail {
            let m = tail.m;
            let yt = &mut y[tail.start..];
            for j in 0..m {
                let p = tail.ipiv[j] as usize;
                if p != j {
                    yt.swap(j, p);
                }
            }
            for j in 0..m {
                let yj = yt[j];
                if yj == zero {
                    continue;
                }
                let col = &tail.lu[j * m..(j + 1) * m];
                for i in j + 1..m {
                    yt[i] -= col[i] * yj;
                }
            }
            for j in (0..m).rev() {
                let col = &tail.lu[j * m..(j + 1) * m];
                let yj = yt[j] / col[j];
                yt[j] = yj;
                if yj == zero {
                    continue;
                }
                for i in 0..j {
                    yt[i] -= col[i] * yj;
                }
            }
            // couple the solved tail back into the sparse part
            for t in 0..m {
                let zt = y[tail.start + t];
                if zt == zero {
                    continue;
                }
                let (s, e) = (
                    self.u_colptr[tail.start + t],
                    self.u_colptr[tail.start + t + 1],
                );
                for p in s..e {
                    let r = self.u_rowidx[p] as usize;
                    y[r] -= self.u_values[p] * zt;
                }
            }
        }
        // backward through the sparse U columns (diagonal stored last)
        for k in (0..k_dense).rev() {
            let dp = self.u_colptr[k + 1] - 1;
            debug_assert_eq!(self.u_rowidx[dp] as usize, k);
            let zk = y[k] / self.u_values[dp];
            y[k] = zk;
            if zk == zero {
                continue;
            }
            for p in self.u_colptr[k]..dp {
                let r = self.u_rowidx[p] as usize;
                y[r] -= self.u_values[p] * zk;
            }
        }
        // undo column permutation: x[q[k]] = z[k]
        let mut x = vec![zero; n];
        for k in 0..n {
            x[self.q[k] as usize] = y[k];
        }
        x
    }

    /// Number of stored factor entries (diagnostics).
    pub fn factor_nnz(&self) -> usize {
        self.l_values.len()
            + self.u_values.len()
            + self.tail.as_ref().map(|t| t.m * t.m).unwrap_or(0)
    }
}

/// In-place dense LU with partial pivoting on a column-major `m x m` block.
/// Returns the LAPACK-style swap sequence.
fn dense_lu_in_place<T: Scalar>(s: &mut [Complex<T>], m: usize) -> Result<Vec<u32>> {
    let mut ipiv = vec![0u32; m];
    for j in 0..m {
        // pivot: largest magnitude at or below the diagonal
        let col_j = j * m;
        let mut best = j;
        let mut best_mag = s[col_j + j].norm_sqr();
        for i in j + 1..m {
            let mag = s[col_j + i].norm_sqr();
            if mag > best_mag {
                best_mag = mag;
                best = i;
            }
        }
        ipiv[j] = best as u32;
        if best != j {
            for c in 0..m {
                s.swap(c * m + j, c * m + best);
            }
        }
        let piv = s[col_j + j];
        if piv.norm_sqr() == T::zero() {
            return Err(Error::Factorization(format!(
                "dense tail singular at local column {j}"
            )));
        }
        let inv = Complex::new(T::one(), T::zero()) / piv;
        for i in j + 1..m {
            s[col_j + i] *= inv;
        }
        // trailing update, one contiguous axpy per column
        let (head, rest) = s.split_at_mut((j + 1) * m);
        let lcol = &head[col_j + j + 1..col_j + m];
        for (tc, t_chunk) in rest.chunks_exact_mut(m).enumerate() {
            let _ = tc;
            let u_jt = t_chunk[j];
            if u_jt.norm_sqr() == T::zero() {
                continue;
            }
            let tcol = &mut t_chunk[j + 1..m];
            for (ti, &li) in tcol.iter_mut().zip(lcol) {
                *ti -= li * u_jt;
            }
        }
    }
    Ok(ipiv)
}

/// LU-backed direct solver that keeps the original matrix for residual
/// computation and applies one step of iterative refinement per solve.
pub struct LuSolver<T> {
    a: CscMatrix<T>,
    lu: SparseLu<T>,
}

impl<T: Scalar> LuSolver<T> {
    pub fn new(a: CscMatrix<T>, col_order: Option<&[u32]>) -> Result<Self> {
        let lu = SparseLu::factor(&a, col_order, T::of(0.1))?;
        Ok(Self { a, lu })
    }

    /// Solve `A x = b` with one iterative-refinement pass.
    pub fn solve_refined(&self, b: &[Complex<T>]) -> Vec<Complex<T>> {
        let mut x = self.lu.solve(b);
        let mut r = vec![Complex::new(T::zero(), T::zero()); b.len()];
        self.a.matvec(&x, &mut r);
        for (ri, bi) in r.iter_mut().zip(b) {
            *ri = *bi - *ri;
        }
        let dx = self.lu.solve(&r);
        for (xi, di) in x.iter_mut().zip(&dx) {
            *xi += *di;
        }
        x
    }

    pub fn factor_nnz(&self) -> usize {
        self.lu.factor_nnz()
    }

    pub fn matrix(&self) -> &CscMatrix<T> {
        &self.a
    }
}
