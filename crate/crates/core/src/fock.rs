//! Truncated two-mode Fock-space operator algebra.
//!
//! Basis convention: site 1 is the left tensor factor, so the product state
//! `|m, n>` (m photons on site 1, n on site 2) has index `m * d + n` with
//! `d = n_cut + 1`. All operators are sparse; density matrices are dense.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::params::Site;
use crate::scalar::{re, Scalar};
use crate::sparse::CsrMatrix;

/// Largest supported per-site photon cutoff.
pub const MAX_CUTOFF: usize = 30;

/// Sparse operator on the truncated two-mode Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumOperator<T> {
    n_cut: usize,
    mat: CsrMatrix<T>,
}

fn check_cutoff(n_cut: usize) -> Result<()> {
    if !(1..=MAX_CUTOFF).contains(&n_cut) {
        return Err(Error::CutoffOutOfRange(n_cut));
    }
    Ok(())
}

/// Single-mode annihilation operator on `d = n_cut + 1` levels.
fn ladder_single<T: Scalar>(n_cut: usize) -> CsrMatrix<T> {
    let d = n_cut + 1;
    let trips = (1..d)
        .map(|n| ((n - 1) as u32, n as u32, re(T::of(n as f64).sqrt())))
        .collect();
    CsrMatrix::from_triplets(d, d, trips)
}

/// Single-mode diagonal operator with entries `f(n)`.
fn diag_single<T: Scalar>(n_cut: usize, f: impl Fn(usize) -> T) -> CsrMatrix<T> {
    let d = n_cut + 1;
    let diag: Vec<Complex<T>> = (0..d).map(|n| re(f(n))).collect();
    CsrMatrix::from_diagonal(&diag)
}

impl<T: Scalar> QuantumOperator<T> {
    pub fn from_matrix(n_cut: usize, mat: CsrMatrix<T>) -> Result<Self> {
        check_cutoff(n_cut)?;
        let dim = (n_cut + 1) * (n_cut + 1);
        if mat.nrows() != dim || mat.ncols() != dim {
            return Err(Error::DimensionMismatch(mat.nrows(), dim));
        }
        Ok(Self { n_cut, mat })
    }

    /// Annihilation operator of one site on the two-mode space.
    pub fn destroy(n_cut: usize, site: Site) -> Result<Self> {
        check_cutoff(n_cut)?;
        let a = ladder_single::<T>(n_cut);
        let id = CsrMatrix::identity(n_cut + 1);
        let mat = match site {
            Site::One => a.kron(&id),
            Site::Two => id.kron(&a),
        };
        Ok(Self { n_cut, mat })
    }

    /// Photon-number operator of one site.
    pub fn number(n_cut: usize, site: Site) -> Result<Self> {
        check_cutoff(n_cut)?;
        let n = diag_single::<T>(n_cut, |k| T::of(k as f64));
        let id = CsrMatrix::identity(n_cut + 1);
        let mat = match site {
            Site::One => n.kron(&id),
            Site::Two => id.kron(&n),
        };
        Ok(Self { n_cut, mat })
    }

    /// On-site Kerr term `a^dag a^dag a a` of one site (diagonal `n(n-1)`).
    pub fn kerr_term(n_cut: usize, site: Site) -> Result<Self> {
        check_cutoff(n_cut)?;
        let k = diag_single::<T>(n_cut, |n| T::of((n * n.saturating_sub(1)) as f64));
        let id = CsrMatrix::identity(n_cut + 1);
        let mat = match site {
            Site::One => k.kron(&id),
            Site::Two => id.kron(&k),
        };
        Ok(Self { n_cut, mat })
    }

    /// Cross-site product `n_1 n_2`.
    pub fn number_product(n_cut: usize) -> Result<Self> {
        check_cutoff(n_cut)?;
        let n = diag_single::<T>(n_cut, |k| T::of(k as f64));
        Ok(Self {
            n_cut,
            mat: n.kron(&n),
        })
    }

    pub fn identity(n_cut: usize) -> Result<Self> {
        check_cutoff(n_cut)?;
        let dim = (n_cut + 1) * (n_cut + 1);
        Ok(Self {
            n_cut,
            mat: CsrMatrix::identity(dim),
        })
    }

    pub fn n_cut(&self) -> usize {
        self.n_cut
    }

    /// Total Hilbert dimension `(n_cut + 1)^2`.
    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CsrMatrix<T> {
        &self.mat
    }

    pub fn adjoint(&self) -> Self {
        Self {
            n_cut: self.n_cut,
            mat: self.mat.adjoint(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n_cut, other.n_cut);
        Self {
            n_cut: self.n_cut,
            mat: self.mat.matmul(&other.mat),
        }
    }

    pub fn add_scaled(&self, alpha: Complex<T>, other: &Self, beta: Complex<T>) -> Self {
        assert_eq!(self.n_cut, other.n_cut);
        Self {
            n_cut: self.n_cut,
            mat: self.mat.add_scaled(alpha, &other.mat, beta),
        }
    }

    pub fn scale(&self, alpha: Complex<T>) -> Self {
        Self {
            n_cut: self.n_cut,
            mat: self.mat.scale(alpha),
        }
    }

    /// Largest entry deviation from Hermiticity, `max |A - A^dag|`.
    pub fn hermiticity_defect(&self) -> T {
        let minus_one = re(-T::one());
        self.mat
            .add_scaled(re(T::one()), &self.mat.adjoint(), minus_one)
            .max_norm()
    }

    /// Apply to a pure state vector.
    pub fn apply(&self, psi: &[Complex<T>]) -> Vec<Complex<T>> {
        let mut out = vec![Complex::new(T::zero(), T::zero()); self.dim()];
        self.mat.matvec(psi, &mut out);
        out
    }
}

/// Dense density matrix on the two-mode Fock space, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T> {
    n: usize,
    data: Vec<Complex<T>>,
}

impl<T: Scalar> DensityMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex::new(T::zero(), T::zero()); n * n],
        }
    }

    /// Vacuum projector `|0><0|`.
    pub fn vacuum(n: usize) -> Self {
        let mut rho = Self::zeros(n);
        rho.data[0] = re(T::one());
        rho
    }

    /// Pure-state projector `|psi><psi| / <psi|psi>`.
    pub fn from_pure(psi: &[Complex<T>]) -> Self {
        let n = psi.len();
        let norm2: T = psi.iter().map(|a| a.norm_sqr()).sum();
        let mut rho = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                rho.data[i * n + j] = psi[i] * psi[j].conj() / norm2;
            }
        }
        rho
    }

    /// Basis-state projector `|m, n><m, n|` for per-site dimension `d`.
    pub fn fock_projector(d: usize, m: usize, k: usize) -> Self {
        let n = d * d;
        let mut rho = Self::zeros(n);
        let idx = m * d + k;
        rho.data[idx * n + idx] = re(T::one());
        rho
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex<T>) {
        self.data[i * self.n + j] = v;
    }

    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.n).map(|i| self.data[i * self.n + i]).sum()
    }

    /// Column-major vectorization (matches the Liouvillian convention).
    pub fn to_vec_col_major(&self) -> Vec<Complex<T>> {
        let n = self.n;
        let mut v = vec![Complex::new(T::zero(), T::zero()); n * n];
        for j in 0..n {
            for i in 0..n {
                v[i + n * j] = self.data[i * n + j];
            }
        }
        v
    }

    pub fn from_vec_col_major(n: usize, v: &[Complex<T>]) -> Self {
        assert_eq!(v.len(), n * n);
        let mut rho = Self::zeros(n);
        for j in 0..n {
            for i in 0..n {
                rho.data[i * n + j] = v[i + n * j];
            }
        }
        rho
    }

    /// Replace `rho` with `(rho + rho^dag) / 2` and normalize the trace to 1.
    pub fn hermitize_and_normalize(&mut self) -> Result<()> {
        let n = self.n;
        let half = T::of(0.5);
        for i in 0..n {
            for j in i..n {
                let a = self.data[i * n + j];
                let b = self.data[j * n + i].conj();
                let avg = (a + b) * half;
                self.data[i * n + j] = avg;
                self.data[j * n + i] = avg.conj();
            }
        }
        let tr = self.trace();
        if tr.norm() < T::of(1e-300) {
            return Err(Error::DegenerateSteadyState);
        }
        for v in &mut self.data {
            *v /= tr;
        }
        Ok(())
    }

    pub fn hermiticity_defect(&self) -> T {
        let n = self.n;
        let mut worst = T::zero();
        for i in 0..n {
            for j in 0..n {
                let d = (self.data[i * n + j] - self.data[j * n + i].conj()).norm();
                if d > worst {
                    worst = d;
                }
            }
        }
        worst
    }

    /// True when `rho + shift * I` admits a Cholesky factorization, i.e. the
    /// smallest eigenvalue is strictly greater than `-shift`.
    pub fn min_eigenvalue_above(&self, shift: T) -> bool {
        let n = self.n;
        let zero = Complex::new(T::zero(), T::zero());
        let mut a = self.data.clone();
        for i in 0..n {
            a[i * n + i] += re(shift);
        }
        // in-place complex Cholesky, lower triangular
        for j in 0..n {
            let mut djj = a[j * n + j].re;
            for k in 0..j {
                djj -= a[j * n + k].norm_sqr();
            }
            if !(djj > T::zero()) {
                return false;
            }
            let ljj = djj.sqrt();
            a[j * n + j] = re(ljj);
            for i in j + 1..n {
                let mut s = a[i * n + j];
                for k in 0..j {
                    s -= a[i * n + k] * a[j * n + k].conj();
                }
                a[i * n + j] = s / ljj;
            }
            for i in 0..j {
                a[i * n + j] = zero;
            }
        }
        true
    }

    /// Validate the density-matrix invariants: unit trace, Hermiticity, and
    /// positive semidefiniteness within solver tolerance.
    pub fn validate(&self) -> Result<()> {
        let tr = self.trace();
        if (tr.re - T::one()).abs() > T::of(1e-10) || tr.im.abs() > T::of(1e-10) {
            return Err(Error::InvalidParams(format!(
                "density matrix trace {:?} deviates from 1",
                (tr.re.as_f64(), tr.im.as_f64())
            )));
        }
        let herm = self.hermiticity_defect();
        if herm > T::of(1e-10) {
            return Err(Error::InvalidParams(format!(
                "density matrix Hermiticity defect {:e}",
                herm.as_f64()
            )));
        }
        if !self.min_eigenvalue_above(T::of(1e-8)) {
            return Err(Error::InvalidParams(
                "density matrix has an eigenvalue below -1e-8".into(),
            ));
        }
        Ok(())
    }

    /// Sandwich `A rho A^dag` (used for the regression-theorem conditional state).
    pub fn sandwich(&self, a: &QuantumOperator<T>) -> Self {
        let n = self.n;
        assert_eq!(a.dim(), n);
        let zero = Complex::new(T::zero(), T::zero());
        // tmp = A * rho
        let mut tmp = vec![zero; n * n];
        let m = a.matrix();
        for i in 0..n {
            for (k, v) in m.row(i) {
                let k = k as usize;
                for j in 0..n {
                    tmp[i * n + j] += v * self.data[k * n + j];
                }
            }
        }
        // out = tmp * A^dag, i.e. out[i][j] = sum_k tmp[i][k] conj(A[j][k])
        let mut out = Self::zeros(n);
        for j in 0..n {
            for (k, v) in m.row(j) {
                let k = k as usize;
                let vc = v.conj();
                for i in 0..n {
                    out.data[i * n + j] += tmp[i * n + k] * vc;
                }
            }
        }
        out
    }
}

/// Expectation value `Tr(A rho)`.
pub fn expect<T: Scalar>(a: &QuantumOperator<T>, rho: &DensityMatrix<T>) -> Result<Complex<T>> {
    if a.dim() != rho.dim() {
        return Err(Error::DimensionMismatch(a.dim(), rho.dim()));
    }
    let n = rho.dim();
    let mut s = Complex::new(T::zero(), T::zero());
    for i in 0..n {
        for (j, v) in a.matrix().row(i) {
            s += v * rho.get(j as usize, i);
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    fn basis_state(n_cut: usize, m: usize, k: usize) -> Vec<Complex64> {
        let d = n_cut + 1;
        let mut v = vec![Complex64::default(); d * d];
        v[m * d + k] = Complex64::new(1.0, 0.0);
        v
    }

    #[test]
    fn operators_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<QuantumOperator<f64>>();
        assert_send_sync::<DensityMatrix<f64>>();
    }

    #[test]
    fn destroy_site1_lowers_left_slot() {
        let a1 = QuantumOperator::<f64>::destroy(1, Site::One).unwrap();
        let out = a1.apply(&basis_state(1, 1, 0));
        // |1,0> -> |0,0| with amplitude 1
        assert_relative_eq!(out[0].re, 1.0, epsilon = 1e-15);
        assert!(out.iter().skip(1).all(|v| v.norm() < 1e-15));
    }

    #[test]
    fn destroy_site2_carries_sqrt_n() {
        let a2 = QuantumOperator::<f64>::destroy(2, Site::Two).unwrap();
        let out = a2.apply(&basis_state(2, 0, 2));
        // |0,2> -> sqrt(2) |0,1>
        assert_relative_eq!(out[1].re, 2f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn number_operator_counts_photons() {
        let n_cut = 3;
        let a1 = QuantumOperator::<f64>::destroy(n_cut, Site::One).unwrap();
        let n1 = a1.adjoint().matmul(&a1);
        let psi = basis_state(n_cut, 1, 1);
        let out = n1.apply(&psi);
        let overlap: Complex64 = psi.iter().zip(&out).map(|(a, b)| a.conj() * b).sum();
        assert_relative_eq!(overlap.re, 1.0, epsilon = 1e-14);
        // and against the direct diagonal construction ((sqrt n)^2 rounds)
        let direct = QuantumOperator::<f64>::number(n_cut, Site::One).unwrap();
        let diff = n1
            .add_scaled(Complex64::new(1.0, 0.0), &direct, Complex64::new(-1.0, 0.0))
            .matrix()
            .max_norm();
        assert!(diff < 1e-14);
    }

    #[test]
    fn cutoff_range_is_enforced() {
        assert!(QuantumOperator::<f64>::destroy(0, Site::One).is_err());
        assert!(QuantumOperator::<f64>::destroy(31, Site::One).is_err());
        assert!(QuantumOperator::<f64>::destroy(30, Site::One).is_ok());
    }

    #[test]
    fn commutator_is_identity_below_cutoff() {
        let n_cut = 5;
        let d = n_cut + 1;
        for site in [Site::One, Site::Two] {
            let a = QuantumOperator::<f64>::destroy(n_cut, site).unwrap();
            let ad = a.adjoint();
            let one = Complex64::new(1.0, 0.0);
            let comm = a.matmul(&ad).add_scaled(one, &ad.matmul(&a), -one);
            // [a, a^dag] = 1 on states with fewer than n_cut photons in `site`
            for m in 0..d {
                for k in 0..d {
                    let occupied = match site {
                        Site::One => m,
                        Site::Two => k,
                    };
                    let idx = m * d + k;
                    let got = comm.matrix().get(idx, idx);
                    if occupied < n_cut {
                        assert_relative_eq!(got.re, 1.0, epsilon = 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn adjoint_distributes_over_kron() {
        // (A (x) B)^dag = A^dag (x) B^dag, exactly
        let a = ladder_single::<f64>(3);
        let b = diag_single::<f64>(3, |n| n as f64 + 0.5);
        let lhs = a.kron(&b).adjoint();
        let rhs = a.adjoint().kron(&b.adjoint());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn adjoint_is_involutive() {
        let a = QuantumOperator::<f64>::destroy(4, Site::Two).unwrap();
        assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn expect_identity_is_trace() {
        let n_cut = 2;
        let id = QuantumOperator::<f64>::identity(n_cut).unwrap();
        let rho = DensityMatrix::<f64>::fock_projector(n_cut + 1, 1, 0);
        let v = expect(&id, &rho).unwrap();
        assert_relative_eq!(v.re, 1.0, epsilon = 1e-15);
        assert_relative_eq!(v.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn expect_number_on_vacuum_and_fock() {
        let n_cut = 2;
        let d = n_cut + 1;
        let n1 = QuantumOperator::<f64>::number(n_cut, Site::One).unwrap();
        let n2 = QuantumOperator::<f64>::number(n_cut, Site::Two).unwrap();
        let vac = DensityMatrix::<f64>::vacuum(d * d);
        assert_relative_eq!(expect(&n2, &vac).unwrap().re, 0.0, epsilon = 1e-15);
        let rho11 = DensityMatrix::<f64>::fock_projector(d, 1, 1);
        let total = expect(&n1, &rho11).unwrap() + expect(&n2, &rho11).unwrap();
        assert_relative_eq!(total.re, 2.0, epsilon = 1e-14);
    }

    #[test]
    fn expect_rejects_dimension_mismatch() {
        let id = QuantumOperator::<f64>::identity(2).unwrap();
        let rho = DensityMatrix::<f64>::vacuum(4);
        assert!(expect(&id, &rho).is_err());
    }

    #[test]
    fn density_matrix_roundtrips_col_major() {
        let n = 3;
        let mut rho = DensityMatrix::<f64>::zeros(n);
        for i in 0..n {
            for j in 0..n {
                rho.set(i, j, Complex64::new(i as f64, j as f64));
            }
        }
        let v = rho.to_vec_col_major();
        assert_eq!(v[1], Complex64::new(1.0, 0.0)); // rho_{10} at index 1 + 3*0
        let back = DensityMatrix::from_vec_col_major(n, &v);
        assert_eq!(back, rho);
    }

    #[test]
    fn validate_accepts_proper_state_rejects_bogus() {
        let rho = DensityMatrix::<f64>::vacuum(4);
        rho.validate().unwrap();

        let mut bad = DensityMatrix::<f64>::vacuum(4);
        bad.set(0, 0, Complex64::new(2.0, 0.0));
        assert!(bad.validate().is_err());

        // negative eigenvalue
        let mut neg = DensityMatrix::<f64>::zeros(2);
        neg.set(0, 0, Complex64::new(1.5, 0.0));
        neg.set(1, 1, Complex64::new(-0.5, 0.0));
        assert!(neg.validate().is_err());
    }

    #[test]
    fn sandwich_matches_manual_product() {
        let n_cut = 2;
        let d = n_cut + 1;
        let a2 = QuantumOperator::<f64>::destroy(n_cut, Site::Two).unwrap();
        // rho = |0,2><0,2| -> a2 rho a2^dag = 2 |0,1><0,1|
        let rho = DensityMatrix::<f64>::fock_projector(d, 0, 2);
        let out = rho.sandwich(&a2);
        assert_relative_eq!(out.get(1, 1).re, 2.0, epsilon = 1e-14);
        assert_relative_eq!(out.trace().re, 2.0, epsilon = 1e-14);
    }
}
