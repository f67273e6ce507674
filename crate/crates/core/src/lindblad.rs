//! Full open-system numerics on the truncated two-mode Fock space:
//! Hamiltonian and Liouvillian assembly, direct steady-state solves,
//! regression-theorem delayed correlators, and pulsed time evolution.
//!
//! The density matrix is vectorized column-major, so `vec(A rho B) =
//! (B^T kron A) vec(rho)` and the Liouvillian reads
//! `L = -i (I kron H - H^T kron I) + sum_k gamma_k [ conj(a_k) kron a_k -
//! (I kron a_k^dag a_k + (a_k^dag a_k)^T kron I) / 2 ]`.

use num_complex::Complex;

use crate::analytic::{CorrelatorSeries, Correlators, Method};
use crate::error::{Error, Result};
use crate::fock::{expect, DensityMatrix, QuantumOperator};
use crate::ode::{integrate, OdeOptions};
use crate::params::{DimerParams, DriveSpec, Site};
use crate::scalar::{re, Scalar};
use crate::sparse::ilu::{bicgstab, Ilu0};
use crate::sparse::lu::{lattice_nd_order, LuSolver};
use crate::sparse::{CscMatrix, CsrMatrix};

/// Sparse superoperator acting on the column-major vectorized density matrix.
#[derive(Debug, Clone)]
pub struct Liouvillian<T> {
    n_cut: usize,
    hilbert_dim: usize,
    mat: CsrMatrix<T>,
}

impl<T: Scalar> Liouvillian<T> {
    pub fn n_cut(&self) -> usize {
        self.n_cut
    }

    pub fn hilbert_dim(&self) -> usize {
        self.hilbert_dim
    }

    /// Superoperator dimension (`hilbert_dim` squared).
    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CsrMatrix<T> {
        &self.mat
    }

    /// `out = L * v` on vectorized density matrices.
    pub fn apply(&self, v: &[Complex<T>], out: &mut [Complex<T>]) {
        self.mat.matvec(v, out);
    }

    /// Linear combination with another superoperator on the same space.
    pub fn add_scaled(&self, other: &Self, beta: Complex<T>) -> Self {
        Self {
            n_cut: self.n_cut,
            hilbert_dim: self.hilbert_dim,
            mat: self.mat.add_scaled(re(T::one()), &other.mat, beta),
        }
    }
}

/// Dimer Hamiltonian on the truncated space:
/// `H = sum_j [Delta_j n_j + U_j a_j^dag2 a_j^2] + J (a1^dag a2 + a2^dag a1)
///  + F1 (a1^dag + a1) + (F2 a2^dag + F2* a2) + Ux n1 n2`,
/// with `F2 = ratio * F1 * exp(i phi) * envelope_value`.
pub fn build_hamiltonian<T: Scalar>(
    params: &DimerParams<T>,
    drive: &DriveSpec<T>,
    n_cut: usize,
    envelope_value: T,
) -> Result<QuantumOperator<T>> {
    let (d1, d2) = params.site_detunings();
    let (u1, u2) = params.site_kerrs();
    let one = re(T::one());

    let n1 = QuantumOperator::<T>::number(n_cut, Site::One)?;
    let n2 = QuantumOperator::<T>::number(n_cut, Site::Two)?;
    let k1 = QuantumOperator::<T>::kerr_term(n_cut, Site::One)?;
    let k2 = QuantumOperator::<T>::kerr_term(n_cut, Site::Two)?;
    let a1 = QuantumOperator::<T>::destroy(n_cut, Site::One)?;
    let a2 = QuantumOperator::<T>::destroy(n_cut, Site::Two)?;
    let hop = a1.adjoint().matmul(&a2);

    let f2 = drive.f2() * envelope_value;

    let mut h = n1.scale(re(d1)).add_scaled(one, &n2.scale(re(d2)), one);
    h = h.add_scaled(one, &k1, re(u1));
    h = h.add_scaled(one, &k2, re(u2));
    h = h.add_scaled(one, &hop, re(params.hopping));
    h = h.add_scaled(one, &hop.adjoint(), re(params.hopping));
    h = h.add_scaled(one, &a1.adjoint(), re(drive.f1));
    h = h.add_scaled(one, &a1, re(drive.f1));
    h = h.add_scaled(one, &a2.adjoint(), f2);
    h = h.add_scaled(one, &a2, f2.conj());
    if params.cross_kerr != T::zero() {
        let nn = QuantumOperator::<T>::number_product(n_cut)?;
        h = h.add_scaled(one, &nn, re(params.cross_kerr));
    }
    Ok(h)
}

/// Coherent part `-i (I kron H - H^T kron I)` of the generator.
pub fn commutator_superop<T: Scalar>(h: &QuantumOperator<T>) -> Liouvillian<T> {
    let n = h.dim();
    let id = CsrMatrix::<T>::identity(n);
    let minus_i = Complex::new(T::zero(), -T::one());
    let lhs = id.kron(h.matrix());
    let rhs = h.matrix().transpose().kron(&id);
    Liouvillian {
        n_cut: h.n_cut(),
        hilbert_dim: n,
        mat: lhs.add_scaled(minus_i, &rhs, -minus_i),
    }
}

/// Full Lindblad generator with photon loss `gamma_j` on each site.
pub fn build_liouvillian<T: Scalar>(
    h: &QuantumOperator<T>,
    gamma1: T,
    gamma2: T,
) -> Result<Liouvillian<T>> {
    if !(gamma1 > T::zero() && gamma2 > T::zero()) {
        return Err(Error::InvalidParams("loss rates must be positive".into()));
    }
    let n_cut = h.n_cut();
    let n = h.dim();
    let id = CsrMatrix::<T>::identity(n);
    let one = re(T::one());
    let mut l = commutator_superop(h).mat;

    for (site, gamma) in [(Site::One, gamma1), (Site::Two, gamma2)] {
        let a = QuantumOperator::<T>::destroy(n_cut, site)?;
        let jump = a.matrix().conj().kron(a.matrix());
        let num = a.adjoint().matmul(&a);
        let anti = id
            .kron(num.matrix())
            .add_scaled(one, &num.matrix().transpose().kron(&id), one);
        let minus_half_gamma = re(-gamma / T::of(2.0));
        l = l.add_scaled(one, &jump, re(gamma));
        l = l.add_scaled(one, &anti, minus_half_gamma);
    }
    Ok(Liouvillian {
        n_cut,
        hilbert_dim: n,
        mat: l,
    })
}

/// Convenience: Liouvillian straight from physical parameters (CW drive,
/// unit envelope).
pub fn build_liouvillian_cw<T: Scalar>(
    params: &DimerParams<T>,
    drive: &DriveSpec<T>,
    n_cut: usize,
) -> Result<Liouvillian<T>> {
    let h = build_hamiltonian(params, drive, n_cut, T::one())?;
    let (g1, g2) = params.site_gammas();
    build_liouvillian(&h, g1, g2)
}

/// Fill-reducing column order for the Liouvillian pattern: the superoperator
/// index decomposes into four base-`d` Fock digits and every coupling moves
/// each digit by at most one, so recursive coordinate bisection applies.
fn liouvillian_nd_order(n_cut: usize) -> Vec<u32> {
    let d = n_cut + 1;
    lattice_nd_order(&[d, d, d, d])
}

/// Steady state via direct sparse LU: one row of `L vec(rho) = 0` is replaced
/// by the trace condition, the system solved with one refinement pass, and
/// the result Hermitized and normalized. The residual `max |L vec(rho)|` must
/// come out below `1e-10` (relative to the largest Liouvillian entry) or an
/// error is returned.
pub fn steady_state<T: Scalar>(l: &Liouvillian<T>) -> Result<DensityMatrix<T>> {
    steady_state_with_trace_row(l, 0)
}

/// Dimension above which the iterative Krylov path is attempted before the
/// direct factorization (the direct path remains the fallback).
const ITERATIVE_FROM_DIM: usize = 20_000;

/// Same as [`steady_state`] but with an explicit choice of which equation to
/// replace by the trace row (any row works for a generic Liouvillian; exposed
/// for the uniqueness cross-check).
pub fn steady_state_with_trace_row<T: Scalar>(
    l: &Liouvillian<T>,
    trace_row: usize,
) -> Result<DensityMatrix<T>> {
    steady_state_impl(l, trace_row, l.dim() >= ITERATIVE_FROM_DIM)
}

fn steady_state_impl<T: Scalar>(
    l: &Liouvillian<T>,
    trace_row: usize,
    try_iterative: bool,
) -> Result<DensityMatrix<T>> {
    let n = l.hilbert_dim;
    let dim = l.dim();
    debug_assert!(trace_row < dim);
    let one = re(T::one());
    let zero = Complex::new(T::zero(), T::zero());

    // assemble the trace-replaced system
    let mut trips: Vec<(u32, u32, Complex<T>)> = Vec::with_capacity(l.mat.nnz() + n);
    for r in 0..dim {
        if r == trace_row {
            continue;
        }
        for (c, v) in l.mat.row(r) {
            trips.push((r as u32, c, v));
        }
    }
    for i in 0..n {
        trips.push((trace_row as u32, (i * (n + 1)) as u32, one));
    }
    let m = CsrMatrix::from_triplets(dim, dim, trips);
    let mut b = vec![zero; dim];
    b[trace_row] = one;

    let finish = |x: Vec<Complex<T>>| -> Result<DensityMatrix<T>> {
        let mut rho = DensityMatrix::from_vec_col_major(n, &x);
        rho.hermitize_and_normalize()?;
        // residual of the original (unreplaced) equation
        let v = rho.to_vec_col_major();
        let mut lv = vec![zero; dim];
        l.apply(&v, &mut lv);
        let residual = lv.iter().map(|z| z.norm()).fold(T::zero(), T::max);
        let tol = T::of(1e-10) * l.mat.max_norm().max(T::one());
        if !(residual < tol) {
            return Err(Error::ResidualTooLarge {
                residual: residual.as_f64(),
                tol: tol.as_f64(),
            });
        }
        Ok(rho)
    };

    // fast path for big systems: ILU(0)-preconditioned BiCGSTAB, accepted
    // only if the final steady-state residual check passes
    if try_iterative {
        let iterative = || -> Result<DensityMatrix<T>> {
            let pre = Ilu0::factor(&m)?;
            let x = bicgstab(&m, &b, &pre, T::of(1e-13), 4000)?;
            finish(x)
        };
        match iterative() {
            Ok(rho) => return Ok(rho),
            Err(_) => { /* fall through to the direct factorization */ }
        }
    }

    let solver = LuSolver::new(CscMatrix::from_csr(&m), Some(&liouvillian_nd_order(l.n_cut)))
        .map_err(|_| Error::DegenerateSteadyState)?;
    let x = solver.solve_refined(&b);
    finish(x)
}

/// Equal-time correlators from a density matrix:
/// `g2_jj = <a_j^dag2 a_j^2> / <n_j>^2`, `g2_12 = <n_1 n_2> / (<n_1><n_2>)`,
/// with undefined markers when a denominator falls below `1e-14`.
pub fn correlators_equal_time<T: Scalar>(
    rho: &DensityMatrix<T>,
    n_cut: usize,
) -> Result<Correlators<T>> {
    let n1_op = QuantumOperator::<T>::number(n_cut, Site::One)?;
    let n2_op = QuantumOperator::<T>::number(n_cut, Site::Two)?;
    let k1 = QuantumOperator::<T>::kerr_term(n_cut, Site::One)?;
    let k2 = QuantumOperator::<T>::kerr_term(n_cut, Site::Two)?;
    let nn = QuantumOperator::<T>::number_product(n_cut)?;

    let n1 = expect(&n1_op, rho)?.re;
    let n2 = expect(&n2_op, rho)?.re;
    let q1 = expect(&k1, rho)?.re;
    let q2 = expect(&k2, rho)?.re;
    let q12 = expect(&nn, rho)?.re;

    let floor = T::of(1e-14);
    Ok(Correlators {
        g2_11: (n1 * n1 > floor).then(|| q1 / (n1 * n1)),
        g2_22: (n2 * n2 > floor).then(|| q2 / (n2 * n2)),
        g2_12: (n1 * n2 > floor).then(|| q12 / (n1 * n2)),
        n1,
        n2,
    })
}

/// Delayed cross-correlator `g2_jk(tau)` from the full master equation via
/// the quantum regression theorem: condition the steady state on a photon
/// detection at site `k`, propagate under `L`, and read out `<n_j>`.
pub fn g2_tau_numeric<T: Scalar>(
    params: &DimerParams<T>,
    drive: &DriveSpec<T>,
    site_pair: (Site, Site),
    tau_grid: &[T],
    n_cut: usize,
) -> Result<CorrelatorSeries<T>> {
    let (site_j, site_k) = site_pair;
    let l = build_liouvillian_cw(params, drive, n_cut)?;
    let rho_ss = steady_state(&l)?;
    let n = rho_ss.dim();

    let nj_op = QuantumOperator::<T>::number(n_cut, site_j)?;
    let nk_op = QuantumOperator::<T>::number(n_cut, site_k)?;
    let nj_ss = expect(&nj_op, &rho_ss)?.re;
    let nk_ss = expect(&nk_op, &rho_ss)?.re;
    if !(nj_ss > T::of(1e-14) && nk_ss > T::of(1e-14)) {
        return Err(Error::InvalidParams(
            "delayed correlator undefined: a site is unpopulated in steady state".into(),
        ));
    }

    let ak = QuantumOperator::<T>::destroy(n_cut, site_k)?;
    let conditioned = rho_ss.sandwich(&ak);
    let weight = conditioned.trace().re; // = <n_k>
    let mut v0 = conditioned.to_vec_col_major();
    let inv_w = re(T::one() / weight);
    for z in &mut v0 {
        *z *= inv_w;
    }

    let states = integrate(
        |_t, y, dy| l.apply(y, dy),
        T::zero(),
        *tau_grid.last().expect("nonempty tau grid"),
        &v0,
        tau_grid,
        &OdeOptions::default(),
    )?;

    let scale = weight / (nj_ss * nk_ss);
    let values: Vec<T> = states
        .iter()
        .map(|v| {
            let rho_t = DensityMatrix::from_vec_col_major(n, v);
            let njt = expect(&nj_op, &rho_t).expect("dimension checked").re;
            (njt * scale).max(T::zero())
        })
        .collect();

    Ok(CorrelatorSeries {
        tau: tau_grid.to_vec(),
        values,
        method: Method::Numeric,
        site_pair,
    })
}

/// Result of a pulsed-drive run: occupation trajectories, the site-2 envelope,
/// and the detection-conditioned `g2_22(tau)` referenced to the pulse peak.
#[derive(Debug, Clone)]
pub struct PulsedResult<T> {
    pub t: Vec<T>,
    pub n1: Vec<T>,
    pub n2: Vec<T>,
    pub envelope: Vec<T>,
    /// Equal-time `g2_22(0)` at the pulse peak (undefined marker if site 2 is
    /// unpopulated there).
    pub g2_22_peak: Option<T>,
    /// Mean site-2 occupation at the pulse peak.
    pub n2_peak: T,
    /// Mean site-1 occupation at the pulse peak.
    pub n1_peak: T,
    pub g2_tau: CorrelatorSeries<T>,
}

/// Integrate the master equation with a CW site-1 drive and a Gaussian
/// site-2 pulse `F2(t) = ratio F1 e^{i phi} exp(-t^2 / 2 sigma^2)`, starting
/// from the pre-pulse steady state at the left edge of `t_grid`. The
/// regression correlator is referenced to the pulse peak `t = 0`.
pub fn time_evolve_pulsed<T: Scalar>(
    params: &DimerParams<T>,
    drive: &DriveSpec<T>,
    t_grid: &[T],
    n_cut: usize,
) -> Result<PulsedResult<T>> {
    let sigma = drive
        .pulse_sigma
        .ok_or_else(|| Error::InvalidParams("pulsed evolution requires a pulse width".into()))?;
    let t0 = *t_grid
        .first()
        .ok_or_else(|| Error::InvalidParams("empty time grid".into()))?;
    let t_end = *t_grid.last().unwrap();
    let five_sigma = T::of(5.0) * sigma;
    if !(t0 <= -five_sigma && t_end >= five_sigma) {
        return Err(Error::InvalidParams(
            "time grid must span at least [-5 sigma, +5 sigma] around the pulse peak".into(),
        ));
    }

    let (g1, g2) = params.site_gammas();
    // static part: CW site-1 drive only (envelope 0)
    let h0 = build_hamiltonian(params, drive, n_cut, T::zero())?;
    let l0 = build_liouvillian(&h0, g1, g2)?;
    // pulsed part: pure commutator with the site-2 drive operator
    let h1 = build_hamiltonian(params, drive, n_cut, T::one())?;
    let hd = h1.add_scaled(re(T::one()), &h0, re(-T::one()));
    let ld = commutator_superop(&hd);

    let env = |t: T| drive.envelope(t);

    // pre-pulse steady state as the initial condition
    let l_init = l0.add_scaled(&ld, re(env(t0)));
    let rho0 = steady_state(&l_init)?;
    let v0 = rho0.to_vec_col_major();

    let n = rho0.dim();
    let n1_op = QuantumOperator::<T>::number(n_cut, Site::One)?;
    let n2_op = QuantumOperator::<T>::number(n_cut, Site::Two)?;

    // main trajectory, sampling the union of t_grid and the peak
    let mut outputs: Vec<T> = t_grid.to_vec();
    if !outputs.iter().any(|&t| t == T::zero()) {
        outputs.push(T::zero());
        outputs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    }
    let dim = l0.dim();
    let make_rhs = |buf: &mut Vec<Complex<T>>| {
        buf.resize(dim, Complex::new(T::zero(), T::zero()));
    };
    let mut buf = Vec::new();
    make_rhs(&mut buf);
    let states = integrate(
        |t, y, dy| {
            l0.apply(y, dy);
            ld.apply(y, &mut buf);
            let e = env(t);
            for (d, b) in dy.iter_mut().zip(&buf) {
                *d += *b * e;
            }
        },
        t0,
        t_end,
        &v0,
        &outputs,
        &OdeOptions::default(),
    )?;

    let mut t_out = Vec::with_capacity(t_grid.len());
    let mut n1_out = Vec::with_capacity(t_grid.len());
    let mut n2_out = Vec::with_capacity(t_grid.len());
    let mut env_out = Vec::with_capacity(t_grid.len());
    let mut rho_peak: Option<DensityMatrix<T>> = None;
    for (k, &tk) in outputs.iter().enumerate() {
        let rho_t = DensityMatrix::from_vec_col_major(n, &states[k]);
        if tk == T::zero() {
            rho_peak = Some(rho_t.clone());
        }
        if t_grid.contains(&tk) {
            t_out.push(tk);
            n1_out.push(expect(&n1_op, &rho_t)?.re);
            n2_out.push(expect(&n2_op, &rho_t)?.re);
            env_out.push(env(tk));
        }
    }
    let rho_peak = rho_peak.expect("peak time sampled");
    let corr_peak = correlators_equal_time(&rho_peak, n_cut)?;
    let n1_peak = corr_peak.n1;
    let n2_peak = corr_peak.n2;

    // regression correlator from the pulse peak, with the time-dependent
    // generator carried along in tau
    let tau_grid: Vec<T> = (0..400)
        .map(|i| T::of(i as f64) * T::of(10.0 / 399.0))
        .collect();
    let a2 = QuantumOperator::<T>::destroy(n_cut, Site::Two)?;
    let conditioned = rho_peak.sandwich(&a2);
    let weight = conditioned.trace().re;
    let g2_tau = if weight > T::of(1e-16) {
        let mut vc = conditioned.to_vec_col_major();
        let inv_w = re(T::one() / weight);
        for z in &mut vc {
            *z *= inv_w;
        }
        let tau_end = *tau_grid.last().unwrap();
        let mut buf2 = Vec::new();
        make_rhs(&mut buf2);
        let cond_states = integrate(
            |t, y: &[Complex<T>], dy: &mut [Complex<T>]| {
                l0.apply(y, dy);
                ld.apply(y, &mut buf2);
                let e = env(t);
                for (d, b) in dy.iter_mut().zip(&buf2) {
                    *d += *b * e;
                }
            },
            T::zero(),
            tau_end,
            &vc,
            &tau_grid,
            &OdeOptions::default(),
        )?;
        // unconditioned trajectory over the same window for normalization
        let mut buf3 = Vec::new();
        make_rhs(&mut buf3);
        let uncond_states = integrate(
            |t, y: &[Complex<T>], dy: &mut [Complex<T>]| {
                l0.apply(y, dy);
                ld.apply(y, &mut buf3);
                let e = env(t);
                for (d, b) in dy.iter_mut().zip(&buf3) {
                    *d += *b * e;
                }
            },
            T::zero(),
            tau_end,
            &rho_peak.to_vec_col_major(),
            &tau_grid,
            &OdeOptions::default(),
        )?;
        let values: Vec<T> = cond_states
            .iter()
            .zip(&uncond_states)
            .map(|(vc, vu)| {
                let rho_c = DensityMatrix::from_vec_col_major(n, vc);
                let rho_u = DensityMatrix::from_vec_col_major(n, vu);
                let njc = expect(&n2_op, &rho_c).expect("dims").re;
                let nju = expect(&n2_op, &rho_u).expect("dims").re;
                if nju > T::of(1e-18) && n2_peak > T::of(1e-18) {
                    (njc * weight / (n2_peak * nju)).max(T::zero())
                } else {
                    T::zero()
                }
            })
            .collect();
        CorrelatorSeries {
            tau: tau_grid,
            values,
            method: Method::Numeric,
            site_pair: (Site::Two, Site::Two),
        }
    } else {
        CorrelatorSeries {
            tau: tau_grid,
            values: Vec::new(),
            method: Method::Numeric,
            site_pair: (Site::Two, Site::Two),
        }
    };

    Ok(PulsedResult {
        t: t_out,
        n1: n1_out,
        n2: n2_out,
        envelope: env_out,
        g2_22_peak: corr_peak.g2_22,
        n2_peak,
        n1_peak,
        g2_tau,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{
        amplitude_steady_state, g2_from_amplitudes, locus_quadrature, qrt_g2_tau,
    };
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    fn locus_setup(j: f64, f1: f64) -> (DimerParams<f64>, DriveSpec<f64>) {
        let lp = locus_quadrature(j, 1.0).unwrap();
        (
            DimerParams::symmetric(lp.delta_opt, lp.u_opt, j, 1.0),
            DriveSpec::quadrature(f1),
        )
    }

    #[test]
    fn hamiltonian_matrix_elements() {
        // double Kerr shift of |2,0>, hopping element <1,0|H|0,1>
        let u = 0.3;
        let params = DimerParams::symmetric(0.0, u, 0.0, 1.0);
        let drive = DriveSpec::quadrature(0.0);
        let n_cut = 3;
        let d = n_cut + 1;
        let h = build_hamiltonian(&params, &drive, n_cut, 1.0).unwrap();
        let idx20 = 2 * d;
        assert_relative_eq!(h.matrix().get(idx20, idx20).re, 2.0 * u, epsilon = 1e-14);

        let params = DimerParams::symmetric(0.0, 0.0, 0.7, 1.0);
        let h = build_hamiltonian(&params, &drive, n_cut, 1.0).unwrap();
        let idx10 = d;
        let idx01 = 1;
        assert_relative_eq!(h.matrix().get(idx10, idx01).re, 0.7, epsilon = 1e-14);
    }

    #[test]
    fn hamiltonian_is_hermitian() {
        let params = DimerParams::symmetric(-0.23, 0.17, 0.61, 1.0)
            .with_cross_kerr(0.05)
            .with_detuning_mismatch(0.02)
            .with_gamma_mismatch(0.03)
            .with_kerr_mismatch(0.01);
        let drive = DriveSpec::bilateral(0.12, 1.1).with_ratio(0.8);
        for env in [1.0, 0.37] {
            let h = build_hamiltonian(&params, &drive, 5, env).unwrap();
            assert!(h.hermiticity_defect() < 1e-14);
        }
    }

    #[test]
    fn liouvillian_preserves_trace() {
        let (params, drive) = locus_setup(0.4, 0.05);
        let l = build_liouvillian_cw(&params, &drive, 3).unwrap();
        let n = l.hilbert_dim();
        // pseudo-random Hermitian rho
        let mut rho = DensityMatrix::<f64>::zeros(n);
        let mut s = 0.37f64;
        for i in 0..n {
            for j in i..n {
                s = (s * 997.0 + 0.123).fract();
                let re_part = s - 0.5;
                s = (s * 997.0 + 0.123).fract();
                let im_part = if i == j { 0.0 } else { s - 0.5 };
                rho.set(i, j, Complex64::new(re_part, im_part));
                rho.set(j, i, Complex64::new(re_part, -im_part));
            }
        }
        let v = rho.to_vec_col_major();
        let mut lv = vec![Complex64::default(); l.dim()];
        l.apply(&v, &mut lv);
        let trace: Complex64 = (0..n).map(|i| lv[i * (n + 1)]).sum();
        assert!(trace.norm() < 1e-12, "trace of L rho = {trace}");
    }

    #[test]
    fn pure_decay_rate_of_single_photon() {
        // H = 0, gamma = 1: d<n1>/dt = -<n1> on |1,0><1,0|
        let params = DimerParams::symmetric(0.0, 0.0, 0.0, 1.0);
        let drive = DriveSpec::quadrature(0.0);
        let n_cut = 2;
        let d = n_cut + 1;
        let h = build_hamiltonian(&params, &drive, n_cut, 0.0)
            .unwrap()
            .scale(Complex64::new(0.0, 0.0));
        let l = build_liouvillian(&h, 1.0, 1.0).unwrap();
        let rho = DensityMatrix::<f64>::fock_projector(d, 1, 0);
        let v = rho.to_vec_col_major();
        let mut lv = vec![Complex64::default(); l.dim()];
        l.apply(&v, &mut lv);
        let n1_op = QuantumOperator::<f64>::number(n_cut, Site::One).unwrap();
        let drho = DensityMatrix::from_vec_col_major(d * d, &lv);
        let dn1 = expect(&n1_op, &drho).unwrap();
        assert_relative_eq!(dn1.re, -1.0, epsilon = 1e-12);
    }

    #[test]
    fn vacuum_is_steady_without_drive() {
        let params = DimerParams::symmetric(0.1, 0.05, 0.4, 1.0);
        let drive = DriveSpec::quadrature(0.0);
        let l = build_liouvillian_cw(&params, &drive, 3).unwrap();
        let vac = DensityMatrix::<f64>::vacuum(l.hilbert_dim());
        let v = vac.to_vec_col_major();
        let mut lv = vec![Complex64::default(); l.dim()];
        l.apply(&v, &mut lv);
        let worst = lv.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(worst < 1e-15);

        // and the steady-state solver finds exactly the vacuum projector
        let rho = steady_state(&l).unwrap();
        assert_relative_eq!(rho.get(0, 0).re, 1.0, epsilon = 1e-12);
        let off = (1..l.hilbert_dim())
            .map(|i| rho.get(i, i).re.abs())
            .fold(0.0, f64::max);
        assert!(off < 1e-12);
    }

    #[test]
    fn direct_and_iterative_solvers_agree() {
        // the two independent linear-solve routes must produce the same state
        let (params, drive) = locus_setup(0.4, 0.05);
        let l = build_liouvillian_cw(&params, &drive, 5).unwrap();
        let direct = steady_state_impl(&l, 0, false).unwrap();
        let iterative = steady_state_impl(&l, 0, true).unwrap();
        let n = direct.dim();
        let mut diff = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                diff = diff.max((direct.get(i, j) - iterative.get(i, j)).norm());
            }
        }
        assert!(diff < 1e-11, "solver paths differ by {diff}");
    }

    #[test]
    fn steady_state_is_valid_and_unique() {
        let (params, drive) = locus_setup(0.4, 0.05);
        let l = build_liouvillian_cw(&params, &drive, 4).unwrap();
        let rho_a = steady_state(&l).unwrap();
        rho_a.validate().unwrap();
        // replacing a different row must give the same state
        let rho_b = steady_state_with_trace_row(&l, 7 * (l.hilbert_dim() + 1)).unwrap();
        let n = rho_a.dim();
        let mut diff = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                diff = diff.max((rho_a.get(i, j) - rho_b.get(i, j)).norm());
            }
        }
        assert!(diff < 1e-9, "solutions differ by {diff}");
    }

    #[test]
    fn linear_cavity_is_poissonian() {
        // J -> 0, U = 0: site 1 is a driven damped linear mode, g2_11 -> 1
        let params = DimerParams::symmetric(0.0f64, 0.0, 1e-6, 1.0);
        let drive = DriveSpec::quadrature(0.05).with_ratio(0.0);
        let l = build_liouvillian_cw(&params, &drive, 5).unwrap();
        let rho = steady_state(&l).unwrap();
        let c = correlators_equal_time(&rho, 5).unwrap();
        assert!((c.g2_11.unwrap() - 1.0).abs() < 1e-3, "g2_11 = {:?}", c.g2_11);
    }

    #[test]
    fn vacuum_correlators_are_undefined() {
        let rho = DensityMatrix::<f64>::vacuum(16);
        let c = correlators_equal_time(&rho, 3).unwrap();
        assert!(c.g2_11.is_none() && c.g2_22.is_none() && c.g2_12.is_none());
        assert_eq!(c.n1, 0.0);
    }

    #[test]
    fn master_equation_matches_amplitude_solver_at_locus() {
        let (params, drive) = locus_setup(0.4, 0.01);
        let l = build_liouvillian_cw(&params, &drive, 7).unwrap();
        let rho = steady_state(&l).unwrap();
        rho.validate().unwrap();
        let num = correlators_equal_time(&rho, 7).unwrap();
        let ana = g2_from_amplitudes(&amplitude_steady_state(&params, &drive).unwrap());
        assert!((num.g2_11.unwrap() - ana.g2_11.unwrap()).abs() < 0.01);
        assert!((num.g2_22.unwrap() - ana.g2_22.unwrap()).abs() < 0.01);
        assert!((num.g2_12.unwrap() - ana.g2_12.unwrap()).abs() < 0.01);
        // occupations agree to leading order
        assert_relative_eq!(num.n1, ana.n1, max_relative = 0.01);
        assert_relative_eq!(num.n2, ana.n2, max_relative = 0.01);
        // the blockade itself
        assert!(num.g2_22.unwrap() <= 0.01);
        assert!((num.g2_11.unwrap() - 0.98).abs() < 0.02);
    }

    #[test]
    fn cross_kerr_treatments_agree_at_weak_drive() {
        // the amplitude solver shifts only the |1,1> state; the master
        // equation carries the full cross-product operator: at weak drive
        // the two must agree to the size of the jump corrections
        let lp = locus_quadrature(0.4, 1.0).unwrap();
        for ux in [-0.01f64, 0.02] {
            let params =
                DimerParams::symmetric(lp.delta_opt, lp.u_opt, 0.4, 1.0).with_cross_kerr(ux);
            let drive = DriveSpec::quadrature(0.01);
            let ana = g2_from_amplitudes(&amplitude_steady_state(&params, &drive).unwrap());
            let l = build_liouvillian_cw(&params, &drive, 7).unwrap();
            let num = correlators_equal_time(&steady_state(&l).unwrap(), 7).unwrap();
            assert!(
                (ana.g2_22.unwrap() - num.g2_22.unwrap()).abs() < 2e-3,
                "Ux={ux}: {} vs {}",
                ana.g2_22.unwrap(),
                num.g2_22.unwrap()
            );
            assert!((ana.g2_11.unwrap() - num.g2_11.unwrap()).abs() < 1e-3);
            // a nonzero cross-Kerr at the plain-dimer optimum spoils the
            // exact cancellation
            assert!(ana.g2_22.unwrap() > 1e-4);
        }
    }

    #[test]
    fn cutoff_converged_at_strong_drive() {
        let lp = locus_quadrature(0.4, 1.0).unwrap();
        let params = DimerParams::symmetric(lp.delta_opt, lp.u_opt, 0.4, 1.0);
        let drive = DriveSpec::quadrature(0.25);
        let g2_at = |n_cut: usize| -> f64 {
            let l = build_liouvillian_cw(&params, &drive, n_cut).unwrap();
            correlators_equal_time(&steady_state(&l).unwrap(), n_cut)
                .unwrap()
                .g2_22
                .unwrap()
        };
        let diff = (g2_at(7) - g2_at(15)).abs();
        assert!(diff < 1e-3, "cutoff difference {diff:.3e}");
    }

    #[test]
    fn regression_tau_zero_equals_equal_time() {
        let (params, drive) = locus_setup(0.4, 0.05);
        let n_cut = 5;
        let series =
            g2_tau_numeric(&params, &drive, (Site::Two, Site::Two), &[0.0, 1.0], n_cut).unwrap();
        let l = build_liouvillian_cw(&params, &drive, n_cut).unwrap();
        let rho = steady_state(&l).unwrap();
        let c = correlators_equal_time(&rho, n_cut).unwrap();
        assert!(
            (series.values[0] - c.g2_22.unwrap()).abs() < 1e-8,
            "tau = 0 regression {} vs equal-time {}",
            series.values[0],
            c.g2_22.unwrap()
        );
    }

    #[test]
    fn regression_matches_analytic_curve() {
        let (params, drive) = locus_setup(0.4, 0.01);
        let tau: Vec<f64> = (0..=100).map(|i| i as f64 * 0.1).collect();
        let numeric = g2_tau_numeric(&params, &drive, (Site::Two, Site::Two), &tau, 7).unwrap();
        let analytic = qrt_g2_tau(&params, &drive, Site::Two, &tau).unwrap();
        let worst = numeric
            .values
            .iter()
            .zip(&analytic.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(worst < 0.01, "max |numeric - analytic| = {worst}");
    }

    #[test]
    fn site1_regression_stays_near_unity() {
        let (params, drive) = locus_setup(0.4, 0.01);
        let tau: Vec<f64> = (0..=50).map(|i| i as f64 * 0.2).collect();
        let series = g2_tau_numeric(&params, &drive, (Site::One, Site::One), &tau, 7).unwrap();
        assert!(series.values.iter().all(|&v| (0.9..=1.1).contains(&v)));
    }

    #[test]
    fn regression_of_unpopulated_site_is_an_error() {
        // linear dark state: site 2 holds no photons, so conditioning on a
        // site-2 detection is undefined and must be reported, not NaN
        let j = 0.8f64;
        let phi = crate::analytic::dark_state_phase(j, 1.0).unwrap();
        let delta = (j * j - 0.25f64).sqrt();
        let params = DimerParams::symmetric(delta, 0.0, j, 1.0);
        let drive = DriveSpec::bilateral(0.05, phi);
        let r = g2_tau_numeric(&params, &drive, (Site::Two, Site::Two), &[0.0, 1.0], 5);
        assert!(r.is_err());
    }

    #[test]
    fn pulsed_run_without_drive_stays_empty() {
        let params = DimerParams::symmetric(0.0, 0.05, 0.4, 1.0);
        let drive = DriveSpec::quadrature(0.0).with_pulse_sigma(2.0);
        let t: Vec<f64> = (0..=40).map(|i| -10.0 + i as f64 * 0.5).collect();
        let r = time_evolve_pulsed(&params, &drive, &t, 3).unwrap();
        assert!(r.n1.iter().all(|&x| x.abs() < 1e-12));
        assert!(r.n2.iter().all(|&x| x.abs() < 1e-12));
    }

    #[test]
    fn pulsed_run_requires_spanning_grid() {
        let params = DimerParams::symmetric(0.0, 0.05, 0.4, 1.0);
        let drive = DriveSpec::quadrature(0.05).with_pulse_sigma(10.0);
        let t: Vec<f64> = (0..=10).map(|i| -10.0 + i as f64 * 2.0).collect();
        assert!(time_evolve_pulsed(&params, &drive, &t, 3).is_err());
        let no_pulse = DriveSpec::quadrature(0.05);
        assert!(time_evolve_pulsed(&params, &no_pulse, &t, 3).is_err());
    }
}
