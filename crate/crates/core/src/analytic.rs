//! Closed-form results for the bilaterally driven Kerr dimer: the weak-drive
//! amplitude solver, the two-photon interference conditions for general and
//! quadrature drive phase, the parameter locus, the linear dark state, and
//! quantum-regression correlators in closed form.
//!
//! Everything here works in the no-jump limit `F1 << gamma`, where the open
//! dimer reduces to a non-Hermitian amplitude hierarchy on the zero-, one-
//! and two-photon sectors. The `lindblad` module provides the full
//! master-equation ground truth these expressions are validated against.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::optim::{bisect_root, sign_change_brackets};
use crate::params::{DimerParams, DriveSpec, Site};
use crate::scalar::{c, imag, re, Scalar};

/// The five weak-drive Fock amplitudes (the vacuum amplitude is 1).
#[derive(Debug, Clone, Copy)]
pub struct FockAmplitudes<T> {
    pub c10: Complex<T>,
    pub c01: Complex<T>,
    pub c20: Complex<T>,
    pub c11: Complex<T>,
    pub c02: Complex<T>,
}

/// Equal-time correlators with undefined markers for 0/0 situations
/// (dark-state inputs must not turn into NaN downstream).
#[derive(Debug, Clone, Copy)]
pub struct Correlators<T> {
    pub g2_11: Option<T>,
    pub g2_22: Option<T>,
    pub g2_12: Option<T>,
    pub n1: T,
    pub n2: T,
}

/// How a correlator series was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Analytic,
    Numeric,
}

/// Sampled `g2_jk(tau)` values on a delay grid (units of `1/gamma`).
#[derive(Debug, Clone)]
pub struct CorrelatorSeries<T> {
    pub tau: Vec<T>,
    pub values: Vec<T>,
    pub method: Method,
    pub site_pair: (Site, Site),
}

/// A point on the UPB parameter locus.
#[derive(Debug, Clone, Copy)]
pub struct LocusPoint<T> {
    pub delta_opt: T,
    pub u_opt: T,
    /// Set at `J = gamma/2`, where the formal solution collapses onto the
    /// linear dark state and is not genuine photon blockade.
    pub dark_state_boundary: bool,
}

/// Result of the general-phase root search.
#[derive(Debug, Clone, Copy)]
pub struct PhasePoint<T> {
    pub delta_opt: T,
    pub u_opt: T,
    /// More than one physical root was found; the one with the smallest
    /// `|Delta|` is reported.
    pub multiple_roots: bool,
}

/// Decay rates, oscillation frequencies and drive source terms of the two
/// decoupled one-photon modes used by the regression-theorem correlators.
#[derive(Debug, Clone, Copy)]
pub struct QrtModes<T> {
    pub u1: Complex<T>,
    pub u2: Complex<T>,
    pub omega1: T,
    pub omega2: T,
    pub lambda1: Complex<T>,
    pub lambda2: Complex<T>,
}

/// Complex single-photon energy `E = Delta - i gamma / 2` of the nominal
/// (mismatch-free) dimer.
pub fn complex_detuning<T: Scalar>(params: &DimerParams<T>) -> Complex<T> {
    c(params.detuning, -params.gamma / T::of(2.0))
}

/// Closed-form quadrature-drive locus `(Delta_opt, U_opt)` as a function of
/// `J`, valid for `J > gamma / 4`.
pub fn locus_quadrature<T: Scalar>(j: T, gamma: T) -> Result<LocusPoint<T>> {
    let quarter = gamma / T::of(4.0);
    if !(j > quarter) {
        return Err(Error::BelowThreshold { j: j.as_f64() });
    }
    let half = gamma / T::of(2.0);
    let s = (T::of(4.0) * j / gamma - T::one()).sqrt();
    let delta_opt = (half - j) * s;
    // the square carries gamma^2; dividing by gamma keeps U an energy
    let u_opt = T::of(4.0) * (j - half) * (j - half) / (s * gamma);
    let dark = (j - half).abs() < T::of(1e-12) * gamma;
    Ok(LocusPoint {
        delta_opt,
        u_opt,
        dark_state_boundary: dark,
    })
}

/// The complex Kerr strength required for a vanishing site-2 two-photon
/// amplitude at drive phase `phi` and detuning `delta`:
///
/// `U = -2 E (J - p E)^2 / (J^2 (1 + p^2) - 4 p J E + 2 p^2 E^2)`,
///
/// with `p = exp(i phi)`. Physical only when `Im(U) = 0` and `Re(U) > 0`.
pub fn u_of_phase<T: Scalar>(phi: T, delta: T, j: T, gamma: T) -> Result<Complex<T>> {
    let e = c(delta, -gamma / T::of(2.0));
    let p = c(T::zero(), phi).exp();
    let jj = re(j);
    let two = re(T::of(2.0));
    let num = -two * e * (jj - p * e) * (jj - p * e);
    let den = jj * jj * (re(T::one()) + p * p) - re(T::of(4.0)) * p * jj * e + two * p * p * e * e;
    let scale = (j * j).max(e.norm_sqr()).max(T::of(1e-30));
    if den.norm() < T::of(1e-14) * scale {
        return Err(Error::SingularPhasePoint);
    }
    Ok(num / den)
}

/// Find the detuning where `u_of_phase` becomes real and positive at fixed
/// drive phase. Scans `Delta` in `[-3 gamma, 3 gamma]` at step `0.01 gamma`
/// for sign changes of `Im(U)`, refines each by bisection, keeps roots with
/// `Re(U) > 0`, and reports the one with the smallest `|Delta|`.
pub fn solve_phase_point<T: Scalar>(phi: T, j: T, gamma: T) -> Option<PhasePoint<T>> {
    let im_u = |delta: T| -> T {
        match u_of_phase(phi, delta, j, gamma) {
            Ok(u) => u.im,
            Err(_) => T::nan(),
        }
    };
    let lo = T::of(-3.0) * gamma;
    let hi = T::of(3.0) * gamma;
    let brackets = sign_change_brackets(im_u, lo, hi, 600);
    let mut physical: Vec<(T, T)> = Vec::new();
    for (a, b) in brackets {
        let delta = bisect_root(im_u, a, b, T::of(1e-12) * gamma);
        if let Ok(u) = u_of_phase(phi, delta, j, gamma) {
            if u.re > T::of(1e-12) * gamma && u.im.abs() < T::of(1e-6) * gamma {
                physical.push((delta, u.re));
            }
        }
    }
    if physical.is_empty() {
        return None;
    }
    physical.sort_by(|l, r| l.0.abs().partial_cmp(&r.0.abs()).unwrap());
    Some(PhasePoint {
        delta_opt: physical[0].0,
        u_opt: physical[0].1,
        multiple_roots: physical.len() > 1,
    })
}

/// Bracket the drive-phase interval on which a physical UPB solution exists,
/// by bisection on solution existence; endpoint resolution 0.1 degrees.
pub fn phase_range<T: Scalar>(j: T, gamma: T) -> Result<(T, T)> {
    if !(j > gamma / T::of(4.0)) {
        return Err(Error::BelowThreshold { j: j.as_f64() });
    }
    let exists = |phi: T| solve_phase_point(phi, j, gamma).is_some();
    let deg = T::PI() / T::of(180.0);
    // anchor somewhere inside the window (90 degrees except exactly at the
    // dark-state boundary, where U_opt(90) = 0)
    let mut anchor = T::FRAC_PI_2();
    if !exists(anchor) {
        let mut found = None;
        for k in 1..180 {
            let phi = deg * T::of(k as f64);
            if exists(phi) {
                found = Some(phi);
                break;
            }
        }
        anchor = found.ok_or_else(|| {
            Error::InvalidParams("no physical drive phase exists for these parameters".into())
        })?;
    }
    let tol = deg / T::of(10.0);
    let eps = deg / T::of(100.0);
    // lower endpoint: no solution at phi -> 0+
    let mut lo_a = eps;
    let mut lo_b = anchor;
    while lo_b - lo_a > tol {
        let mid = (lo_a + lo_b) / T::of(2.0);
        if exists(mid) {
            lo_b = mid;
        } else {
            lo_a = mid;
        }
    }
    // upper endpoint: no solution at phi -> pi-
    let mut hi_a = anchor;
    let mut hi_b = T::PI() - eps;
    while hi_b - hi_a > tol {
        let mid = (hi_a + hi_b) / T::of(2.0);
        if exists(mid) {
            hi_a = mid;
        } else {
            hi_b = mid;
        }
    }
    Ok(((lo_a + lo_b) / T::of(2.0), (hi_a + hi_b) / T::of(2.0)))
}

/// Drive phase of the spurious `U = 0` dark-state solution,
/// `phi = arcsin(gamma / 2J)`, defined for `J >= gamma / 2` (at the boundary
/// `J = gamma / 2` it sits at 90 degrees).
pub fn dark_state_phase<T: Scalar>(j: T, gamma: T) -> Option<T> {
    let x = gamma / (T::of(2.0) * j);
    if x > T::one() {
        None
    } else {
        Some(x.asin())
    }
}

/// Solve the weak-drive amplitude hierarchy: the 2x2 one-photon system, then
/// the 3x3 two-photon system sourced by it. Supports per-site mismatches,
/// arbitrary drive ratio and phase, and a cross-Kerr shift on the `|1,1>`
/// state only.
pub fn amplitude_steady_state<T: Scalar>(
    params: &DimerParams<T>,
    drive: &DriveSpec<T>,
) -> Result<FockAmplitudes<T>> {
    let e1 = params.complex_detuning_site(Site::One);
    let e2 = params.complex_detuning_site(Site::Two);
    let (u1, u2) = params.site_kerrs();
    let j = re(params.hopping);
    let f1 = re(drive.f1);
    let f2 = drive.f2();
    let scale2 = e1.norm_sqr().max(e2.norm_sqr()).max(j.norm_sqr());

    // one-photon sector: [e1 J; J e2] (c10, c01)^T = (-F1, -F2)^T
    let det1 = e1 * e2 - j * j;
    if det1.norm() < T::of(1e-14) * scale2 {
        return Err(Error::Resonance);
    }
    let c10 = (-e2 * f1 + j * f2) / det1;
    let c01 = (j * f1 - e1 * f2) / det1;

    // two-photon sector, tridiagonal in (c20, c11, c02):
    //   [ 2(e1+u1)   sqrt2 J      0     ] (c20)   ( -sqrt2 F1 c10      )
    //   [ sqrt2 J    e1+e2+Ux  sqrt2 J  ] (c11) = ( -(F2 c10 + F1 c01) )
    //   [ 0          sqrt2 J   2(e2+u2) ] (c02)   ( -sqrt2 F2 c01      )
    let sq2 = re(T::SQRT_2());
    let a = (e1 + re(u1)) * T::of(2.0);
    let b = sq2 * j;
    let cc = e1 + e2 + re(params.cross_kerr);
    let d = (e2 + re(u2)) * T::of(2.0);
    let r1 = -sq2 * f1 * c10;
    let r2 = -(f2 * c10 + f1 * c01);
    let r3 = -sq2 * f2 * c01;

    let det2 = a * cc * d - a * b * b - b * b * d;
    if det2.norm() < T::of(1e-14) * scale2 * scale2.sqrt() {
        return Err(Error::Resonance);
    }
    let c20 = ((cc * d - b * b) * r1 - b * d * r2 + b * b * r3) / det2;
    let c11 = (-b * d * r1 + a * d * r2 - a * b * r3) / det2;
    let c02 = (b * b * r1 - a * b * r2 + (a * cc - b * b) * r3) / det2;

    Ok(FockAmplitudes {
        c10,
        c01,
        c20,
        c11,
        c02,
    })
}

/// Leading-order correlators from the weak-drive amplitudes:
/// `g2_jj = 2 |C_2photon|^2 / n_j^2`, `g2_12 = |C11|^2 / (n1 n2)`, with
/// undefined markers for dark-state (0/0) inputs.
pub fn g2_from_amplitudes<T: Scalar>(amps: &FockAmplitudes<T>) -> Correlators<T> {
    let n1 = amps.c10.norm_sqr();
    let n2 = amps.c01.norm_sqr();
    let scale = n1.max(n2);
    let defined = |n: T| scale > T::zero() && n > scale * T::of(1e-20);
    let two = T::of(2.0);
    Correlators {
        g2_11: defined(n1).then(|| two * amps.c20.norm_sqr() / (n1 * n1)),
        g2_22: defined(n2).then(|| two * amps.c02.norm_sqr() / (n2 * n2)),
        g2_12: (defined(n1) && defined(n2)).then(|| amps.c11.norm_sqr() / (n1 * n2)),
        n1,
        n2,
    }
}

/// Mode content of the driven one-photon sector after a detection on `site`:
/// decay rates `u_{1,2} = i(E +- J)` (both with real part `gamma/2`),
/// oscillation frequencies `omega_{1,2} = Delta +- J`, and the drive source
/// terms `lambda_{1,2} = -i (F1 +- F2) C_vac` with the vacuum amplitude of
/// the post-detection state frozen at its steady value.
pub fn qrt_modes<T: Scalar>(
    params: &DimerParams<T>,
    drive: &DriveSpec<T>,
    site: Site,
) -> Result<QrtModes<T>> {
    let amps = amplitude_steady_state(params, drive)?;
    let e = complex_detuning(params);
    let j = params.hopping;
    let i = imag::<T>();
    let f1 = re(drive.f1);
    let f2 = drive.f2();
    let vac = match site {
        Site::One => amps.c10,
        Site::Two => amps.c01,
    };
    Ok(QrtModes {
        u1: i * (e + re(j)),
        u2: i * (e - re(j)),
        omega1: params.detuning + j,
        omega2: params.detuning - j,
        lambda1: -i * (f1 + f2) * vac,
        lambda2: -i * (f1 - f2) * vac,
    })
}

/// Closed-form delayed autocorrelator `g2_jj(tau)` of one site via the
/// quantum regression theorem in the weak-drive limit. Requires a symmetric
/// dimer and a CW drive.
pub fn qrt_g2_tau<T: Scalar>(
    params: &DimerParams<T>,
    drive: &DriveSpec<T>,
    site: Site,
    tau_grid: &[T],
) -> Result<CorrelatorSeries<T>> {
    if !params.is_symmetric() {
        return Err(Error::InvalidParams(
            "closed-form regression correlators require a mismatch-free dimer".into(),
        ));
    }
    let amps = amplitude_steady_state(params, drive)?;
    let modes = qrt_modes(params, drive, site)?;
    let sq2 = re(T::SQRT_2());

    // post-detection initial conditions in sum/difference variables
    let (x0, y0, norm) = match site {
        Site::Two => {
            // a2|psi> = C01 |00> + C11 |10> (+ sqrt2 C02 |01>, zero on locus)
            let c10_0 = amps.c11;
            let c01_0 = sq2 * amps.c02;
            (c10_0 + c01_0, c10_0 - c01_0, amps.c01.norm_sqr())
        }
        Site::One => {
            // a1|psi> = C10 |00> + sqrt2 C20 |10> + C11 |01>
            let c10_0 = sq2 * amps.c20;
            let c01_0 = amps.c11;
            (c10_0 + c01_0, c10_0 - c01_0, amps.c10.norm_sqr())
        }
    };
    let s1 = modes.lambda1 / modes.u1;
    let s2 = modes.lambda2 / modes.u2;

    let values: Vec<T> = tau_grid
        .iter()
        .map(|&tau| {
            let e1 = (-modes.u1 * tau).exp();
            let e2 = (-modes.u2 * tau).exp();
            let x = (x0 - s1) * e1 + s1;
            let y = (y0 - s2) * e2 + s2;
            let amp = match site {
                Site::Two => (x - y) / T::of(2.0),
                Site::One => (x + y) / T::of(2.0),
            };
            amp.norm_sqr() / (norm * norm)
        })
        .collect();

    Ok(CorrelatorSeries {
        tau: tau_grid.to_vec(),
        values,
        method: Method::Analytic,
        site_pair: (site, site),
    })
}

/// Residual of the applicable two-photon interference condition, normalized
/// by `gamma^2`: the compact quadratic at quadrature phase, the general-phase
/// condition otherwise. Zero iff UPB holds at these parameters.
pub fn upb_residual<T: Scalar>(params: &DimerParams<T>, drive: &DriveSpec<T>) -> Complex<T> {
    let e = complex_detuning(params);
    let u = re(params.kerr);
    let j = params.hopping;
    let gamma2 = re(params.gamma * params.gamma);
    let i = imag::<T>();
    let quadrature = (drive.phi - T::FRAC_PI_2()).abs() < T::of(1e-9);
    if quadrature {
        // (E + U)(E + 2iJ) - J^2
        let lhs = (e + u) * (e + i * T::of(2.0) * j);
        (lhs - re(j * j)) / gamma2
    } else {
        // J^2 (2E + U(1 + p^2)) - 2 p E (E + U)(2J - p E)
        let p = c(T::zero(), drive.phi).exp();
        let jj = re(j);
        let two = re(T::of(2.0));
        let lhs = jj * jj * (two * e + u * (re(T::one()) + p * p));
        let rhs = two * p * e * (e + u) * (two * jj - p * e);
        (lhs - rhs) / gamma2
    }
}
