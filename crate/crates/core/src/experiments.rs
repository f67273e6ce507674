//! Reproduction drivers: parameter scans over drive phase and amplitude,
//! the delayed-correlator overshoot table, disorder tolerance extraction,
//! drive-parameter compensation, the single-site comparison, and unit
//! conversion. Grid points are independent pure evaluations; the heavy scans
//! run in parallel with results gathered in input order, so output is
//! deterministic for any thread count.

use rayon::prelude::*;

use crate::analytic::{
    amplitude_steady_state, g2_from_amplitudes, locus_quadrature, qrt_g2_tau, solve_phase_point,
    Method,
};
use crate::error::{Error, Result};
use crate::lindblad::{build_liouvillian_cw, correlators_equal_time, steady_state};
use crate::optim::{golden_section_max, nelder_mead, NelderMeadOptions};
use crate::params::{DimerParams, DriveSpec, Site};
use crate::scalar::Scalar;
use crate::scan::ScanResult;

/// Nominal operating point for the disorder and compensation studies
/// (quadrature drive at the J = 0.4 gamma optimum).
pub fn disorder_nominal<T: Scalar>() -> (DimerParams<T>, DriveSpec<T>) {
    (
        DimerParams::symmetric(T::of(0.07746), T::of(0.05164), T::of(0.4), T::one()),
        DriveSpec::quadrature(T::of(0.05)),
    )
}

/// Evaluate `f` over `0..n` in input order, optionally on a scoped thread
/// pool of the given size (`None` = rayon default).
fn map_points<R, F>(n: usize, threads: Option<usize>, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Send + Sync,
{
    match threads {
        Some(1) => (0..n).map(f).collect(),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .expect("thread pool");
            pool.install(|| (0..n).into_par_iter().map(f).collect())
        }
        None => (0..n).into_par_iter().map(f).collect(),
    }
}

/// UPB operating point for every `(J, phi)` pair: `Delta_opt / gamma`,
/// `U_opt / gamma` and `U_opt / J` where a physical solution exists,
/// none-markers elsewhere.
pub fn phase_locus_scan<T: Scalar>(
    j_list: &[T],
    phi_grid: &[T],
    gamma: T,
    threads: Option<usize>,
) -> ScanResult<T> {
    let nj = j_list.len();
    let np = phi_grid.len();
    let pts: Vec<Option<(T, T)>> = map_points(nj * np, threads, |idx| {
        let j = j_list[idx / np];
        let phi = phi_grid[idx % np];
        solve_phase_point(phi, j, gamma).map(|p| (p.delta_opt, p.u_opt))
    });
    let delta: Vec<Option<T>> = pts.iter().map(|p| p.map(|(d, _)| d)).collect();
    let u: Vec<Option<T>> = pts.iter().map(|p| p.map(|(_, u)| u)).collect();
    let u_over_j: Vec<Option<T>> = pts
        .iter()
        .enumerate()
        .map(|(idx, p)| p.map(|(_, u)| u / j_list[idx / np]))
        .collect();
    ScanResult {
        axes: vec![
            ("J".into(), j_list.to_vec()),
            ("phi_deg".into(), phi_grid.iter().map(|&p| p.to_degrees()).collect()),
        ],
        columns: vec![
            ("Delta_opt".into(), delta),
            ("U_opt".into(), u),
            ("U_over_J".into(), u_over_j),
        ],
        meta: vec![("gamma".into(), format!("{gamma}"))],
        method: Method::Analytic,
        timestamp: None,
    }
}

/// Full master-equation landscape over drive amplitude and detuning at fixed
/// `(J, U, phi)`: equal-time correlators and log10 occupations. Individual
/// solver failures are recorded as missing values and the scan continues.
#[allow(clippy::too_many_arguments)]
pub fn landscape_scan<T: Scalar>(
    f1_grid: &[T],
    delta_grid: &[T],
    j: T,
    u: T,
    phi: T,
    gamma: T,
    n_cut: usize,
    threads: Option<usize>,
) -> ScanResult<T> {
    let nf = f1_grid.len();
    let nd = delta_grid.len();
    type Point<T> = Option<(Option<T>, Option<T>, Option<T>, T, T)>;
    let pts: Vec<Point<T>> = map_points(nf * nd, threads, |idx| {
        let f1 = f1_grid[idx / nd];
        let delta = delta_grid[idx % nd];
        let params = DimerParams::symmetric(delta, u, j, gamma);
        let drive = DriveSpec::bilateral(f1, phi);
        let run = || -> Result<_> {
            let l = build_liouvillian_cw(&params, &drive, n_cut)?;
            let rho = steady_state(&l)?;
            let c = correlators_equal_time(&rho, n_cut)?;
            Ok((c.g2_11, c.g2_22, c.g2_12, c.n1, c.n2))
        };
        run().ok()
    });
    let col = |f: &dyn Fn(&(Option<T>, Option<T>, Option<T>, T, T)) -> Option<T>| -> Vec<Option<T>> {
        pts.iter().map(|p| p.as_ref().and_then(f)).collect()
    };
    let log10 = |x: T| -> Option<T> {
        (x > T::zero()).then(|| x.log10())
    };
    ScanResult {
        axes: vec![
            ("F1".into(), f1_grid.to_vec()),
            ("Delta".into(), delta_grid.to_vec()),
        ],
        columns: vec![
            ("g2_11".into(), col(&|p| p.0)),
            ("g2_22".into(), col(&|p| p.1)),
            ("g2_12".into(), col(&|p| p.2)),
            ("log10_n1".into(), col(&|p| log10(p.3))),
            ("log10_n2".into(), col(&|p| log10(p.4))),
        ],
        meta: vec![
            ("J".into(), format!("{j}")),
            ("U".into(), format!("{u}")),
            ("phi".into(), format!("{phi}")),
            ("gamma".into(), format!("{gamma}")),
            ("n_cut".into(), format!("{n_cut}")),
        ],
        method: Method::Numeric,
        timestamp: None,
    }
}

/// One row of the delayed-correlator overshoot table.
#[derive(Debug, Clone, Copy)]
pub struct OvershootRow<T> {
    pub j: T,
    pub delta_opt: T,
    pub u_opt: T,
    pub omega1: T,
    pub omega2: T,
    /// Oscillation period of the fast mode, `2 pi / |omega2|`.
    pub t2: T,
    /// Peak of the analytic `g2_22(tau)` over `tau in (0, 100/gamma]`.
    pub g2_max: T,
}

/// Peak overshoot of `g2_22(tau)` along the quadrature locus: coarse grid
/// then golden-section refinement. `J = gamma/2` is rejected (dark-state
/// boundary), as is anything at or below threshold.
pub fn overshoot_scan<T: Scalar>(j_list: &[T], gamma: T) -> Result<Vec<OvershootRow<T>>> {
    let drive = DriveSpec::quadrature(T::of(0.05) * gamma);
    j_list
        .iter()
        .map(|&j| {
            let lp = locus_quadrature(j, gamma)?;
            if lp.dark_state_boundary {
                return Err(Error::DarkStateBoundary(j.as_f64()));
            }
            let params = DimerParams::symmetric(lp.delta_opt, lp.u_opt, j, gamma);
            let g2_at = |tau: T| -> T {
                qrt_g2_tau(&params, &drive, Site::Two, &[tau])
                    .expect("symmetric CW setup")
                    .values[0]
            };
            let steps = 4000usize;
            let dt = T::of(100.0 / 4000.0) / gamma;
            let mut best_i = 1usize;
            let mut best_v = T::zero();
            let grid: Vec<T> = (1..=steps).map(|i| dt * T::of(i as f64)).collect();
            let series = qrt_g2_tau(&params, &drive, Site::Two, &grid)?;
            for (i, &v) in series.values.iter().enumerate() {
                if v > best_v {
                    best_v = v;
                    best_i = i;
                }
            }
            let lo = if best_i == 0 { T::zero() } else { grid[best_i - 1] };
            let hi = if best_i + 1 < grid.len() {
                grid[best_i + 1]
            } else {
                grid[best_i]
            };
            let (_, g2_max) = golden_section_max(g2_at, lo, hi, T::of(1e-10));
            let omega1 = lp.delta_opt + j;
            let omega2 = lp.delta_opt - j;
            Ok(OvershootRow {
                j,
                delta_opt: lp.delta_opt,
                u_opt: lp.u_opt,
                omega1,
                omega2,
                t2: T::of(2.0) * T::PI() / omega2.abs(),
                g2_max: g2_max.max(best_v),
            })
        })
        .collect()
}

/// Which parameter carries the site mismatch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DisorderAxis {
    Detuning,
    Gamma,
    Kerr,
}

impl DisorderAxis {
    pub fn label(self) -> &'static str {
        match self {
            DisorderAxis::Detuning => "delta_Delta",
            DisorderAxis::Gamma => "delta_gamma",
            DisorderAxis::Kerr => "delta_U",
        }
    }

    fn apply<T: Scalar>(self, params: &DimerParams<T>, d: T) -> DimerParams<T> {
        let mut p = *params;
        match self {
            DisorderAxis::Detuning => p.detuning_mismatch = d,
            DisorderAxis::Gamma => p.gamma_mismatch = d,
            DisorderAxis::Kerr => p.kerr_mismatch = d,
        }
        p
    }
}

/// Disorder tolerance along one axis: the mismatch half-width at which the
/// antibunching figure of merit crosses `threshold`.
#[derive(Debug, Clone, Copy)]
pub struct ToleranceReport<T> {
    pub axis: DisorderAxis,
    /// Conservative half-width: the smaller of the two one-sided crossings.
    pub half_width: T,
    pub crossing_pos: T,
    pub crossing_neg: T,
    pub threshold: T,
}

fn disorder_g2<T: Scalar>(axis: DisorderAxis, d: T) -> T {
    let (nominal, drive) = disorder_nominal::<T>();
    let params = axis.apply(&nominal, d);
    match amplitude_steady_state(&params, &drive).map(|a| g2_from_amplitudes(&a).g2_22) {
        Ok(Some(v)) => v,
        _ => T::infinity(),
    }
}

/// Scan the perturbative `g2_22(0)` along one disorder axis at the nominal
/// optimum and extract the tolerance half-width by bisection on the
/// threshold crossing.
pub fn disorder_scan<T: Scalar>(
    axis: DisorderAxis,
    mismatch_grid: &[T],
    threshold: T,
) -> (ScanResult<T>, ToleranceReport<T>) {
    let values: Vec<Option<T>> = mismatch_grid
        .iter()
        .map(|&d| {
            let v = disorder_g2(axis, d);
            v.is_finite().then_some(v)
        })
        .collect();

    let crossing = |sign: T| -> T {
        let mut lo = T::zero();
        let mut hi = T::zero();
        let mut d = T::of(1e-3);
        while d < T::of(2.0) {
            if disorder_g2(axis, sign * d) > threshold {
                hi = d;
                break;
            }
            lo = d;
            d *= T::of(1.3);
        }
        if hi == T::zero() {
            return T::infinity();
        }
        for _ in 0..60 {
            let m = (lo + hi) / T::of(2.0);
            if disorder_g2(axis, sign * m) > threshold {
                hi = m;
            } else {
                lo = m;
            }
        }
        (lo + hi) / T::of(2.0)
    };
    let pos = crossing(T::one());
    let neg = crossing(-T::one());
    let report = ToleranceReport {
        axis,
        half_width: pos.min(neg),
        crossing_pos: pos,
        crossing_neg: neg,
        threshold,
    };
    let scan = ScanResult {
        axes: vec![(axis.label().into(), mismatch_grid.to_vec())],
        columns: vec![("g2_22".into(), values)],
        meta: vec![
            ("axis".into(), axis.label().into()),
            ("threshold".into(), format!("{threshold}")),
        ],
        method: Method::Analytic,
        timestamp: None,
    };
    (scan, report)
}

/// Compensation strategy: re-tune the drive phase alone, or phase and
/// amplitude ratio together.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompensationMode {
    PhaseOnly,
    PhaseAndRatio,
}

#[derive(Debug, Clone, Copy)]
pub struct CompensationResult<T> {
    pub phi_opt: T,
    pub ratio_opt: T,
    pub g2_min: T,
    /// False when the optimizer hit its iteration budget without meeting the
    /// simplex-diameter criterion; the best point found is still reported.
    pub converged: bool,
}

/// Restore the interference condition in a detuning-mismatched dimer by
/// derivative-free minimization of the perturbative `g2_22(0)` over the
/// drive parameters, starting from the quadrature drive.
pub fn compensate<T: Scalar>(
    detuning_mismatch: T,
    mode: CompensationMode,
) -> Result<CompensationResult<T>> {
    if detuning_mismatch.abs() > T::of(0.4) {
        return Err(Error::InvalidParams(
            "compensation studied for |detuning mismatch| <= 0.4 gamma".into(),
        ));
    }
    let (nominal, drive0) = disorder_nominal::<T>();
    let params = DisorderAxis::Detuning.apply(&nominal, detuning_mismatch);
    let objective = |phi: T, ratio: T| -> T {
        if ratio < T::zero() {
            return T::of(1e6);
        }
        let drive = DriveSpec::bilateral(drive0.f1, phi).with_ratio(ratio);
        match amplitude_steady_state(&params, &drive).map(|a| g2_from_amplitudes(&a).g2_22) {
            Ok(Some(v)) => v,
            _ => T::of(1e6),
        }
    };
    let opts = NelderMeadOptions::<T>::default();
    let (x, fx, converged) = match mode {
        CompensationMode::PhaseOnly => {
            let r = nelder_mead(|x: &[T]| objective(x[0], T::one()), &[T::FRAC_PI_2()], &opts);
            (vec![r.x[0], T::one()], r.fx, r.converged)
        }
        CompensationMode::PhaseAndRatio => {
            let r = nelder_mead(
                |x: &[T]| objective(x[0], x[1]),
                &[T::FRAC_PI_2(), T::one()],
                &opts,
            );
            (r.x.clone(), r.fx, r.converged)
        }
    };
    Ok(CompensationResult {
        phi_opt: x[0],
        ratio_opt: x[1],
        g2_min: fx,
        converged,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct SingleSiteRow<T> {
    pub j: T,
    pub u_bilateral: T,
    /// Kerr strength of the single-site-driven blockade at this `J`, if the
    /// interference condition admits a solution (requires `J > gamma/sqrt 2`).
    pub u_single_site: Option<T>,
    pub delta_single_site: Option<T>,
}

#[derive(Debug, Clone)]
pub struct SingleSiteComparison<T> {
    pub rows: Vec<SingleSiteRow<T>>,
    /// `(J, U)` where the bilateral and single-site Kerr requirements cross.
    pub crossover: Option<(T, T)>,
}

/// Find the single-site-driven blockade point at fixed `J` by 2-D
/// minimization of the driven site's two-photon amplitude over `(U, Delta)`,
/// seeded from the bilateral locus.
fn single_site_point<T: Scalar>(j: T, gamma: T) -> Option<(T, T)> {
    let f1 = T::of(0.01) * gamma;
    // the scaled two-photon amplitude also decays towards U -> inf and
    // |Delta| -> inf, so the search is confined to a physical box; boundary
    // minima stay many orders of magnitude above the exact-zero floor
    let u_cap = T::of(50.0) * gamma;
    let delta_cap = T::of(5.0) * gamma;
    let objective = |x: &[T]| -> T {
        let (u, delta) = (x[0], x[1]);
        let mut penalty = T::zero();
        if u < T::zero() {
            penalty += u * u;
        }
        if u > u_cap {
            penalty += (u - u_cap) * (u - u_cap);
        }
        if delta.abs() > delta_cap {
            penalty += (delta.abs() - delta_cap) * (delta.abs() - delta_cap);
        }
        if penalty > T::zero() {
            return T::one() + penalty;
        }
        let params = DimerParams::symmetric(delta, u, j, gamma);
        let drive = DriveSpec::bilateral(f1, T::zero()).with_ratio(T::zero());
        match amplitude_steady_state(&params, &drive) {
            Ok(a) => a.c20.norm_sqr() / (f1 * f1 * f1 * f1),
            Err(_) => T::of(1e9),
        }
    };
    // seeds: the bilateral optimum plus a few nearby starting boxes
    let lp = locus_quadrature(j, gamma).ok()?;
    let seeds = [
        [lp.u_opt, lp.delta_opt.abs()],
        [lp.u_opt, lp.delta_opt],
        [T::of(0.5) * gamma, T::of(0.2) * gamma],
        [gamma, T::of(0.5) * gamma],
    ];
    let opts = NelderMeadOptions {
        max_iterations: 800,
        ..NelderMeadOptions::<T>::default()
    };
    let mut best: Option<(T, [T; 2])> = None;
    for seed in seeds {
        let r = nelder_mead(objective, &seed, &opts);
        if best.as_ref().map(|(f, _)| r.fx < *f).unwrap_or(true) {
            best = Some((r.fx, [r.x[0], r.x[1]]));
        }
    }
    let (fx, x) = best?;
    // a genuine solution drives the scaled amplitude to the numerical floor
    (fx < T::of(1e-16)).then_some((x[0], x[1]))
}

/// Bilateral vs single-site Kerr requirement across a `J` grid, with the
/// crossover located by the sign change of the difference.
pub fn single_site_comparison<T: Scalar>(j_grid: &[T], gamma: T) -> Result<SingleSiteComparison<T>> {
    let rows: Vec<SingleSiteRow<T>> = j_grid
        .iter()
        .map(|&j| {
            let u_b = locus_quadrature(j, gamma)?.u_opt;
            let ss = single_site_point(j, gamma);
            Ok(SingleSiteRow {
                j,
                u_bilateral: u_b,
                u_single_site: ss.map(|(u, _)| u),
                delta_single_site: ss.map(|(_, d)| d),
            })
        })
        .collect::<Result<_>>()?;

    // sign change of (bilateral - single-site) across consecutive rows
    let mut crossover = None;
    for w in rows.windows(2) {
        if let (Some(u0), Some(u1)) = (w[0].u_single_site, w[1].u_single_site) {
            let d0 = w[0].u_bilateral - u0;
            let d1 = w[1].u_bilateral - u1;
            if d0 * d1 < T::zero() {
                // bisect on J
                let mut lo = w[0].j;
                let mut hi = w[1].j;
                let diff_at = |j: T| -> T {
                    let ub = locus_quadrature(j, gamma).map(|l| l.u_opt).unwrap_or(T::nan());
                    match single_site_point(j, gamma) {
                        Some((us, _)) => ub - us,
                        None => T::nan(),
                    }
                };
                let mut dlo = d0;
                for _ in 0..30 {
                    let mid = (lo + hi) / T::of(2.0);
                    let dm = diff_at(mid);
                    if !dm.is_finite() {
                        break;
                    }
                    if (dlo > T::zero()) == (dm > T::zero()) {
                        lo = mid;
                        dlo = dm;
                    } else {
                        hi = mid;
                    }
                }
                let jx = (lo + hi) / T::of(2.0);
                let ux = locus_quadrature(jx, gamma)?.u_opt;
                crossover = Some((jx, ux));
                break;
            }
        }
    }
    Ok(SingleSiteComparison { rows, crossover })
}

/// Cavity decay rate and lifetime from a quality factor and wavelength:
/// `gamma = omega / Q` with `omega = 2 pi c / lambda`.
#[derive(Debug, Clone, Copy)]
pub struct UnitConversion {
    /// Decay rate in angular GHz (1e9 rad/s).
    pub gamma_ghz: f64,
    /// Lifetime `1/gamma` in picoseconds.
    pub lifetime_ps: f64,
}

pub fn unit_convert(q: f64, wavelength_nm: f64) -> Result<UnitConversion> {
    if !(q > 0.0 && wavelength_nm > 0.0) {
        return Err(Error::InvalidParams(
            "quality factor and wavelength must be positive".into(),
        ));
    }
    const C: f64 = 299_792_458.0; // m/s
    let omega = 2.0 * std::f64::consts::PI * C / (wavelength_nm * 1e-9);
    let gamma = omega / q;
    Ok(UnitConversion {
        gamma_ghz: gamma / 1e9,
        lifetime_ps: 1e12 / gamma,
    })
}
