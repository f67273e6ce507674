//! The acceptance suite: every headline number of the toolkit checked at its
//! stated tolerance, one report per criterion. The CLI `verify` subcommand
//! prints these reports and exits nonzero on any failure; the `acceptance`
//! integration test target asserts them.

use crate::analytic::{
    self, locus_quadrature, phase_range, qrt_g2_tau, solve_phase_point, u_of_phase,
};
use crate::experiments::{
    compensate, disorder_scan, landscape_scan, overshoot_scan, single_site_comparison,
    CompensationMode, DisorderAxis,
};
use crate::lindblad::{
    build_liouvillian_cw, correlators_equal_time, g2_tau_numeric, steady_state,
    time_evolve_pulsed,
};
use crate::params::{DimerParams, DriveSpec, Site};
use crate::scan::ScanResult;

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: &'static str,
    pub label: &'static str,
    pub passed: bool,
    pub details: Vec<String>,
}

impl CriterionReport {
    fn new(id: &'static str, label: &'static str) -> Self {
        Self {
            id,
            label,
            passed: true,
            details: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, detail: String) {
        if !ok {
            self.passed = false;
        }
        self.details.push(format!("{} {detail}", if ok { "ok  " } else { "FAIL" }));
    }

    fn note(&mut self, detail: String) {
        self.details.push(format!("     {detail}"));
    }

    /// One-line summary in the form the verification front end prints.
    pub fn summary_line(&self) -> String {
        format!(
            "{:<6}{:<58} {}",
            format!("[{}]", self.id),
            self.label,
            if self.passed { "PASS" } else { "FAIL" }
        )
    }
}

fn locus_setup(j: f64, f1: f64) -> (DimerParams<f64>, DriveSpec<f64>) {
    let lp = locus_quadrature(j, 1.0).expect("J above threshold");
    (
        DimerParams::symmetric(lp.delta_opt, lp.u_opt, j, 1.0),
        DriveSpec::quadrature(f1),
    )
}

/// Criterion 1: the closed-form locus reproduces the published table.
pub fn c1_locus_table() -> CriterionReport {
    let mut r = CriterionReport::new("C1", "locus table (six rows, 1e-3 absolute)");
    let table: [(f64, f64, f64, f64); 6] = [
        (0.30, 0.358, 1.193, 0.089),
        (0.40, 0.052, 0.129, 0.077),
        (0.60, 0.034, 0.056, -0.118),
        (0.70, 0.119, 0.170, -0.268),
        (0.80, 0.243, 0.303, -0.445),
        (1.00, 0.577, 0.577, -0.866),
    ];
    for (j, u, u_over_j, delta) in table {
        let lp = locus_quadrature(j, 1.0).expect("above threshold");
        r.check(
            (lp.u_opt - u).abs() < 1e-3
                && (lp.u_opt / j - u_over_j).abs() < 1e-3
                && (lp.delta_opt - delta).abs() < 1e-3,
            format!(
                "J={j}: U={:.5} (ref {u}), U/J={:.5} (ref {u_over_j}), Delta={:+.5} (ref {delta})",
                lp.u_opt,
                lp.u_opt / j,
                lp.delta_opt
            ),
        );
    }
    r
}

/// Criterion 2: general-phase operating points and the existence window.
pub fn c2_phase_table() -> CriterionReport {
    let mut r = CriterionReport::new("C2", "phase table, no solution at 0/pi, existence window");
    let table: [(f64, f64, f64); 5] = [
        (40.0, 1.835, 0.453),
        (60.0, 0.192, 0.317),
        (90.0, 0.052, 0.077),
        (120.0, 0.113, -0.112),
        (150.0, 0.663, -0.351),
    ];
    for (phi_deg, u, delta) in table {
        match solve_phase_point(phi_deg.to_radians(), 0.4, 1.0) {
            Some(pt) => r.check(
                (pt.u_opt - u).abs() < 1e-3 && (pt.delta_opt - delta).abs() < 1e-3,
                format!(
                    "phi={phi_deg}: U={:.5} (ref {u}), Delta={:+.5} (ref {delta})",
                    pt.u_opt, pt.delta_opt
                ),
            ),
            None => r.check(false, format!("phi={phi_deg}: no solution found")),
        }
    }
    r.check(
        solve_phase_point(0.0, 0.4, 1.0).is_none(),
        "no solution at phi = 0".into(),
    );
    r.check(
        solve_phase_point(std::f64::consts::PI, 0.4, 1.0).is_none(),
        "no solution at phi = pi".into(),
    );
    let (lo, hi): (f64, f64) = phase_range(0.4, 1.0).expect("range exists");
    let (lo_deg, hi_deg) = (lo.to_degrees(), hi.to_degrees());
    r.check(
        (lo_deg - 38.0).abs() < 1.0,
        format!("existence window low endpoint {lo_deg:.2} deg (ref 38 +- 1)"),
    );
    r.check(
        (hi_deg - 151.0).abs() < 1.0,
        format!("existence window high endpoint {hi_deg:.2} deg (ref 151 +- 1)"),
    );
    if (lo_deg - 38.0).abs() >= 1.0 {
        r.note(
            "solutions with U real and positive provably continue below 38 deg \
             (U grows like ~9.2 deg / (phi - 35.2 deg) towards the divergence)"
                .into(),
        );
        // where the window would start if the required Kerr were capped at
        // U/J = 10, the likely provenance of the published 38 degrees
        let mut capped_lo = lo_deg;
        let mut phi = lo_deg;
        while phi < 90.0 {
            if let Some(pt) = solve_phase_point(phi.to_radians(), 0.4, 1.0) {
                if pt.u_opt / 0.4 <= 10.0 {
                    capped_lo = phi;
                    break;
                }
            }
            phi += 0.1;
        }
        r.note(format!(
            "with U/J <= 10 imposed the window would open at {capped_lo:.1} deg"
        ));
    }
    r
}

/// Criterion 3: the general-phase condition at quadrature equals the compact
/// quadratic for 1000 deterministic pseudo-random parameter draws.
pub fn c3_quadratic_identity() -> CriterionReport {
    let mut r = CriterionReport::new("C3", "general condition = quadratic at 90 deg (1000 draws)");
    let mut state = 0x9e3779b97f4a7c15u64;
    let mut uniform = |lo: f64, hi: f64| -> f64 {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        lo + (hi - lo) * ((state >> 11) as f64 / (1u64 << 53) as f64)
    };
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let delta = uniform(-2.0, 2.0);
        let j = uniform(0.05, 2.0);
        let gamma = uniform(0.2, 3.0);
        let e = num_complex::Complex64::new(delta, -gamma / 2.0);
        let i = num_complex::Complex64::i();
        let u_quadratic = j * j / (e + 2.0 * i * j) - e;
        let u_general = u_of_phase(std::f64::consts::FRAC_PI_2, delta, j, gamma)
            .expect("regular point");
        worst = worst.max((u_general - u_quadratic).norm());
    }
    r.check(worst < 1e-10, format!("max |difference| = {worst:.3e} < 1e-10"));
    r
}

/// Criterion 4: full master equation against the weak-drive closed forms at
/// the operating point.
pub fn c4_analytic_numeric_agreement() -> CriterionReport {
    let mut r = CriterionReport::new("C4", "analytic vs numeric correlators at the optimum");
    let (params, drive) = locus_setup(0.4, 0.01);
    let n_cut = 7;
    let l = build_liouvillian_cw(&params, &drive, n_cut).expect("build");
    let rho = steady_state(&l).expect("steady state");
    let c = correlators_equal_time(&rho, n_cut).expect("correlators");
    let g2_22 = c.g2_22.expect("defined");
    let g2_11 = c.g2_11.expect("defined");
    r.check(g2_22 <= 0.01, format!("numeric g2_22(0) = {g2_22:.3e} <= 0.01"));
    r.check(
        (g2_11 - 0.98).abs() <= 0.02,
        format!("numeric g2_11(0) = {g2_11:.4} (ref 0.98 +- 0.02)"),
    );
    let tau: Vec<f64> = (0..=400).map(|i| i as f64 * 0.025).collect();
    let numeric = g2_tau_numeric(&params, &drive, (Site::Two, Site::Two), &tau, n_cut)
        .expect("regression series");
    let analytic = qrt_g2_tau(&params, &drive, Site::Two, &tau).expect("closed form");
    let worst = numeric
        .values
        .iter()
        .zip(&analytic.values)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    r.check(
        worst < 0.01,
        format!("max_tau |analytic - numeric| = {worst:.3e} < 0.01"),
    );
    let crossing = numeric
        .tau
        .iter()
        .zip(&numeric.values)
        .find(|(_, &v)| v >= 0.5)
        .map(|(&t, _)| t);
    match crossing {
        Some(t) => r.check(
            (t - 3.2).abs() <= 0.2,
            format!("g2_22 crosses 0.5 at tau = {t:.3}/gamma (ref 3.2 +- 0.2)"),
        ),
        None => r.check(false, "g2_22 never crosses 0.5".into()),
    }
    r
}

/// Criterion 5: delayed-correlator overshoot table and its non-monotonicity.
pub fn c5_overshoot_table() -> CriterionReport {
    let mut r = CriterionReport::new("C5", "overshoot table (nine rows) and non-monotonicity");
    let table: [(f64, f64, f64, f64, f64); 9] = [
        (0.26, 0.308, -0.212, 29.7, 1.004),
        (0.30, 0.389, -0.211, 29.8, 1.006),
        (0.40, 0.478, -0.323, 19.5, 1.033),
        (0.55, 0.495, -0.605, 10.4, 1.113),
        (0.60, 0.482, -0.718, 8.7, 1.124),
        (0.70, 0.432, -0.968, 6.5, 1.087),
        (0.80, 0.355, -1.245, 5.0, 1.037),
        (0.90, 0.255, -1.545, 4.1, 1.014),
        (1.00, 0.134, -1.866, 3.4, 1.000),
    ];
    let js: Vec<f64> = table.iter().map(|t| t.0).collect();
    let rows = overshoot_scan(&js, 1.0).expect("valid J list");
    for (row, (j, w1, w2, t2, g2max)) in rows.iter().zip(table) {
        r.check(
            (row.omega1 - w1).abs() < 1e-3
                && (row.omega2 - w2).abs() < 1e-3
                && (row.t2 - t2).abs() < 0.1
                && (row.g2_max - g2max).abs() < 2e-3,
            format!(
                "J={j}: omega=({:+.4}, {:+.4}) T2={:.2} g2max={:.4} (ref {g2max})",
                row.omega1, row.omega2, row.t2, row.g2_max
            ),
        );
    }
    let grow = rows[0].g2_max < rows[1].g2_max && rows[1].g2_max < rows[2].g2_max;
    let shrink = rows[4..].windows(2).all(|w| w[0].g2_max > w[1].g2_max);
    r.check(
        grow && shrink,
        "overshoot grows in the overdamped regime, shrinks in the underdamped".into(),
    );
    r
}

fn min_over_delta(f1: f64, coarse: &[f64]) -> (f64, f64, f64, f64) {
    // returns (delta_at_min, g2_min, n1, n2) over a coarse-then-fine grid
    let scan = |grid: &[f64]| -> Vec<Option<(f64, f64, f64)>> {
        let s = landscape_scan(
            &[f1],
            grid,
            0.4,
            0.05164,
            std::f64::consts::FRAC_PI_2,
            1.0,
            7,
            None,
        );
        let g22 = &s.columns[1].1;
        let n1 = &s.columns[3].1;
        let n2 = &s.columns[4].1;
        (0..grid.len())
            .map(|i| match (g22[i], n1[i], n2[i]) {
                (Some(g), Some(l1), Some(l2)) => Some((g, 10f64.powf(l1), 10f64.powf(l2))),
                _ => None,
            })
            .collect()
    };
    let vals = scan(coarse);
    let (mut best_i, mut best) = (0usize, f64::INFINITY);
    for (i, v) in vals.iter().enumerate() {
        if let Some((g, _, _)) = v {
            if *g < best {
                best = *g;
                best_i = i;
            }
        }
    }
    let center = coarse[best_i];
    let fine: Vec<f64> = (-6..=6).map(|k| center + k as f64 * 0.002).collect();
    let fvals = scan(&fine);
    let mut out = (center, best, 0.0, 0.0);
    let mut best_f = f64::INFINITY;
    for (i, v) in fvals.iter().enumerate() {
        if let Some((g, n1, n2)) = v {
            if *g < best_f {
                best_f = *g;
                out = (fine[i], *g, *n1, *n2);
            }
        }
    }
    out
}

/// Criterion 6: breakdown of the weak-drive approximation with increasing
/// drive amplitude.
pub fn c6_nojump_breakdown() -> CriterionReport {
    let mut r = CriterionReport::new("C6", "no-jump breakdown trend across drive amplitudes");
    let coarse: Vec<f64> = (-6..=20).map(|k| k as f64 * 0.01).collect();
    let (d1, g1, _, _) = min_over_delta(0.01, &coarse);
    let (d2, g2, _, _) = min_over_delta(0.17, &coarse);
    let (d3, g3, n1, n2) = min_over_delta(0.25, &coarse);
    r.check(
        g1 < g2 && g2 < g3,
        format!("min g2_22 strictly increases: {g1:.3e} < {g2:.3e} < {g3:.3e}"),
    );
    r.check(
        (g3 - 0.46).abs() <= 0.05,
        format!("min g2_22 at F1=0.25 is {g3:.3} (ref 0.46 +- 0.05)"),
    );
    r.check(
        (n1 - 0.30).abs() <= 0.03,
        format!("n1 at that point = {n1:.3} (ref 0.30 +- 0.03)"),
    );
    r.check(
        (n2 - 7e-3).abs() <= 1e-3,
        format!("n2 at that point = {n2:.2e} (ref 7e-3 +- 1e-3)"),
    );
    r.check(
        d3 < d2 && d2 < d1,
        format!("argmin redshifts: {d3:.3} < {d2:.3} < {d1:.3}"),
    );
    r
}

/// Criterion 7: Fock-cutoff convergence of the blockade figure of merit.
pub fn c7_cutoff_convergence() -> CriterionReport {
    let mut r = CriterionReport::new("C7", "cutoff convergence between n_cut = 7 and 15");
    let (params, drive) = locus_setup(0.4, 0.01);
    let g2_at = |n_cut: usize| -> f64 {
        let l = build_liouvillian_cw(&params, &drive, n_cut).expect("build");
        let rho = steady_state(&l).expect("steady state");
        correlators_equal_time(&rho, n_cut)
            .expect("correlators")
            .g2_22
            .expect("defined")
    };
    let a = g2_at(7);
    let b = g2_at(15);
    r.check(
        (a - b).abs() < 1e-6,
        format!("|g2_22(7) - g2_22(15)| = {:.3e} < 1e-6", (a - b).abs()),
    );
    r
}

/// Criterion 8: pulsed operation at the published settings.
pub fn c8_pulsed_run() -> CriterionReport {
    let mut r = CriterionReport::new("C8", "pulsed run: peak occupation and antibunching");
    let lp = locus_quadrature(0.4, 1.0).expect("locus");
    let params = DimerParams::symmetric(lp.delta_opt, lp.u_opt, 0.4, 1.0);
    let drive = DriveSpec::quadrature(0.05).with_pulse_sigma(10.0);
    let t: Vec<f64> = (0..=200).map(|i| -50.0 + i as f64 * 0.5).collect();
    let out = time_evolve_pulsed(&params, &drive, &t, 7).expect("pulsed run");
    let n2_peak = out.n2.iter().cloned().fold(0.0, f64::max);
    let n1_peak = out.n1.iter().cloned().fold(0.0, f64::max);
    r.check(
        (n2_peak - 0.012).abs() <= 0.002,
        format!("peak n2 = {n2_peak:.3e} (ref 0.012 +- 0.002)"),
    );
    if (n2_peak - 0.012).abs() > 0.002 {
        r.note(format!(
            "site 2 is brightest before the pulse (hopping-fed, n2 = {n2_peak:.2e}) \
             and is suppressed to n2 = {:.2e} at the peak by the quadrature pulse",
            out.n2_peak
        ));
        r.note(format!(
            "peak n1 = {n1_peak:.4} matches the published 0.012; site 2 cannot \
             exceed site 1 under quadrature drive (|r| < 1), and the published \
             detected-photon rate is consistent with the small n2, not with 0.012"
        ));
    }
    match out.g2_22_peak {
        Some(g) => r.check(g < 0.05, format!("g2_22(0) at pulse peak = {g:.3e} < 0.05")),
        None => r.check(false, "g2_22 undefined at pulse peak".into()),
    }
    r
}

/// Criterion 9: disorder tolerances and their ordering.
pub fn c9_disorder_tolerances() -> CriterionReport {
    let mut r = CriterionReport::new("C9", "disorder tolerance half-widths (25% band)");
    let grid: Vec<f64> = (-8..=8).map(|k| k as f64 * 0.01).collect();
    let (_, rep_d) = disorder_scan(DisorderAxis::Detuning, &grid, 0.1);
    let (_, rep_g) = disorder_scan(DisorderAxis::Gamma, &grid, 0.1);
    let (_, rep_u) = disorder_scan(DisorderAxis::Kerr, &grid, 0.1);
    for (rep, target) in [(&rep_d, 0.033), (&rep_g, 0.060), (&rep_u, 0.033)] {
        r.check(
            (rep.half_width - target).abs() / target <= 0.25,
            format!(
                "{}: half-width {:.4} (ref {target} +- 25%; one-sided {:.4}/{:.4})",
                rep.axis.label(),
                rep.half_width,
                rep.crossing_pos,
                rep.crossing_neg
            ),
        );
    }
    r.check(
        rep_g.half_width > rep_d.half_width && rep_g.half_width > rep_u.half_width,
        "loss-rate tolerance is the loosest".into(),
    );
    r.check(
        (rep_d.half_width - rep_u.half_width).abs() / rep_d.half_width < 0.25,
        "detuning and Kerr tolerances are comparable".into(),
    );
    r
}

/// Criterion 10: drive-parameter compensation of detuning disorder.
pub fn c10_compensation() -> CriterionReport {
    let mut r = CriterionReport::new("C10", "drive-parameter compensation");
    // phase-only tolerance: bisect the threshold crossing of the compensated g2
    let comp_g2 = |d: f64| -> f64 {
        compensate(d, CompensationMode::PhaseOnly)
            .expect("in range")
            .g2_min
    };
    let (mut lo, mut hi) = (0.15f64, 0.35f64);
    debug_assert!(comp_g2(lo) < 0.1 && comp_g2(hi) > 0.1);
    for _ in 0..20 {
        let mid = 0.5 * (lo + hi);
        if comp_g2(mid) < 0.1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let tol = 0.5 * (lo + hi);
    r.check(
        (tol - 0.26).abs() / 0.26 <= 0.25,
        format!("phase-only tolerance = {tol:.3} gamma (ref 0.26 +- 25%)"),
    );
    // full compensation across the scanned range
    let mut worst: f64 = 0.0;
    for k in -8..=8 {
        let d = k as f64 * 0.05;
        let res = compensate(d, CompensationMode::PhaseAndRatio).expect("in range");
        worst = worst.max(res.g2_min);
    }
    r.check(
        worst < 1e-10,
        format!("phase+ratio g2_min <= {worst:.2e} across |mismatch| <= 0.4 gamma"),
    );
    // slope of the compensating phase near the origin
    let plus = compensate(0.1f64, CompensationMode::PhaseOnly).expect("in range");
    let minus = compensate(-0.1, CompensationMode::PhaseOnly).expect("in range");
    let slope = (plus.phi_opt - minus.phi_opt).to_degrees().abs() / 2.0;
    r.check(
        (slope - 15.0).abs() / 15.0 <= 0.30,
        format!("phase slope = {slope:.2} deg per 0.1 gamma (ref 15 +- 30%)"),
    );
    if (slope - 15.0).abs() / 15.0 > 0.30 {
        r.note(
            "under the mean-preserving mismatch split (which reproduces the \
             disorder table and the 0.26 gamma tolerance) the slope is ~7; a \
             one-sided split doubles it to ~14 but breaks the tolerance numbers"
                .into(),
        );
    }
    r
}

/// Criterion 11: crossover against the single-site-driven scheme.
pub fn c11_single_site_crossover() -> CriterionReport {
    let mut r = CriterionReport::new("C11", "single-site comparison and crossover");
    let below = single_site_comparison(&[0.5, 0.65, 0.70], 1.0).expect("grid");
    r.check(
        below.rows.iter().all(|row| row.u_single_site.is_none()),
        "no single-site solution below gamma/sqrt(2)".into(),
    );
    let js: Vec<f64> = (0..=10).map(|k| 0.75 + 0.05 * k as f64).collect();
    let cmp = single_site_comparison(&js, 1.0).expect("grid");
    match cmp.crossover {
        Some((jx, ux)) => {
            r.check(
                (jx - 0.96).abs() <= 0.03,
                format!("crossover at J = {jx:.4} (ref 0.96 +- 0.03)"),
            );
            r.check(
                (ux - 0.50).abs() <= 0.03,
                format!("crossover at U = {ux:.4} (ref 0.50 +- 0.03)"),
            );
        }
        None => r.check(false, "no crossover located on the grid".into()),
    }
    r
}

/// Criterion 12: structural invariants: state validity, dark-state markers,
/// deterministic output.
pub fn c12_invariants() -> CriterionReport {
    let mut r = CriterionReport::new("C12", "state validity, dark-state markers, determinism");
    // steady states across operating points validate
    for (j, f1) in [(0.4, 0.01), (0.4, 0.25), (0.8, 0.05)] {
        let (params, drive) = locus_setup(j, f1);
        let l = build_liouvillian_cw(&params, &drive, 7).expect("build");
        let rho = steady_state(&l).expect("steady state");
        r.check(
            rho.validate().is_ok(),
            format!("steady state at J={j}, F1={f1}: trace/Hermiticity/positivity"),
        );
    }
    // dark-state inputs produce undefined markers, not NaN
    let j = 0.8f64;
    let phi = analytic::dark_state_phase(j, 1.0).expect("above gamma/2");
    let delta = (j * j - 0.25).sqrt();
    let params = DimerParams::symmetric(delta, 0.0, j, 1.0);
    let drive = DriveSpec::bilateral(0.05, phi);
    let amps = analytic::amplitude_steady_state(&params, &drive).expect("solve");
    let g2 = analytic::g2_from_amplitudes(&amps);
    r.check(
        g2.g2_22.is_none() && g2.g2_12.is_none(),
        "analytic dark state returns undefined markers".into(),
    );
    let l = build_liouvillian_cw(&params, &drive, 5).expect("build");
    let rho = steady_state(&l).expect("steady state");
    let c = correlators_equal_time(&rho, 5).expect("correlators");
    r.check(
        c.g2_22.is_none() && c.n2 < 1e-13 && !c.n2.is_nan(),
        format!("numeric dark state: n2 = {:.2e}, g2_22 undefined", c.n2),
    );
    // CSV determinism across thread counts
    let phis: Vec<f64> = (1..=30).map(|k| (k as f64 * 5.5).to_radians()).collect();
    let csv_1 = crate::experiments::phase_locus_scan(&[0.3, 0.4], &phis, 1.0, Some(1)).to_csv(false);
    let csv_2 = crate::experiments::phase_locus_scan(&[0.3, 0.4], &phis, 1.0, Some(2)).to_csv(false);
    let csv_n = crate::experiments::phase_locus_scan(&[0.3, 0.4], &phis, 1.0, None).to_csv(false);
    r.check(
        csv_1 == csv_2 && csv_1 == csv_n,
        "scan CSV identical for 1, 2 and default thread counts".into(),
    );
    let f1s = vec![0.01, 0.05];
    let deltas = vec![0.0, 0.07746];
    let land_a: ScanResult<f64> = landscape_scan(
        &f1s,
        &deltas,
        0.4,
        0.05164,
        std::f64::consts::FRAC_PI_2,
        1.0,
        5,
        Some(1),
    );
    let land_b = landscape_scan(
        &f1s,
        &deltas,
        0.4,
        0.05164,
        std::f64::consts::FRAC_PI_2,
        1.0,
        5,
        Some(2),
    );
    r.check(
        land_a.to_csv(true) == land_b.to_csv(true),
        "landscape CSV identical across thread counts".into(),
    );
    r
}

/// Run the full suite in criterion order.
pub fn run_all() -> Vec<CriterionReport> {
    vec![
        c1_locus_table(),
        c2_phase_table(),
        c3_quadratic_identity(),
        c4_analytic_numeric_agreement(),
        c5_overshoot_table(),
        c6_nojump_breakdown(),
        c7_cutoff_convergence(),
        c8_pulsed_run(),
        c9_disorder_tolerances(),
        c10_compensation(),
        c11_single_site_crossover(),
        c12_invariants(),
    ]
}
