//! `upb`: reproduction front end for the bilaterally driven Kerr-dimer
//! photon-blockade toolkit. One subcommand per study; every run emits a
//! plot-ready CSV with a `#` comment block recording its parameters.

mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use config::{ConfigError, Grid, RunConfig};
use upb_core::analytic::{self, Method};
use upb_core::experiments::{
    self, CompensationMode, DisorderAxis,
};
use upb_core::lindblad;
use upb_core::params::Site;
use upb_core::scan::{format_full, ScanResult};
use upb_core::{DimerParams, DriveSpec};

#[derive(Parser)]
#[command(
    name = "upb",
    version,
    about = "Unconventional photon blockade in a symmetrically driven Kerr dimer",
    after_help = "All quantities are expressed in units of the loss rate gamma \
                  (or its chosen value); drive phases are given in degrees."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Inter-cavity hopping J
    #[arg(long = "J", global = true)]
    j: Option<f64>,
    /// On-site Kerr nonlinearity U
    #[arg(long = "U", global = true)]
    u: Option<f64>,
    /// Cavity-laser detuning Delta
    #[arg(long = "Delta", global = true)]
    delta: Option<f64>,
    /// Site-1 drive amplitude F1
    #[arg(long = "F1", global = true)]
    f1: Option<f64>,
    /// Drive phase of site 2, degrees
    #[arg(long, global = true)]
    phi: Option<f64>,
    /// Drive amplitude ratio |F2|/|F1|
    #[arg(long, global = true)]
    ratio: Option<f64>,
    /// Gaussian pulse width sigma (units 1/gamma)
    #[arg(long, global = true)]
    sigma: Option<f64>,
    /// Fock cutoff per site
    #[arg(long = "Ncut", global = true)]
    ncut: Option<usize>,
    /// Loss rate (the unit scale)
    #[arg(long, global = true)]
    gamma: Option<f64>,
    /// Output CSV path
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Config file (flat key-value with sections; flags take precedence)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form quadrature-drive locus (Delta_opt, U_opt) over J
    Locus,
    /// General-phase operating points over a phi grid
    PhaseScan,
    /// Delayed correlator g2(tau) at the operating point
    G2tau {
        #[arg(long, value_enum, default_value = "analytic")]
        method: MethodArg,
        /// Emitting site (1 or 2)
        #[arg(long, default_value = "2")]
        site: u8,
    },
    /// Full master-equation landscape over (F1, Delta)
    Landscape,
    /// Pulsed site-2 drive on top of the CW site-1 drive
    Pulsed,
    /// Disorder scan along one mismatch axis with tolerance extraction
    Disorder {
        #[arg(long, value_enum, default_value = "delta-delta")]
        axis: AxisArg,
        /// Antibunching threshold defining the tolerance
        #[arg(long, default_value = "0.1")]
        threshold: f64,
    },
    /// Drive-parameter compensation of detuning mismatch
    Compensate {
        #[arg(long, value_enum, default_value = "phase-and-ratio")]
        mode: ModeArg,
    },
    /// Peak overshoot of g2_22(tau) along the locus
    Overshoot,
    /// Bilateral vs single-site-driven Kerr requirement
    SingleSite,
    /// Quality factor and wavelength to decay rate and lifetime
    Convert {
        #[arg(long = "Q")]
        q: f64,
        #[arg(long = "lambda-nm")]
        lambda_nm: f64,
    },
    /// Run the full acceptance suite and print a pass/fail table
    Verify,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Analytic,
    Numeric,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum AxisArg {
    DeltaDelta,
    DeltaGamma,
    DeltaU,
}

impl AxisArg {
    fn to_axis(self) -> DisorderAxis {
        match self {
            AxisArg::DeltaDelta => DisorderAxis::Detuning,
            AxisArg::DeltaGamma => DisorderAxis::Gamma,
            AxisArg::DeltaU => DisorderAxis::Kerr,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    PhaseOnly,
    PhaseAndRatio,
}

enum CliError {
    Config(String),
    Output(String),
    Run(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 3,
            CliError::Output(_) => 4,
            CliError::Run(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Output(m) | CliError::Run(m) => m,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<upb_core::Error> for CliError {
    fn from(e: upb_core::Error) -> Self {
        CliError::Run(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn resolve_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.config {
        cfg.apply_file(path)?;
    }
    // flags override file values
    if let Some(v) = cli.j {
        cfg.params.hopping = v;
    }
    if let Some(v) = cli.u {
        cfg.params.kerr = v;
        cfg.explicit_u = true;
    }
    if let Some(v) = cli.delta {
        cfg.params.detuning = v;
        cfg.explicit_delta = true;
    }
    if let Some(v) = cli.gamma {
        cfg.params.gamma = v;
    }
    if let Some(v) = cli.f1 {
        cfg.drive.f1 = v;
    }
    if let Some(v) = cli.phi {
        cfg.drive.phi = v.to_radians();
    }
    if let Some(v) = cli.ratio {
        cfg.drive.ratio = v;
    }
    if let Some(v) = cli.sigma {
        cfg.drive.pulse_sigma = Some(v);
    }
    if let Some(v) = cli.ncut {
        cfg.n_cut = v;
    }
    if let Some(v) = &cli.out {
        cfg.out = Some(v.display().to_string());
    }
    match std::env::var("UPB_THREADS") {
        Ok(v) => {
            let t: usize = v
                .parse()
                .map_err(|_| CliError::Config(format!("UPB_THREADS must be an integer, got {v:?}")))?;
            cfg.threads = Some(t.max(1));
        }
        Err(_) => cfg.threads = None,
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write_output(cfg: &RunConfig, default_name: &str, text: &str) -> Result<(), CliError> {
    let path = cfg.out.clone().unwrap_or_else(|| default_name.to_owned());
    std::fs::write(&path, text)
        .map_err(|e| CliError::Output(format!("cannot write {path}: {e}")))?;
    println!("wrote {path}");
    Ok(())
}

fn derived_output(cfg: &RunConfig, default_name: &str, suffix: &str) -> String {
    let base = cfg.out.clone().unwrap_or_else(|| default_name.to_owned());
    match base.rsplit_once('.') {
        Some((stem, ext)) => format!("{stem}_{suffix}.{ext}"),
        None => format!("{base}_{suffix}"),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = resolve_config(&cli)?;
    match cli.command {
        Command::Locus => cmd_locus(&cfg),
        Command::PhaseScan => cmd_phase_scan(&cfg),
        Command::G2tau { method, site } => cmd_g2tau(&cfg, method, site),
        Command::Landscape => cmd_landscape(&cfg),
        Command::Pulsed => cmd_pulsed(&cfg),
        Command::Disorder { axis, threshold } => cmd_disorder(&cfg, axis.to_axis(), threshold),
        Command::Compensate { mode } => cmd_compensate(&cfg, mode),
        Command::Overshoot => cmd_overshoot(&cfg),
        Command::SingleSite => cmd_single_site(&cfg),
        Command::Convert { q, lambda_nm } => cmd_convert(q, lambda_nm),
        Command::Verify => cmd_verify(),
    }
}

/// Operating point from the config: explicit (U, Delta) values win,
/// otherwise the quadrature locus at the configured J.
fn operating_point(cfg: &RunConfig) -> Result<DimerParams<f64>, CliError> {
    let mut params = cfg.params;
    if !(cfg.explicit_u && cfg.explicit_delta) {
        let lp = analytic::locus_quadrature(params.hopping, params.gamma)?;
        if !cfg.explicit_u {
            params.kerr = lp.u_opt;
        }
        if !cfg.explicit_delta {
            params.detuning = lp.delta_opt;
        }
    }
    Ok(params)
}

fn cmd_locus(cfg: &RunConfig) -> Result<(), CliError> {
    let j_grid = cfg.grid_or(
        "J",
        Grid {
            start: cfg.params.hopping,
            stop: cfg.params.hopping,
            count: 1,
        },
    );
    let gamma = cfg.params.gamma;
    let mut delta = Vec::new();
    let mut u = Vec::new();
    let mut u_over_j = Vec::new();
    let mut dark = Vec::new();
    for &j in &j_grid {
        match analytic::locus_quadrature(j, gamma) {
            Ok(lp) => {
                delta.push(Some(lp.delta_opt));
                u.push(Some(lp.u_opt));
                u_over_j.push(Some(lp.u_opt / j));
                dark.push(Some(if lp.dark_state_boundary { 1.0 } else { 0.0 }));
            }
            Err(_) => {
                delta.push(None);
                u.push(None);
                u_over_j.push(None);
                dark.push(None);
            }
        }
    }
    let scan = ScanResult {
        axes: vec![("J".into(), j_grid)],
        columns: vec![
            ("U_opt".into(), u),
            ("U_over_J".into(), u_over_j),
            ("Delta_opt".into(), delta),
            ("dark_state_boundary".into(), dark),
        ],
        meta: vec![("gamma".into(), format!("{gamma}"))],
        method: Method::Analytic,
        timestamp: None,
    };
    write_output(cfg, "locus.csv", &scan.to_csv(true))
}

fn cmd_phase_scan(cfg: &RunConfig) -> Result<(), CliError> {
    let phi_deg = cfg.grid_or(
        "phi",
        Grid {
            start: 2.0,
            stop: 178.0,
            count: 353,
        },
    );
    let phi_rad: Vec<f64> = phi_deg.iter().map(|p| p.to_radians()).collect();
    let scan = experiments::phase_locus_scan(
        &[cfg.params.hopping],
        &phi_rad,
        cfg.params.gamma,
        cfg.threads,
    );
    write_output(cfg, "phase_scan.csv", &scan.to_csv(true))
}

fn cmd_g2tau(cfg: &RunConfig, method: MethodArg, site: u8) -> Result<(), CliError> {
    let site = match site {
        1 => Site::One,
        2 => Site::Two,
        other => return Err(CliError::Config(format!("site must be 1 or 2, got {other}"))),
    };
    let params = operating_point(cfg)?;
    let drive = DriveSpec {
        pulse_sigma: None,
        ..cfg.drive
    };
    let tau = cfg.grid_or(
        "tau",
        Grid {
            start: 0.0,
            stop: 10.0,
            count: 400,
        },
    );
    let mut columns: Vec<(String, Vec<Option<f64>>)> = Vec::new();
    let mut analytic_series = None;
    let mut numeric_series = None;
    if matches!(method, MethodArg::Analytic | MethodArg::Both) {
        let s = analytic::qrt_g2_tau(&params, &drive, site, &tau)?;
        columns.push((
            format!("g2_{0}{0}_analytic", site.index() + 1),
            s.values.iter().map(|&v| Some(v)).collect(),
        ));
        analytic_series = Some(s);
    }
    if matches!(method, MethodArg::Numeric | MethodArg::Both) {
        let s = lindblad::g2_tau_numeric(&params, &drive, (site, site), &tau, cfg.n_cut)?;
        columns.push((
            format!("g2_{0}{0}_numeric", site.index() + 1),
            s.values.iter().map(|&v| Some(v)).collect(),
        ));
        numeric_series = Some(s);
    }
    if let (Some(a), Some(n)) = (&analytic_series, &numeric_series) {
        let worst = a
            .values
            .iter()
            .zip(&n.values)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        println!("max |analytic - numeric| = {worst:.3e}");
    }
    let mut meta = vec![
        ("J".into(), format!("{}", params.hopping)),
        ("U".into(), format!("{}", params.kerr)),
        ("Delta".into(), format!("{}", params.detuning)),
        ("gamma".into(), format!("{}", params.gamma)),
        ("F1".into(), format!("{}", drive.f1)),
        ("phi_deg".into(), format!("{}", drive.phi.to_degrees())),
        ("ratio".into(), format!("{}", drive.ratio)),
        ("site".into(), format!("{}", site.index() + 1)),
    ];
    if matches!(method, MethodArg::Numeric | MethodArg::Both) {
        meta.push(("Ncut".into(), format!("{}", cfg.n_cut)));
    }
    let scan = ScanResult {
        axes: vec![("tau".into(), tau)],
        columns,
        meta,
        method: match method {
            MethodArg::Analytic => Method::Analytic,
            _ => Method::Numeric,
        },
        timestamp: None,
    };
    write_output(cfg, "g2tau.csv", &scan.to_csv(true))
}

fn cmd_landscape(cfg: &RunConfig) -> Result<(), CliError> {
    let params = operating_point(cfg)?;
    let f1 = cfg.grid_or(
        "F1",
        Grid {
            start: 0.01,
            stop: 0.25,
            count: 25,
        },
    );
    let delta = cfg.grid_or(
        "Delta",
        Grid {
            start: -0.1,
            stop: 0.2,
            count: 31,
        },
    );
    if !f1.iter().all(|&v| v <= 0.3 * params.gamma) {
        return Err(CliError::Config(
            "landscape drive amplitudes above 0.3 gamma exceed the cutoff safety margin".into(),
        ));
    }
    let scan = experiments::landscape_scan(
        &f1,
        &delta,
        params.hopping,
        params.kerr,
        cfg.drive.phi,
        params.gamma,
        cfg.n_cut,
        cfg.threads,
    );
    write_output(cfg, "landscape.csv", &scan.to_csv(true))
}

fn cmd_pulsed(cfg: &RunConfig) -> Result<(), CliError> {
    let params = operating_point(cfg)?;
    let mut drive = cfg.drive;
    if drive.pulse_sigma.is_none() {
        drive.pulse_sigma = Some(10.0);
    }
    let sigma = drive.pulse_sigma.unwrap();
    let t = cfg.grid_or(
        "t",
        Grid {
            start: -5.0 * sigma,
            stop: 5.0 * sigma,
            count: 201,
        },
    );
    let out = lindblad::time_evolve_pulsed(&params, &drive, &t, cfg.n_cut)?;
    println!(
        "pulse peak: n1 = {:.6e}, n2 = {:.6e}, g2_22(0) = {}",
        out.n1_peak,
        out.n2_peak,
        out.g2_22_peak
            .map(|g| format!("{g:.6e}"))
            .unwrap_or_else(|| "undefined".into()),
    );
    let mut meta = vec![
        ("J".into(), format!("{}", params.hopping)),
        ("U".into(), format!("{}", params.kerr)),
        ("Delta".into(), format!("{}", params.detuning)),
        ("gamma".into(), format!("{}", params.gamma)),
        ("F1".into(), format!("{}", drive.f1)),
        ("phi_deg".into(), format!("{}", drive.phi.to_degrees())),
        ("ratio".into(), format!("{}", drive.ratio)),
        ("Ncut".into(), format!("{}", cfg.n_cut)),
    ];
    meta.push(("sigma".into(), format!("{sigma}")));
    let scan = ScanResult {
        axes: vec![("t".into(), out.t.clone())],
        columns: vec![
            ("n1".into(), out.n1.iter().map(|&v| Some(v)).collect()),
            ("n2".into(), out.n2.iter().map(|&v| Some(v)).collect()),
            (
                "envelope".into(),
                out.envelope.iter().map(|&v| Some(v)).collect(),
            ),
        ],
        meta: meta.clone(),
        method: Method::Numeric,
        timestamp: None,
    };
    write_output(cfg, "pulsed.csv", &scan.to_csv(true))?;
    // companion file: the conditioned correlator referenced to the peak
    let g2 = ScanResult {
        axes: vec![("tau".into(), out.g2_tau.tau.clone())],
        columns: vec![(
            "g2_22".into(),
            out.g2_tau.values.iter().map(|&v| Some(v)).collect(),
        )],
        meta,
        method: Method::Numeric,
        timestamp: None,
    };
    let path = derived_output(cfg, "pulsed.csv", "g2tau");
    std::fs::write(&path, g2.to_csv(true))
        .map_err(|e| CliError::Output(format!("cannot write {path}: {e}")))?;
    println!("wrote {path}");
    Ok(())
}

fn cmd_disorder(cfg: &RunConfig, axis: DisorderAxis, threshold: f64) -> Result<(), CliError> {
    let grid = cfg.grid_or(
        "mismatch",
        Grid {
            start: -0.08,
            stop: 0.08,
            count: 33,
        },
    );
    let (mut scan, report) = experiments::disorder_scan(axis, &grid, threshold);
    scan.meta.push((
        "half_width".into(),
        format_full(report.half_width),
    ));
    scan.meta.push((
        "crossing_pos".into(),
        format_full(report.crossing_pos),
    ));
    scan.meta.push((
        "crossing_neg".into(),
        format_full(report.crossing_neg),
    ));
    println!(
        "{}: tolerance half-width {:.4} gamma (crossings {:+.4} / {:-.4})",
        axis.label(),
        report.half_width,
        report.crossing_pos,
        -report.crossing_neg
    );
    write_output(cfg, "disorder.csv", &scan.to_csv(true))
}

fn cmd_compensate(cfg: &RunConfig, mode: ModeArg) -> Result<(), CliError> {
    let mode = match mode {
        ModeArg::PhaseOnly => CompensationMode::PhaseOnly,
        ModeArg::PhaseAndRatio => CompensationMode::PhaseAndRatio,
    };
    let grid = cfg.grid_or(
        "mismatch",
        Grid {
            start: -0.4,
            stop: 0.4,
            count: 17,
        },
    );
    let mut phi = Vec::new();
    let mut ratio = Vec::new();
    let mut g2 = Vec::new();
    let mut g2_fixed = Vec::new();
    for &d in &grid {
        let r = experiments::compensate(d, mode)?;
        phi.push(Some(r.phi_opt.to_degrees()));
        ratio.push(Some(r.ratio_opt));
        g2.push(Some(r.g2_min));
        // uncompensated reference at the same mismatch
        let (nominal, drive) = experiments::disorder_nominal::<f64>();
        let mut p = nominal;
        p.detuning_mismatch = d;
        let fixed = analytic::amplitude_steady_state(&p, &drive)
            .ok()
            .and_then(|a| analytic::g2_from_amplitudes(&a).g2_22);
        g2_fixed.push(fixed);
    }
    let scan = ScanResult {
        axes: vec![("delta_Delta".into(), grid)],
        columns: vec![
            ("phi_opt_deg".into(), phi),
            ("ratio_opt".into(), ratio),
            ("g2_min".into(), g2),
            ("g2_uncompensated".into(), g2_fixed),
        ],
        meta: vec![(
            "mode".into(),
            match mode {
                CompensationMode::PhaseOnly => "phase_only".into(),
                CompensationMode::PhaseAndRatio => "phase_and_ratio".into(),
            },
        )],
        method: Method::Analytic,
        timestamp: None,
    };
    write_output(cfg, "compensate.csv", &scan.to_csv(true))
}

fn cmd_overshoot(cfg: &RunConfig) -> Result<(), CliError> {
    let j_grid = cfg.grids.get("J").map(|g| g.values()).unwrap_or_else(|| {
        vec![0.26, 0.30, 0.40, 0.55, 0.60, 0.70, 0.80, 0.90, 1.00]
    });
    let rows = experiments::overshoot_scan(&j_grid, cfg.params.gamma)?;
    let col = |f: &dyn Fn(&experiments::OvershootRow<f64>) -> f64| -> Vec<Option<f64>> {
        rows.iter().map(|r| Some(f(r))).collect()
    };
    let scan = ScanResult {
        axes: vec![("J".into(), j_grid)],
        columns: vec![
            ("Delta_opt".into(), col(&|r| r.delta_opt)),
            ("U_opt".into(), col(&|r| r.u_opt)),
            ("omega1".into(), col(&|r| r.omega1)),
            ("omega2".into(), col(&|r| r.omega2)),
            ("T2".into(), col(&|r| r.t2)),
            ("g2_max".into(), col(&|r| r.g2_max)),
        ],
        meta: vec![("gamma".into(), format!("{}", cfg.params.gamma))],
        method: Method::Analytic,
        timestamp: None,
    };
    write_output(cfg, "overshoot.csv", &scan.to_csv(true))
}

fn cmd_single_site(cfg: &RunConfig) -> Result<(), CliError> {
    let j_grid = cfg.grid_or(
        "J",
        Grid {
            start: 0.75,
            stop: 1.25,
            count: 11,
        },
    );
    let cmp = experiments::single_site_comparison(&j_grid, cfg.params.gamma)?;
    let mut meta = vec![("gamma".into(), format!("{}", cfg.params.gamma))];
    match cmp.crossover {
        Some((jx, ux)) => {
            println!("curves cross at J = {jx:.4}, U = {ux:.4}");
            meta.push(("crossover_J".into(), format_full(jx)));
            meta.push(("crossover_U".into(), format_full(ux)));
        }
        None => println!("no crossover inside the scanned J range"),
    }
    let scan = ScanResult {
        axes: vec![("J".into(), j_grid)],
        columns: vec![
            (
                "U_bilateral".into(),
                cmp.rows.iter().map(|r| Some(r.u_bilateral)).collect(),
            ),
            (
                "U_single_site".into(),
                cmp.rows.iter().map(|r| r.u_single_site).collect(),
            ),
            (
                "Delta_single_site".into(),
                cmp.rows.iter().map(|r| r.delta_single_site).collect(),
            ),
        ],
        meta,
        method: Method::Analytic,
        timestamp: None,
    };
    write_output(cfg, "single_site.csv", &scan.to_csv(true))
}

fn cmd_convert(q: f64, lambda_nm: f64) -> Result<(), CliError> {
    let c = experiments::unit_convert(q, lambda_nm)?;
    println!(
        "Q = {q:.3e}, lambda = {lambda_nm} nm: gamma = {:.4} GHz (angular), lifetime 1/gamma = {:.4} ps",
        c.gamma_ghz, c.lifetime_ps
    );
    Ok(())
}

fn cmd_verify() -> Result<(), CliError> {
    let reports = upb_core::acceptance::run_all();
    let mut all_ok = true;
    for r in &reports {
        println!("{}", r.summary_line());
        for line in &r.details {
            println!("    {line}");
        }
        all_ok &= r.passed;
    }
    let passed = reports.iter().filter(|r| r.passed).count();
    println!("{passed}/{} criteria passed", reports.len());
    if all_ok {
        Ok(())
    } else {
        Err(CliError::Run("acceptance suite has failing criteria".into()))
    }
}
