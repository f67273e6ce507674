//! End-to-end checks of the command-line surface: exit codes, CSV format,
//! round-trip precision, and deterministic output.

use std::path::PathBuf;
use std::process::Command;

fn upb() -> Command {
    Command::new(env!("CARGO_BIN_EXE_upb"))
}

fn workdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("upb-cli-tests").join(name);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<Option<f64>>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<String> = lines
        .next()
        .unwrap()
        .split(',')
        .map(str::to_owned)
        .collect();
    let rows = lines
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.split(',')
                .map(|f| (!f.is_empty()).then(|| f.parse::<f64>().unwrap()))
                .collect()
        })
        .collect();
    (header, rows)
}

fn column<'a>(header: &[String], rows: &'a [Vec<Option<f64>>], name: &str) -> Vec<Option<f64>> {
    let idx = header.iter().position(|h| h == name).unwrap_or_else(|| {
        panic!("column {name} missing from {header:?}")
    });
    rows.iter().map(|r| r[idx]).collect()
}

#[test]
fn locus_row_matches_published_values() {
    let out = workdir("locus").join("locus.csv");
    let status = upb()
        .args(["locus", "--J", "0.4", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("# "), "comment block expected");
    assert!(!text.contains('\r'));
    let (header, rows) = parse_csv(&text);
    assert_eq!(rows.len(), 1);
    let u = column(&header, &rows, "U_opt")[0].unwrap();
    let u_over_j = column(&header, &rows, "U_over_J")[0].unwrap();
    let delta = column(&header, &rows, "Delta_opt")[0].unwrap();
    assert!((u - 0.052).abs() < 1e-3);
    assert!((u_over_j - 0.129).abs() < 1e-3);
    assert!((delta - 0.077).abs() < 1e-3);
}

#[test]
fn csv_roundtrips_at_full_precision() {
    let out = workdir("roundtrip").join("locus.csv");
    let status = upb()
        .args(["locus", "--J", "0.7321", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let (header, rows) = parse_csv(&std::fs::read_to_string(&out).unwrap());
    // recompute in-process: printed values must parse back bit-exactly
    let lp = upb_core::analytic::locus_quadrature(0.7321f64, 1.0).unwrap();
    assert_eq!(column(&header, &rows, "U_opt")[0], Some(lp.u_opt));
    assert_eq!(column(&header, &rows, "Delta_opt")[0], Some(lp.delta_opt));
    assert_eq!(
        column(&header, &rows, "U_over_J")[0],
        Some(lp.u_opt / 0.7321)
    );
}

#[test]
fn unknown_subcommand_exits_2() {
    let status = upb().arg("frobnicate").output().unwrap();
    assert_eq!(status.status.code(), Some(2));
}

#[test]
fn malformed_config_exits_3() {
    let dir = workdir("badcfg");
    let cfg = dir.join("bad.cfg");
    std::fs::write(&cfg, "[params]\nnot_a_key = 1\n").unwrap();
    let status = upb()
        .args(["locus", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(3));

    let cfg2 = dir.join("badgrid.cfg");
    std::fs::write(&cfg2, "[grids]\nJ = 1:0:5\n").unwrap();
    let status = upb()
        .args(["locus", "--config"])
        .arg(&cfg2)
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(3));
}

#[test]
fn unwritable_output_exits_4() {
    let status = upb()
        .args(["locus", "--J", "0.4", "--out", "/nonexistent-dir/x.csv"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(4));
}

#[test]
fn gamma_flag_scales_results() {
    // the locus scales linearly with gamma
    let dir = workdir("gamma");
    let a = dir.join("a.csv");
    let b = dir.join("b.csv");
    assert!(upb()
        .args(["locus", "--J", "0.8", "--gamma", "2.0", "--out"])
        .arg(&a)
        .status()
        .unwrap()
        .success());
    assert!(upb()
        .args(["locus", "--J", "0.4", "--gamma", "1.0", "--out"])
        .arg(&b)
        .status()
        .unwrap()
        .success());
    let (ha, ra) = parse_csv(&std::fs::read_to_string(&a).unwrap());
    let (hb, rb) = parse_csv(&std::fs::read_to_string(&b).unwrap());
    let ua = column(&ha, &ra, "U_opt")[0].unwrap();
    let ub = column(&hb, &rb, "U_opt")[0].unwrap();
    assert!((ua - 2.0 * ub).abs() < 1e-14);
}

#[test]
fn g2tau_both_methods_agree() {
    let dir = workdir("g2tau");
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, "[grids]\ntau = 0:6:61\n[numerics]\nNcut = 6\n").unwrap();
    let out = dir.join("g2tau.csv");
    let status = upb()
        .args(["g2tau", "--J", "0.4", "--F1", "0.01", "--method", "both", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let (header, rows) = parse_csv(&std::fs::read_to_string(&out).unwrap());
    let analytic = column(&header, &rows, "g2_22_analytic");
    let numeric = column(&header, &rows, "g2_22_numeric");
    let worst = analytic
        .iter()
        .zip(&numeric)
        .map(|(a, n)| (a.unwrap() - n.unwrap()).abs())
        .fold(0.0, f64::max);
    assert!(worst < 0.01, "max |analytic - numeric| = {worst}");
    // starts antibunched, ends Poissonian
    assert!(numeric[0].unwrap() < 0.01);
    assert!((numeric.last().unwrap().unwrap() - 1.0).abs() < 0.1);
}

#[test]
fn phase_scan_marks_nonexistent_solutions() {
    let dir = workdir("phase");
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, "[grids]\nphi = 10:170:17\n").unwrap();
    let out = dir.join("phase.csv");
    assert!(upb()
        .args(["phase-scan", "--J", "0.4", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap()
        .success());
    let (header, rows) = parse_csv(&std::fs::read_to_string(&out).unwrap());
    let u = column(&header, &rows, "U_opt");
    let phi = column(&header, &rows, "phi_deg");
    // 10 and 20 degrees lie outside the existence window, 90 inside
    assert!(u[0].is_none() && phi[0] == Some(10.0));
    assert!(u[1].is_none());
    let idx90 = phi.iter().position(|&p| p == Some(90.0)).unwrap();
    let u90 = u[idx90].unwrap();
    assert!((u90 - 0.0516).abs() < 1e-3, "U at 90 deg = {u90}");
}

#[test]
fn scan_output_is_deterministic_across_thread_counts() {
    let dir = workdir("determinism");
    let cfg = dir.join("run.cfg");
    std::fs::write(
        &cfg,
        "[grids]\nF1 = 0.01:0.05:2\nDelta = 0.0:0.1:3\n[numerics]\nNcut = 4\n",
    )
    .unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "2"] {
        let out = dir.join(format!("land_{threads}.csv"));
        assert!(upb()
            .env("UPB_THREADS", threads)
            .args(["landscape", "--J", "0.4", "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(&out)
            .status()
            .unwrap()
            .success());
        outputs.push(std::fs::read_to_string(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1], "byte-identical CSV expected");
}

#[test]
fn invalid_threads_env_exits_3() {
    let status = upb()
        .env("UPB_THREADS", "many")
        .args(["locus", "--J", "0.4", "--out", "/tmp/upb-threads-test.csv"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(3));
}
