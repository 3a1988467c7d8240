use std::f64::consts::PI;
use std::fs;
use std::process::{Command, Output};

use dipchain::table::{Table, Value};

fn dipchain(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dipchain"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn table(args: &[&str]) -> Table {
    let out = dipchain(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    Table::read_csv(out.stdout.as_slice()).unwrap()
}

fn num(v: &Value) -> f64 {
    match v {
        Value::Int(i) => *i as f64,
        Value::Num(x) | Value::Fixed(x, _) => *x,
        Value::Text(s) => panic!("not a number: {s:?}"),
    }
}

fn col(t: &Table, name: &str) -> Vec<f64> {
    let i = t.column(name).unwrap_or_else(|| panic!("no column {name}"));
    t.rows.iter().map(|r| num(&r[i])).collect()
}

fn cell<'a>(t: &'a Table, row: usize, name: &str) -> &'a Value {
    &t.rows[row][t.column(name).unwrap()]
}

#[test]
fn amplitude_table_matches_published_numbers() {
    let t = table(&["amplitude-table", "--check"]);
    // Numerical end, next-to-end and mid-chain columns of the printed table.
    let published = [
        [0.902, 0.812, 0.806],
        [0.839, 0.668, 0.675],
        [0.801, 0.546, 0.581],
        [0.787, 0.425, 0.510],
        [0.817, 0.262, 0.454],
    ];
    assert_eq!(t.rows.len(), 5);
    for (r, want) in published.iter().enumerate() {
        for (name, w) in ["num_t1_full", "num_t2_full", "num_t0_full"]
            .iter()
            .zip(want)
        {
            assert!(
                (num(cell(&t, r, name)) - w).abs() <= 0.002,
                "row {r} {name}"
            );
        }
        assert_eq!(cell(&t, r, "check"), &Value::Text("pass".into()));
    }
    assert_eq!(cell(&t, 0, "one_t1").render(), "0.917");
    assert_eq!(cell(&t, 0, "one_t2").render(), "");
    assert_eq!(cell(&t, 0, "two_t2").render(), "0.817");
}

#[test]
fn amplitude_table_uncoupled_row() {
    let t = table(&["amplitude-table", "--coupling", "0", "--n-atoms", "40"]);
    for name in [
        "one_t1", "one_t0", "two_t1", "two_t2", "two_t0", "num_t1", "num_t2", "num_t0",
    ] {
        assert_eq!(cell(&t, 0, name).render(), "1.000", "{name}");
    }
    assert!(t.column("check").is_none());
}

#[test]
fn failed_check_exits_3_and_still_writes() {
    let out = dipchain(&[
        "amplitude-table",
        "--check",
        "--coupling",
        "0.5",
        "--wavelength-nm",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let t = Table::read_csv(out.stdout.as_slice()).unwrap();
    assert_eq!(cell(&t, 0, "check"), &Value::Text("fail".into()));
    assert!(String::from_utf8_lossy(&out.stderr).contains("golden check failed"));
}

#[test]
fn uncoupled_mode_profile_is_free_field() {
    let theta = 60.0_f64.to_radians();
    let t = table(&[
        "mode-profile",
        "--coupling",
        "0",
        "--n-atoms",
        "25",
        "--wavelength-nm",
        "50",
        "--theta",
        "60deg",
    ]);
    let k = 2.0 * PI / 50.0;
    let z = col(&t, "z_nm");
    let (re, im) = (col(&t, "re_fy"), col(&t, "im_fy"));
    for j in 0..25 {
        let phase = k * theta.cos() * z[j];
        assert!((re[j] - phase.cos()).abs() < 1e-13);
        assert!((im[j] - phase.sin()).abs() < 1e-13);
    }
    assert_eq!(z[0], 0.0);
    assert_eq!(z[24], -24.0);
}

#[test]
fn mode_profile_plateau_and_end_oscillation() {
    let t = table(&["mode-profile", "--coupling", "0.4"]);
    let re = col(&t, "re_fy");
    let im = col(&t, "im_fy");
    let mag: Vec<f64> = re.iter().zip(&im).map(|(a, b)| a.hypot(*b)).collect();
    assert_eq!(mag.len(), 629);
    assert!((mag[314] - 0.510).abs() < 0.002);
    let interior = &mag[10..619];
    let spread = interior.iter().cloned().fold(f64::MIN, f64::max)
        - interior.iter().cloned().fold(f64::MAX, f64::min);
    let edge = mag[..5]
        .iter()
        .map(|m| (m - mag[314]).abs())
        .fold(0.0, f64::max);
    assert!(edge > 10.0 * spread);
}

#[test]
fn csv_round_trip_is_byte_identical() {
    for args in [
        &["mode-profile", "--coupling", "0.1,0.3", "--n-atoms", "30"][..],
        &["amplitude-table", "--check"][..],
        &["rotation-curve", "--steps", "7"][..],
    ] {
        let out = dipchain(args);
        assert!(out.status.success());
        let back = Table::read_csv(out.stdout.as_slice()).unwrap();
        let mut again = Vec::new();
        back.write_csv(&mut again).unwrap();
        assert_eq!(again, out.stdout, "{args:?}");
    }
}

#[test]
fn output_is_deterministic() {
    let args = [
        "lifetime-profile",
        "--coupling",
        "0.5,0.1,0.3,0.2",
        "--n-atoms",
        "120",
    ];
    let a = dipchain(&args);
    let b = dipchain(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let t = Table::read_csv(a.stdout.as_slice()).unwrap();
    let c = col(&t, "coupling");
    assert!(c.windows(2).all(|w| w[0] <= w[1]));
    assert_eq!(t.meta("couplings"), Some("0.1,0.2,0.3,0.5"));
}

#[test]
fn lifetime_profile_values() {
    let t = table(&[
        "lifetime-profile",
        "--coupling",
        "0,0.1",
        "--free-lifetime",
        "16",
    ]);
    let c = col(&t, "coupling");
    let lt = col(&t, "lifetime_ratio");
    let abs = col(&t, "lifetime");
    for i in 0..629 {
        assert_eq!(c[i], 0.0);
        assert!((lt[i] - 1.0).abs() < 1e-12);
    }
    // Mid-chain at C = 0.1: 1 / 0.806^2.
    assert!((lt[629 + 314] - 1.0 / (0.806 * 0.806)).abs() < 0.005);
    assert!(lt[629] < lt[629 + 314]);
    assert!((abs[629 + 314] - 16.0 * lt[629 + 314]).abs() < 1e-12);
    let shift = col(&t, "shift_ratio");
    let rate = col(&t, "rate_ratio");
    assert_eq!(shift, rate);
}

#[test]
fn rotation_curve_endpoints() {
    let t = table(&[
        "rotation-curve",
        "--start",
        "0deg",
        "--end",
        "90deg",
        "--steps",
        "181",
    ]);
    let g = col(&t, "gamma_deg");
    assert!((g[0] - 180.0).abs() < 1e-9);
    assert!(g[180].abs() < 1e-9);
    assert!(g.windows(2).all(|w| w[1] <= w[0]));
    assert!(col(&t, "r").iter().all(|r| *r == -2.0));
    let t = table(&[
        "rotation-curve",
        "--start",
        "54.7356deg",
        "--end",
        "54.7356deg",
        "--steps",
        "1",
    ]);
    assert!((col(&t, "gamma_deg")[0] - 90.0).abs() < 1e-4);
}

#[test]
fn angular_pattern_scaling_and_closure() {
    let t = table(&[
        "angular-pattern",
        "--coupling",
        "0,0.1",
        "--polar-steps",
        "7",
        "--azimuth-steps",
        "8",
    ]);
    let c = col(&t, "coupling");
    let inside = col(&t, "in_chain");
    let free = col(&t, "free_space");
    assert_eq!(inside.len(), 2 * 7 * 8);
    for i in 0..inside.len() {
        if c[i] == 0.0 {
            assert_eq!(inside[i], free[i]);
        } else {
            assert!((inside[i] - 0.6496 * free[i]).abs() <= 0.001 * free[i] + 1e-15);
        }
    }
    let rate: f64 = t.meta("rate_ratio@0.1").unwrap().parse().unwrap();
    let integral: f64 = t
        .meta("sphere_integral_over_8pi_3@0.1")
        .unwrap()
        .parse()
        .unwrap();
    assert!((integral - rate).abs() < 1e-6);
    assert!(t.meta("gamma_deg@0.1").is_some());
    assert!(t.meta("pattern_scale@0").is_some());
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    fs::write(
        &cfg,
        "# chain\nn-atoms = 12\ncoupling = 0.2, 0.1\ntheta-d = 0deg\nformat = json\n",
    )
    .unwrap();
    let path = cfg.to_str().unwrap();
    let out = dipchain(&["lifetime-profile", "--config", path]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["command"], "lifetime-profile");
    assert_eq!(v["rows"].as_array().unwrap().len(), 24);
    assert_eq!(v["meta"]["theta_d_rad"], "0");
    let width = v["columns"].as_array().unwrap().len();
    assert!(v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r.as_array().unwrap().len() == width));

    let out = dipchain(&[
        "lifetime-profile",
        "--config",
        path,
        "--n-atoms",
        "5",
        "--format",
        "csv",
    ]);
    let t = Table::read_csv(out.stdout.as_slice()).unwrap();
    assert_eq!(t.rows.len(), 10);

    fs::write(&cfg, "atoms = 5\n").unwrap();
    assert_eq!(
        dipchain(&["lifetime-profile", "--config", path])
            .status
            .code(),
        Some(1)
    );
    let missing = dir.path().join("absent.conf");
    let out = dipchain(&["lifetime-profile", "--config", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.csv");
    let out = dipchain(&[
        "rotation-curve",
        "--steps",
        "3",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# command=rotation-curve\n"));
    assert!(text.contains("\ncoupling,r,theta_d_deg,theta_d_rad,cos_gamma,gamma_deg,gamma_rad\n"));
}

#[test]
fn invalid_configuration_exits_1() {
    for args in [
        &["lifetime-profile", "--theta-d", "90"][..],
        &["lifetime-profile", "--coupling", "-0.2"][..],
        &["lifetime-profile", "--relax", "2.5"][..],
        &["angular-pattern", "--n-atoms", "10", "--atom", "11"][..],
        &["mode-profile", "--format", "xml"][..],
        &["no-such-command"][..],
    ] {
        let out = dipchain(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn solver_failure_exits_2() {
    // Two atoms on the static longitudinal resonance 2C = 1.
    let out = dipchain(&[
        "lifetime-profile",
        "--n-atoms",
        "2",
        "--wavelength-nm",
        "1e12",
        "--coupling",
        "0.5",
        "--z-mode",
        "equation",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("rows: 0"));
}

#[test]
fn nonconvergent_iteration_falls_back_to_direct() {
    let t = table(&[
        "lifetime-profile",
        "--coupling",
        "0.5",
        "--n-atoms",
        "60",
        "--z-mode",
        "equation",
        "--solver",
        "gauss-seidel",
    ]);
    assert!(t
        .meta("notes")
        .unwrap()
        .contains("retried with the direct solver"));
    let direct = table(&[
        "lifetime-profile",
        "--coupling",
        "0.5",
        "--n-atoms",
        "60",
        "--z-mode",
        "equation",
    ]);
    let (a, b) = (col(&t, "lifetime_ratio"), col(&direct, "lifetime_ratio"));
    assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-9));
}

#[test]
fn large_retardation_is_flagged() {
    let t = table(&[
        "mode-profile",
        "--n-atoms",
        "5",
        "--wavelength-nm",
        "20",
        "--coupling",
        "0.1",
    ]);
    assert!(t.meta("warnings").unwrap().contains("ka0"));
}
