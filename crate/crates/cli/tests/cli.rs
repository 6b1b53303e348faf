use couette_cli::commands::{
    CoeffsReport, MINIMA_COLUMNS, NEUTRAL_COLUMNS, ORBIT_COLUMNS, PROFILE_COLUMNS, SURFACE_COLUMNS, TRAJECTORY_COLUMNS,
};
use couette_cli::emit::{read_csv, Cell, Table};
use std::path::Path;
use std::process::{Command, Output};

fn couette(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_couette")).args(args).output().expect("binary runs")
}

fn stdout_table(args: &[&str], cmd: &str, cols: &[&'static str]) -> Table {
    let o = couette(args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    read_csv(&String::from_utf8(o.stdout).unwrap(), cmd, cols).unwrap()
}

fn col(t: &Table, name: &str) -> Vec<f64> {
    t.column(name).unwrap().into_iter().map(|v| v.unwrap()).collect()
}

fn texts(t: &Table, i: usize) -> Vec<String> {
    t.rows
        .iter()
        .map(|r| match &r[i] {
            Cell::Text(s) => s.clone(),
            _ => String::new(),
        })
        .collect()
}

#[test]
fn neutral_row_near_critical_point() {
    let t = stdout_table(&["neutral", "--alpha-min", "3.0", "--alpha-max", "3.3", "--alpha-step", "0.117"], "neutral", &NEUTRAL_COLUMNS);
    let a = col(&t, "alpha");
    let tc = col(&t, "taylor_c");
    let i = a.iter().position(|&x| (x - 3.117).abs() < 1e-12).unwrap();
    assert!((tc[i] - 1708.0).abs() < 3.0);
    assert!(a.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn odd_rows_exceed_even_rows() {
    let args = ["neutral", "--alpha-min", "2", "--alpha-max", "6", "--alpha-step", "1"];
    let even = stdout_table(&args, "neutral", &NEUTRAL_COLUMNS);
    let odd = stdout_table(&[&args[..], &["--parity", "odd"]].concat(), "neutral", &NEUTRAL_COLUMNS);
    assert_eq!(odd.meta_value("parity"), Some("odd"));
    for (e, o) in col(&even, "taylor_c").iter().zip(col(&odd, "taylor_c")) {
        assert!(o > *e);
    }
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(couette(&["neutral", "--alpha-min", "3", "--alpha-max", "2"]).status.code(), Some(2));
    assert_eq!(couette(&["neutral", "--alpha-step", "0"]).status.code(), Some(2));
    assert_eq!(couette(&["neutral", "--tol", "-1"]).status.code(), Some(2));
    assert_eq!(couette(&["surface"]).status.code(), Some(2));
    assert_eq!(couette(&["orbits", "--tau", "1"]).status.code(), Some(2));
    assert_eq!(couette(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn failed_self_check_exits_1() {
    let o = couette(&["profile", "--tau", "1", "--H", "0.2", "--K", "0.05", "--tol", "1e-300"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("drift"));
}

#[test]
fn schema_drift_is_rejected() {
    let o = couette(&["neutral", "--alpha-min", "3", "--alpha-max", "3"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(read_csv(&text, "neutral", &NEUTRAL_COLUMNS).is_ok());
    assert!(read_csv(&text, "surface", &SURFACE_COLUMNS).is_err());
    assert!(read_csv(&text.replace("taylor_c", "taylor"), "neutral", &NEUTRAL_COLUMNS).is_err());
}

fn coeffs_report(dir: &Path) -> (CoeffsReport, std::path::PathBuf) {
    let path = dir.join("coeffs.json");
    let o = couette(&["coeffs", "--format", "json", "--out", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r: CoeffsReport = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    (r, path)
}

#[test]
fn surface_matches_neutral_and_the_coefficient_ratio() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("surf.csv");
    let o = couette(&[
        "surface", "--alpha-min", "2.9", "--alpha-max", "3.3", "--alpha-step", "0.1", "--bbeta-min", "0",
        "--bbeta-max", "1", "--bbeta-step", "0.5", "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = read_csv(&std::fs::read_to_string(&out).unwrap(), "surface", &SURFACE_COLUMNS).unwrap();
    let m = read_csv(&std::fs::read_to_string(dir.path().join("surf.minima.csv")).unwrap(), "minima", &MINIMA_COLUMNS)
        .unwrap();
    let n = stdout_table(&["neutral", "--alpha-min", "2.9", "--alpha-max", "3.3", "--alpha-step", "0.1"], "neutral", &NEUTRAL_COLUMNS);
    let (b, ts) = (col(&s, "bbeta"), col(&s, "taylor_c"));
    let slice: Vec<f64> = ts.iter().zip(&b).filter(|(_, b)| **b == 0.0).map(|(t, _)| *t).collect();
    for (x, y) in slice.iter().zip(col(&n, "taylor_c")) {
        assert!((x / y - 1.0).abs() < 1e-4);
    }
    let (ac, tc) = (col(&m, "alpha_c"), col(&m, "taylor_c"));
    assert!((ac[0] - 3.117).abs() < 0.005 && (tc[0] - 1708.0).abs() < 3.0);
    // the fitted B^2 coefficient against the independently computed b4 / a3
    let q: f64 = m.meta_value("fit_quadratic").unwrap().parse().unwrap();
    let (r, _) = coeffs_report(dir.path());
    assert!((q / (r.b4_bvp / r.a3_integral) - 1.0).abs() < 0.01, "{q}");
}

#[test]
fn coeffs_signs_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (r, path) = coeffs_report(dir.path());
    let s = r.signs;
    assert!(s.a3_positive && s.a4_negative && s.a6_negative && s.c_positive && s.b4_positive);
    assert!(r.b4_gap_ok && r.b4_gap < 0.01);
    assert_eq!(r.normalization, "uy(0)=1");
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(couette_cli::emit::json_string(&r), text);
    let keys: Vec<usize> = ["\"alpha_c\"", "\"taylor_c\"", "\"a3\"", "\"b4_bvp\"", "\"c\"", "\"normalization\""]
        .iter()
        .map(|k| text.find(k).unwrap())
        .collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]));
    let csv = couette(&["coeffs"]);
    let t = read_csv(&String::from_utf8(csv.stdout).unwrap(), "coeffs", &["name", "value"]).unwrap();
    assert_eq!(texts(&t, 0)[0], "alpha_c");
}

#[test]
fn boundary_scan_reproduces_the_parametric_curve() {
    let tau = 1.3;
    let t = stdout_table(&["orbits", "--tau", "1.3", "--boundary", "27"], "orbits", &ORBIT_COLUMNS);
    let (h, k) = (col(&t, "H"), col(&t, "K"));
    let kinds = texts(&t, 2);
    for i in 0..h.len() {
        // X from H on the curve, then K(X)
        let x = (tau - (tau * tau - 3.0 * h[i]).max(0.0).sqrt()) / 3.0;
        let x = if kinds[i] == "homoclinic" || kinds[i] == "heteroclinic_k0" {
            (tau + (tau * tau - 3.0 * h[i]).max(0.0).sqrt()) / 3.0
        } else {
            x
        };
        let kk = (tau * x * x - 2.0 * x * x * x).max(0.0).sqrt();
        assert!((k[i] - kk).abs() < 1e-9, "row {i}: {} vs {kk}", k[i]);
    }
    let corner = (0..h.len())
        .find(|&i| (h[i] - tau * tau / 3.0).abs() < 1e-10 && (k[i] - (tau / 3.0f64).powf(1.5)).abs() < 1e-10);
    assert!(corner.is_some());
    assert_eq!(kinds.last().unwrap(), "heteroclinic_k0");
    assert!((h[h.len() - 1] - tau * tau / 4.0).abs() < 1e-12);
}

#[test]
fn grid_rows_include_heteroclinic() {
    let t = stdout_table(&["orbits", "--tau", "2", "--H", "0.5,1.0", "--K", "0"], "orbits", &ORBIT_COLUMNS);
    assert_eq!(texts(&t, 2), vec!["periodic", "heteroclinic_k0"]);
}

#[test]
fn constant_modulus_profile_has_constant_rho() {
    let k = 0.03125f64.sqrt().to_string();
    let t = stdout_table(&["profile", "--tau", "1", "--H", "0.3125", "--K", &k, "--samples", "41"], "profile", &PROFILE_COLUMNS);
    assert_eq!(t.meta_value("kind"), Some("constant_modulus"));
    let rho = col(&t, "rho");
    assert!(rho.iter().all(|r| (r - 0.5).abs() < 1e-12));
}

#[test]
fn homoclinic_profile_reaches_rho_infty_at_both_ends() {
    let t = stdout_table(
        &["profile", "--tau", "1", "--K", "0.1", "--y-min", "-40", "--y-max", "40", "--samples", "801"],
        "profile",
        &PROFILE_COLUMNS,
    );
    assert_eq!(t.meta_value("kind"), Some("homoclinic"));
    let ri: f64 = t.meta_value("rho_infty").unwrap().parse().unwrap();
    let rho = col(&t, "rho");
    assert!((rho[0] - ri).abs() < 1e-4 && (rho[rho.len() - 1] - ri).abs() < 1e-4);
    assert!(rho[400] < 0.5 * ri);
}

#[test]
fn periodic_profile_phase_is_periodic() {
    let base = ["profile", "--tau", "1", "--H", "0.2", "--K", "0.05", "--theta0", "0.4"];
    let probe = stdout_table(&base, "profile", &PROFILE_COLUMNS);
    let per: f64 = probe.meta_value("period").unwrap().parse().unwrap();
    let bp: f64 = probe.meta_value("beta_prime").unwrap().parse().unwrap();
    let hi = (2.0 * per).to_string();
    let t = stdout_table(&[&base[..], &["--y-min", "0", "--y-max", &hi, "--samples", "201"]].concat(), "profile", &PROFILE_COLUMNS);
    let (y, th) = (col(&t, "y"), col(&t, "theta"));
    let phi: Vec<f64> = y.iter().zip(&th).map(|(y, t)| t - bp * y - 0.4).collect();
    for j in 0..=100 {
        assert!((phi[j] - phi[j + 100]).abs() < 1e-8, "{j}");
    }
    let mean = phi[..100].iter().sum::<f64>() / 100.0;
    assert!(mean.abs() < 1e-3);
}

const SIM: &str = r#"
seed = 11
[grid]
modes = 128
periods = 8
[coefficients]
tau = 1.0
a3 = 1.0
c = 1.0
b4 = 1.0
[base]
kind = "wavy"
bbeta = 0.99751242241780
[perturbation]
mode = 32
[run]
t_end = 0.7
window = [0.1, 0.7]
"#;

fn run_sim(dir: &Path, cfg: &str, name: &str, extra: &[&str]) -> (String, serde_json::Value) {
    let c = dir.join(format!("{name}.toml"));
    std::fs::write(&c, cfg).unwrap();
    let out = dir.join(format!("{name}.csv"));
    let o = couette(&[&["simulate", c.to_str().unwrap(), "--out", out.to_str().unwrap()], extra].concat());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rate = std::fs::read_to_string(dir.join(format!("{name}.rate.json"))).unwrap();
    (std::fs::read_to_string(out).unwrap(), serde_json::from_str(&rate).unwrap())
}

#[test]
fn simulate_outer_sideband_decays_at_predicted_rate() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, r) = run_sim(dir.path(), SIM, "a", &[]);
    let measured = r["measured"].as_f64().unwrap();
    assert!(r["bbeta_prime"].as_f64().unwrap() > r["bbeta0"].as_f64().unwrap());
    assert!(measured < 0.0);
    assert!(r["rel_gap"].as_f64().unwrap() < 0.02);
    assert!(read_csv(&csv, "simulate", &TRAJECTORY_COLUMNS).is_ok());
}

#[test]
fn simulate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, _) = run_sim(dir.path(), SIM, "a", &[]);
    let (b, _) = run_sim(dir.path(), SIM, "b", &[]);
    assert_eq!(a, b);
    let (c, rc) = run_sim(dir.path(), SIM, "c", &["--seed", "12"]);
    assert_eq!(rc["seed"].as_u64(), Some(12));
    assert_ne!(a, c);
}

#[test]
fn simulate_reads_coefficients_from_coeffs_json() {
    let dir = tempfile::tempdir().unwrap();
    coeffs_report(dir.path());
    let cfg = r#"
[grid]
modes = 64
length = 40.0
[coefficients]
tau = 2.0
from = "coeffs.json"
[base]
kind = "zero"
[perturbation]
mode = 1
amplitude = 1e-8
[run]
t_end = 20.0
window = [2.0, 20.0]
"#;
    let (_, r) = run_sim(dir.path(), cfg, "z", &[]);
    assert_eq!(r["base"], "zero");
    assert!(r["rel_gap"].as_f64().unwrap() < 0.01, "{r}");
}

#[test]
fn bad_config_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("bad.toml");
    std::fs::write(&c, SIM.replace("[run]", "[runn]")).unwrap();
    let out = dir.path().join("bad.csv");
    let o = couette(&["simulate", c.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
