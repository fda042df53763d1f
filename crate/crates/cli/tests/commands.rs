use std::path::PathBuf;
use std::process::{Command, Output};

use qpurify_cli::config::{Axis, Config};
use qpurify_cli::output::{sweep_csv, SWEEP_HEADER, TRAJECTORY_HEADER};
use qpurify_cli::sweep::{run_sweep, SweepRow};
use qpurify_core::extraction::alpha_analytic;
use qpurify_core::ModelParams;

fn qpurify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpurify")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn report_value(report: &str, key: &str) -> f64 {
    let line = report.lines().find(|l| l.trim_start().starts_with(key)).unwrap_or_else(|| panic!("{key} missing"));
    line.split('=').nth(1).unwrap().split_whitespace().next().unwrap().parse().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qpurify-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

/// 100 x 51 grid, fine enough to resolve the efficiency peaks.
fn fine_grid(kt: f64, ideal: bool) -> Vec<SweepRow> {
    let mut c = Config::default();
    c.model.kt_over_omega = kt;
    c.model.ideal = ideal;
    c.sweep.epsilon_tau = Some(Axis::range(0.1, 10.0, 100).unwrap());
    c.sweep.theta_over_pi = Some(Axis::range(0.0, 1.0, 51).unwrap());
    run_sweep(&c).unwrap()
}

#[test]
fn extract_down_measurement_is_pure() {
    let o = qpurify(&["extract", "--theta-over-pi", "1"]);
    assert!(o.status.success());
    let r = stdout(&o);
    assert!((report_value(&r, "purity") - 1.0).abs() < 1e-10);
    assert!((report_value(&r, "lambda0") - 1.0).abs() < 1e-10);
    assert_eq!(report_value(&r, "degenerate"), 0.0);
}

#[test]
fn extract_ideal_is_pure_anywhere() {
    for (theta, et) in [("0.3", "2.5"), ("0.77", "6.1")] {
        let r = stdout(&qpurify(&["extract", "--ideal", "--theta-over-pi", theta, "--epsilon-tau", et]));
        assert!((report_value(&r, "purity") - 1.0).abs() < 1e-8, "{r}");
        assert_eq!(report_value(&r, "degenerate"), 0.0);
    }
}

#[test]
fn extract_up_measurement_matches_mixing_parameter() {
    let r = stdout(&qpurify(&["extract", "--theta-over-pi", "0", "--epsilon-tau", "1"]));
    let a = alpha_analytic(&ModelParams::from_ratios(10.0, 0.1, 0.95, 0.0).unwrap(), 1.0).unwrap();
    let want = (1.0 + a * a) / (1.0 + a).powi(2);
    assert!((report_value(&r, "purity") - want).abs() < 1e-10);
}

#[test]
fn purity_decreases_with_temperature_at_three_quarters() {
    let mut c = Config::default();
    c.theta_over_pi = 0.75;
    c.sweep.theta_over_pi = Some(Axis::fixed(0.75));
    c.sweep.kt_over_omega = Some(Axis::range(0.0, 10.0, 5).unwrap());
    let rows = run_sweep(&c).unwrap();
    for cell in rows.chunks(5) {
        for w in cell.windows(2) {
            assert!(w[1].purity <= w[0].purity + 1e-12, "{:?}", w[1].point);
        }
    }
}

#[test]
fn efficiency_peaks_and_their_thermal_degradation() {
    let ideal = fine_grid(0.0, true);
    let cold = fine_grid(0.0, false);
    let hot = fine_grid(10.0, false);
    let peaks: Vec<usize> = (0..ideal.len()).filter(|&i| ideal[i].log_ratio >= 4.0).collect();
    assert!(!peaks.is_empty());
    for &i in &peaks {
        assert!(hot[i].log_ratio < ideal[i].log_ratio);
    }
    assert!(cold.iter().any(|r| r.log_ratio >= 2.0));
}

#[test]
fn sweep_csv_is_identical_across_worker_counts() {
    let cfg = scratch("grid.cfg");
    std::fs::write(&cfg, "kT_over_omega = 1\n[sweep]\nepsilon_tau = 0.5, 5, 7\ntheta_over_pi = 0, 1, 9\n").unwrap();
    let a = scratch("a.csv");
    let b = scratch("b.csv");
    for (out, workers) in [(&a, "1"), (&b, "3")] {
        let o = qpurify(&[
            "sweep-purity",
            "--config",
            cfg.to_str().unwrap(),
            "--workers",
            workers,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    assert_eq!(text.lines().next().unwrap(), SWEEP_HEADER);
    assert_eq!(text.lines().count(), 1 + 63);
    // Efficiency command writes the same schema.
    let eff = stdout(&qpurify(&["sweep-efficiency", "--config", cfg.to_str().unwrap()]));
    assert_eq!(eff, text);
}

#[test]
fn ideal_sweep_csv_is_all_pure() {
    let mut c = Config::default();
    c.model.ideal = true;
    c.sweep.epsilon_tau = Some(Axis::range(0.5, 10.0, 20).unwrap());
    c.sweep.theta_over_pi = Some(Axis::range(0.0, 1.0, 20).unwrap());
    let csv = sweep_csv(&run_sweep(&c).unwrap());
    for line in csv.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f.len(), 9);
        if f[8] == "0" {
            assert!((f[4].parse::<f64>().unwrap() - 1.0).abs() < 1e-8, "{line}");
        }
    }
}

#[test]
fn trajectory_from_maximally_mixed_state() {
    let o = qpurify(&[
        "trajectory",
        "--theta-over-pi",
        &(2.25 / std::f64::consts::PI).to_string(),
        "--epsilon-tau",
        "7.82",
        "--kt-over-omega",
        "0.001",
        "--n-max",
        "50",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), TRAJECTORY_HEADER);
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 51);
    assert!((rows[0][2] - 0.5).abs() < 1e-15);
    let best = (0..rows.len()).max_by(|&a, &b| rows[a][2].total_cmp(&rows[b][2])).unwrap();
    assert_eq!(best, 2);

    let r = stdout(&qpurify(&[
        "extract",
        "--theta-over-pi",
        &(2.25 / std::f64::consts::PI).to_string(),
        "--epsilon-tau",
        "7.82",
        "--kt-over-omega",
        "0.001",
    ]));
    assert!((rows[50][2] - report_value(&r, "purity")).abs() < 1e-4);
}

#[test]
fn config_errors_exit_with_code_two() {
    let cfg = scratch("bad.cfg");
    std::fs::write(&cfg, "# ok\nomega_over_epsilon = 10\nthetta_over_pi = 0.5\n").unwrap();
    let o = qpurify(&["extract", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3") && err.contains("thetta_over_pi"), "{err}");

    let o = qpurify(&["extract", "--theta-over-pi", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = qpurify(&["extract", "--config", "/nonexistent/qpurify.cfg"]);
    assert_eq!(o.status.code(), Some(2));
    let o = qpurify(&["sweep-purity", "--epsilon-tau", "1", "--out", "/nonexistent/dir/out.csv"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn validate_exit_codes() {
    let o = qpurify(&["validate", "--only", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("criterion  5 PASS"));
    let o = qpurify(&["validate", "--only", "11", "--corrupt-kraus"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("criterion 11 FAIL"));
    let o = qpurify(&["validate", "--only", "42"]);
    assert_eq!(o.status.code(), Some(2));
}
