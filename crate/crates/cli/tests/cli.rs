use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn gabic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gabic")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, json: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, json).unwrap();
    path.to_string_lossy().into_owned()
}

fn config(name: &str) -> String {
    configs().join(name).to_string_lossy().into_owned()
}

/// Data rows of a CSV written by the binary, split into fields.
fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with('#'));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

fn f(s: &str) -> f64 {
    s.parse().unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn sweep_n12_bics_at_multiples_of_pi() {
    let out = stdout(&gabic(&["sweep", "--config", &config("fig2a.json")]));
    let (header, rows) = csv_rows(&out);
    assert_eq!(header, ["phi", "re_e1", "im_e1", "re_e2", "im_e2", "n_bics"]);
    assert_eq!(rows.len(), 801);
    for (k, r) in rows.iter().enumerate() {
        if k % 200 == 0 {
            assert!(f(&r[4]).abs() < 1e-12, "row {k}");
            assert_eq!(r[5], "1");
        } else {
            assert_eq!(r[5], "0", "row {k}");
        }
    }
}

#[test]
fn sweep_n14_is_lossless_everywhere() {
    let out = stdout(&gabic(&["sweep", "--config", &config("fig2b_n14.json")]));
    for r in csv_rows(&out).1 {
        assert!(f(&r[2]).abs() < 1e-9 && f(&r[4]).abs() < 1e-9);
    }
}

#[test]
fn sweep_json_records() {
    let out = stdout(&gabic(&["sweep", "--config", &config("fig2b_n17.json"), "--format", "json"]));
    let v: Value = serde_json::from_str(&out).unwrap();
    let records = v["records"].as_array().unwrap();
    assert_eq!(records.len(), 801);
    for r in records {
        assert!((r["im_e1"].as_f64().unwrap() + 0.01).abs() < 1e-12);
        assert!((r["im_e2"].as_f64().unwrap() + 0.01).abs() < 1e-12);
    }
}

#[test]
fn empty_phase_grid_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "empty.json",
        r#"{"geometry": {"size": 12, "delta": 4}, "phase_grid": {"start": 0, "end": 1, "points": 0}}"#,
    );
    let o = gabic(&["sweep", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("empty phase grid"));
}

#[test]
fn dynamics_markov_fractional_trapping() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "a.json",
        r#"{"geometry": {"size": 12, "delta": 4}, "time_grid": {"t_max": 5000, "points": 11}, "backend": "markov"}"#,
    );
    let out = stdout(&gabic(&["dynamics", "--config", &cfg]));
    let (header, rows) = csv_rows(&out);
    assert_eq!(header, ["t", "pop1_markov", "pop2_markov", "pop1_lattice", "pop2_lattice", "photon_total"]);
    let last = rows.last().unwrap();
    assert!((f(&last[1]) - 0.25).abs() < 1e-6 && (f(&last[2]) - 0.25).abs() < 1e-6);
    assert!(last[3].is_empty() && last[4].is_empty() && last[5].is_empty());
}

#[test]
fn dynamics_markov_rabi_oscillation() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "d.json",
        r#"{"geometry": {"size": 14, "delta": 4}, "time_grid": {"t_max": 1000, "points": 201}, "backend": "markov"}"#,
    );
    let out = stdout(&gabic(&["dynamics", "--config", &cfg]));
    for r in csv_rows(&out).1 {
        let expected = (0.016 * f(&r[0])).cos().powi(2);
        assert!((f(&r[1]) - expected).abs() < 1e-9);
    }
}

#[test]
fn dynamics_lattice_decays_without_bic() {
    let out = stdout(&gabic(&["dynamics", "--config", &config("figB.json"), "--tmax", "2000"]));
    let (_, rows) = csv_rows(&out);
    let last = rows.last().unwrap();
    assert!(f(&last[3]) + f(&last[4]) < 0.02);
    assert!((f(&last[3]) + f(&last[4]) + f(&last[5]) - 1.0).abs() < 1e-9);
}

#[test]
fn strict_mode_rejects_reflections() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "small.json",
        r#"{"geometry": {"size": 12, "delta": 4, "n_sites": 100}, "time_grid": {"t_max": 200, "points": 3}, "backend": "lattice"}"#,
    );
    let relaxed = gabic(&["dynamics", "--config", &cfg]);
    assert!(relaxed.status.success());
    assert!(String::from_utf8_lossy(&relaxed.stderr).contains("warning"));
    let strict = gabic(&["dynamics", "--config", &cfg, "--strict"]);
    assert_eq!(strict.status.code(), Some(1));
}

fn bic_report(config_name: &str) -> (tempfile::TempDir, Value) {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = gabic(&["bic", "--config", &config(config_name), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    (dir, v)
}

#[test]
fn bic_n12_phi_pi() {
    let (dir, v) = bic_report("fig4_phipi.json");
    let bics = v["bics"].as_array().unwrap();
    assert_eq!(bics.len(), 1);
    let c = bics[0]["concurrence"].as_f64().unwrap();
    assert!((c - 0.98).abs() <= 0.02, "C = {c}");
    let rho = &bics[0]["rho"];
    assert_eq!(rho["re"].as_array().unwrap().len(), 4);
    assert_eq!(rho["im"][0].as_array().unwrap().len(), 4);

    let profile = std::fs::read_to_string(dir.path().join("report_bic1.csv")).unwrap();
    let (header, rows) = csv_rows(&profile);
    assert_eq!(header, ["site", "beta_abs2"]);
    assert_eq!(rows.len(), 1200);
    let photons: f64 = rows.iter().map(|r| f(&r[1])).sum();
    let ground = bics[0]["ground_population"].as_f64().unwrap();
    assert!((photons - ground).abs() < 1e-12);
}

#[test]
fn bic_n14_phi_pi_two_states() {
    let (_dir, v) = bic_report("fig5.json");
    let mut c: Vec<f64> = v["bics"].as_array().unwrap().iter().map(|b| b["concurrence"].as_f64().unwrap()).collect();
    c.sort_by(|a, b| b.total_cmp(a));
    assert_eq!(c.len(), 2);
    assert!((c[0] - 0.98).abs() <= 0.02, "{c:?}");
    assert!((c[1] - 0.76).abs() <= 0.02, "{c:?}");
}

#[test]
fn bic_n17_reports_empty_list() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "n17.json", r#"{"geometry": {"size": 17, "delta": 5, "n_sites": 600}}"#);
    let v: Value = serde_json::from_str(&stdout(&gabic(&["bic", "--config", &cfg]))).unwrap();
    assert!(v["bics"].as_array().unwrap().is_empty());
}

#[test]
fn spectrum_rows_and_decoupled_atoms() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "free.json",
        r#"{"params": {"g": 0.0, "lambda": 0.0, "omega_a": 0.3}, "geometry": {"size": 12, "delta": 4, "n_sites": 150}}"#,
    );
    let (header, rows) = csv_rows(&stdout(&gabic(&["spectrum", "--config", &cfg])));
    assert_eq!(header, ["index", "energy", "atomic_weight", "localized_fraction"]);
    assert_eq!(rows.len(), 152);
    let atoms: Vec<&Vec<String>> = rows.iter().filter(|r| (f(&r[2]) - 1.0).abs() < 1e-12).collect();
    assert_eq!(atoms.len(), 2);
    for r in atoms {
        assert!((f(&r[1]) - 0.3).abs() < 1e-12);
    }
}

#[test]
fn spectrum_contains_the_bic() {
    let (header, rows) = csv_rows(&stdout(&gabic(&["spectrum", "--config", &config("fig4_phipi.json"), "--nc", "400"])));
    assert_eq!(header.len(), 4);
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    gabic(&["bic", "--config", &config("fig4_phipi.json"), "--nc", "400", "--out", out.to_str().unwrap()]);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let bic = &v["bics"][0];
    let weight = bic["atomic_weight"].as_f64().unwrap();
    let energy = bic["energy"].as_f64().unwrap();
    let hits: Vec<_> = rows
        .iter()
        .filter(|r| f(&r[1]).abs() < 2.0 && f(&r[2]) > 0.9 * weight)
        .collect();
    assert_eq!(hits.len(), 1);
    assert!((f(&hits[0][1]) - energy).abs() < 1e-12);
}

#[test]
fn spectrum_refuses_oversized_lattice() {
    let o = gabic(&["spectrum", "--config", &config("fig4_phipi.json"), "--nc", "2001"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("dense"));
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = gabic(&["dynamics", "--config", &config("figA.json"), "--tmax", "50", "--nc", "300", "--out", p.to_str().unwrap()]);
        assert!(o.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn print_config_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let printed = stdout(&gabic(&["dynamics", "--config", &config("figD.json"), "--print-config", "--phi", "0.5"]));
    let v: Value = serde_json::from_str(&printed).unwrap();
    assert_eq!(v["params"]["phi"].as_f64(), Some(0.5));
    assert!(v["geometry"]["n_sites"].as_u64().unwrap() >= 4000);
    let again = write_config(dir.path(), "resolved.json", &printed);
    assert_eq!(stdout(&gabic(&["dynamics", "--config", &again, "--print-config"])), printed);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_config(dir.path(), "bad.json", r#"{"params": {"g": -1.0}, "geometry": {"size": 12, "delta": 4}}"#);
    assert_eq!(gabic(&["sweep", "--config", &bad]).status.code(), Some(1));
    let junk = write_config(dir.path(), "junk.json", "{ not json");
    assert_eq!(gabic(&["sweep", "--config", &junk]).status.code(), Some(1));
    assert_eq!(gabic(&["sweep", "--config", "/nonexistent/cfg.json"]).status.code(), Some(3));
    let out = dir.path().join("missing/dir/out.csv");
    let o = gabic(&["sweep", "--config", &config("fig2a.json"), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}
