use std::path::Path;
use std::process::{Command, Output};

fn qdist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdist"))
        .args(args)
        .output()
        .expect("spawn qdist")
}

fn qdist_env(args: &[&str], key: &str, val: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdist"))
        .args(args)
        .env(key, val)
        .output()
        .expect("spawn qdist")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|c| c.parse::<f64>().unwrap_or(f64::NAN)).collect())
        .collect();
    (header, rows)
}

#[test]
fn pbox_classical_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("pbox.csv");
    let o = qdist(&[
        "pbox", "--mode", "classical", "--n-max", "20", "--format", "csv", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = read_csv(&out);
    assert_eq!(header[0], "n");
    assert_eq!(header[1], "w1 (box lengths)");
    assert_eq!(rows.len(), 20);
    for r in &rows {
        let n = r[0];
        assert!((r[1] - 1.0 / (n * std::f64::consts::PI.powi(2))).abs() < 1e-9);
    }
}

#[test]
fn dist_two_coherent_states() {
    let o = qdist(&["dist", "--a", "coherent:4", "--b", "coherent:1", "--measure", "w1"]);
    assert_eq!(code(&o), 0);
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - 3.0).abs() < 1e-10, "{v}");
    for m in ["w1-shortcut", "emd"] {
        let o = qdist(&["dist", "--a", "coherent:4", "--b", "coherent:1", "--measure", m]);
        let v: f64 = stdout(&o).trim().parse().unwrap();
        assert!((v - 3.0).abs() < 1e-10, "{m}: {v}");
    }
}

#[test]
fn dist_other_measures() {
    let o = qdist(&["dist", "--a", "vacuum", "--b", "squeezed:1", "--measure", "kl"]);
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - 1f64.cosh().ln()).abs() < 1e-10);
    let o = qdist(&["dist", "--a", "fock:2", "--b", "fock:5", "--measure", "kl"]);
    assert_eq!(stdout(&o).trim(), "inf");
    let o = qdist(&["dist", "--a", "fock:2", "--b", "fock:2", "--measure", "bhatt"]);
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!(v.abs() < 1e-15);
}

#[test]
fn shortcut_refused_when_cdfs_cross() {
    let o = qdist(&["dist", "--a", "coherent:2", "--b", "thermal:2", "--measure", "w1-shortcut"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("cross"));
}

#[test]
fn oscillator_fit_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("osc.json");
    let o = qdist(&[
        "osc", "--n-max", "400", "--fit-window", "50:400", "--format", "json", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 400);
    let fits = v["fits"].as_array().unwrap();
    let w1 = fits.iter().find(|f| f["column"] == "w1").unwrap();
    let gamma = w1["fit"]["params"][1].as_f64().unwrap();
    assert!((gamma - 0.5).abs() <= 0.03, "gamma = {gamma}");
    assert_eq!(w1["fit"]["n_range"][0], 50);
    assert_eq!(w1["fit"]["n_range"][1], 400);
}

#[test]
fn invalid_descriptors_are_usage_errors() {
    for s in ["coherent:-1", "laser:2", "glauber_lachs:1", "fock:x"] {
        let o = qdist(&["dist", "--a", s, "--b", "vacuum"]);
        assert_eq!(code(&o), 2, "{s}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&qdist(&["frobnicate"])), 2);
    assert_eq!(code(&qdist(&["pbox", "--bogus"])), 2);
    assert_eq!(code(&qdist(&["pbox", "--mode", "pair"])), 2);
    assert_eq!(code(&qdist(&["pbox", "--mode", "pair", "--m", "0"])), 2);
    assert_eq!(code(&qdist(&["osc", "--n-max", "30", "--fit-window", "50:400"])), 2);
    assert_eq!(code(&qdist(&["blackbody", "--temperatures", "100,-5"])), 2);
    assert_eq!(code(&qdist(&[])), 2);
}

#[test]
fn unwritable_output_is_a_usage_error() {
    let o = qdist(&["pbox", "--n-max", "2", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn tolerance_failure_exits_1() {
    let o = qdist(&["pbox", "--n-max", "5", "--tolerance", "1e-30"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("exceeds tolerance"));
}

#[test]
fn every_subcommand_has_help() {
    let cases: [(&str, &[&str]); 6] = [
        ("pbox", &["--mode", "--m", "--n-max", "--format", "--out", "--tolerance"]),
        ("osc", &["--n-max", "--fit-window", "--log-fit-window", "--no-check-fits"]),
        ("photon", &["--pair", "--format"]),
        ("blackbody", &["--temperatures", "--out"]),
        ("dist", &["--a", "--b", "--measure", "glauber_lachs"]),
        ("selftest", &[]),
    ];
    for (cmd, flags) in cases {
        let o = qdist(&[cmd, "--help"]);
        assert_eq!(code(&o), 0);
        let text = stdout(&o);
        for f in flags {
            assert!(text.contains(f), "{cmd} --help lacks {f}");
        }
    }
    let top = stdout(&qdist(&["--help"]));
    for cmd in ["pbox", "osc", "photon", "blackbody", "dist", "selftest", "QDIST_THREADS"] {
        assert!(top.contains(cmd), "top-level help lacks {cmd}");
    }
}

#[test]
fn output_is_byte_identical_across_runs() {
    let runs: [&[&str]; 4] = [
        &["photon"],
        &["pbox", "--mode", "pair", "--m", "1", "--n-max", "12", "--format", "json"],
        &["blackbody", "--temperatures", "100,200,300"],
        &["osc", "--n-max", "12", "--no-check-fits"],
    ];
    for args in runs {
        let a = qdist(args);
        let b = qdist(args);
        let c = qdist_env(args, "QDIST_THREADS", "1");
        assert_eq!(code(&a), 0, "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.stdout, c.stdout, "{args:?} with one thread");
    }
}

#[test]
fn bad_thread_count_is_rejected() {
    assert_eq!(code(&qdist_env(&["photon"], "QDIST_THREADS", "0")), 2);
    assert_eq!(code(&qdist_env(&["photon"], "QDIST_THREADS", "many")), 2);
}

#[test]
fn photon_table_flags_printed_thermal_kl() {
    let o = qdist(&["photon", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let labels = v["row_labels"].as_array().unwrap();
    let i = labels.iter().position(|l| l == "vacuum | thermal:1").unwrap();
    let row = v["rows"][i].as_array().unwrap();
    assert!((row[5].as_f64().unwrap() - 2f64.ln()).abs() < 1e-12);
    assert_eq!(row[7].as_f64().unwrap(), 2.0);
    assert_eq!(row[8].as_f64().unwrap(), 1.0);
    assert!(v["metadata"]["kl_printed_mismatch"].is_string());
}
