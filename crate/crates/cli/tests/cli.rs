use std::path::Path;
use std::process::{Command, Output};

use hoi_core::formats::parse_sweep_csv;
use serde_json::Value;
use tempfile::TempDir;

fn hoi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hoi")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, contents: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_string()
}

fn real_matrix_json(rows: &[&[f64]]) -> String {
    let data: Vec<[f64; 2]> = rows.iter().flat_map(|r| r.iter().map(|&v| [v, 0.0])).collect();
    serde_json::json!({ "p": rows.len(), "kind": "real", "data": data }).to_string()
}

const COLLIDER: [&[f64]; 3] = [&[1.0, 0.0, 1.0], &[0.0, 1.0, 1.0], &[1.0, 1.0, 3.0]];

fn info_json(args: &[&str]) -> Value {
    let out = hoi(args);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    serde_json::from_str(&stdout(&out)).unwrap()
}

#[test]
fn info_identity_is_all_zero() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "id.json", &real_matrix_json(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]));
    let v = info_json(&["info", &m]);
    for key in ["tc", "dtc", "oinfo", "tse"] {
        assert_eq!(v["measures"][key].as_f64().unwrap(), 0.0, "{key}");
    }
    assert_eq!(v["kind"], "real");
}

#[test]
fn info_collider_reports_synergy() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "c.json", &real_matrix_json(&COLLIDER));
    let v = info_json(&["info", &m, "--node", "all", "--partition", "[[0],[1],[2]]", "--group", "2"]);
    assert!((v["measures"]["oinfo"].as_f64().unwrap() + 0.143841).abs() < 1e-6);
    assert!((v["structured"]["sigma_oinfo"].as_f64().unwrap() + 0.143841).abs() < 1e-6);
    let nodes = v["nodes"].as_array().unwrap();
    assert_eq!(nodes.len(), 3);
    assert!((nodes[2]["pi_oinfo"].as_f64().unwrap() + 0.287682).abs() < 1e-6);
    let groups = v["groups"].as_array().unwrap();
    assert_eq!(groups.len(), 1);
    assert!((groups[0]["kappa_oinfo"].as_f64().unwrap() - nodes[2]["pi_oinfo"].as_f64().unwrap()).abs() < 1e-12);
}

#[test]
fn info_kind_override_and_bits() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "c.json", &real_matrix_json(&COLLIDER));
    let real = info_json(&["info", &m]);
    let complex = info_json(&["info", &m, "--kind-override", "complex"]);
    let bits = info_json(&["info", &m, "--bits"]);
    assert_eq!(complex["kind"], "complex");
    assert_eq!(bits["units"], "bits");
    for key in ["tc", "dtc", "oinfo", "tse"] {
        let r = real["measures"][key].as_f64().unwrap();
        assert!((complex["measures"][key].as_f64().unwrap() - 2.0 * r).abs() < 1e-12);
        assert!((bits["measures"][key].as_f64().unwrap() - r / std::f64::consts::LN_2).abs() < 1e-12);
    }
}

#[test]
fn info_reads_stdin() {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_hoi"))
        .args(["info", "-"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(real_matrix_json(&COLLIDER).as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((v["measures"]["tc"].as_f64().unwrap() - 0.5 * 3f64.ln()).abs() < 1e-12);
}

#[test]
fn info_error_codes() {
    let dir = TempDir::new().unwrap();
    let asym = write(&dir, "a.json", &real_matrix_json(&[&[1.0, 1e-3], &[0.0, 1.0]]));
    let out = hoi(&["info", &asym]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("Hermitian"), "{}", stderr(&out));

    let malformed = write(&dir, "m.json", "{\"p\": 2, \"kind\": \"real\"");
    assert_eq!(code(&hoi(&["info", &malformed])), 2);
    assert_eq!(code(&hoi(&["info", "/nonexistent/matrix.json"])), 2);

    let indefinite = write(&dir, "n.json", &real_matrix_json(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 2.0], &[0.0, 2.0, 1.0]]));
    let out = hoi(&["info", &indefinite]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("pivot 2"), "{}", stderr(&out));

    let c = write(&dir, "c.json", &real_matrix_json(&COLLIDER));
    assert_eq!(code(&hoi(&["info", &c, "--partition", "[[0,1]]"])), 4);
    assert_eq!(code(&hoi(&["info", &c, "--partition", "[[0,1],[1,2]]"])), 4);
    assert_eq!(code(&hoi(&["info", &c, "--partition", "[[0,1"])), 4);
    assert_eq!(code(&hoi(&["info", &c, "--group", "all"])), 4);
    assert_eq!(code(&hoi(&["info", &c, "--node", "7"])), 2);
    assert_eq!(code(&hoi(&["info"])), 2);
}

#[test]
fn info_partition_from_file() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "c.json", &real_matrix_json(&COLLIDER));
    let part = write(&dir, "part.json", "[[2], [0, 1]]");
    let v = info_json(&["info", &c, "--partition", &part]);
    assert_eq!(v["structured"]["groups"], 2);
    let (tc, dtc) = (v["structured"]["sigma_tc"].as_f64().unwrap(), v["structured"]["sigma_dtc"].as_f64().unwrap());
    assert!((tc - dtc).abs() < 1e-10);
}

fn read(path: impl AsRef<Path>) -> Vec<u8> {
    std::fs::read(path).unwrap()
}

#[test]
fn simulate_toy1_writes_csv_and_metadata() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("ts.csv");
    let out = hoi(&["simulate", "toy1", "--seed", "1", "--out", csv.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = String::from_utf8(read(&csv)).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "ch0,ch1,ch2,ch3,ch4,ch5");
    assert_eq!(lines.len(), 1 + 100 * 256);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 6));
    let meta: Value = serde_json::from_slice(&read(dir.path().join("ts.json"))).unwrap();
    assert_eq!(meta["seed"], 1);
    assert_eq!(meta["burn_in"], 1000);
    assert_eq!(meta["fs"], 256.0);
    assert_eq!(meta["epochs"], 100);

    let again = dir.path().join("again.csv");
    assert_eq!(code(&hoi(&["simulate", "toy1", "--seed", "1", "--out", again.to_str().unwrap()])), 0);
    assert_eq!(read(&csv), read(&again));
    let stdout_run = hoi(&["simulate", "toy1", "--seed", "1"]);
    assert_eq!(stdout_run.stdout, read(&csv));
}

#[test]
fn simulate_rejects_unstable_and_bad_configs() {
    let dir = TempDir::new().unwrap();
    let unstable = write(&dir, "u.json", r#"{"p": 1, "order": 1, "coeffs": [[[1.2]]], "fs": 100.0}"#);
    let out = hoi(&["simulate", &unstable, "--epochs", "1", "--samples", "8"]);
    assert_eq!(code(&out), 6);
    assert!(stderr(&out).contains("1.2"), "{}", stderr(&out));
    let ragged = write(&dir, "r.json", r#"{"p": 2, "order": 1, "coeffs": [[[0.1]]], "fs": 100.0}"#);
    assert_eq!(code(&hoi(&["simulate", &ragged])), 2);
    assert_eq!(code(&hoi(&["simulate", "/nonexistent.json"])), 2);
}

#[test]
fn white_noise_end_to_end_is_near_independent() {
    let dir = TempDir::new().unwrap();
    let model = write(&dir, "zero.json", r#"{"p": 3, "order": 1, "coeffs": [[[0,0,0],[0,0,0],[0,0,0]]], "fs": 128.0}"#);
    let csv = dir.path().join("noise.csv");
    let csv = csv.to_str().unwrap();
    assert_eq!(
        code(&hoi(&["simulate", &model, "--epochs", "200", "--samples", "128", "--seed", "4", "--out", csv])),
        0
    );
    let out = hoi(&["spectra", csv, "--fs", "128", "--epoch-len", "128"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let table = parse_sweep_csv(&stdout(&out)).unwrap();
    assert_eq!(table.rows.len(), 64);
    let tc = table.column("tc").unwrap();
    let small = tc.iter().filter(|&&v| v <= 0.05).count();
    assert!(small as f64 >= 0.9 * tc.len() as f64, "{small}/{}", tc.len());
}

#[test]
fn spectra_header_and_degenerate_pairs() {
    let dir = TempDir::new().unwrap();
    let mut text = String::from("a,b\n");
    let mut x = 0.3f64;
    for _ in 0..(8 * 64) {
        // Logistic map: deterministic, broadband, not constant.
        x = 3.9 * x * (1.0 - x);
        text.push_str(&format!("{x},{x}\n"));
    }
    let path = write(&dir, "dup.csv", &text);
    let out = hoi(&["spectra", &path, "--fs", "64", "--epoch-len", "64"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let csv = stdout(&out);
    assert_eq!(csv.lines().next().unwrap(), "freq_hz,tc,dtc,oinfo,tse");
    // Exactly duplicated channels are singular at every bin.
    let table = parse_sweep_csv(&csv).unwrap();
    assert_eq!(table.warnings.len(), table.rows.len());

    // A tiny independent perturbation: coherence near 1, TC large, Omega = 0.
    let mut text = String::from("a,b\n");
    let mut y = 0.7f64;
    for _ in 0..(8 * 64) {
        x = 3.9 * x * (1.0 - x);
        y = 3.7 * y * (1.0 - y);
        text.push_str(&format!("{x},{}\n", x + 1e-3 * y));
    }
    let path = write(&dir, "near.csv", &text);
    let out = hoi(&["spectra", &path, "--fs", "64", "--epoch-len", "64"]);
    let table = parse_sweep_csv(&stdout(&out)).unwrap();
    assert!(table.warnings.is_empty());
    for r in &table.rows {
        assert!(r.values[0] > 2.0, "tc {}", r.values[0]);
        // Near-singular bins: compare relative to the size of TC.
        assert!((r.values[0] - r.values[1]).abs() <= 1e-9 * r.values[0], "{:?}", r.values);
        assert!(r.values[2].abs() <= 1e-9 * r.values[0]);
    }
}

#[test]
fn spectra_measures_partition_plots_and_errors() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("toy2.csv");
    let csv = csv.to_str().unwrap();
    assert_eq!(code(&hoi(&["simulate", "toy2", "--epochs", "10", "--samples", "64", "--out", csv])), 0);
    let plots = dir.path().join("plots");
    let out_csv = dir.path().join("sweep.csv");
    let out = hoi(&[
        "spectra",
        csv,
        "--fs",
        "256",
        "--epoch-len",
        "64",
        "--measures",
        "oinfo,sigma_oinfo,kappa_oinfo,lambda_rsi",
        "--partition",
        "[[0,1,2],[3,4,5],[6,7,8],[9,10,11]]",
        "--plot",
        plots.to_str().unwrap(),
        "--out",
        out_csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    let table = parse_sweep_csv(&String::from_utf8(read(&out_csv)).unwrap()).unwrap();
    assert_eq!(table.columns.len(), 1 + 1 + 4 + 12);
    assert_eq!(table.columns[2], "kappa_oinfo_0");
    assert!(table.frequencies().windows(2).all(|w| w[0] < w[1]));
    for name in ["global", "sigma_oinfo", "kappa_oinfo", "lambda_rsi"] {
        let svg = String::from_utf8(read(plots.join(format!("{name}.svg")))).unwrap();
        assert!(svg.contains("<svg") && svg.contains("version=\"1.1\"") && svg.trim_end().ends_with("</svg>"));
    }

    let base = ["spectra", csv, "--fs", "256"];
    assert_eq!(code(&hoi(&[&base[..], &["--epoch-len", "100"]].concat())), 5);
    assert_eq!(code(&hoi(&[&base[..], &["--epoch-len", "64", "--measures", "nope"]].concat())), 2);
    assert_eq!(code(&hoi(&[&base[..], &["--epoch-len", "64", "--measures", "sigma_tc"]].concat())), 4);
    let bad = write(&dir, "bad.csv", "a,b\n1,2\n3,x\n");
    assert_eq!(code(&hoi(&["spectra", &bad, "--fs", "1", "--epoch-len", "2"])), 2);
}

#[test]
fn spectra_bits_scales_values() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("ts.csv");
    let csv = csv.to_str().unwrap();
    assert_eq!(code(&hoi(&["simulate", "toy1", "--epochs", "20", "--samples", "64", "--out", csv])), 0);
    let nats = parse_sweep_csv(&stdout(&hoi(&["spectra", csv, "--fs", "256", "--epoch-len", "64"]))).unwrap();
    let bits = parse_sweep_csv(&stdout(&hoi(&["spectra", csv, "--fs", "256", "--epoch-len", "64", "--bits"]))).unwrap();
    for (a, b) in nats.rows.iter().zip(&bits.rows) {
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x / std::f64::consts::LN_2 - y).abs() <= 1e-12 * y.abs().max(1.0));
        }
    }
}

#[test]
fn toy_two_bundle() {
    let dir = TempDir::new().unwrap();
    let out = hoi(&["toy", "2", "--seed", "3", "--outdir", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().all(|l| l.starts_with("PASS: ")));
    for name in ["sweep.csv", "run.json", "global.svg", "oinfo.svg", "kappa_oinfo.svg", "sigma_rsi.svg"] {
        assert!(dir.path().join(name).exists(), "{name}");
    }
    let run: Value = serde_json::from_slice(&read(dir.path().join("run.json"))).unwrap();
    assert_eq!(run["passed"], true);
    assert_eq!(run["seed"], 3);
    assert_eq!(code(&hoi(&["toy", "3"])), 2);
}

#[test]
fn verify_reports_and_validates() {
    let out = hoi(&["verify", "--corpus-size", "30", "--seed", "2"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["passed"], true);
    let oracles = v["oracles"].as_array().unwrap();
    assert_eq!(oracles.len(), 11);
    assert!(oracles.iter().all(|o| o["max_abs_diff"].as_f64().unwrap() <= 1e-8));
    assert_eq!(code(&hoi(&["verify", "--corpus-size", "0"])), 2);
}

#[test]
fn thread_setting_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_hoi"))
        .args(["verify", "--corpus-size", "2"])
        .env("HOI_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}
