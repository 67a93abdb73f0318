use std::path::PathBuf;
use std::process::{Command, Output};

use sqfree::dickman::EXP_NEG_GAMMA;

fn sqfree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sqfree"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Header and data rows, with metadata lines dropped.
fn rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines
        .next()
        .unwrap()
        .split(',')
        .map(str::to_owned)
        .collect();
    let data = lines
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect();
    (header, data)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sqfree-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn rho_at_two() {
    let text = stdout(&sqfree(&["rho", "--t", "2"]));
    assert!(text.lines().any(|l| l == "# seed=0"));
    let (header, data) = rows(&text);
    assert_eq!(header, ["t", "rho", "density", "cdf"]);
    let density: f64 = data[0][column(&header, "density")].parse().unwrap();
    assert!((density - EXP_NEG_GAMMA * (1.0 - 2f64.ln())).abs() < 1e-15);
}

#[test]
fn rho_table() {
    let text = stdout(&sqfree(&["rho", "--table", "0:10:0.5", "--h", "1/128"]));
    let (_, data) = rows(&text);
    assert_eq!(data.len(), 21);
}

#[test]
fn exact_mass_is_reproducible() {
    let args = ["ensemble", "mass", "--m", "24", "--s", "2", "--exact"];
    let a = sqfree(&args);
    let b = sqfree(&args);
    assert_eq!(stdout(&a), stdout(&b));
    let (header, data) = rows(&stdout(&a));
    assert_eq!(header, ["m", "s", "mass", "method"]);
    assert_eq!(data[0][3], "exact");
}

#[test]
fn monte_carlo_is_reproducible() {
    let args = [
        "ensemble", "mass", "--m", "500", "--s", "1", "--mc", "20000", "--seed", "4",
    ];
    assert_eq!(stdout(&sqfree(&args)), stdout(&sqfree(&args)));
}

#[test]
fn sweep_rows_are_inside() {
    let text = stdout(&sqfree(&[
        "errors",
        "--sweep",
        "16,24,32,40",
        "--schedule",
        "c-one",
        "--sigma",
        "1",
    ]));
    let (header, data) = rows(&text);
    assert_eq!(
        header.join(","),
        "m,k,delta_k,cell_mass,E,weight,weighted_sum,mean,bound,inside"
    );
    let ms: Vec<&str> = data.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(ms, ["16", "24", "32", "40"]);
    assert!(data.iter().all(|r| r[column(&header, "inside")] == "true"));
}

#[test]
fn per_cell_errors() {
    let text = stdout(&sqfree(&[
        "errors", "--m", "20", "--sigma", "1", "--K", "4",
    ]));
    let (header, data) = rows(&text);
    assert_eq!(data.len(), 4);
    let k: Vec<&str> = data
        .iter()
        .map(|r| r[column(&header, "k")].as_str())
        .collect();
    assert_eq!(k, ["0", "1", "2", "3"]);
}

#[test]
fn sample_then_empirical_phi() {
    let path = scratch("zeta.csv");
    let p = path.to_str().unwrap();
    stdout(&sqfree(&[
        "ensemble", "sample", "--m", "50", "--count", "5000", "--seed", "3", "--out", p,
    ]));
    let text = stdout(&sqfree(&[
        "phi",
        "--lambda-grid",
        "0:2:1",
        "--method",
        "empirical",
        "--samples",
        p,
    ]));
    let (header, data) = rows(&text);
    assert_eq!(header, ["lambda", "re", "im", "abs"]);
    assert_eq!(data.len(), 3);
    assert_eq!(data[0][1].parse::<f64>().unwrap(), 1.0);
    let json = scratch("zeta.json");
    let j = json.to_str().unwrap();
    stdout(&sqfree(&[
        "ensemble", "sample", "--m", "50", "--count", "5000", "--seed", "3", "--format", "json",
        "--out", j,
    ]));
    let again = stdout(&sqfree(&[
        "phi",
        "--lambda-grid",
        "0:2:1",
        "--method",
        "empirical",
        "--samples",
        j,
    ]));
    assert_eq!(rows(&again).1, data);
}

#[test]
fn json_mirrors_csv() {
    let text = stdout(&sqfree(&[
        "lemma", "--m", "5", "--sigma", "1", "--K", "10", "--format", "json",
    ]));
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["metadata"]["seed"], "0");
    assert_eq!(doc["rows"][0]["holds"], true);
    assert_eq!(doc["rows"][0]["p_m"], 11);
}

#[test]
fn other_subcommands() {
    let (_, d) = rows(&stdout(&sqfree(&[
        "primes",
        "--limit",
        "100",
        "--count-at",
        "10",
    ])));
    assert_eq!(d[0], ["100", "25", "4"]);
    let (_, d) = rows(&stdout(&sqfree(&["ensemble", "zm", "--m", "1"])));
    assert_eq!(d[0][1], "2");
    let (_, d) = rows(&stdout(&sqfree(&["classical", "squarefree", "--t", "10"])));
    assert_eq!(d[0][1], "7");
    let (_, d) = rows(&stdout(&sqfree(&[
        "classical",
        "psi",
        "--x",
        "10",
        "--y",
        "2",
    ])));
    assert_eq!(d[0][2], "4");
    let text = stdout(&sqfree(&[
        "classical",
        "theta",
        "--n",
        "100",
        "--count",
        "10",
        "--seed",
        "1",
    ]));
    assert!(text.contains("# ks_distance="));
    assert_eq!(rows(&text).1.len(), 10);
    let (_, d) = rows(&stdout(&sqfree(&[
        "phi",
        "--lambda-grid",
        "-1:1:1",
        "--method",
        "quad",
    ])));
    assert_eq!(d.len(), 3);
}

#[test]
fn validation_exits_one_naming_parameter() {
    let out = sqfree(&["errors", "--m", "20", "--sigma", "2", "--K", "4"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sigma"));
    let out = sqfree(&["ensemble", "mass", "--m", "60", "--s", "1", "--exact"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`m`"));
    let out = sqfree(&["rho", "--t", "3", "--h", "0.1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(sqfree(&["rho"]).status.code(), Some(1));
    assert_eq!(sqfree(&["bogus"]).status.code(), Some(1));
}

#[test]
fn io_failure_exits_two() {
    let out = sqfree(&["rho", "--t", "2", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(out.status.code(), Some(2));
    let out = sqfree(&[
        "phi",
        "--lambda-grid",
        "0:1:1",
        "--method",
        "empirical",
        "--samples",
        "/nonexistent-dir/z",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(sqfree(&["--help"]).status.code(), Some(0));
    assert_eq!(sqfree(&["--version"]).status.code(), Some(0));
}
