use std::collections::HashMap;
use std::path::Path;
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_orlicz-radius");

struct Out {
    code: i32,
    kv: HashMap<String, String>,
    stdout: String,
}

impl Out {
    fn get(&self, k: &str) -> &str {
        self.kv.get(k).unwrap_or_else(|| panic!("missing {k} in\n{}", self.stdout))
    }

    fn f(&self, k: &str) -> f64 {
        self.get(k).parse().unwrap()
    }
}

fn run(args: &[&str]) -> Out {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Out {
    let mut cmd = Command::new(BIN);
    cmd.args(args).env_remove("ORLICZ_RADIUS_JOBS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let o = cmd.output().unwrap();
    let stdout = String::from_utf8(o.stdout).unwrap();
    let kv = stdout
        .lines()
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
    Out {
        code: o.status.code().unwrap(),
        kv,
        stdout,
    }
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn jordan(n: usize) -> String {
    let data: Vec<String> = (0..n * n)
        .map(|k| if k % n == k / n + 1 { "[1,0]".to_string() } else { "[0,0]".to_string() })
        .collect();
    format!(r#"{{"n":{n},"data":[{}]}}"#, data.join(","))
}

#[test]
fn radius_spot_values() {
    let dir = tempfile::tempdir().unwrap();
    let j2 = write(dir.path(), "j2.json", &jordan(2));
    let o = run(&["radius", &j2]);
    assert_eq!(o.code, 0);
    assert!((o.f("w") - 0.5).abs() < 1e-9);
    assert!(o.f("certified_error") >= 0.0);

    let id = write(dir.path(), "id.txt", "2\n1 0\n0 0\n0 0\n1 0\n");
    assert!((run(&["radius", &id]).f("w") - 1.0).abs() < 1e-12);

    let j3 = write(dir.path(), "j3.json", &jordan(3));
    let o = run(&["radius", &j3, "--grid", "256"]);
    assert!((o.f("w") - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-9);

    let csv = dir.path().join("range.csv");
    let o = run(&["radius", &j3, "--boundary", "12", "--boundary-out", csv.to_str().unwrap()]);
    assert_eq!(o.get("boundary_points"), "12");
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 13);
}

#[test]
fn radius_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"n":2,"data":[[1,0]]}"#);
    assert_eq!(run(&["radius", &bad]).code, 2);
    assert_eq!(run(&["radius", "/definitely/not/here.json"]).code, 2);
    assert_eq!(run(&["radius"]).code, 2);
}

#[test]
fn bound_on_files_and_draws() {
    let dir = tempfile::tempdir().unwrap();
    let j2 = write(dir.path(), "j2.json", &jordan(2));
    let o = run(&["bound", "--case", "cor_N222", "--matrix", &j2]);
    assert_eq!(o.code, 0);
    assert!((o.f("chain.0") - 0.5).abs() < 1e-9);
    assert!((o.f("chain.1") - 0.78747).abs() < 1e-5);
    assert_eq!(o.get("holds"), "true");

    let spec = r#"{"family":"ginibre","n":3,"count":4,"seed":11}"#;
    let o = run(&["bound", "--case", "buzano_vec", "--ensemble", spec, "--index", "3"]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    let o = run(&["bound", "--case", "cor_N1", "--ensemble", spec, "--index", "1"]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    let o = run(&["bound", "--case", "corrupt:power_norm", "--ensemble", spec]);
    assert_eq!(o.code, 1);
    assert_eq!(o.get("status"), "violation");

    // usage errors
    assert_eq!(run(&["bound", "--case", "nope", "--matrix", &j2]).code, 2);
    assert_eq!(run(&["bound", "--case", "cor_N1", "--matrix", &j2]).code, 2);
    assert_eq!(run(&["bound", "--case", "buzano_vec", "--matrix", &j2]).code, 2);
    assert_eq!(run(&["bound", "--case", "base_norm", "--ensemble", spec, "--index", "4"]).code, 2);
    assert_eq!(run(&["bound", "--case", "base_norm"]).code, 2);
}

#[test]
fn bound_reports_not_applicable() {
    let spec = r#"{"family":"ginibre","n":3,"count":1,"seed":1}"#;
    let o = run(&["bound", "--case", "cor_nilpotent[n=3]", "--ensemble", spec]);
    assert_eq!(o.code, 0);
    assert_eq!(o.get("status"), "not_applicable");
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("self.json");
    let o = run(&["verify", "--suite", "selftest", "--out", out.to_str().unwrap()]);
    assert_eq!(o.code, 1);
    assert!(o.f("violations") > 0.0);
    assert!(out.exists());

    let cfg = write(
        dir.path(),
        "suite.json",
        r#"{"name":"small","cases":["base_norm",{"id":"th3_alpha","grid":{"phi":["expm1"],"alpha":[0,1],"variant":["a","b"]}}],
            "ensembles":[{"family":"normal","n":[2,3],"count":6,"seed":5}]}"#,
    );
    let csv = dir.path().join("small.csv");
    let o = run_env(
        &["verify", "--suite", &cfg, "--out", csv.to_str().unwrap(), "--format", "csv"],
        &[("ORLICZ_RADIUS_JOBS", "2")],
    );
    assert_eq!(o.code, 0, "{}", o.stdout);
    assert_eq!(o.get("entries"), "10");
    assert_eq!(o.get("violations"), "0");
    // base_norm two links, th3 one link; 2 ensembles
    let rows = std::fs::read_to_string(&csv).unwrap().lines().count() - 1;
    assert_eq!(rows, (2 + 4) * 2);

    assert_eq!(run(&["verify", "--suite", "/no/such/suite.json"]).code, 2);
    let bad = write(dir.path(), "bad.json", r#"{"name":"b","cases":["nope"],"ensembles":[]}"#);
    assert_eq!(run(&["verify", "--suite", &bad]).code, 2);
    assert_eq!(run(&["verify", "--suite", "selftest", "--format", "xml"]).code, 2);
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn compare_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("h.csv");
    let spec = r#"{"family":"hermitian","n":4,"count":25,"seed":3}"#;
    let o = run(&["compare", "--ensemble", spec, "--bounds", "base_norm,power_norm", "--out", out.to_str().unwrap()]);
    assert_eq!(o.code, 0);
    let (header, rows) = read_csv(&out);
    assert_eq!(header, ["index", "seed", "w", "base_norm", "power_norm"]);
    assert_eq!(rows.len(), 25);
    for r in &rows {
        assert!((r[3] - r[2]).abs() < 1e-8 && (r[4] - r[2]).abs() < 1e-8, "{r:?}");
    }

    let spec_path = write(dir.path(), "g.json", r#"{"family":"ginibre","n":2,"count":30,"seed":9}"#);
    let o = run(&["compare", "--ensemble", &spec_path, "--bounds", "base_kittaneh,cor_N222", "--out", out.to_str().unwrap()]);
    assert_eq!(o.code, 0);
    let (_, rows) = read_csv(&out);
    assert_eq!(rows.len(), 30);
    for r in &rows {
        assert!(r[3] >= r[2] * (1.0 - 1e-9) && r[4] >= r[2] * (1.0 - 1e-9), "{r:?}");
    }

    let o = run(&["compare", "--ensemble", &spec_path, "--bounds", "base_norm,buzano_vec", "--out", out.to_str().unwrap()]);
    assert_eq!(o.code, 2);
    let o = run(&["compare", "--ensemble", &spec_path, "--bounds", "dragomir_product[r=1]", "--out", out.to_str().unwrap()]);
    assert_eq!(o.code, 2);
}

#[test]
fn fuzz_hermitian_base_norm_reaches_equality() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.json");
    let o = run(&[
        "fuzz", "--seconds", "30", "--iterations", "200", "--case", "base_norm", "--family", "hermitian", "--out",
        w.to_str().unwrap(),
    ]);
    assert_eq!(o.code, 0);
    assert!((o.f("best_ratio") - 1.0).abs() < 1e-9);
    assert_eq!(o.get("violation"), "false");
}

#[test]
fn fuzz_witness_reproduces() {
    let dir = tempfile::tempdir().unwrap();
    for (case, family) in [("cor_N222", "ginibre"), ("th6[phi=expm1]", "ginibre"), ("cor_N1", "ginibre")] {
        let w = dir.path().join("w.json");
        let o = run(&[
            "fuzz", "--seconds", "30", "--iterations", "300", "--seed", "4", "--case", case, "--family", family,
            "--n", "3", "--out", w.to_str().unwrap(),
        ]);
        assert_eq!(o.code, 0, "{}", o.stdout);
        let ratio = o.f("best_ratio");
        assert!(ratio < 1.0, "{case}: {ratio}");
        let link = o.get("best_link");
        let mut args = vec!["bound", "--case", case, "--matrix", w.to_str().unwrap()];
        let s = o.kv.get("witness_s").cloned();
        if let Some(s) = &s {
            args.extend(["--matrix-s", s.as_str()]);
        }
        let b = run(&args);
        assert_eq!(b.code, 0);
        let again = b.f(&format!("link.{link}.ratio"));
        assert!((again - ratio).abs() < 1e-12, "{case}: {again} vs {ratio}");
    }
}

#[test]
fn fuzz_usage_errors() {
    assert_eq!(run(&["fuzz", "--seconds", "0", "--case", "base_norm"]).code, 2);
    assert_eq!(run(&["fuzz", "--seconds", "1", "--case", "no_such"]).code, 2);
    assert_eq!(run(&["fuzz", "--seconds", "1", "--case", "buzano_vec"]).code, 2);
    assert_eq!(run(&["fuzz", "--seconds", "1", "--case", "base_norm", "--family", "zzz"]).code, 2);
}

#[test]
fn catalogue_lists_every_case() {
    let o = run(&["catalogue"]);
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout.lines().count(), 36);
    assert!(o.stdout.lines().all(|l| l.starts_with("id=") && l.contains(" chain=")));
    let o = run(&["catalogue", "--case", "th7_power"]);
    assert!(o.stdout.contains("params=phi,n"));
    assert_eq!(run(&["catalogue", "--case", "zzz"]).code, 2);
}
