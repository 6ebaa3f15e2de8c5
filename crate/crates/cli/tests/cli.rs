use std::process::{Command, Output};

fn schubert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schubert"))
        .args(args)
        .env_remove("SCHUBERT_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

#[test]
fn analyze_reports_bp_and_smoothness() {
    let o = schubert(&["analyze", "--system", "A3", "--word", "1,3,2,3,1", "--K", "1,3", "--format", "json"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["is_bp"], true);
    assert_eq!(v["rationally_smooth"], false);
    assert_eq!(v["poincare"], "t^5+4t^4+6t^3+5t^2+3t+1");

    let o = schubert(&["analyze", "--system", "A3", "--word", "1,3,2,1", "--K", "1,3", "--format", "json"]);
    assert_eq!(json(&o)["is_bp"], false);

    let o = schubert(&["analyze", "--system", "G2", "--word", "1,2", "--J", "1", "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["grassmannian"]["status"]["kind"], "table_row");
    assert_eq!(v["smooth"], true);
}

#[test]
fn analyze_rejects_bad_input() {
    for args in [
        ["analyze", "--system", "A3", "--word", "1,2", "--J", "2"],
        ["analyze", "--system", "Q3", "--word", "1", "--J", ""],
        ["analyze", "--system", "B3", "--word", "1,7", "--J", ""],
    ] {
        let o = schubert(&args);
        assert!(!o.status.success());
        assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
    }
}

#[test]
fn table_csv() {
    let o = schubert(&["table", "--system", "F4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    let table: Vec<_> = rows.iter().filter(|r| &r[2] == "table_row").collect();
    assert_eq!(table.len(), 4);
    let smooth: Vec<&str> = table.iter().map(|r| &r[7]).collect();
    assert_eq!(smooth, ["false", "false", "true", "true"]);
}

#[test]
fn verify_writes_reports_and_config_is_checked() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "systems = [\"G2\", \"B3\"]\njobs = 2\n").unwrap();
    let out = dir.path().join("report.json");
    let o = schubert(&[
        "verify", "--suite", "ratgrass", "--config", cfg.to_str().unwrap(),
        "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["payload"]["passed"], true);
    assert_eq!(v["payload"]["systems"], serde_json::json!(["G2", "B3"]));

    let o = schubert(&["replay", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("0 failure records replayed"));

    std::fs::write(&cfg, "systems = [\"G2\"]\nunknown_key = 1\n").unwrap();
    let o = schubert(&["verify", "--suite", "ratgrass", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_csv_and_text() {
    let o = schubert(&["verify", "--suite", "bp2", "--systems", "A3,B3", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("suite,system,"));
    assert_eq!(text.lines().count(), 3);
    let o = schubert(&["verify", "--suite", "peterson", "--systems", "A3", "--format", "text"]);
    assert!(stdout(&o).contains("peterson: PASS"));
}

#[test]
fn cache_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_schubert"))
            .args(["verify", "--suite", "ratgrass", "--systems", "F4", "--format", "json"])
            .env("SCHUBERT_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    let cold = json(&run());
    assert!(std::fs::read_dir(dir.path()).unwrap().count() > 0);
    let warm = json(&run());
    assert_eq!(cold["payload"], warm["payload"]);
}

#[test]
fn affine_suite_and_element() {
    let o = schubert(&["affine", "--n", "2", "--max-length", "6", "--format", "json"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["payload"]["passed"], true);
    let o = schubert(&["affine", "--n", "2", "--element", "[0,2,4]", "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["window"], "[0,2,4]");
    assert_eq!(v["affine"]["avoids_patterns"], true);
}
