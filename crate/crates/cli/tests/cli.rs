use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn toroyang(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toroyang")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

#[test]
fn step1_suite_passes() {
    let o = toroyang(&["degen", "verify", "--suite", "step1", "--type", "A2", "--trunc", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).lines().last().unwrap().contains(" 0 fail"));
}

#[test]
fn cartan_show_b3_ends_with_half() {
    let o = toroyang(&["cartan", "show", "--type", "B3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.trim_end().lines().last().unwrap().trim_end().ends_with("1/2"), "{out}");
}

#[test]
fn straighten_produces_cartan_terms() {
    let o = toroyang(&["straighten", "--dialect", "quantum", "--expr", "X+(1,0)*X-(1,0)"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("X-(1,0)*X+(1,0)"), "{out}");
    assert!(out.contains("H(1,0)"), "{out}");
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(toroyang(&["--bogus"]).status.code(), Some(2));
    assert_eq!(toroyang(&["cartan", "show", "--type", "Z9"]).status.code(), Some(2));
    assert_eq!(toroyang(&["--trunc", "1", "cartan", "show"]).status.code(), Some(2));
    let o = toroyang(&["straighten", "--dialect", "classical", "--expr", "e(1,0) + hbar"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("1:10"));
}

#[test]
fn identical_configs_give_identical_json() {
    let config = scratch("run.conf");
    std::fs::write(&config, "type = A2\ntrunc = 2\nsamples = 5\nseed = 11\n").unwrap();
    let mut outputs = Vec::new();
    for n in 0..2 {
        let path = scratch(&format!("report{n}.json"));
        let o = toroyang(&["--config", config.to_str().unwrap(), "--json", path.to_str().unwrap(), "degen", "verify", "--suite", "hbar-nzd"]);
        assert!(o.status.code().is_some_and(|c| c < 2), "{}", String::from_utf8_lossy(&o.stderr));
        outputs.push(std::fs::read(&path).unwrap());
    }
    assert!(!outputs[0].is_empty());
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn reports_follow_the_schema() {
    let schema: Value = serde_json::from_str(include_str!("../schema/report.schema.json")).unwrap();
    let item = &schema["properties"]["records"]["items"];
    let statuses: Vec<&str> = item["properties"]["status"]["enum"].as_array().unwrap().iter().map(|s| s.as_str().unwrap()).collect();
    let fields: Vec<&str> = item["required"].as_array().unwrap().iter().map(|s| s.as_str().unwrap()).collect();

    let path = scratch("schema.json");
    let o = toroyang(&["--type", "A1", "--json", path.to_str().unwrap(), "degen", "verify", "--suite", "vandermonde"]);
    assert_eq!(o.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    let records = report["records"].as_array().unwrap();
    assert!(!records.is_empty());
    for r in records {
        let obj = r.as_object().unwrap();
        assert_eq!(obj.len(), fields.len());
        assert!(fields.iter().all(|f| obj.contains_key(*f)));
        assert!(statuses.contains(&r["status"].as_str().unwrap()));
    }
}
