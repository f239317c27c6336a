use std::path::PathBuf;
use std::process::{Command, Output};

use ttlab_core::report::ReportBundle;

fn ttlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ttlab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ttlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn gessel_suite_passes() {
    let o = ttlab(&["verify", "gessel", "--ell", "3", "--nmax", "8"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("gessel.ell3 (order 8) [9 coefficient comparisons]"), "{text}");
    assert!(text.ends_with("3 passed / 0 failed\n"));
}

#[test]
fn seeded_runs_are_byte_identical() {
    let a = scratch("v1.json");
    let b = scratch("v2.json");
    for p in [&a, &b] {
        let o = ttlab(&["verify", "virasoro", "--seed", "7", "--format", "json", "--report", p.to_str().unwrap()]);
        assert!(o.status.success());
    }
    let (ja, jb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ja, jb);
    let text = String::from_utf8(ja).unwrap();
    let bundle = ReportBundle::from_json(&text).unwrap();
    assert_eq!(bundle.to_json() + "\n", text);
    assert_eq!(bundle.config["seed"], "7");
    assert!(bundle.cases.iter().any(|c| c.check_id == "virasoro.commutator.beta2.seed26"));
}

#[test]
fn csv_has_one_row_per_case() {
    let o = ttlab(&["verify", "closed-forms", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("check_id,paper_ref,params,status,order_verified"));
    let j = ttlab(&["verify", "closed-forms", "--format", "json"]);
    let bundle = ReportBundle::from_json(&stdout(&j)).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rdr.records().count(), bundle.cases.len());
}

#[test]
fn failing_checks_set_the_exit_code() {
    let o = ttlab(&["verify", "painleve-words", "--ell", "1", "--k", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL painleve.words.ell1.k2.plus.chain"));
    let o = ttlab(&["verify", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn single_operations() {
    let o = ttlab(&["count", "--class", "perm", "--n", "5", "--ell", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["count"], 42);

    let o = ttlab(&["painleve", "residual", "--target", "g-unitary", "--ell", "2", "--ode", "unitary", "--order", "10"]);
    assert!(stdout(&o).contains("zero: true"));

    let o = ttlab(&["closedform", "volume", "--group", "O(4)+", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["volume"], "1*pi^2");
    assert_eq!(v["determinant_agrees"], true);

    let o = ttlab(&["closedform", "aomoto", "--kind", "y1", "--n", "2", "--a", "0", "--b", "1"]);
    assert!(stdout(&o).contains("value: -1/4"));

    let o = ttlab(&["tau", "--model", "circle", "--n", "1", "--times", "1", "--order", "3", "--format", "csv"]);
    assert!(stdout(&o).starts_with("monomial,numerator,denominator,pi_power"));

    let o = ttlab(&["numeric", "--ell", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["max_deviation"].as_f64().unwrap() < 1e-6);
}
