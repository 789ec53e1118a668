use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use rho_core::characteristics::{sylvester_rho_profile, ProfileReport};
use rho_core::{NormSpec, Rational};
use serde_json::Value;

fn rho(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rho"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(out));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn sylvester_three_profile_as_csv() {
    let out = rho(&["rho", "--matrix", "sylvester:3", "--norm", "l1", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(reader.headers().unwrap(), vec!["m", "rho"]);
    let rows: Vec<(usize, i64)> = reader.deserialize().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 8);
    let max = rows.iter().map(|r| r.1).max().unwrap();
    assert_eq!(max, 14);
    let at: Vec<usize> = rows.iter().filter(|r| r.1 == max).map(|r| r.0).collect();
    assert_eq!(at, vec![5, 7]);
}

#[test]
fn closed_form_four() {
    let v = json(&rho(&["closed-form", "--n", "4"]));
    assert_eq!(v["value"], 34);
    assert_eq!(v["m"], 11);
    assert_eq!(v["m_prime"], 13);
}

#[test]
fn closed_form_table() {
    let out = rho(&["closed-form", "--n", "1", "--to", "3", "--format", "csv"]);
    assert_eq!(stdout(&out), "n,value,m,m_prime\n1,2,1,2\n2,6,3,3\n3,14,5,7\n");
}

#[test]
fn conjecture_two_holds() {
    let v = json(&rho(&["conjecture", "--n", "2", "--mode", "exhaustive-subsets"]));
    assert_eq!(v["min"], "6");
    assert_eq!(v["rhs"], "6");
    assert_eq!(v["verdict"], "holds");
    assert_eq!(v["exact"], true);
}

#[test]
fn anneal_is_inconclusive_not_exact() {
    let v = json(&rho(&[
        "conjecture", "--n", "3", "--mode", "anneal", "--seed", "5", "--iterations", "2000",
    ]));
    assert_eq!(v["exact"], false);
    assert_ne!(v["verdict"], "holds");
}

#[test]
fn both_prefixes() {
    let out = rho(&["conjecture", "--n", "3", "--prefix", "both", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("n,m,prefix,min,rhs,verdict,exact,finished\n"), "{text}");
    assert!(text.contains("3,5,m,14,14,holds,true,true"), "{text}");
    assert!(text.contains("3,7,m-prime,"), "{text}");
}

fn run_with_checkpoint(cp: &Path, extra: &[&str]) -> Output {
    let mut args = vec![
        "conjecture",
        "--n",
        "3",
        "--mode",
        "branch-and-bound",
        "--checkpoint",
        cp.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    rho(&args)
}

#[test]
fn checkpoint_round_trip() {
    let whole = json(&rho(&["conjecture", "--n", "3", "--mode", "branch-and-bound"]));
    let dir = tempfile::tempdir().unwrap();
    let cp = dir.path().join("search.json");
    let mut runs = 0;
    let last = loop {
        let v = json(&run_with_checkpoint(&cp, &["--max-steps", "4", "--checkpoint-every", "2"]));
        runs += 1;
        assert!(!cp.with_extension("json.lock").exists());
        if v["finished"] == true {
            break v;
        }
        assert_eq!(v["exact"], false);
        assert!(runs < 1000);
    };
    assert!(runs > 1, "the search should have been interrupted");
    assert_eq!(last["min"], whole["min"]);
    assert_eq!(last["witness"], whole["witness"]);
    assert_eq!(last["exact"], true);
    assert_eq!(last["stats"]["evaluations"], whole["stats"]["evaluations"]);
}

#[test]
fn empty_checkpoint_starts_fresh() {
    let dir = tempfile::tempdir().unwrap();
    let cp = dir.path().join("empty.json");
    fs::write(&cp, "").unwrap();
    let v = json(&run_with_checkpoint(&cp, &[]));
    assert_eq!(v["min"], "14");
    assert_eq!(v["finished"], true);
}

#[test]
fn mismatched_checkpoint_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cp = dir.path().join("cp.json");
    json(&run_with_checkpoint(&cp, &["--max-steps", "3"]));
    let out = rho(&[
        "conjecture", "--n", "4", "--mode", "branch-and-bound", "--checkpoint", cp.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("checkpoint was written for"), "{}", stderr(&out));
}

#[test]
fn corrupt_checkpoint_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let cp = dir.path().join("cp.json");
    fs::write(&cp, "{\"format\": 1, \"n\": ").unwrap();
    let out = run_with_checkpoint(&cp, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("corrupt checkpoint"), "{}", stderr(&out));
    // never silently replaced
    assert_eq!(fs::read_to_string(&cp).unwrap(), "{\"format\": 1, \"n\": ");
}

#[test]
fn locked_checkpoint_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let cp = dir.path().join("cp.json");
    fs::write(dir.path().join("cp.json.lock"), "1\n").unwrap();
    let out = run_with_checkpoint(&cp, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("cannot lock"), "{}", stderr(&out));
}

#[test]
fn profile_json_round_trips() {
    let out = rho(&["rho", "--matrix", "sylvester:4", "--norm", "l1"]);
    let report: ProfileReport = serde_json::from_slice(&out.stdout).unwrap();
    let mut expected = sylvester_rho_profile(4, &NormSpec::<Rational>::l1())
        .unwrap()
        .to_report();
    expected.source = "sylvester:4".into();
    assert_eq!(report, expected);
    let again = serde_json::to_string(&report).unwrap();
    assert_eq!(serde_json::from_str::<ProfileReport>(&again).unwrap(), report);
}

#[test]
fn float_norms_are_tagged() {
    let v = json(&rho(&["rho", "--matrix", "sylvester:3", "--norm", "lp:2"]));
    assert_eq!(v["tolerance"], "float:rel 1e-9");
    assert_eq!(v["rho_max"], 8.0);
    let v = json(&rho(&["rho", "--matrix", "sylvester:3", "--norm", "l1"]));
    assert_eq!(v["tolerance"], "exact");
}

#[test]
fn generated_matrix_feeds_back_in() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h12.txt");
    let out = rho(&["gen", "--matrix", "catalog:12", "--format", "text", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let spec = format!("file:{}", path.display());
    let v = json(&rho(&["validate", "--matrix", &spec]));
    assert_eq!(v["hadamard"], true);
    assert_eq!(v["order"], 12);
}

#[test]
fn non_hadamard_is_a_negative_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    fs::write(&path, "order 2\n1 1\n1 1\n").unwrap();
    let out = rho(&["validate", "--matrix", &format!("file:{}", path.display())]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["hadamard"], false);
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("garbage.txt");
    fs::write(&path, "order 2\n1 x\n1 1\n").unwrap();
    let cases: Vec<Vec<String>> = vec![
        vec!["rho".into(), "--matrix".into(), "sylvester:2".into(), "--norm".into(), "l7".into()],
        vec!["rho".into(), "--matrix".into(), format!("file:{}", path.display())],
        vec!["conjecture".into(), "--n".into(), "7".into(), "--mode".into(), "exhaustive-subsets".into()],
        vec!["rho-n".into(), "--order".into(), "8".into(), "--budget".into(), "0".into()],
        vec!["rho-n".into(), "--order".into(), "6".into()],
        vec!["frobnicate".into()],
    ];
    for args in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = rho(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stderr(&out));
        assert!(!stderr(&out).is_empty());
    }
}

#[test]
fn budget_error_mentions_the_count() {
    let out = rho(&["rho-n", "--order", "12", "--budget", "1000"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("531441"), "{}", stderr(&out));
}

#[test]
fn bounds_sandwich_passes() {
    let v = json(&rho(&["bounds", "--n", "6", "--norm", "l1"]));
    assert!(v["verdicts"].as_array().unwrap().iter().all(|x| x["ok"] == true));
    let v = json(&rho(&["bounds", "--order", "12", "--norm", "l1", "--search"]));
    assert_eq!(v["rho"], 36);
    let v = json(&rho(&["bounds", "--n", "4", "--norm", "lp:2", "--type-p", "2", "--type-constant", "1"]));
    assert!(v["bounds"].as_array().unwrap().iter().any(|b| b["name"] == "type_p"));
}

#[test]
fn hat_rho_and_diagnostics() {
    let v = json(&rho(&["hat-rho", "--matrix", "sylvester:3", "--norm", "lp:2", "--families", "20"]));
    assert_eq!(v["ok"], true);
    assert_eq!(v["ceiling"], 24.0);
    let out = rho(&["diagnostics", "--n-max", "3", "--orders", "4", "--format", "csv"]);
    assert_eq!(
        stdout(&out).lines().next().unwrap(),
        "family,size,rho,ratio"
    );
    assert_eq!(stdout(&out).lines().count(), 5);
}

#[test]
fn alpha_columns() {
    let v = json(&rho(&["alpha", "--n", "3"]));
    assert_eq!(v["columns"][0]["max_abs_alpha"], 8);
    assert_eq!(v["distribution"]["0"], 4);
    let v = json(&rho(&["alpha", "--n", "40", "--column", "9"]));
    assert_eq!(v["columns"][0]["f"], 3);
}
