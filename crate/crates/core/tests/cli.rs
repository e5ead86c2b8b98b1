use std::collections::BTreeSet;
use std::process::{Command, Output};

fn systole(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_systole")).args(args).env_remove("SYSTOLE_PRECISION").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn error_kind(o: &Output) -> String {
    let v: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    v["error"]["kind"].as_str().unwrap().to_string()
}

#[test]
fn expected_systole_report() {
    let o = systole(&["expected-systole", "--max-length", "4.6", "--check-anchors"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["lower"].as_str().unwrap().starts_with("2.56034118731933"));
    assert_eq!(v["n_lengths"], 31);
    assert_eq!(v["anchors"]["R31_num"], 112);
    assert_eq!(v["anchors"]["R31_den"], 3);
    assert_eq!(v["anchors"]["lambda_set_ok"], true);
    assert_eq!(v["anchors"]["tau_l32_ceiling"], 11);
    assert_eq!(v["B1_paper"], "7.51077e-19");
    assert_eq!(v["config"]["settings"]["D"], "4.6");
    assert!(v["version"].is_string());
}

#[test]
fn words_csv_has_31_lengths() {
    let o = systole(&["words", "--max-length", "4.6", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("word,m,trace_re,trace_im,cardinality,length_decimal"));
    let lengths: BTreeSet<&str> = lines.map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(lengths.len(), 31);
}

#[test]
fn empty_spectrum_exits_cleanly() {
    let o = systole(&["spectrum", "--max-length", "0.5"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "[]");
}

#[test]
fn errors_have_distinct_codes() {
    let cases: [(&[&str], i32, &str); 4] = [
        (&["--precision", "16", "words", "--max-length", "3"], 2, "InvalidConfig"),
        (&["expected-systole", "--max-length", "1.5"], 3, "InsufficientCutoff"),
        (&["words", "--max-length", "4.6", "--max-word-length", "3"], 4, "CapExceeded"),
        (&["words", "--max-length", "abc"], 2, "InvalidConfig"),
    ];
    for (args, code, kind) in cases {
        let o = systole(args);
        assert_eq!(o.status.code(), Some(code), "{args:?}");
        assert_eq!(error_kind(&o), kind);
    }
}

#[test]
fn precision_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_systole"))
        .args(["words", "--max-length", "3"])
        .env("SYSTOLE_PRECISION", "8")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn outputs_are_identical_across_worker_counts() {
    let a = systole(&["--workers", "1", "spectrum", "--max-length", "4.6"]);
    let b = systole(&["--workers", "3", "spectrum", "--max-length", "4.6"]);
    assert_eq!(a.stdout, b.stdout);
    let a = systole(&["--workers", "1", "simulate", "--n", "40", "--samples", "30", "--max-cycle-len", "4"]);
    let b = systole(&["--workers", "2", "simulate", "--n", "40", "--samples", "30", "--max-cycle-len", "4"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let header = stdout(&a).lines().next().unwrap().to_string();
    assert_eq!(header, "m,trace_re,trace_im,empirical_mean,empirical_var,predicted_rate_num,predicted_rate_den,stderr");
}

#[test]
fn cache_reproduces_the_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("words.csv");
    let cache_s = cache.to_str().unwrap();
    let out = dir.path().join("spectrum.json");
    let fresh = systole(&["spectrum", "--max-length", "4.3"]);
    let first = systole(&["words", "--max-length", "4.6", "--cache", cache_s, "--out", out.to_str().unwrap()]);
    assert!(first.status.success());
    assert!(cache.exists());
    assert_eq!(std::fs::read(&out).unwrap(), std::fs::read(&cache).unwrap());
    let cached = systole(&["spectrum", "--max-length", "4.3", "--cache", cache_s]);
    assert!(cached.status.success());
    assert_eq!(fresh.stdout, cached.stdout);

    std::fs::write(&cache, "word,m\nSSR1,2\n").unwrap();
    let bad = systole(&["spectrum", "--max-length", "4.3", "--cache", cache_s]);
    assert_eq!(bad.status.code(), Some(7));
    assert_eq!(error_kind(&bad), "Cache");
}
