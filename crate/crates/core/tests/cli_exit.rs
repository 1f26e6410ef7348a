use std::path::PathBuf;
use std::process::{Command, Output};

fn pq(args: &[&str], threads: Option<&str>) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_pq"));
    c.args(args)
        .current_dir(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures"));
    match threads {
        Some(n) => c.env("PQ_THREADS", n),
        None => c.env_remove("PQ_THREADS"),
    };
    c.output().expect("spawn pq")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn cocycle_job_succeeds() {
    let o = pq(&["cocycle", "--job", "job_cocycle_square.json"], None);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["results"]["raw"].as_f64(), Some(1.0));
    assert_eq!(v["command"], "cocycle");
}

#[test]
fn unknown_suite_is_a_validation_error() {
    let o = pq(&["verify", "--suite", "bogus"], None);
    assert_eq!(code(&o), 2);
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("bogus"));
}

#[test]
fn tightened_tolerance_fails_verify() {
    let o = pq(&["verify", "--suite", "prequantum", "--tol", "1e-15"], None);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["results"]["failed"].as_u64().unwrap() > 0);
}

#[test]
fn missing_or_bad_inputs_exit_2() {
    assert_eq!(code(&pq(&["cocycle"], None)), 2);
    assert_eq!(code(&pq(&["cocycle", "--job", "no_such_file.json"], None)), 2);
    assert_eq!(code(&pq(&["holonomy", "--job", "job_cocycle_square.json"], None)), 2);
    assert_eq!(code(&pq(&["periods", "--refine", "0"], None)), 2);
    assert_eq!(code(&pq(&["periods", "--resolution", "12by3"], None)), 2);
    assert_eq!(code(&pq(&["bogus"], None)), 2);
    assert_eq!(code(&pq(&["verify", "--suite", "paths"], Some("zero"))), 2);
}

#[test]
fn malformed_job_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, "{ \"command\": \"cocycle\", ").unwrap();
    let o = pq(&["cocycle", "--job", p.to_str().unwrap()], None);
    assert_eq!(code(&o), 2);
    assert!(o.stdout.is_empty());
}

#[test]
fn csv_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let o = pq(
        &[
            "converge",
            "--job",
            "job_converge_sphere.json",
            "--format",
            "csv",
            "--out",
            out.to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.starts_with("n,h,error\n"));
}

#[test]
fn reports_are_byte_identical_across_thread_counts() {
    let a = pq(&["holonomy", "--job", "job_holonomy_equator.json"], Some("1"));
    let b = pq(&["holonomy", "--job", "job_holonomy_equator.json"], Some("4"));
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn regen_oracles_matches_bundled_table() {
    let o = pq(&["verify", "--regen-oracles"], None);
    assert_eq!(code(&o), 0);
    let bundled = std::fs::read(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/oracles.json")).unwrap();
    assert_eq!(o.stdout, bundled);
}
