use std::path::Path;
use std::process::{Command, Output};

fn nbscope(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nbscope"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

#[test]
fn rudin_shapiro_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = nbscope(&["generate", "--family", "rudin-shapiro", "--count", "16", "--out", "rs.csv"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(dir.path().join("rs.csv")).unwrap();
    let mut rows = text.lines();
    assert_eq!(rows.next(), Some("n,re,im"));

    // concatenation rule: P_{k+1} = P_k Q_k, Q_{k+1} = P_k (-Q_k)
    let (mut p, mut q) = (vec![1i32], vec![1i32]);
    while p.len() < 16 {
        let np: Vec<i32> = p.iter().chain(q.iter()).copied().collect();
        let nq: Vec<i32> = p.iter().copied().chain(q.iter().map(|v| -v)).collect();
        p = np;
        q = nq;
    }
    let listed = [1, 1, 1, -1, 1, 1, -1, 1, 1, 1, 1, -1, -1, -1, 1, -1];
    assert_eq!(p, listed);
    for (n, row) in rows.enumerate() {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols[0].parse::<usize>().unwrap(), n);
        assert_eq!(cols[1].parse::<f64>().unwrap(), listed[n] as f64);
        assert_eq!(cols[2].parse::<f64>().unwrap(), 0.0);
    }
}

#[test]
fn factorial_verdict_is_strong() {
    let dir = tempfile::tempdir().unwrap();
    let out = nbscope(&["verdict", "--family", "gap-factorial", "--horizon", "100000", "--window", "5"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["verdict"], "StrongNaturalBoundaryEvidence");
}

#[test]
fn missing_input_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = nbscope(&["certificate", "--input", "notexist.csv", "--out", "cert.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
    assert!(!dir.path().join("cert.json").exists());
}

#[test]
fn bad_flags_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["verdict", "--family", "gap-factorial", "--bogus"][..],
        &["verdict"][..],
        &["generate", "--family", "periodic", "--count", "4"][..],
        &["generate", "--family", "rotation", "--q", "0.5", "--count", "4"][..],
        &["certificate", "--family", "gap-squares", "--eps", "0.4", "--delta", "0.5"][..],
        &["rightlimits", "--family", "gap-squares", "--format", "csv"][..],
    ] {
        assert_eq!(nbscope(args, dir.path()).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn generated_and_imported_agree() {
    let dir = tempfile::tempdir().unwrap();
    let gen = nbscope(&["generate", "--family", "gap-squares", "--count", "3000", "--out", "sq.csv"], dir.path());
    assert_eq!(gen.status.code(), Some(0));
    for cmd in ["certificate", "rightlimits", "szego", "verdict"] {
        let base = [cmd, "--horizon", "2500", "--window", "4"];
        let a = nbscope(&[&base[..], &["--family", "gap-squares"]].concat(), dir.path());
        let b = nbscope(&[&base[..], &["--input", "sq.csv"]].concat(), dir.path());
        assert_eq!(a.status.code(), b.status.code(), "{cmd}");
        let (mut ja, mut jb) = (json(&a), json(&b));
        // only the recorded origin may differ
        for j in [&mut ja, &mut jb] {
            if let Some(o) = j.as_object_mut() {
                o.remove("origin");
            }
        }
        assert_eq!(ja, jb, "{cmd}");
    }
}

#[test]
fn no_finding_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let periodic = ["--family", "periodic", "--pattern", "1,0,0", "--horizon", "2000"];
    let cert = nbscope(&[&["certificate"][..], &periodic].concat(), dir.path());
    assert_eq!(cert.status.code(), Some(1));
    assert!(json(&cert)["gap"].is_null());
    let per = nbscope(&[&["periodicity"][..], &periodic].concat(), dir.path());
    assert_eq!(per.status.code(), Some(0));
    assert_eq!(json(&per)["period"], 3);
    let rs = nbscope(&["periodicity", "--family", "rudin-shapiro", "--horizon", "4000"], dir.path());
    assert_eq!(rs.status.code(), Some(1));
    let v = nbscope(&[&["verdict"][..], &periodic].concat(), dir.path());
    assert_eq!(json(&v)["verdict"], "EventuallyPeriodic");
}

#[test]
fn probe_csv_is_plot_ready() {
    let dir = tempfile::tempdir().unwrap();
    let out = nbscope(
        &["probe", "--family", "periodic", "--pattern", "1", "--radii", "0.5,0.9,0.99", "--format", "csv"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 4);
    let integral = |row: &str| row.split(',').nth(1).unwrap().parse::<f64>().unwrap();
    assert!(integral(rows[1]) < integral(rows[2]) && integral(rows[2]) < integral(rows[3]));
}

#[test]
fn reflectionless_checks() {
    let dir = tempfile::tempdir().unwrap();
    let pass = nbscope(&["reflectionless", "--family", "periodic", "--pattern", "1", "--arc", "0.1,6.18"], dir.path());
    assert_eq!(pass.status.code(), Some(0));
    assert_eq!(json(&pass)["result"], "pass");
    let fail = nbscope(&["reflectionless", "--family", "periodic", "--pattern", "1", "--arc", "full"], dir.path());
    assert_eq!(json(&fail)["result"], "fail");
    let decay = nbscope(
        &["reflectionless", "--family", "gap-factorial", "--decay-side", "positive", "--center", "720", "--window", "5"],
        dir.path(),
    );
    assert_eq!(decay.status.code(), Some(0));
    assert_eq!(json(&decay)["result"], "NotReflectionless");
}

#[test]
fn montecarlo_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["montecarlo", "--iid", "1:0.5,-1:0.5", "--seed", "9", "--trials", "4", "--horizon", "2000", "--window", "3"];
    let a = nbscope(&args, dir.path());
    let b = nbscope(&args, dir.path());
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["hits"], 4);
    let refused = nbscope(&["montecarlo", "--iid", "1:1", "--trials", "2"], dir.path());
    assert_eq!(refused.status.code(), Some(2));
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["certificate", "--family", "rudin-shapiro", "--horizon", "3000", "--window", "2"];
    let one = Command::new(env!("CARGO_BIN_EXE_nbscope"))
        .args(args)
        .env("NBSCOPE_THREADS", "1")
        .output()
        .unwrap();
    let many = nbscope(&args, dir.path());
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn in_process_entry_point() {
    assert_eq!(nbscope_cli::run_cli(["nbscope", "periodicity", "--family", "periodic", "--pattern", "1,-1"]), 0);
    assert_eq!(nbscope_cli::run_cli(["nbscope", "nope"]), 2);
}
