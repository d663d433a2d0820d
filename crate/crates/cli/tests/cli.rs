use std::process::Command;

fn ancomb(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ancomb")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn in_process(args: &[&str]) -> (i32, String) {
    let mut argv = vec!["ancomb".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = ancomb_cli::run_with(&argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

#[test]
fn register_census_json() {
    let (code, out, _) = ancomb(&["register", "--n", "3", "--format", "json"]);
    assert_eq!(code, 0);
    let rows: Vec<serde_json::Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!((rows[0]["p"].as_u64(), rows[0]["count"].as_u64()), (Some(1), Some(4)));
    assert_eq!((rows[1]["p"].as_u64(), rows[1]["count"].as_u64()), (Some(2), Some(1)));
}

#[test]
fn fm_mean_of_one_item() {
    let (code, out) = in_process(&["fm", "--mean", "--n", "1"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["mean"].as_f64(), Some(0.5));
    assert_eq!(v["mean_exact"].as_str(), Some("1/2"));
}

#[test]
fn csv_has_header_and_rows() {
    let (code, out) = in_process(&["digits", "--n", "6", "--format", "csv"]);
    assert_eq!(code, 0);
    let mut r = csv::Reader::from_reader(out.as_bytes());
    assert_eq!(r.headers().unwrap().iter().collect::<Vec<_>>(), ["n", "v2", "s2", "theta", "sgray"]);
    let last = r.records().last().unwrap().unwrap();
    assert_eq!(last.iter().collect::<Vec<_>>(), ["6", "1", "2", "-1", "2"]);
}

#[test]
fn rationals_and_decimals() {
    let (_, exact) = in_process(&["morris", "--n", "2"]);
    assert!(exact.contains("\"5/8\""), "{exact}");
    let (_, dec) = in_process(&["morris", "--n", "2", "--decimal", "3"]);
    assert!(dec.contains("\"0.625\""), "{dec}");
}

#[test]
fn usage_errors_exit_two() {
    let (code, _, err) = ancomb(&["register", "--n", "3", "--bogus"]);
    assert_eq!(code, 2);
    assert!(err.contains("Usage"), "{err}");
    assert_eq!(ancomb(&["nonsense"]).0, 2);
    assert_eq!(ancomb(&[]).0, 2);
    assert_eq!(in_process(&["register", "--n", "0"]).0, 2);
    assert_eq!(in_process(&["morris", "--n", "999999999"]).0, 2);
    assert_eq!(in_process(&["fm", "--n", "4", "--tol", "-1", "--mean"]).0, 2);
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = ancomb(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("verify"));
}

#[test]
fn simulation_is_deterministic() {
    let a = in_process(&["morris", "--n", "300", "--trials", "20000", "--seed", "7"]);
    let b = in_process(&["morris", "--n", "300", "--trials", "20000", "--seed", "7"]);
    assert_eq!(a, b);
    let c = in_process(&["morris", "--n", "300", "--trials", "20000", "--seed", "8"]);
    assert_ne!(a.1, c.1);
}

#[test]
fn verify_single_suite() {
    let (code, out) = in_process(&["verify", "--suite", "slices"]);
    assert_eq!(code, 0);
    for line in out.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["pass"].as_bool(), Some(true), "{line}");
    }
}

#[test]
fn euler_report_rows() {
    let (code, out) = in_process(&["sums", "--euler"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 3);
}

#[test]
fn dst_polynomial_rows() {
    let (code, out) = in_process(&["dst", "--n", "3"]);
    assert_eq!(code, 0);
    assert_eq!(out, "{\"n\":3,\"k\":1,\"probability\":\"1/2\"}\n{\"n\":3,\"k\":2,\"probability\":\"1/2\"}\n");
}
