use std::f64::consts::PI;
use std::process::{Command, Output};

const DISK_ANTIPODAL: &str = r#"{"schema":1,"space":{"kind":"glued","cone":{"kappa":0,"radius":1,
    "sigma":{"kind":"circle","length":6.283185307179586}},"phi":{"kind":"antipodal_circle"}}}"#;
const DISK_IDENTITY: &str = r#"{"schema":1,"space":{"kind":"glued","cone":{"kappa":0,"radius":1,
    "sigma":{"kind":"circle","length":6.283185307179586}},"phi":{"kind":"identity"}}}"#;
const ROUND_SPHERE: &str = r#"{"schema":1,"space":{"kind":"round_sphere","radius":1,"dim":2}}"#;

fn kcone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kcone")).args(args).env_remove("KCONE_SEED").output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Parses CSV text into the header and rows of named fields.
fn rows(csv: &str) -> Vec<std::collections::HashMap<String, String>> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert!(header.contains(&"method") && header.contains(&"error"), "{header:?}");
    lines.map(|l| header.iter().map(|h| h.to_string()).zip(l.split(',').map(String::from)).collect()).collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn identity_gluing_apex_distance() {
    let out = stdout(&kcone(&["glued-dist", "--space", DISK_IDENTITY, "--from", "apex", "--to", "1,0deg"]));
    let r = rows(&out);
    assert_eq!(r.len(), 1);
    assert!((num(&r[0]["distance"]) - 1.0).abs() < 1e-12);
}

#[test]
fn antipodal_refinement_table() {
    let out = stdout(&kcone(&[
        "glued-dist", "--space", DISK_ANTIPODAL, "--from", "0.9,0deg", "--to", "0.9,180deg", "--eps", "0.1", "--refine", "3",
    ]));
    let r = rows(&out);
    assert_eq!(r.len(), 3);
    for (row, eps) in r.iter().zip([0.1, 0.05, 0.025]) {
        assert_eq!(num(&row["eps"]), eps);
        assert!((num(&row["distance"]) - 0.2).abs() <= 3.0 * eps, "{row:?}");
        assert_eq!(row["method"], "graph");
    }
    assert!(out.ends_with('\n') && !out.contains('\r'));
}

#[test]
fn cone_distance_is_exact() {
    let cone = r#"{"schema":1,"space":{"kind":"cone","kappa":0,"radius":2,"sigma":{"kind":"circle","length":6.283185307179586}}}"#;
    let r = rows(&stdout(&kcone(&["dist", "--space", cone, "--from", "1,0", "--to", "1,90deg"])));
    assert!((num(&r[0]["distance"]) - 2f64.sqrt()).abs() < 1e-12);
    assert_eq!(r[0]["method"], "exact");
}

#[test]
fn malformed_input_exits_2() {
    let out = kcone(&["dist", "--space", r#"{"schema":1,"space":"#, "--from", "apex", "--to", "apex"]);
    assert_eq!(out.status.code(), Some(2));
    let typo = r#"{"schema":1,"space":{"kind":"cone","kappa":0,"radius":1,"sigma":{"kind":"circle","lenght":1}}}"#;
    let out = kcone(&["volume", "--space", typo, "--radii", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("lenght") && err.contains("line 1"), "{err}");
    assert_eq!(kcone(&["volume", "--space", "/no/such/file.json", "--radii", "1"]).status.code(), Some(2));
    assert_eq!(kcone(&["bogus"]).status.code(), Some(2));
}

#[test]
fn domain_violations_exit_3() {
    let far = r#"{"schema":1,"space":{"kind":"cone","kappa":1,"radius":4,"sigma":{"kind":"sphere","dim":1}}}"#;
    assert_eq!(kcone(&["volume", "--space", far, "--radii", "1"]).status.code(), Some(3));
    assert_eq!(kcone(&["sn", "--kappa", "1", "--t", "4"]).status.code(), Some(3));
    assert_eq!(kcone(&["glued-dist", "--space", DISK_ANTIPODAL, "--from", "apex", "--to", "2,0"]).status.code(), Some(3));
}

#[test]
fn volumes() {
    let disk = r#"{"schema":1,"space":{"kind":"cone","kappa":0,"radius":1,"sigma":{"kind":"circle","length":6.283185307179586}}}"#;
    let r = rows(&stdout(&kcone(&["volume", "--space", disk, "--radii", "1"])));
    assert!((num(&r[0]["value"]) - PI).abs() < 1e-9);
    let sphere = r#"{"schema":1,"space":{"kind":"cone","kappa":1,"radius":3.141592653589793,"sigma":{"kind":"circle","length":6.283185307179586}}}"#;
    let r = rows(&stdout(&kcone(&["volume", "--space", sphere, "--radii", "3.141592653589793"])));
    assert!((num(&r[0]["value"]) - 4.0 * PI).abs() < 1e-9);

    let r = rows(&stdout(&kcone(&["volume", "--space", disk, "--radii", "0.5", "--method", "mc", "--samples", "200000"])));
    assert_eq!(r[0]["method"], "mc");
    let (v, se) = (num(&r[0]["value"]), num(&r[0]["error"]));
    assert!(se > 0.0 && (v - PI / 4.0).abs() <= 4.0 * se, "{v} ± {se}");
}

#[test]
fn bg_report_round_sphere() {
    let out = stdout(&kcone(&[
        "bg-report", "--space", ROUND_SPHERE, "--kappa", "0", "--radii", "0,1,2", "--radii", "0.5,1.5,3",
    ]));
    let r = rows(&out);
    assert_eq!(r.len(), 6);
    for row in &r {
        if row["status"] == "empty_inner_ball" {
            assert_eq!(row["form"], "ball");
            continue;
        }
        assert_eq!(row["status"], "pass");
        assert!(num(&row["margin"]) >= 0.0, "{row:?}");
    }
    assert!(r.iter().any(|row| row["status"] == "empty_inner_ball"));
}

#[test]
fn bg_report_json_and_mc() {
    let out = stdout(&kcone(&[
        "bg-report", "--space", ROUND_SPHERE, "--kappa", "0", "--radii", "0.5,1,2", "--method", "mc", "--samples", "200000",
        "--format", "json",
    ]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r["method"] == "mc" && r["error"].as_f64().unwrap() > 0.0));
}

#[test]
fn tube_check_two_disks() {
    let r = rows(&stdout(&kcone(&["tube-check", "--input", r#"{"n":2,"epsilon":1,"gaps":[1]}"#, "--samples", "200000"])));
    let get = |m: &str| r.iter().find(|row| row["method"] == m).unwrap();
    let closed = 4.0 * PI / 3.0 + 3f64.sqrt() / 2.0;
    assert!((num(&get("exact")["value"]) - closed).abs() <= 1e-9);
    assert!((num(&get("closed_form")["value"]) - closed).abs() <= 1e-9);
    assert!(num(&get("mc")["error"]) > 0.0);
}

#[test]
fn seeds_and_output_file() {
    let disk = r#"{"schema":1,"space":{"kind":"cone","kappa":0,"radius":1,"sigma":{"kind":"circle","length":6.283185307179586}}}"#;
    let args = ["volume", "--space", disk, "--radii", "0.5", "--method", "mc", "--samples", "10000"];
    let a = stdout(&kcone(&args));
    assert_eq!(a, stdout(&kcone(&args)));
    let env = Command::new(env!("CARGO_BIN_EXE_kcone")).args(args).env("KCONE_SEED", "99").output().unwrap();
    let b = stdout(&env);
    let mut flagged: Vec<&str> = args.to_vec();
    flagged.extend(["--seed", "99"]);
    assert_eq!(b, stdout(&kcone(&flagged)));
    assert_ne!(a, b);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v.csv");
    let mut with_output: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap();
    with_output.extend(["--output", p]);
    assert!(stdout(&kcone(&with_output)).is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), a);
}

#[test]
fn help_lists_subcommands() {
    let help = stdout(&kcone(&["--help"]));
    for cmd in ["sn", "dist", "volume", "glued-dist", "bg-report", "tube-check", "lemma-suite"] {
        assert!(help.contains(cmd), "{cmd} missing from help");
    }
}

#[test]
fn sn_table() {
    let r = rows(&stdout(&kcone(&["sn", "--kappa", "-1", "--t", "0,1"])));
    assert_eq!(num(&r[1]["value"]), 1f64.sinh());
    assert_eq!(num(&r[0]["kappa"]), -1.0);
}
