use std::process::{Command, Output};

use serde_json::Value;

fn adelab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_adelab"))
        .args(args)
        .env_remove("ADELAB_THREADS")
        .output()
        .expect("spawn adelab")
}

fn json(args: &[&str]) -> Value {
    let out = adelab(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn nums(v: &Value) -> Vec<u64> {
    v.as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect()
}

const LAME_SCAN: &[&str] = &[
    "pcurv", "scan", "--ode", "lame", "--params", "n=1/6,B=0,g2=0,g3=1", "--pmax", "20", "--k", "1",
];

#[test]
fn lame_scan_example() {
    let v = json(LAME_SCAN);
    assert_eq!(nums(&v["result"]["ring"]), [2, 3]);
    assert!(nums(&v["result"]["good"]).contains(&5));
    assert_eq!(v["tool"], "adelab");
    assert!(v.get("wall_ms").is_none());
    assert_eq!(v["command"], LAME_SCAN.join(" "));
}

#[test]
fn json_is_independent_of_worker_count() {
    let mut a = LAME_SCAN.to_vec();
    a.extend(["--threads", "1"]);
    let mut b = LAME_SCAN.to_vec();
    b.extend(["--threads", "3"]);
    let one = adelab(&a).stdout;
    assert_eq!(one, adelab(&b).stdout);
    let env = Command::new(env!("CARGO_BIN_EXE_adelab"))
        .args(LAME_SCAN)
        .env("ADELAB_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(one, env.stdout);
    assert_eq!(one, adelab(LAME_SCAN).stdout);
}

#[test]
fn timings_flag_adds_wall_time() {
    let mut a = LAME_SCAN.to_vec();
    a.push("--timings");
    let v = json(&a);
    assert!(v["wall_ms"].is_u64());
    assert_eq!(v["command"], LAME_SCAN.join(" "));
}

#[test]
fn csv_and_text_formats() {
    let mut a = LAME_SCAN.to_vec();
    a.extend(["--out", "csv"]);
    let out = String::from_utf8(adelab(&a).stdout).unwrap();
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("p,status,m,k"));
    assert_eq!(lines.next(), Some("2,ring,2,1"));
    assert_eq!(out.lines().count(), 9);
    let t = adelab(&["hodge", "codim", "--n", "6", "--d", "3", "--m", "0", "--out", "text"]);
    assert!(String::from_utf8(t.stdout).unwrap().contains("codim  8"));
}

#[test]
fn codim_example() {
    let v = json(&["hodge", "codim", "--n", "6", "--d", "3", "--m", "0"]);
    assert_eq!(v["result"]["codim"], "8");
    let v = json(&["hodge", "codim", "--n", "8", "--d", "3", "--m", "1"]);
    assert_eq!(v["result"]["codim"], "20");
}

#[test]
fn ramanujan_pclosed_example() {
    let v = json(&["vf", "pclosed", "--catalog", "ramanujan-e", "--pmax", "50"]);
    let nc = nums(&v["result"]["not_collinear"]);
    assert_eq!(nc, [5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]);
    assert_eq!(nums(&v["result"]["ring"]), [2, 3]);
    let w = &v["result"]["entries"][2]["witness"];
    assert!(w["terms"].as_u64().unwrap() > 0);
}

#[test]
fn checks_that_hold_exit_zero() {
    for a in [
        &["vf", "bianchini", "--p", "5,7"][..],
        &["vf", "firstintegral", "--p", "5,7"],
        &["vf", "linearize", "--p", "7", "--a", "0,2,1,3", "--order", "6"],
        &["mf", "check-ep", "--pmax", "23", "--order", "12"],
        &["mf", "numerator", "--weight", "12,16,18"],
        &["ec", "hw", "--p", "7", "--t2", "0", "--t3", "1"],
        &["ec", "hw", "--p", "11", "--symbolic"],
        &["ec", "count", "--p", "7", "--t2", "0", "--t3", "1"],
        &["ec", "powersum", "--p", "11", "--t2", "1", "--t3", "1"],
        &["ec", "abcheck", "--p", "5,7,11"],
        &["ec", "exactform", "--p", "11"],
        &["ec", "exactform", "--n", "6"],
        &["hodge", "series", "--n", "2", "--d", "4", "--alphas", "1,1,1,1;2,0,2,0", "--trunc", "4"],
        &["hodge", "balegh", "--d", "3", "--t", "1/100,0,0"],
        &["hodge", "table"],
        &["algfun", "taylor", "--poly", "y^2 - 1 - z", "--z0", "0", "--y0", "1", "--order", "6"],
        &["algfun", "binomring", "--a", "1/3", "--kmax", "6"],
        &["mf", "eisenstein", "--weight", "12", "--order", "3", "--decompose"],
        &["mf", "ab", "--p", "11", "--isobaric"],
        &["pcurv", "density", "--ode", "sqrt", "--params", "d=2", "--pmax", "200"],
        &["pcurv", "test", "--ode", "lame", "--params", "n=1/6,B=0,g2=0,g3=1", "--p", "5", "--expect", "zero"],
    ] {
        let out = adelab(a);
        assert_eq!(out.status.code(), Some(0), "{a:?}: {}", String::from_utf8_lossy(&out.stderr));
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(v["ok"], true, "{a:?}");
    }
}

#[test]
fn failed_checks_exit_one() {
    let lame = ["pcurv", "test", "--ode", "lame", "--params", "n=1/6,B=0,g2=0,g3=1"];
    let mut a = lame.to_vec();
    a.extend(["--p", "5", "--k", "6", "--expect", "zero"]);
    assert_eq!(adelab(&a).status.code(), Some(1));
    let out = adelab(&["hodge", "balegh", "--d", "3", "--t", "1/100,0,0", "--tol", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn invalid_input_exits_two() {
    for a in [
        &["pcurv", "scan", "--ode", "lame", "--params", "n=0.5,B=0,g2=0,g3=1", "--pmax", "20"][..],
        &["pcurv", "scan", "--ode", "lame", "--params", "n=1/6", "--pmax", "20"],
        &["pcurv", "scan", "--ode", "lame", "--params", "n=1/6,B=0,g2=0,g3=1,x=1", "--pmax", "20"],
        &["pcurv", "scan", "--ode", "lame", "--params", "n=1/6,B=0,g2=0,g3=1", "--pmax", "1"],
        &["pcurv", "scan", "--ode", "nope", "--pmax", "20"],
        &["pcurv", "test", "--ode", "sqrt", "--params", "d=2", "--p", "9"],
        &["vf", "pclosed", "--catalog", "nope", "--pmax", "10"],
        &["ec", "count", "--p", "7", "--t2", "3", "--t3", "1"],
        &["hodge", "codim", "--n", "5", "--d", "3", "--m", "0"],
        &["algfun", "taylor", "--poly", "y^2 - w", "--z0", "0", "--y0", "1", "--order", "3"],
        &["repro", "nope"],
        &["frobnicate"],
        &["--threads", "0", "hodge", "table"],
    ] {
        let out = adelab(a);
        assert_eq!(out.status.code(), Some(2), "{a:?}");
        assert!(!out.stderr.is_empty(), "{a:?}");
    }
    let env = Command::new(env!("CARGO_BIN_EXE_adelab"))
        .args(["hodge", "table"])
        .env("ADELAB_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(2));
}

#[test]
fn monomials_file() {
    let dir = std::env::temp_dir().join(format!("adelab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let f = dir.join("monomials.txt");
    std::fs::write(&f, "1,1,1,1\n2,0,2,0\n\n0,2,0,2\n").unwrap();
    let v = json(&[
        "hodge", "series", "--n", "2", "--d", "4", "--monomials", f.to_str().unwrap(), "--trunc", "3",
    ]);
    assert_eq!(v["result"]["alphas"].as_array().unwrap().len(), 3);
    let first = &v["result"]["terms"][0];
    assert!(first["coeff"].is_string());
    std::fs::remove_dir_all(dir).ok();
}

/// Every bundled table except the slow modular4 scan, which the acceptance
/// suite covers directly.
#[test]
fn repro_tables_match() {
    for id in [
        "lame-table4-badprimes",
        "lame-12-89",
        "lame-5-87",
        "hyp-half",
        "ramanujan-pclosed",
        "limitcycle-p3",
        "ab-congruence-100",
        "powersum-11",
        "cubic-codim-table",
        "mpk-grid",
    ] {
        let v = json(&["repro", id]);
        assert_eq!(v["result"]["matches"], true, "{id}");
    }
}

#[test]
fn repro_mismatch_prints_diff() {
    let dir = std::env::temp_dir().join(format!("adelab-golden-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let f = dir.join("mpk.txt");
    let mut body = String::from_utf8(adelab(&["repro", "mpk-grid", "--print"]).stdout).unwrap();
    body = body.replace("7 7 14", "7 7 15");
    std::fs::write(&f, body).unwrap();
    let out = adelab(&["repro", "mpk-grid", "--golden", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let diff = String::from_utf8(out.stderr).unwrap();
    assert!(diff.contains("-7 7 15") && diff.contains("+7 7 14"), "{diff}");
    std::fs::remove_dir_all(dir).ok();
}
