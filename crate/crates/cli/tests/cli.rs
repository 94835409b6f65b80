use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shiftmetric"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scalar(o: &Output) -> f64 {
    assert_eq!(o.status.code(), Some(0), "stderr: {}", stderr(o));
    stdout(o).split_whitespace().next().unwrap().parse().unwrap()
}

#[test]
fn heights_of_quadratic_with_large_parameter() {
    let o = run(&["heights", "--coeffs", r#"{"degree":2,"coeffs":[[1e6,0]]}"#]);
    assert_eq!(o.status.code(), Some(0));
    let v: Vec<f64> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.len(), 1);
    assert!((v[0] - 6.9078).abs() < 1e-3, "{v:?}");
    // Bare coefficient arrays are accepted too.
    let o = run(&["heights", "--coeffs", "[1e6]"]);
    assert_eq!(stdout(&o).trim(), format!("[{:.16e}]", v[0]));
}

#[test]
fn heights_of_cubic_power_map_are_flagged() {
    let o = run(&["heights", "--coeffs", "[0,0]"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Vec<f64> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v, vec![0.0, 0.0]);
    assert!(stderr(&o).contains("not shift locus"));
}

#[test]
fn malformed_input_exits_with_two() {
    for args in [
        vec!["heights", "--coeffs", "{degree:"],
        vec!["entropy", "--lengths", "1,abc"],
        vec!["entropy", "--lengths", "1,1", "--method", "magic"],
        vec!["sweep-s2", "--levels", "-1"],
        vec!["regimes", "--family", r#"{"D":3,"regime":"h2=a*h1""#],
        vec!["frobnicate"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty());
    }
}

#[test]
fn entropy_examples() {
    let h = scalar(&run(&["entropy", "--lengths", "log3,log3"]));
    assert!((h - 1.0).abs() < 1e-12);
    let h = scalar(&run(&["entropy", "--lengths", "1,1,1,1", "--method", "spectral"]));
    assert!((h - 7f64.ln()).abs() < 1e-12);
    let h = scalar(&run(&["entropy", "--lengths", "[1, \"inf\", 2]", "--method", "det"]));
    let direct = scalar(&run(&["entropy", "--lengths", "1,2"]));
    assert!((h - direct).abs() < 1e-12);
}

#[test]
fn method_disagreement_is_a_numeric_failure() {
    let o = run(&["entropy", "--lengths", "0.5,1,2", "--perturb", "spectral=1e-4"]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    for m in ["closed", "spectral", "det"] {
        assert!(err.contains(m), "{err}");
    }
    let o = run(&["entropy", "--lengths", "0.5,1,2", "--perturb", "spectral=1e-9"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn norm_methods_agree() {
    let a = scalar(&run(&["norm", "--lengths", "1,2,3", "--vector", "1,0,-1"]));
    let b = scalar(&run(&[
        "norm",
        "--lengths",
        "1,2,3",
        "--vector",
        "1,0,-1",
        "--method",
        "cycles",
    ]));
    assert!(a > 0.0);
    assert!((a - b).abs() < 1e-8 * a);
}

#[test]
fn distance_identity_symmetry_refinement() {
    let o = run(&["distance", "--heights-a", "2,1", "--heights-b", "2,1"]);
    assert_eq!(scalar(&o), 0.0);
    assert!(stdout(&o).contains("upper-bound"));
    let ab = scalar(&run(&[
        "distance",
        "--heights-a",
        "3,1",
        "--heights-b",
        "8,0.5",
        "--refine",
        "1",
    ]));
    let ba = scalar(&run(&[
        "distance",
        "--heights-a",
        "8,0.5",
        "--heights-b",
        "3,1",
        "--refine",
        "1",
    ]));
    assert!((ab - ba).abs() < 1e-3, "{ab} vs {ba}");
    let coarse = scalar(&run(&[
        "distance",
        "--heights-a",
        "3,1",
        "--heights-b",
        "8,0.5",
        "--refine",
        "0",
    ]));
    assert!(ab <= coarse + 1e-12);
}

#[test]
fn sweep_is_deterministic_and_well_formed() {
    let args = ["sweep-s2", "--levels", "0.05,1,20", "--samples", "24"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("h,length,samples"));
    let rows: Vec<Vec<String>> = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r[2] == "24"));
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("shiftmetric-cli-{}.csv", std::process::id()));
    let o = run(&[
        "sweep-s2",
        "--levels",
        "2",
        "--samples",
        "8",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(text.starts_with("h,length,samples\n"));
}

fn regime_summary(family: &str) -> String {
    let o = run(&["regimes", "--family", family]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    stdout(&o)
}

#[test]
fn cubic_regimes_verdicts() {
    let grid = "[2,4,8,16,32,64,128,256,512,1024]";
    let cauchy = regime_summary(&format!(r#"{{"D":3,"regime":"h2=a*h1","a":0.5,"kGrid":{grid}}}"#));
    assert!(cauchy.contains("verdict=cauchy-consistent"), "{cauchy}");
    let divergent = regime_summary(&format!(r#"{{"D":3,"regime":"h2=h1/log(h1)","kGrid":{grid}}}"#));
    assert!(divergent.contains("verdict=divergent-consistent"), "{divergent}");
}

#[test]
fn quartic_singular_family() {
    // h3 bounded while h1, h2 grow: h3 = o(h2) and h3 / h1^2 -> 0.
    let s = regime_summary(r#"{"D":4,"regime":"power","coef":[1,0.5,1],"pow":[1,1,0],"kGrid":[100,1000,10000]}"#);
    assert!(s.contains("index_set=2 singular=true"), "{s}");
    assert!(s.contains("case=2c"), "{s}");
}

#[test]
fn regimes_json_round_trips() {
    let o = run(&[
        "regimes",
        "--family",
        r#"{"D":3,"regime":"h2=a*h1^2","a":1,"kGrid":[10,100,1000]}"#,
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["asymptotics"]["case"], "Case2b");
    assert_eq!(v["cauchy"]["legs"].as_array().unwrap().len(), 2);
}
