use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_threefold")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, serde_json::Value) {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let o = run(&a);
    (o.status.code().unwrap(), serde_json::from_slice(&o.stdout).expect("json report"))
}

#[test]
fn all_k3_passes_with_theorem_sequence() {
    let (code, r) = json(&["all", "--k", "3"]);
    assert_eq!(code, 0);
    assert_eq!(r["schema"], "cert/1");
    assert_eq!(r["status"], "PASS");
    let checks = r["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["status"] == "PASS"));
    let seq = checks.iter().find(|c| c["name"] == "normal-bundles: sequence").unwrap();
    assert_eq!(seq["witness"], "(0, -2), (0, -2), (-1, -1)");
}

#[test]
fn perturb_leaf_table() {
    let (code, r) = json(&["perturb", "--k", "1", "--N", "2", "--eps", "1"]);
    assert_eq!(code, 0);
    let checks = r["checks"].as_array().unwrap();
    assert_eq!(checks[0]["witness"], "CERTIFIED");
    // 16 leaves; f = -(m+n)/4 with m, n the numbers of nonzero branches.
    let leaves = &checks[1..];
    assert_eq!(leaves.len(), 16);
    for leaf in leaves {
        let name = leaf["name"].as_str().unwrap();
        let nonzero = name.matches(" : ").count() as i64;
        let expected = match nonzero {
            0 => "f = 0".to_string(),
            4 => "f = -1".to_string(),
            2 => "f = -1/2".to_string(),
            n => format!("f = -{n}/4"),
        };
        assert!(leaf["witness"].as_str().unwrap().starts_with(&expected), "{name}: {}", leaf["witness"]);
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["tower", "--k", "0"]).status.code(), Some(2));
    assert_eq!(run(&["perturb", "--k", "1", "--N", "1"]).status.code(), Some(2));
    assert_eq!(run(&["perturb", "--k", "1", "--N", "2", "--eps", "x"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn failing_search_exits_one() {
    let (code, r) = json(&["perturb-search", "--k", "2", "--N-max", "3"]);
    assert_eq!(code, 1);
    assert_eq!(r["status"], "FAIL");
}

#[test]
fn json_is_byte_identical_across_runs() {
    for args in [&["quadric", "--trials", "20", "--seed", "7", "--format", "json"][..], &["certify", "--k", "2", "--format", "json"][..]] {
        let a = run(args);
        let b = run(args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn splitting_from_matrix_file_and_output_flag() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.json");
    std::fs::write(&m, r#"[["z^2", "z"], ["0", "1"]]"#).unwrap();
    let out = dir.path().join("report.json");
    let o = run(&["splitting", "--matrix", m.to_str().unwrap(), "--format", "json", "--output", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let r: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r["checks"][1]["witness"], "(-1, -1)");

    std::fs::write(&m, r#"[["z^-1", "0"], ["0", "z^3"]]"#).unwrap();
    let (code, r) = json(&["splitting", "--matrix", m.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r["checks"][1]["witness"], "(1, -3)");

    std::fs::write(&m, r#"[["z", "0"], ["0", "z - 1"]]"#).unwrap();
    assert_eq!(run(&["splitting", "--matrix", m.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn text_table_and_square_check() {
    let o = run(&["square-check"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.starts_with("cert/1 square-check"));
    assert!(s.contains("overall: PASS"));
    assert!(s.contains("wall time:"));
}

#[test]
fn real_slice_reports_bounds() {
    let (code, r) = json(&["real-slice", "--k", "1", "--N", "2", "--samples", "300"]);
    assert_eq!(code, 0);
    assert_eq!(r["checks"][0]["witness"], "x4 <= 1, |x_j| <= 1/2 (coarse 1)");
}
