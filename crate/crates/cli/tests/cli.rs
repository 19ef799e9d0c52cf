//! End-to-end runs of the `ahs` binary.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn ahs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ahs")).args(args).output().expect("binary runs")
}

fn ahs_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ahs"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid json")
}

#[test]
fn count_table_matches_known_counts() {
    let o = ahs(&["--format", "json", "expand", "--count-only", "--max-order", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["full"], serde_json::json!([1, 5, 24, 134, 900, 7184]));
    assert_eq!(v["correction"], serde_json::json!([0, 1, 4, 16, 67, 328]));
    assert_eq!(v["linear_obstruction"], serde_json::json!([1, 2, 8, 30, 153, 830]));
    let text = stdout(&ahs(&["expand", "--count-only", "--max-order", "3"]));
    assert!(text.lines().any(|l| l.starts_with("full") && l.ends_with("1  5 24")), "{text}");
}

#[test]
fn second_order_correction_in_latex() {
    let o = ahs(&["expand", "--order", "2", "--filter", "correction", "--format", "latex"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), r"\lambda([X_1,\Gamma\cdot X_2])\,s");
}

#[test]
fn order_zero_is_the_empty_sum() {
    let o = ahs(&["expand", "--order", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "0");
    let v = json(&ahs(&["--format", "json", "expand", "--order", "0"]));
    assert_eq!(v["terms"].as_array().unwrap().len(), 0);
}

#[test]
fn expansion_json_parses_back() {
    let o = ahs(&["--format", "json", "expand", "--order", "3"]);
    let e = ahs_core::term_engine::parse_json(&stdout(&o)).unwrap();
    assert_eq!(e, ahs_core::term_engine::expand(3, None));
    let d1 = json(&ahs(&["--format", "json", "expand", "--order", "3", "--tau", "1"]));
    assert_eq!(d1["terms"].as_array().unwrap().len(), 8);
}

#[test]
fn laplacian_weight_at_dimension_four() {
    let o = ahs(&["operator", "solve-weight", "--dim", "4", "--rep", "density", "--order", "2", "--projector", "trace"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "w = 1");
    let v = json(&ahs(&[
        "--format", "json", "operator", "solve-weight", "--dim", "4", "--rep", "density", "--order", "2", "--projector", "alt",
    ]));
    assert_eq!(v["weights"], "all");
}

#[test]
fn third_order_operator_is_invariant() {
    let o = ahs(&[
        "--format", "json", "operator", "check", "--dim", "4", "--rep", "density:w=-2", "--order", "3", "--projector", "sym3_0",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["invariant"], true);
    assert_eq!(v["weights"], serde_json::json!(["-2/1"]));
    let f = v["formula_latex"].as_str().unwrap();
    assert!(f.contains(r"4\Gamma_{(ab}\nabla_{c)_0}s"), "{f}");
    assert!(f.contains(r"2(\nabla_{(a}\Gamma_{bc)_0})s"), "{f}");
}

#[test]
fn obstructed_operator_exits_one() {
    let o = ahs(&["--format", "json", "operator", "check", "--dim", "4", "--rep", "density:w=0", "--order", "2", "--projector", "sym0"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["invariant"], false);
    assert!(v["obstruction_witness"].is_object());
}

#[test]
fn conformal_laplacian_coefficient() {
    assert_eq!(stdout(&ahs(&["conformal", "laplacian-coefficient", "--dim", "4"])).trim(), "1/6");
    let v = json(&ahs(&["--format", "json", "conformal", "laplacian-coefficient", "--dim", "6"]));
    assert_eq!(v["coefficient"], "1/5");
    assert_eq!(ahs(&["conformal", "laplacian-coefficient", "--dim", "2"]).status.code(), Some(2));
}

#[test]
fn sphere_normalization() {
    let o = ahs_stdin(&["--format", "json", "conformal", "normalize", "--input", "-"], r#"{"m":4,"preset":"sphere"}"#);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    for i in 0..4 {
        for j in 0..4 {
            assert_eq!(v["gamma"][i][j], if i == j { "-1/2" } else { "0/1" });
        }
    }
    assert_eq!(v["deformed_trace_max_abs"], "0/1");
    assert_eq!(v["unique"], true);
    assert_eq!(v["deformed_curvature_vanishes"], true);
}

#[test]
fn sphere_from_riemann_table_and_flat() {
    let mut entries = Vec::new();
    for i in 1..=3 {
        for j in 1..=3 {
            if i != j {
                entries.push(format!(r#""{i},{j},{i},{j}":1"#));
                entries.push(format!(r#""{i},{j},{j},{i}":-1"#));
            }
        }
    }
    let doc = format!(r#"{{"m":3,"riemann":{{{}}}}}"#, entries.join(","));
    let v = json(&ahs_stdin(&["--format", "json", "conformal", "normalize", "--input", "-"], &doc));
    assert_eq!(v["gamma"][0][0], "-1/2");
    assert_eq!(v["gamma"][0][1], "0/1");
    let flat = json(&ahs_stdin(&["--format", "json", "conformal", "normalize", "--input", "-"], r#"{"m":5,"preset":"flat"}"#));
    assert!(flat["gamma"].as_array().unwrap().iter().flat_map(|r| r.as_array().unwrap()).all(|x| x == "0/1"));
}

#[test]
fn rho_from_ricci() {
    let doc = r#"{"m":3,"ricci":[[2,0,0],[0,2,0],[0,0,2]],"scalar":"6/1"}"#;
    let v = json(&ahs_stdin(&["--format", "json", "conformal", "rho", "--input", "-"], doc));
    assert_eq!(v["gamma"][1][1], "-1/2");
    assert_eq!(v["scalar"], "6/1");
}

#[test]
fn bad_input_exits_two() {
    assert_eq!(ahs(&["expand", "--order", "x"]).status.code(), Some(2));
    assert_eq!(ahs(&["algebra", "info", "conformal(1)"]).status.code(), Some(2));
    assert_eq!(ahs(&["operator", "check", "--dim", "4", "--rep", "bogus", "--order", "2", "--projector", "sym0"]).status.code(), Some(2));
    assert_eq!(ahs(&["operator", "check", "--dim", "4", "--rep", "density", "--order", "3", "--projector", "sym0"]).status.code(), Some(2));
    let bad = ahs_stdin(&["conformal", "normalize", "--input", "-"], r#"{"m":4,"ricci":[[1]]}"#);
    assert_eq!(bad.status.code(), Some(2));
    let two = ahs_stdin(&["conformal", "normalize", "--input", "-"], r#"{"m":2,"preset":"flat"}"#);
    assert_eq!(two.status.code(), Some(2));
    assert_eq!(ahs(&["conformal", "normalize", "--input", "/nonexistent/file.json"]).status.code(), Some(2));
}

#[test]
fn algebra_info_reports_dimensions() {
    let v = json(&ahs(&["--format", "json", "algebra", "info", "grassmannian(2,3)"]));
    assert_eq!(v["dims"], serde_json::json!([6, 12, 6]));
    let text = stdout(&ahs(&["algebra", "info", "lagrangian(3)"]));
    assert!(text.contains("g-1 = 6"), "{text}");
}

#[test]
fn output_flag_writes_file_and_runs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("e4.json");
    let p = path.to_str().unwrap();
    let o = ahs(&["--format", "json", "--output", p, "expand", "--order", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let first = std::fs::read(&path).unwrap();
    ahs(&["--format", "json", "--output", p, "expand", "--order", "4"]);
    assert_eq!(std::fs::read(&path).unwrap(), first);
}
