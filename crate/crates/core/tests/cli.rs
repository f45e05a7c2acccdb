use std::process::{Command, Output};

use serde_json::Value;

fn cliffgen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cliffgen"))
        .args(args)
        .env_remove("CLIFFGEN_TOL")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

#[test]
fn enumerate_n2_matches() {
    let o = cliffgen(&["enumerate", "--n", "2", "--format", "pretty"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.ends_with("6 families; brute-force: 6; MATCH\n"), "{out}");
    assert!(out.contains("A21 A22 A23 A10 A30"));
}

#[test]
fn enumerate_n3_reports_mismatch() {
    let o = cliffgen(&["enumerate", "--n", "3", "--random", "--seed", "5"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["structural_count"], 36);
    assert_eq!(v["brute_force"]["count"], 288);
    assert_eq!(v["brute_force"]["structural_subset"], true);
    assert_eq!(v["verdict"], "MISMATCH");
}

#[test]
fn enumerate_n4_skips_brute_force_by_default() {
    let o = cliffgen(&["enumerate", "--n", "4", "--format", "pretty"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("216 families\n"));
}

#[test]
fn output_is_deterministic() {
    let args = ["generate", "--n", "2", "--random", "--seed", "42"];
    assert_eq!(cliffgen(&args).stdout, cliffgen(&args).stdout);
    let other = cliffgen(&["generate", "--n", "2", "--random", "--seed", "43"]);
    assert_ne!(cliffgen(&args).stdout, other.stdout);
}

#[test]
fn generate_single_index() {
    let o = cliffgen(&["generate", "--n", "1", "--index", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let g = &v["generators"][0];
    assert_eq!(g["label"], "R2");
    assert_eq!(g["matrix"]["order"], 2);
    // sigma_2 = [[0, -i], [i, 0]]
    assert_eq!(g["matrix"]["entries"][1], serde_json::json!([0.0, -1.0]));
}

#[test]
fn generate_family_and_all() {
    let v = json(&cliffgen(&["generate", "--n", "2", "--family", "2"]));
    assert_eq!(
        v["family"]["members"],
        serde_json::json!(["A21", "A22", "A23", "A10", "A30"])
    );
    let v = json(&cliffgen(&["generate", "--n", "2"]));
    assert_eq!(v["generators"].as_array().unwrap().len(), 15);
}

#[test]
fn explicit_angles_are_checked() {
    let o = cliffgen(&["generate", "--n", "2", "--angles", "0.1,-0.2,0.3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = cliffgen(&["generate", "--n", "1", "--angles", "0.1,-0.2,0.3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["angles"][0]["beta"], -0.2);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(cliffgen(&["generate", "--n", "5"]).status.code(), Some(2));
    assert_eq!(
        cliffgen(&["generate", "--n", "1", "--tol", "-1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        cliffgen(&["generate", "--n", "1", "--index", "A12"]).status.code(),
        Some(2)
    );
    assert_eq!(
        cliffgen(&["generate", "--n", "1", "--format", "csv"]).status.code(),
        Some(2)
    );
    assert_eq!(cliffgen(&["bogus"]).status.code(), Some(2));
    assert_eq!(cliffgen(&["verify", "--n", "2"]).status.code(), Some(2));
}

#[test]
fn tolerance_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_cliffgen"))
        .args(["generate", "--n", "1"])
        .env("CLIFFGEN_TOL", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_with_u_matrix_and_twist() {
    let o = cliffgen(&["verify", "--n", "2", "--family", "1", "--u-matrix", "--twist", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["negative_count"], 2);
    assert_eq!(v["report"]["passed"], true);
    assert_eq!(v["u_matrix"]["relation"], "commutes");
}

#[test]
fn verify_rejects_commuting_members() {
    let o = cliffgen(&["verify", "--n", "2", "--members", "A10,A01"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["report"]["passed"], false);
}

#[test]
fn cayley_quintet_csv() {
    let o = cliffgen(&["cayley", "--quintet", "--format", "csv", "--random"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "row,col,result,phase");
    assert_eq!(lines.len(), 26);
    assert!(lines.contains(&"A10,A21,A31,i"));
    assert!(lines.contains(&"A30,A10,A20,i"));
}

#[test]
fn cayley_census() {
    let v = json(&cliffgen(&["cayley", "--n", "2"]));
    let census = v["census"].as_array().unwrap();
    assert_eq!(census.len(), 16);
    assert!(census
        .iter()
        .filter(|c| c["label"] != "A00")
        .all(|c| c["anticommuting"] == 8));
}

#[test]
fn decompose_closed_forms() {
    let o = cliffgen(&[
        "decompose",
        "--n",
        "2",
        "--index",
        "A20",
        "--basis",
        "dirac",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("-ig0g5,1e0,0e0"), "{}", stdout(&o));
    let v = json(&cliffgen(&[
        "decompose",
        "--n",
        "2",
        "--index",
        "A12",
        "--basis",
        "gellmann",
        "--random",
    ]));
    assert!(v["trace_agreement"].as_f64().unwrap() < 1e-10);
}

#[test]
fn decompose_matrix_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("y.json");
    let entries: Vec<[f64; 2]> = (0..16).map(|k| [k as f64, (k % 3) as f64]).collect();
    std::fs::write(&path, serde_json::json!({"order": 4, "entries": entries}).to_string()).unwrap();
    let p = path.to_str().unwrap();
    for basis in ["generators", "dirac", "gellmann", "quintet"] {
        let o = cliffgen(&["decompose", "--n", "2", "--matrix", p, "--basis", basis, "--random"]);
        assert_eq!(o.status.code(), Some(0), "{basis}");
    }
    let v = json(&cliffgen(&[
        "decompose",
        "--n",
        "2",
        "--matrix",
        p,
        "--basis",
        "quintet",
    ]));
    assert_eq!(v["terms"].as_array().unwrap().len(), 16);

    std::fs::write(&path, "{\"order\": 4, \"entries\": []}").unwrap();
    assert_eq!(
        cliffgen(&["decompose", "--n", "2", "--matrix", p]).status.code(),
        Some(2)
    );
}

#[test]
fn gl4_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let out = dir.path().join("ab.json");
    let (sa, sb, so) = (a.to_str().unwrap(), b.to_str().unwrap(), out.to_str().unwrap());
    assert!(
        cliffgen(&["gl4", "random", "--seed", "1", "--angles", "0.3,1.1,2.0", "-o", sa])
            .status
            .success()
    );
    assert!(
        cliffgen(&["gl4", "random", "--seed", "2", "--angles", "0.3,1.1,2.0", "-o", sb])
            .status
            .success()
    );

    let o = cliffgen(&["gl4", "compose", "--params", sa, sb, "-o", so]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(v["matrix_residual"].as_f64().unwrap() < 1e-9);

    for action in ["det", "invert"] {
        let o = cliffgen(&["gl4", action, "--params", sa]);
        assert_eq!(o.status.code(), Some(0), "{action}");
    }
    let o = cliffgen(&["gl4", "unitary", "--params", sa]);
    assert_eq!(o.status.code(), Some(1));

    let c = dir.path().join("c.json");
    assert!(cliffgen(&["gl4", "random", "--seed", "3", "-o", c.to_str().unwrap()])
        .status
        .success());
    assert_eq!(
        cliffgen(&["gl4", "compose", "--params", sa, c.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn gl4_unitary_special_cases() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("u.json");
    let zero = serde_json::json!({"s": [0.0, 0.0], "v": [[0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]});
    let one = serde_json::json!({"s": [1.0, 0.0], "v": [[0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]});
    let minus = serde_json::json!({"s": [-1.0, 0.0], "v": [[0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]});
    let angles = serde_json::json!({"alpha": 0.0, "beta": 0.0, "gamma": 0.0});
    let p = path.to_str().unwrap();

    std::fs::write(
        &path,
        serde_json::json!({"k": one, "n": zero, "l": zero, "m": one, "angles": angles}).to_string(),
    )
    .unwrap();
    let o = cliffgen(&["gl4", "unitary", "--params", p]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["case"], "block-diagonal");

    std::fs::write(
        &path,
        serde_json::json!({"k": zero, "n": one, "l": minus, "m": zero, "angles": angles}).to_string(),
    )
    .unwrap();
    let o = cliffgen(&["gl4", "unitary", "--params", p]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["case"], "anti-diagonal");
}

#[test]
fn gl4_singular_inverse_fails() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    let zero = serde_json::json!({"s": [0.0, 0.0], "v": [[0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]});
    let one = serde_json::json!({"s": [1.0, 0.0], "v": [[0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]});
    let angles = serde_json::json!({"alpha": 0.0, "beta": 0.0, "gamma": 0.0});
    std::fs::write(
        &path,
        serde_json::json!({"k": one, "n": zero, "l": zero, "m": zero, "angles": angles}).to_string(),
    )
    .unwrap();
    let o = cliffgen(&["gl4", "invert", "--params", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn gl4_from_matrix_recovers_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let params = dir.path().join("p.json");
    let matrix = dir.path().join("y.json");
    assert!(cliffgen(&[
        "gl4",
        "random",
        "--seed",
        "9",
        "--angles",
        "0.4,0.5,0.6",
        "-o",
        params.to_str().unwrap()
    ])
    .status
    .success());
    let p: cliffgen::gl4::FourVectorParams = serde_json::from_str(&std::fs::read_to_string(&params).unwrap()).unwrap();
    std::fs::write(&matrix, serde_json::to_string(&p.to_matrix()).unwrap()).unwrap();
    let o = cliffgen(&[
        "gl4",
        "from-matrix",
        "--matrix",
        matrix.to_str().unwrap(),
        "--outer",
        "0.4,0.5,0.6",
        "--inner",
        "0.4,0.5,0.6",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let back: cliffgen::gl4::FourVectorParams = serde_json::from_value(json(&o)["result"].clone()).unwrap();
    assert!(back.max_abs_diff(&p) < 1e-12);
}

#[test]
fn help_exits_zero() {
    let o = cliffgen(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("enumerate"));
}
