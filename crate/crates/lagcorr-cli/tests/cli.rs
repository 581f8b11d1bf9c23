use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lagcorr")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

/// Every number in the output is an integer: fractions travel as strings.
fn assert_exact(v: &Value) {
    match v {
        Value::Number(n) => assert!(n.is_i64() || n.is_u64(), "non-integer number {n}"),
        Value::Array(xs) => xs.iter().for_each(assert_exact),
        Value::Object(o) => o.values().for_each(assert_exact),
        _ => {}
    }
}

#[test]
fn lambda_of_fourier_square() {
    let out = run(&["lambda", "S", "S", "--ring", "Z", "--genus", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out), serde_json::json!({"lambda": -1}));
}

#[test]
fn compose_ga_models() {
    let out = run(&["compose", "Ga", "Ga", "--ring", "D=-1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["q"], 4);
    assert_eq!(v["N"], 1);
    assert_eq!(v["N_Z"], 1);
    assert_exact(&v);
    // entries of pi are exact quadratic numbers
    assert_eq!(v["pi"][0][0]["b"], "-1/2");
}

#[test]
fn verify_suite_passes() {
    let out = run(&["verify", "cocycle", "--seed", "7", "--samples", "12"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json_of(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["seed"], 7);
}

#[test]
fn validation_errors_exit_one() {
    let out = run(&["compose", "Ga", "Ga", "--ring", "Z"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["error"]["code"], "not_cm");

    let out = run(&["lambda", "S", "S", "--ring", "D=-5"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["error"]["code"], "unsupported_discriminant");

    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(&["verify", "nonsense"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "index", "--seed", "3", "--samples", "8"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn csv_table() {
    let out = run(&["lambda-table", "S,F1", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "g1,g2,lambda");
    assert_eq!(lines[1], "S,S,-1");
    assert_eq!(lines.len(), 5);
}

#[test]
fn obstruction_and_heisenberg() {
    let v = json_of(&run(&["obstruction", "-11"]));
    assert_eq!(v["q_bar"], 11);
    assert_eq!(v["nontrivial"], true);

    let v = json_of(&run(&["index", "-3", "--genus", "2"]));
    assert_eq!(v["index"], 2);

    let v = json_of(&run(&["heisenberg", "schrodinger", "3"]));
    assert_eq!(v["dim"], 3);
    assert_eq!(v["all_models_equivalent"], true);

    let v = json_of(&run(&["heisenberg", "homspace", "positions", "pol(5)"]));
    assert_eq!((v["degree"].clone(), v["dimension"].clone()), (0.into(), 5.into()));
    let v = json_of(&run(&["heisenberg", "homspace", "positions", "pol(-5)"]));
    assert_eq!((v["degree"].clone(), v["dimension"].clone()), (1.into(), 5.into()));

    let out = run(&["heisenberg", "multiplicities", "2,2", "--gens", "1,0,0,0;0,0,1,0"]);
    let v = json_of(&out);
    assert_eq!(v["rows"][0]["c_order"], 4);
    assert_eq!(v["rows"][0]["brute_force_agrees"], true);
}

#[test]
fn scenario_tasks() {
    let dir = std::env::temp_dir().join(format!("lagcorr-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("scenario.json");
    std::fs::write(
        &path,
        r#"{
          "ring": "Z",
          "genus": 1,
          "elements": {"g": [[1, 1], [1, 2]], "half": [[1, "1/2"], [0, 1]]},
          "correspondences": {"L": {"graph": "half"}},
          "hermitian": {"H": [[-2]]},
          "tasks": [["lambda", "g", "g"], "compose L L", "index H", ["ext-mul", "g", "S"]]
        }"#,
    )
    .unwrap();
    let out = run(&["run", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json_of(&out);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r["ok"] == true));
    assert_eq!(rows[0]["output"]["lambda"], 0);
    assert_eq!(rows[2]["output"]["index"], 1);
    assert_exact(&v);

    std::fs::write(
        &path,
        r#"{"elements": {"bad": [[2, 0], [0, 1]]}, "tasks": ["lambda bad bad"]}"#,
    )
    .unwrap();
    let out = run(&["run", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["error"]["code"], "not_symplectic");
    std::fs::remove_dir_all(&dir).ok();
}
