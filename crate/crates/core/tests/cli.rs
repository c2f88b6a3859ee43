use std::path::Path;
use std::process::Command;

use serde_json::{json, Value};

fn fixture(rel: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(rel)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_nodal-stab"))
        .args(args)
        .output()
        .unwrap();
    let value = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), value)
}

#[test]
fn balance_two_component_fixture() {
    let (code, v) = run(&[
        "balance",
        "--curve",
        &fixture("curves/path_ab.json"),
        "--bundle",
        &fixture("bundles/path_ab.json"),
        "--pol",
        &fixture("polarizations/path_ab.json"),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["twist"], json!({"1": 1, "2": 0}));
    assert_eq!(v["multidegree"], json!({"1": 3, "2": 1}));
    assert_eq!(v["steps"][0]["candidates"], json!([1, 2]));
    assert_eq!(v["steps"][0]["lower"], json!("1"));
}

#[test]
fn check_balanced_fixture_passes() {
    let (code, v) = run(&[
        "check",
        "--curve",
        &fixture("curves/path_ab.json"),
        "--bundle",
        &fixture("bundles/path_ab_balanced.json"),
        "--pol",
        &fixture("polarizations/path_ab.json"),
    ]);
    assert_eq!(code, 0);
    assert!(v["lambda"]["indices"]
        .as_array()
        .unwrap()
        .iter()
        .all(|i| i["pass"] == json!(true)));
}

#[test]
fn unbalanced_check_reports_distance() {
    let (code, v) = run(&[
        "check",
        "--curve",
        &fixture("curves/path_ab.json"),
        "--bundle",
        &fixture("bundles/path_ab.json"),
    ]);
    assert_eq!(code, 1);
    assert_eq!(v["unbalance"]["distances"][0]["distance"], json!("2"));
    assert_eq!(v["seshadri_slope"], json!("1"));
}

#[test]
fn triangle_is_an_input_error() {
    let (code, v) = run(&["validate", "--curve", &fixture("invalid/triangle.json")]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], json!("CycleDetected"));
}

#[test]
fn order_of_a_three_component_path() {
    let (code, v) = run(&["order", "--curve", &fixture("curves/path3.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["ordering"], json!([1, 3, 2]));
    assert_eq!(v["steps"][0]["next"], json!(2));
    assert_eq!(v["steps"][2]["next"], Value::Null);
    assert_eq!(v["steps"][1]["bad"], json!([1, 2]));
}

#[test]
fn determinant_fixtures() {
    let check = |det: &str| {
        run(&[
            "check",
            "--curve",
            &fixture("curves/star4.json"),
            "--bundle",
            &fixture("bundles/star4_odd.json"),
            "--det",
            &fixture(det),
        ])
    };
    let (code, v) = check("determinants/star4_odd.json");
    assert_eq!(code, 1);
    assert_eq!(
        v["determinant"]["rational_violations"][0]["component"],
        json!(4)
    );
    assert_eq!(v["determinant"]["mismatches"], json!([]));
}

#[test]
fn gpb_roots_and_flags() {
    let (code, v) = run(&["gpb", "--field", "F7", "--rank", "3", "--roots", "6"]);
    assert_eq!(code, 0);
    assert_eq!(v["roots"]["roots"], json!(["3"]));

    let (code, v) = run(&[
        "gpb", "--field", "F2", "--rank", "3", "--degree", "3", "--a", "1",
    ]);
    assert_eq!(code, 1);
    assert_eq!(
        v["rational_flag"]["error"]["kind"],
        json!("SingularProjection")
    );

    let (code, v) = run(&["gpb", "--rank", "2", "--degree", "3", "--genus", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["phi"]["chi"], json!(-1));
    assert_eq!(v["parabolic_slope"], json!("5/2"));
}

#[test]
fn dvr_identity_over_f5() {
    let (code, v) = run(&["dvr", "--input", &fixture("dvr/f5_n1.json")]);
    assert_eq!(code, 0);
    // tr [[1,2],[3,4]] = 5 ≡ 0, so det = 1.
    assert_eq!(v["det_trace"]["det"], json!([1, 0]));
    assert_eq!(v["sl_kernel"]["in_kernel"], json!(true));
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("order.json");
    let status = Command::new(env!("CARGO_BIN_EXE_nodal-stab"))
        .args(["order", "--curve", &fixture("curves/star4.json"), "--out"])
        .arg(&path)
        .status()
        .unwrap();
    assert!(status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["ordering"], json!([2, 3, 4, 1]));
}
