use std::process::{Command, Output};

use serde_json::Value;

fn qmv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmv")).args(args).output().expect("run qmv")
}

fn report(args: &[&str]) -> (i32, Value) {
    let out = qmv(args);
    let v: Value = serde_json::from_slice(&out.stdout).expect("json report");
    (out.status.code().unwrap(), v)
}

#[test]
fn verify_center_on_one_by_one() {
    let (code, v) = report(&["verify", "center", "--quiver", "kronecker_1x1", "--ell", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);
    assert_eq!(v["details"]["central_generators"], 2);
    assert_eq!(v["check"], "frobenius-center-generated-by-lth-powers");
}

#[test]
fn assumption_for_gl() {
    let (code, v) = report(&["assumption", "check", "--type", "GLn", "--ell", "9"]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);
    let (code, _) = report(&["assumption", "check", "--type", "A2-adjoint", "--ell", "3"]);
    assert_eq!(code, 1);
}

#[test]
fn zero_fiber_certificate() {
    let (code, v) = report(&["fiber", "zero", "--quiver", "kronecker_1x2", "--ell", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["details"]["module_dim"], 9);
    assert_eq!(v["details"]["span_dim"], 81);
}

#[test]
fn quiver_file_and_markdown() {
    let dir = std::env::temp_dir().join(format!("qmv-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("edge.toml");
    std::fs::write(&path, "dims = [1, 1]\nell = 5\n\n[[edges]]\nsource = 0\ntarget = 1\n").unwrap();
    let out = qmv(&["verify", "moment", "--quiver", path.to_str().unwrap(), "--format", "md", "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let md = String::from_utf8(out.stdout).unwrap();
    assert!(md.starts_with("# qmv verify moment"));
    assert!(md.contains("(g^α)^ℓ lies in the Frobenius center"));
    assert!(dir.join("verify-moment.json").exists() && dir.join("verify-moment.md").exists());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn config_errors() {
    let out = qmv(&["verify", "center", "--ell", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("odd"));
    let out = qmv(&["verify", "center", "--quiver", "no_such_quiver"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qmv(&["verify", "bivector", "--quiver", "path_3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(qmv(&["frobnicate"]).status.code() != Some(0));
}

#[test]
fn reductions() {
    let (code, v) = report(&["reduce", "abelian", "--quiver", "loop_1", "--xi", "z^2"]);
    assert_eq!(code, 0);
    assert_eq!(v["details"]["reduction"]["dim"], 9);
    let (_, v) = report(&["reduce", "abelian", "--quiver", "loop_1", "--xi", "1"]);
    assert_eq!(v["details"]["reduction"]["dim"], 0);
}

#[test]
fn samples_as_json_lines() {
    let dir = std::env::temp_dir().join(format!("qmv-samples-{}", std::process::id()));
    let out = qmv(&["classical", "sample", "--quiver", "kronecker_1x1", "--samples", "5", "--seed", "3", "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let lines = std::fs::read_to_string(dir.join("classical-sample.jsonl")).unwrap();
    let rows: Vec<Value> = lines.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), 5);
    for (k, r) in rows.iter().enumerate() {
        assert_eq!(r["seed"], 3 + k as u64);
        for key in ["point_hash", "moment", "big_cell", "leaf", "stability"] {
            assert!(r.get(key).is_some(), "{key}");
        }
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn worker_count_does_not_change_reports() {
    let args = ["classical", "sample", "--quiver", "kronecker_2x2", "--samples", "30", "--seed", "9"];
    let one = Command::new(env!("CARGO_BIN_EXE_qmv")).args(args).env("QMV_WORKERS", "1").output().unwrap();
    let four = Command::new(env!("CARGO_BIN_EXE_qmv")).args(args).env("QMV_WORKERS", "4").output().unwrap();
    assert_eq!(one.stdout, four.stdout);
}
