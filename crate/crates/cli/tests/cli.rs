use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn mlsc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mlsc")).args(args).env_remove("MLSC_WORKERS").output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = mlsc(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    serde_json::from_str(&ok(&a)).unwrap()
}

fn code(args: &[&str]) -> i32 {
    mlsc(args).status.code().unwrap()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn single_plaquette_has_a_y_logical() {
    let dir = tempfile::tempdir().unwrap();
    let file = path(dir.path(), "b.json");
    ok(&["encode", "--scheme", "bksf", "--lattice", "2x2:open", "--cycle-ordering", "0,1,3,2,0", "-o", &file]);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(doc["stabilizers"].as_array().unwrap().len(), 1);
    assert_eq!(doc["stabilizers"][0]["op"], "-Y_0 Y_1 Y_2 Y_3");
    let d = json(&["distance", &file, "--max-weight", "1"]);
    assert_eq!(d["verdict"], "exact");
    assert_eq!(d["weight"], 1);
    assert!(d["witness"].as_str().unwrap().starts_with('Y'));
    assert_eq!(d["undetectable"], serde_json::json!([4]));
}

#[test]
fn compare_on_the_8x8_torus() {
    let rec = json(&["compare", "--lattice", "8x8:torus"]);
    let rows = rec["rows"].as_array().unwrap();
    let bksf = &rows[0];
    assert_eq!(bksf["distance"], serde_json::json!({"verdict": "exact", "weight": 2}));
    assert_eq!(bksf["occupation"], serde_json::json!({"min": 4, "max": 4}));
    assert_eq!(bksf["hopping"], serde_json::json!({"min": 6, "max": 6}));
    assert_eq!(bksf["stabilizer"], serde_json::json!({"min": 6, "max": 6}));
    let m = &rows[1];
    assert_eq!(m["distance"], serde_json::json!({"verdict": "exact", "weight": 3}));
    assert_eq!(m["occupation"], serde_json::json!({"min": 3, "max": 3}));
    assert_eq!(m["hopping"], serde_json::json!({"min": 3, "max": 4}));
    assert_eq!(m["stabilizer"], serde_json::json!({"min": 4, "max": 10}));
    let text = ok(&["compare", "--lattice", "8x8:torus"]);
    assert!(text.lines().next().unwrap().starts_with("code"));
    assert!(text.contains("mlsc  128     3         3           3-4      4-10"));
}

#[test]
fn tampered_encoding_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let good = path(dir.path(), "t.json");
    ok(&["encode", "--scheme", "bksf", "--lattice", "3x3:torus", "-o", &good]);
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&good).unwrap()).unwrap();
    // X -> Z on the first letter of the first edge operator
    let op = doc["edge_ops"][0]["op"].as_str().unwrap().replacen("X_", "Z_", 1);
    doc["edge_ops"][0]["op"] = Value::String(op);
    let bad = path(dir.path(), "bad.json");
    std::fs::write(&bad, serde_json::to_string(&doc).unwrap()).unwrap();
    assert_eq!(code(&["verify", &good]), 0);
    let out = mlsc(&["verify", &bad, "--error-json"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("Vertex(0) and Edge(0, 1)"), "{err}");
    let rec: Value = serde_json::from_str(err.lines().last().unwrap()).unwrap();
    assert_eq!(rec["exit_code"], 3);
    assert_eq!(rec["kind"], "invariant");
}

#[test]
fn every_scheme_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("bksf", "4x4:torus"),
        ("bksf", "3x3:torus"),
        ("bksf", "4x4:open"),
        ("mlsc", "8x8:torus"),
        ("mlsc", "4x4:torus"),
        ("mlsc", "4x4:open"),
        ("bvc", "4x4:open"),
        ("block", "4x4:open"),
    ];
    for (scheme, lattice) in cases {
        let file = path(dir.path(), &format!("{scheme}-{}.json", lattice.replace(':', "-")));
        ok(&["encode", "--scheme", scheme, "--lattice", lattice, "-o", &file]);
        let rec = json(&["verify", &file]);
        assert_eq!(rec["status"], "ok", "{scheme} {lattice}");
        assert_eq!(rec["scheme"], scheme);
        if scheme == "bksf" || scheme == "mlsc" {
            let def = path(dir.path(), &format!("{scheme}-{}-def.json", lattice.replace(':', "-")));
            ok(&["encode", "--scheme", scheme, "--lattice", lattice, "--definition", "-o", &def]);
            assert_eq!(json(&["verify", &def])["status"], "ok");
        }
    }
}

#[test]
fn outputs_are_deterministic() {
    let runs = [
        vec!["compare", "--lattice", "4x4:torus", "--format", "json"],
        vec!["prepare", "--lattice", "4x4:torus", "--occupation", "1100000000110000", "--method", "leaf", "--seed", "5"],
        vec!["encode", "--scheme", "mlsc", "--lattice", "4x4:open"],
        vec!["distance", "--scheme", "mlsc", "--lattice", "8x8:torus", "--max-weight", "2"],
    ];
    for args in runs {
        let a = ok(&args);
        assert_eq!(a, ok(&args));
        let mut one = args.clone();
        one.extend(["--workers", "1"]);
        let mut four = args.clone();
        four.extend(["--workers", "4"]);
        assert_eq!(ok(&one), a);
        assert_eq!(ok(&four), a);
    }
    let with_env = Command::new(env!("CARGO_BIN_EXE_mlsc"))
        .args(["compare", "--lattice", "4x4:torus"])
        .env("MLSC_WORKERS", "2")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(with_env.stdout).unwrap(), ok(&["compare", "--lattice", "4x4:torus"]));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let junk = path(dir.path(), "junk.json");
    std::fs::write(&junk, "{").unwrap();
    assert_eq!(code(&["verify", &junk]), 2);
    assert_eq!(code(&["verify", &path(dir.path(), "missing.json")]), 2);
    assert_eq!(code(&["compare", "--lattice", "8by8"]), 2);
    assert_eq!(code(&["syndrome", "--lattice", "3x3:torus", "--error", "Q_7"]), 2);
    assert_eq!(code(&["prepare", "--lattice", "3x3:torus", "--occupation", "100000000"]), 3);
    assert_eq!(code(&["derive-mlsc", "--lattice", "8x8:torus", "--min-weight", "6"]), 4);
    assert_eq!(code(&["distance", "--lattice", "8x8:torus", "--max-weight", "6"]), 5);
    let out = mlsc(&["distance", "--lattice", "8x8:torus", "--max-weight", "6", "--error-json"]);
    let rec: Value = serde_json::from_str(String::from_utf8(out.stderr).unwrap().lines().last().unwrap()).unwrap();
    assert_eq!(rec["kind"], "budget");
}

#[test]
fn prepare_satisfies_the_vertex_rule() {
    let dir = tempfile::tempdir().unwrap();
    let file = path(dir.path(), "enc.json");
    ok(&["encode", "--scheme", "bksf", "--lattice", "4x4:torus", "-o", &file]);
    let enc: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    let occ = "0110000000001001";
    for method in ["tree", "path", "leaf", "mlsc"] {
        let rec = json(&["prepare", &file, "--occupation", occ, "--method", method]);
        let z: Vec<i64> = rec["z"].as_array().unwrap().iter().map(|v| v.as_i64().unwrap()).collect();
        // every vertex operator is a signed Z string
        for (k, op) in enc["vertex_ops"].as_array().unwrap().iter().enumerate() {
            let op = op.as_str().unwrap();
            let (sign, body) = op.strip_prefix('-').map_or((1, op), |b| (-1, b));
            let value: i64 = body.split_whitespace().map(|t| z[t[2..].parse::<usize>().unwrap()]).product::<i64>() * sign;
            let want = if occ.as_bytes()[k] == b'1' { -1 } else { 1 };
            assert_eq!(value, want, "{method} vertex {k}");
        }
    }
    let leaf = json(&["prepare", &file, "--occupation", occ, "--method", "leaf"]);
    assert!(!leaf["random_edges"].as_array().unwrap().is_empty());
    let m = json(&["prepare", "--scheme", "mlsc", "--lattice", "8x8:torus", "--occupation", &"1".repeat(64), "--method", "mlsc"]);
    assert_eq!(m["z"].as_array().unwrap().len(), 128);
}

#[test]
fn syndrome_and_lowering() {
    let rec = json(&["syndrome", "--lattice", "4x4:torus", "--error", "X_5-6"]);
    let s: Vec<i64> = rec["syndrome"].as_array().unwrap().iter().map(|v| v.as_i64().unwrap()).collect();
    assert_eq!(s.iter().filter(|&&v| v == -1).count(), 2);
    assert_eq!(rec["stabilizers"].as_array().unwrap().len(), s.len());

    let dir = tempfile::tempdir().unwrap();
    let ham = path(dir.path(), "h.json");
    std::fs::write(
        &ham,
        r#"{"schema": "mlsc.hamiltonian.v1", "terms": [
            {"kind": "hopping", "j": 0, "k": 1, "coefficient": "-1"},
            {"kind": "occupation", "p": 5, "coefficient": "1/2"},
            {"kind": "pair_occupation", "p": 0, "q": 1}
        ]}"#,
    )
    .unwrap();
    let low = json(&["lower", "--scheme", "mlsc", "--lattice", "8x8:torus", "--hamiltonian", &ham]);
    let terms = low["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 3);
    assert_eq!(terms[0]["paulis"].as_array().unwrap().len(), 2);
    assert_eq!(terms[1]["paulis"][0], serde_json::json!(["1/4", "I"]));
    assert_eq!(terms[2]["paulis"].as_array().unwrap().len(), 4);
    let text = ok(&["lower", "--lattice", "4x4:torus", "--hamiltonian", &ham]);
    assert!(text.starts_with("-1 * hop_0,1  ->  "));
}

#[test]
fn derived_code_matches_the_shipped_one() {
    let dir = tempfile::tempdir().unwrap();
    let derived = path(dir.path(), "derived.json");
    let shipped = path(dir.path(), "shipped.json");
    ok(&["derive-mlsc", "--lattice", "8x8:torus", "-o", &derived]);
    ok(&["encode", "--scheme", "mlsc", "--lattice", "8x8:torus", "--definition", "-o", &shipped]);
    let a: Value = serde_json::from_str(&std::fs::read_to_string(&derived).unwrap()).unwrap();
    let b: Value = serde_json::from_str(&std::fs::read_to_string(&shipped).unwrap()).unwrap();
    for key in ["vertex_ops", "edge_ops", "vertex_types", "graph"] {
        assert_eq!(a[key], b[key], "{key}");
    }
    assert_eq!(json(&["verify", &derived])["status"], "ok");
}

#[test]
fn analyze_reports_singles() {
    let rec = json(&["analyze", "--scheme", "mlsc", "--lattice", "8x8:torus"]);
    assert_eq!(rec["single_errors"], 384);
    assert_eq!(rec["detectable"], 384);
    assert_eq!(rec["distinct_syndromes"], true);
    let bvc = json(&["analyze", "--scheme", "bvc", "--lattice", "4x4", "--max-weight", "1"]);
    assert_eq!(bvc["weights"]["hopping"], serde_json::json!({"min": 3, "max": 4}));
    assert_eq!(bvc["weights"]["stabilizer"], serde_json::json!({"min": 6, "max": 6}));
    let b = json(&["analyze", "--lattice", "4x4:open"]);
    assert!(b["undetectable"].as_u64().unwrap() > 0);
}

#[test]
fn lattice_documents() {
    let g = json(&["lattice", "--lattice", "4x4:open", "--dangling"]);
    assert_eq!(g["num_vertices"], 16);
    assert_eq!(g["edges"].as_array().unwrap().len(), 24);
    assert_eq!(g["dangling"].as_array().unwrap().len(), 16);
}
