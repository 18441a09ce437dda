use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn sftkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sftkit")).args(args).output().expect("binary runs")
}

fn run(args: &[&str]) -> (i32, Value) {
    let out = sftkit(args);
    let doc = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    });
    (out.status.code().expect("exit code"), doc)
}

fn path(name: &str) -> String {
    data(name).to_string_lossy().into_owned()
}

fn scratch(name: &str, contents: &str) -> String {
    let dir = std::env::temp_dir().join(format!("sftkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn dimgroup_of_the_two_shift() {
    let (code, doc) = run(&["dimgroup", &path("H.json"), "--side", "s"]);
    assert_eq!(code, 0);
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["rank"], 1);
    assert_eq!(doc["connecting"], serde_json::json!([[2]]));
}

#[test]
fn first_square_fails_with_times_two_against_identity() {
    let (code, doc) = run(&["verify-square", &path("square1.json")]);
    assert_eq!(code, 1);
    assert_eq!(doc["conclusion"]["holds"], false);
    let w = &doc["witnesses"][0];
    assert_eq!(w["side"], "s");
    assert_eq!(w["left"]["describe"], "×2");
    assert_eq!(w["right"]["describe"], "id");
}

#[test]
fn second_square_fails_at_homology_level() {
    let (code, doc) = run(&["verify-square", &path("square2.json"), "--level", "homology"]);
    assert_eq!(code, 1);
    assert_eq!(doc["conclusion"]["identity_per_degree"]["0"], false);
}

#[test]
fn trivial_pair_homology_is_concentrated_in_degree_zero() {
    let (code, doc) = run(&["homology", &path("trivial_pair_H.json")]);
    assert_eq!(code, 0);
    for d in doc["degrees"].as_array().unwrap() {
        let expected = if d["N"] == 0 { 1 } else { 0 };
        assert_eq!(d["dimQ"], expected, "{d}");
        assert_eq!(d["torsion"], serde_json::json!([]));
        assert_eq!(d["torsion_stable"], true);
    }
}

#[test]
fn presentation_mode_matches_the_shift_pair() {
    let (_, a) = run(&["homology", &path("trivial_pair_H.json")]);
    let (code, b) = run(&["homology", &path("presentation_trivial_H.json")]);
    assert_eq!(code, 0);
    let dims = |d: &Value| d["degrees"].as_array().unwrap().iter().map(|x| x["dimQ"].clone()).collect::<Vec<_>>();
    assert_eq!(dims(&a), dims(&b));
}

#[test]
fn degree_of_the_two_to_one_map() {
    let (code, doc) = run(&["degree", &path("pi.json")]);
    assert_eq!(code, 0);
    assert_eq!(doc["degree"], 2);
    assert_eq!(doc["conjugacy"], false);
    assert_eq!(doc["left_covering"], true);
    assert_eq!(doc["right_covering"], true);
}

#[test]
fn induced_kinds_have_the_right_variance() {
    let (_, s) = run(&["induced", &path("pi.json"), "--kind", "s"]);
    let (_, s_star) = run(&["induced", &path("pi.json"), "--kind", "s_star"]);
    assert_eq!(s["source"]["label"], "D^s(G)");
    assert_eq!(s_star["source"]["label"], "D^s(H)");
    assert_eq!(s["matrix"], serde_json::json!([[1, 1]]));
}

#[test]
fn induced_refuses_a_map_without_the_bijectivity() {
    let code = scratch(
        "collapse.json",
        &format!(
            r#"{{"source": {:?}, "target": {:?}, "hom": {{"edge_map": {{"a": "a", "b": "a"}}}}}}"#,
            path("H.json"),
            path("H.json")
        ),
    );
    let (exit, doc) = run(&["induced", &code, "--kind", "s"]);
    assert_eq!(exit, 1);
    assert_eq!(doc["error"]["kind"], "hypothesis");
}

#[test]
fn naturality_refuses_the_mismatched_triples() {
    let (code, doc) = run(&["naturality", &path("naturality_1.json"), &path("naturality_2.json")]);
    assert_eq!(code, 1);
    assert_eq!(doc["conclusion"]["theta_constructible"], false);
    let (code, doc) = run(&["naturality", &path("mismatched_triple.json"), &path("trivial_triple_H.json")]);
    assert_eq!(code, 1);
    assert_eq!(doc["hypotheses"]["triple_1"], "pi_u x eta_Z is not one-to-one");
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        vec!["homology".to_string(), path("pair_G_pi_H.json")],
        vec!["verify-square".to_string(), path("square2.json"), "--level".into(), "homology".into()],
        vec!["fibre".to_string(), path("pi.json"), path("pi.json")],
        vec!["--output".to_string(), "text".into(), "cube".into(), path("square1.json")],
    ] {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let a = sftkit(&args);
        let b = sftkit(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn malformed_json_exits_3_with_line_and_column() {
    let bad = scratch("syntax.json", "{\"vertices\": [\"v\"],\n  \"edges\": [{\"name\": \"a\", \"i\": \"v\" \"t\": \"v\"}]}");
    let out = sftkit(&["analyze", &bad]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2 column"), "{err}");
}

#[test]
fn unknown_vertex_exits_3_with_a_pointer() {
    let bad = scratch("vertex.json", r#"{"vertices": ["v"], "edges": [{"name": "a", "i": "v", "t": "u"}]}"#);
    let out = sftkit(&["dimgroup", &bad]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("at /edges/0/t: unknown vertex \"u\""), "{err}");
}

#[test]
fn missing_file_exits_3() {
    let out = sftkit(&["analyze", "/nonexistent/graph.json"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn cap_exceeded_exits_2() {
    let cfg = scratch("small.json", r#"{"L_cap": 1}"#);
    let (code, doc) = run(&["--config", &cfg, "homology", &path("pair_G3_pi3_H.json")]);
    assert_eq!(code, 2);
    assert_eq!(doc["error"]["kind"], "cap_exceeded");
}

#[test]
fn config_rejects_zero_caps_and_unknown_keys() {
    let zero = scratch("zero.json", r#"{"M_cap": 0}"#);
    assert_eq!(sftkit(&["--config", &zero, "analyze", &path("H.json")]).status.code(), Some(3));
    let unknown = scratch("unknown.json", r#"{"l_cap": 3}"#);
    assert_eq!(sftkit(&["--config", &unknown, "analyze", &path("H.json")]).status.code(), Some(3));
}

#[test]
fn config_selects_text_output() {
    let cfg = scratch("text.json", r#"{"output": "text"}"#);
    let out = sftkit(&["--config", &cfg, "dimgroup", &path("H.json")]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("schema_version: 1\n"), "{text}");
    assert!(text.contains("connecting: [[2]]"));
}

#[test]
fn unknown_subcommand_is_an_input_error() {
    assert_eq!(sftkit(&["frobnicate"]).status.code(), Some(3));
}

/// Every shipped example parses and runs within the default caps.
#[test]
fn every_shipped_example_runs() {
    let mut names: Vec<String> = std::fs::read_dir(data(""))
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".json"))
        .collect();
    names.sort();
    assert!(names.len() >= 15);
    for name in names {
        let doc: Value = serde_json::from_str(&std::fs::read_to_string(data(&name)).unwrap()).unwrap();
        let p = path(&name);
        let runs: Vec<Vec<&str>> = if doc.get("vertices").is_some() {
            vec![vec!["analyze", &p], vec!["dimgroup", &p, "--side", "u"]]
        } else if doc.get("hom").is_some() {
            vec![vec!["degree", &p]]
        } else if doc.get("grid").is_some() || doc.get("pi_s").is_some() {
            vec![vec!["homology", &p], vec!["homology", &p, "--side", "u"]]
        } else if doc.get("Sigma").is_some() {
            vec![vec!["verify-square", &p, "--level", "homology"], vec!["cube", &p]]
        } else if doc.get("pair").is_some() {
            vec![vec!["naturality", &p, &p]]
        } else {
            panic!("unrecognized example {name}");
        };
        for args in runs {
            let (code, _) = run(&args);
            assert!(code == 0 || code == 1, "{args:?} exited {code}");
        }
    }
}
