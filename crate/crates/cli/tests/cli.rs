use std::process::{Command, Output};

use serde_json::{json, Value};

fn vinberg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vinberg")).args(args).output().unwrap()
}

/// Runs a command and returns its exit code and parsed stdout.
fn run(args: &[&str]) -> (i32, Value) {
    let out = vinberg(args);
    let stdout = String::from_utf8(out.stdout).unwrap();
    let v = serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("{args:?}: {e}\n{stdout}"));
    (out.status.code().unwrap(), v)
}

#[test]
fn closure_of_the_triangle_matrix_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let cartan = dir.path().join("kacvinberg3.json");
    let coxeter = dir.path().join("triangle334.json");
    std::fs::write(&cartan, r#"{"rank":3,"a":[["2","-1","-1"],["-2","2","-1"],["-1","-1","2"]]}"#).unwrap();
    std::fs::write(&coxeter, r#"{"rank":3,"m":[[1,4,3],[4,1,3],[3,3,1]]}"#).unwrap();
    let (code, v) = run(&["closure", "--cartan", cartan.to_str().unwrap(), "--coxeter", coxeter.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "SpecialLinearPM");
    assert_eq!(v["form"], Value::Null);
}

#[test]
fn symmetrizability_of_the_pentagon_matrix() {
    let (code, v) = run(&["symmetrizable", "--cartan", "corpus:Pentagon5"]);
    assert_eq!(code, 1);
    assert_eq!(
        v,
        json!({ "symmetrizable": false, "witness_cycle": [1, 2, 3, 4, 5], "forward": "-192", "reverse": "-256" })
    );
    let (code, v) = run(&["symmetrizable", "--cartan", "corpus:PentagonTits"]);
    assert_eq!(code, 0);
    assert_eq!(v["weights"], json!(["1", "1", "1", "1", "1"]));
}

#[test]
fn corpus_listing_and_lookup() {
    let (code, v) = run(&["corpus", "--list"]);
    assert_eq!(code, 0);
    let names: Vec<&str> = v["entries"].as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    for n in ["KacVinberg3", "Pentagon5", "Prism5", "FourManifold6"] {
        assert!(names.contains(&n), "{n}");
    }
    let (code, v) = run(&["corpus", "--name", "KacVinberg3"]);
    assert_eq!(code, 0);
    assert_eq!(v["coxeter"]["m"], json!([[1, 4, 3], [4, 1, 3], [3, 3, 1]]));
    assert_eq!(vinberg(&["corpus", "--name", "nope"]).status.code(), Some(2));
}

#[test]
fn outputs_are_valid_inputs() {
    let (_, rep) = run(&["reduce", "--cartan", "corpus:Pentagon5"]);
    let text = rep.to_string();
    let (code, v) = run(&["validate", "--rep", &text]);
    assert_eq!(code, 0, "{v}");
    let (code, v) = run(&["relations", "--rep", &text]);
    assert_eq!(code, 0);
    assert_eq!(v["relations_hold"], true);
    let (code, v) = run(&["validate", "--cartan", &rep["cartan"].to_string()]);
    assert_eq!(code, 0, "{v}");
}

#[test]
fn bad_input_exits_two() {
    let out = vinberg(&["classify", "--coxeter", "[[1,3],[2,1]]"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("(1, 2)"), "indices are 1-based: {err}");
    assert_eq!(vinberg(&["symmetrizable", "--cartan", "{oops"]).status.code(), Some(2));
    assert_eq!(vinberg(&["symmetrizable"]).status.code(), Some(2));
    assert_eq!(vinberg(&["no-such-command"]).status.code(), Some(2));

    let (code, v) = run(&["validate", "--cartan", "[[2,1],[-1,2]]"]);
    assert_eq!(code, 1);
    assert_eq!(v["valid"], false);
}

#[test]
fn corrupted_generator_fails_relations() {
    let (_, mut rep) = run(&["build-rep", "--cartan", "corpus:KacVinberg3"]);
    rep["generators"][0][0][0] = json!("5");
    let (code, v) = run(&["relations", "--rep", &rep.to_string()]);
    assert_eq!(code, 1);
    assert_eq!(v["relations_hold"], false);
}

#[test]
fn integralize_emits_integers() {
    let (code, v) = run(&["integralize", "--cartan", "corpus:Pentagon5"]);
    assert_eq!(code, 0);
    for g in v["integer_generators"].as_array().unwrap() {
        for row in g.as_array().unwrap() {
            assert!(row.as_array().unwrap().iter().all(Value::is_i64));
        }
    }
    assert!(v["change_of_basis"][0][0].is_string());

    let (code, v) = run(&[
        "integralize",
        "--cartan",
        r#"[[2,-1,-1],[-2,2,-1],[-1,-1,2]]"#,
        "--coxeter",
        "corpus:Triangle334",
        "--max-iters",
        "1",
    ]);
    assert_eq!((code, &v["integral"]), (0, &json!(true)));
}

#[test]
fn forge_bundle_verifies_and_tampering_is_caught() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bundle.json");
    let (code, bundle) = run(&["forge", "--coxeter", "corpus:PrismP1", "--construction", "general", "--pairs", "1-2"]);
    assert_eq!(code, 0);
    assert_eq!(bundle["scaled_pairs"], json!([[1, 2]]));
    assert_eq!(bundle["certificates"]["non_symmetrizable"], true);
    std::fs::write(&path, bundle.to_string()).unwrap();
    let (code, v) = run(&["forge", "--verify", path.to_str().unwrap()]);
    assert_eq!((code, &v["verified"]), (0, &json!(true)));

    let mut tampered = bundle;
    tampered["certificates"]["forward"] = json!("7");
    std::fs::write(&path, tampered.to_string()).unwrap();
    let (code, v) = run(&["forge", "--verify", path.to_str().unwrap()]);
    assert_eq!((code, &v["verified"]), (1, &json!(false)));
}

#[test]
fn pipeline_from_a_seed() {
    let (code, v) = run(&["pipeline", "--coxeter", "corpus:PentagonRACG", "--cartan", "corpus:Pentagon5", "--target-dim", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["stages"].as_array().unwrap().len(), 1);
    assert_eq!(v["stages"][0]["dim"], 4);
    assert_eq!(vinberg(&["pipeline", "--coxeter", "corpus:PentagonRACG", "--target-dim", "4"]).status.code(), Some(2));
}

#[test]
fn indeterminate_closure_exits_three() {
    let (code, v) = run(&["closure", "--cartan", "corpus:Pentagon5", "--word-cap", "1"]);
    assert_eq!(code, 3);
    assert_eq!(v["verdict"], "Indeterminate");
}
