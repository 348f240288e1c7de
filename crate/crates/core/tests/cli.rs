use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use lawvere::cli;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).expect("stdout is JSON")
    }

    fn error(&self) -> Value {
        serde_json::from_str(&self.stderr).expect("stderr is JSON")
    }
}

fn run(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["lawvere"];
    full.extend_from_slice(args);
    let code = cli::run(full, &mut out, &mut err);
    Run {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn file(name: &str, doc: &Value) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lawvere-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string_pretty(doc).unwrap()).unwrap();
    p
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn triangle() -> Value {
    json!({
        "type": "rplus-space",
        "objects": ["a", "b", "c"],
        "dist": [["0", "1", "2"], ["1", "0", "1"], ["2", "1", "0"]],
    })
}

fn pair() -> Value {
    json!({"type": "rplus-space", "objects": ["p", "q"], "dist": [["0", "0"], ["0", "0"]]})
}

#[test]
fn close_computes_shortest_paths() {
    let g = file("path.json", &json!({
        "type": "rplus-graph",
        "objects": ["x", "y", "z"],
        "edges": [{"src": "x", "dst": "y", "w": "1/2"}, {"src": "y", "dst": "z", "w": "3/4"}],
    }));
    let r = run(&["close", arg(&g)]);
    assert_eq!(r.code, 0);
    let v = r.json();
    assert_eq!(v["type"], "rplus-space");
    assert_eq!(v["dist"][0], json!(["0", "1/2", "5/4"]));
    assert_eq!(v["dist"][2], json!(["inf", "inf", "0"]));
}

#[test]
fn quotient_collapses_indiscernible_points() {
    let r = run(&["quotient", arg(&file("pair.json", &pair()))]);
    assert_eq!(r.code, 0);
    let v = r.json();
    assert_eq!(v["type"], "rplus-map");
    assert_eq!(v["cod"]["objects"].as_array().unwrap().len(), 1);
}

#[test]
fn opposite_transposes() {
    let s = file("oneway.json", &json!({"type": "rplus-space", "objects": ["a", "b"], "dist": [["0", "1"], ["inf", "0"]]}));
    let v = run(&["opposite", arg(&s)]).json();
    assert_eq!(v["dist"], json!([["0", "inf"], ["1", "0"]]));
}

#[test]
fn validate_reports_law_violations_with_exit_one() {
    let bad = file("bad.json", &json!({
        "type": "rplus-space",
        "objects": ["a", "b", "c"],
        "dist": [["0", "1", "5"], ["1", "0", "1"], ["5", "1", "0"]],
    }));
    let r = run(&["validate", arg(&bad)]);
    assert_eq!(r.code, 1);
    let v = r.json();
    assert_eq!(v["valid"], false);
    assert_eq!(v["document"], "rplus-space");

    let r = run(&["validate", arg(&file("good.json", &triangle()))]);
    assert_eq!((r.code, r.json()["valid"].clone()), (0, json!(true)));
}

#[test]
fn malformed_input_exits_two_with_an_error_document() {
    let p = std::env::temp_dir().join(format!("lawvere-cli-broken-{}.json", std::process::id()));
    std::fs::write(&p, "{ not json").unwrap();
    let r = run(&["close", p.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.stdout.is_empty());
    assert_eq!(r.error()["type"], "error");
    assert_eq!(r.error()["error"], "json");

    let r = run(&["close", arg(&file("wrong.json", &triangle()))]);
    assert_eq!((r.code, r.error()["error"].clone()), (2, json!("wrong-type")));

    let r = run(&["close", "/nonexistent/lawvere.json"]);
    assert_eq!((r.code, r.error()["error"].clone()), (2, json!("io")));
}

#[test]
fn usage_errors_exit_two_and_help_exits_zero() {
    assert_eq!(run(&["frobnicate"]).code, 2);
    assert_eq!(run(&["classify", "--model", "nonsense", "x.json"]).code, 2);
    let help = run(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("classify"));
}

#[test]
fn presheaf_distance_and_duals() {
    let s = triangle();
    let rep = file("rep.json", &json!({"type": "rplus-presheaf", "base": s, "values": {"a": "0", "b": "1", "c": "2"}}));
    let far = file("far.json", &json!({"type": "rplus-presheaf", "base": s, "values": {"a": "1", "b": "1", "c": "1"}}));
    let d = run(&["presheaf-dist", arg(&rep), arg(&far)]);
    assert_eq!(d.code, 0);
    assert_eq!(d.json()["distance"], "1");

    let yes = run(&["has-dual", arg(&rep)]);
    assert_eq!(yes.code, 0);
    assert_eq!(yes.json()["has_dual"], true);
    assert_eq!(yes.json()["dual"], json!({"a": "0", "b": "1", "c": "2"}));

    let no = run(&["has-dual", arg(&far)]);
    assert_eq!(no.code, 1);
    assert_eq!(no.json()["has_dual"], false);
    assert_eq!(no.json()["min_sum"], "1");
}

#[test]
fn classify_the_collapse_of_an_indiscernible_pair() {
    let m = file("collapse.json", &json!({
        "type": "rplus-map",
        "dom": pair(),
        "cod": {"type": "rplus-space", "objects": ["*"], "dist": [["0"]]},
        "assign": {"p": "*", "q": "*"},
    }));
    let metric = run(&["classify", "--model", "metric", arg(&m)]).json();
    assert_eq!(metric["is_weq"], true);
    assert_eq!(metric["is_fib"], false);
    let cauchy = run(&["classify", "--model", "cauchy-metric", arg(&m)]).json();
    assert_eq!(cauchy["model"], "cauchy_metric");
    assert_eq!(cauchy["is_cof"], true);
}

#[test]
fn factorize_returns_composable_legs() {
    let m = file("incl.json", &json!({
        "type": "rplus-map",
        "dom": {"type": "rplus-space", "objects": ["a"], "dist": [["0"]]},
        "cod": triangle(),
        "assign": {"a": "b"},
    }));
    for model in ["metric", "cauchy", "cauchy_metric"] {
        for axiom in ["m4", "m5"] {
            let r = run(&["factorize", "--model", model, "--axiom", axiom, arg(&m)]);
            assert_eq!(r.code, 0, "{model} {axiom}: {}", r.stderr);
            let v = r.json();
            assert_eq!(v["first"]["cod"], v["mid"]);
            assert_eq!(v["second"]["dom"], v["mid"]);
        }
    }
}

#[test]
fn lifting_against_generators() {
    let to_point = file("bang.json", &json!({
        "type": "rplus-map",
        "dom": pair(),
        "cod": {"type": "rplus-space", "objects": ["*"], "dist": [["0"]]},
        "assign": {"p": "*", "q": "*"},
    }));
    assert_eq!(run(&["lift", "--against", "gamma", arg(&to_point)]).code, 0);
    let r = run(&["lift", "--against", "delta", arg(&to_point)]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json()["has_rlp"], false);
    assert!(r.json()["witness"].is_object());

    let r = run(&["lift", "--against", "iota-seq", "--seqbar-depth", "3", arg(&to_point)]);
    assert_eq!(r.json()["generator"], "iota-seq:3");
    assert_eq!(run(&["lift", "--against", "iota-seq", "--seqbar-depth", "0", arg(&to_point)]).code, 2);
}

#[test]
fn karoubi_verbs_on_the_free_idempotent() {
    let idem = file("idem.json", &json!({
        "type": "fincat",
        "objects": ["x"],
        "morphisms": [{"name": "id", "src": "x", "dst": "x"}, {"name": "e", "src": "x", "dst": "x"}],
        "identity": {"x": "id"},
        "compose": [["id", "id", "id"], ["id", "e", "e"], ["e", "id", "e"], ["e", "e", "e"]],
    }));
    let v = run(&["validate", arg(&idem)]);
    assert_eq!(v.code, 0, "{}", v.stdout);

    let ids = run(&["karoubi", "idempotents", arg(&idem)]);
    assert_eq!(ids.code, 0);
    let list = ids.json()["idempotents"].as_array().unwrap().clone();
    assert_eq!(list.len(), 2);
    assert!(list.iter().any(|i| i["morphism"] == "e" && i["splitting"].is_null()));

    let env = run(&["karoubi", "envelope", arg(&idem)]);
    assert_eq!(env.code, 0);
    let inclusion = file("inclusion.json", &env.json());
    let c = run(&["karoubi", "classify", arg(&inclusion)]).json();
    assert_eq!(c["fully_faithful"], true);
    assert_eq!(c["is_weq"], true);

    let f = run(&["karoubi", "factorize", arg(&inclusion)]);
    assert_eq!(f.code, 0);
    assert_eq!(f.json()["axiom"], "M5");
}

#[test]
fn axioms_report_passes_and_is_reproducible() {
    let a = run(&["axioms", "--model", "metric", "--seed", "4", "--cases", "10"]);
    assert_eq!(a.code, 0, "{}", a.stdout);
    assert_eq!(a.stdout, run(&["axioms", "--model", "metric", "--seed", "4", "--cases", "10"]).stdout);
    assert_eq!(a.json()["type"], "axiom-report");
    let k = run(&["axioms", "--model", "karoubian", "--cases", "5"]);
    assert_eq!(k.code, 0, "{}", k.stdout);
}
