use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command as Proc, Output, Stdio};

use dgglue::cli::{run, Command, Options};
use dgglue::json::Document;
use dgglue::random;
use dgglue::Field;
use serde_json::{json, Value};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn bin(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Proc::new(env!("CARGO_BIN_EXE_dgglue"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn run_file(cmd: &str, file: &str) -> Value {
    let path = data(file);
    let out = bin(&[cmd, "--in", path.to_str().unwrap()], None);
    assert!(out.status.success(), "{cmd} {file}: {}", String::from_utf8_lossy(&out.stderr));
    report(&out)
}

#[test]
fn bundled_documents_round_trip() {
    for entry in std::fs::read_dir(Path::new(env!("CARGO_MANIFEST_DIR")).join("data")).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let doc = Document::parse(&text, None).unwrap();
        let again = Document::parse(&doc.to_json().to_string(), None).unwrap();
        assert_eq!(doc, again, "{}", path.display());
    }
}

#[test]
fn random_documents_round_trip() {
    let mut rng = random::rng(7);
    for i in 0..20 {
        let field = if i % 2 == 0 { Field::Prime(7) } else { Field::Rational };
        let mut doc = Document::new(field);
        let a = random::complex(field, &mut rng, -2, 2, 3, 6);
        doc.add_complex("X", a).unwrap();
        let cc = random::complex_cube(field, &mut rng, 1 + i % 3, 8);
        doc.add_complex_cube("cc", &cc).unwrap();
        let dg = random::dg_cube(field, &mut rng, 1 + i % 3, i % 4 == 0);
        doc.add_dg_cube("dg", &dg).unwrap();
        let r = random::filtered_algebra(field, &mut rng, 6, 3);
        let m = random::graded_module(&r, &mut rng, r.n(), 2);
        doc.add_algebra("R", r).unwrap();
        doc.add_module("M", "R", m).unwrap();
        let text = serde_json::to_string_pretty(&doc.to_json()).unwrap();
        let back = Document::parse(&text, None).unwrap();
        assert_eq!(doc, back, "sample {i}");
        assert!(back.complex_cube("cc").unwrap().same_as(&cc));
    }
}

#[test]
fn one_cube_totalizes_to_its_cone() {
    let r = run_file("totalize", "one_cube.json");
    assert_eq!(r["command"], "totalize");
    assert_eq!(r["cohomology"], json!({"-1": 1}));
    assert_eq!(r["equals_cone"], true);
}

#[test]
fn unit_inclusion_is_not_qff() {
    let q = run_file("check-qff", "unit_inclusion.json");
    assert_eq!(q["qff"], false);
    let a = run_file("check-acyclic", "unit_inclusion.json");
    assert_eq!(a["acyclic"], false);
}

#[test]
fn refinement_pipeline() {
    let r = run_file("refine", "refine_input.json");
    assert_eq!(r["filtration_dims"], json!([4, 3, 2, 1, 0]));
    let sq = run_file("refine-square", "refine_input.json");
    let doc = Document::from_json(&sq["document"], None).unwrap();
    let opts = Options::default();
    assert_eq!(run(Command::CheckQff, &doc, &opts).unwrap()["qff"], true);
    assert_eq!(run(Command::CheckAcyclic, &doc, &opts).unwrap()["acyclic"], true);
    let aus = run_file("auslander", "dual_numbers.json");
    assert_eq!(aus["total_dim"], 5);
}

#[test]
fn output_is_reproducible_across_thread_counts() {
    let path = data("refinement_square.json");
    let p = path.to_str().unwrap();
    let one = bin(&["check-qff", "--in", p], None);
    let four = bin(&["check-qff", "--in", p, "--parallel", "4"], None);
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn reads_stdin_and_accepts_reports() {
    let text = std::fs::read_to_string(data("one_cube.json")).unwrap();
    let out = bin(&["stack"], Some(&text));
    // stacking needs two cubes
    assert_eq!(out.status.code(), Some(1));
    let piped = run_file("validate", "refinement_square.json");
    let out = bin(&["validate"], Some(&piped.to_string()));
    assert_eq!(out.status.code(), Some(1), "a report without a document is not an input");
    let sq = run_file("refine-square", "refine_input.json");
    let out = bin(&["check-qff"], Some(&sq.to_string()));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(report(&out)["qff"], true);
}

#[test]
fn exit_codes() {
    let out = bin(&["no-such-command"], Some("{}"));
    assert_eq!(out.status.code(), Some(1));
    let out = bin(&["validate"], Some("not json"));
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["error"]["kind"], "input");
    let bad = json!({
        "version": 1, "field": "Q",
        "complexes": {
            "A": { "window": [0, 0], "dims": { "0": 2 }, "diff": {} },
            "B": { "window": [0, 1], "dims": { "0": 2, "1": 1 }, "diff": { "0": [["1", "-1"]] } }
        },
        "maps": { "f": { "source": "A", "target": "B", "degree": 0, "comps": { "0": [["1", "0"], ["0", "1"]] } } },
        "cubes": { "c": { "n": 1, "vertices": { "[]": "A", "[0]": "B" }, "edges": { "[],0": "f" } } },
        "params": { "cube": "c" }
    });
    let out = bin(&["totalize"], Some(&bad.to_string()));
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(report(&out)["error"]["kind"], "invariant");
    let out = bin(&["validate", "--field", "F5"], Some(&bad.to_string()));
    assert_eq!(out.status.code(), Some(1), "conflicting field flag");
}

#[test]
fn validate_reports_each_entity() {
    let mut rng = random::rng(3);
    let field = Field::Prime(7);
    let a = random::complex(field, &mut rng, -1, 1, 2, 4);
    let b = random::complex(field, &mut rng, -1, 1, 2, 4);
    let f = random::chain_map(&a, &b, &mut rng);
    let mut doc = Document::new(field);
    doc.add_complex("A", a).unwrap();
    doc.add_complex("B", b).unwrap();
    let mut v = doc.to_json();
    v["maps"] = json!({ "f": {
        "source": "A", "target": "B", "degree": 0,
        "comps": f.comps().iter().zip(f.source.degrees()).map(|(m, k)| (k.to_string(), dgglue::json::matrix_to_json(m))).collect::<serde_json::Map<_, _>>()
    }});
    let doc = Document::from_json(&v, None).unwrap();
    let r = run(Command::Validate, &doc, &Options::default()).unwrap();
    let ents = r["entities"].as_array().unwrap();
    assert_eq!(ents.len(), 3);
    assert!(ents.iter().all(|e| e["ok"] == true));
}
