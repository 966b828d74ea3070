use std::path::{Path, PathBuf};
use std::process::Command;

use ainf_cli::{emit, parse, run};
use ainf_core::Field;
use serde_json::Value;
use tempfile::TempDir;

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn ainf(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("ainf").chain(args.iter().copied()), &mut out, &mut err);
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn gen(dir: &TempDir, name: &str, seed: u64, profile: &str) -> PathBuf {
    let p = path(dir, name);
    let r = ainf(&["gen", "--seed", &seed.to_string(), "--profile", profile, "--out", s(&p)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    p
}

fn verify_ok(p: &Path) {
    let r = ainf(&["verify", "--in", s(p)]);
    assert_eq!(r.code, 0, "{}\n{}", r.stdout, r.stderr);
    assert!(!r.stdout.contains("FAIL"));
}

#[test]
fn emitted_files_round_trip_byte_for_byte() {
    let dir = TempDir::new().unwrap();
    for (seed, profile) in [
        (1, "interval"),
        (2, "base=dual,flavor=a,source-cones=0"),
        (3, "base=upper,flavor=b,n=3"),
        (4, "base=exterior,flavor=c,n=3,target-cones=0+1"),
    ] {
        let p = gen(&dir, "x.json", seed, profile);
        let text = std::fs::read_to_string(&p).unwrap();
        let bundle = parse(&text, Field::Rational).unwrap();
        assert_eq!(emit(&bundle).unwrap(), text, "{profile}");
        assert_eq!(parse(&emit(&bundle).unwrap(), Field::Rational).unwrap(), bundle);
    }
}

#[test]
fn empty_document_is_valid() {
    let b = parse("{}", Field::Rational).unwrap();
    assert!(b.algebras.is_empty());
    let again = emit(&b).unwrap();
    assert_eq!(emit(&parse(&again, Field::Rational).unwrap()).unwrap(), again);
}

#[test]
fn syntax_errors_report_position() {
    let dir = TempDir::new().unwrap();
    let p = path(&dir, "bad.json");
    std::fs::write(&p, "{\n  \"spaces\": {\n    \"V\": [\n}").unwrap();
    let r = ainf(&["verify", "--in", s(&p)]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line 3"), "{}", r.stderr);
}

#[test]
fn undefined_names_are_bad_input() {
    let dir = TempDir::new().unwrap();
    let p = path(&dir, "u.json");
    std::fs::write(&p, r#"{"complexes": {"C": {"space": "missing_space"}}}"#).unwrap();
    let r = ainf(&["verify", "--in", s(&p)]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("missing_space"), "{}", r.stderr);

    let g = gen(&dir, "g.json", 5, "base=dual");
    let r = ainf(&[
        "transfer",
        "--in",
        s(&g),
        "--structure",
        "nope",
        "--fwd",
        "f",
        "--bwd",
        "g",
        "--htpy",
        "h",
        "--out",
        s(&p),
    ]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("\"nope\""), "{}", r.stderr);
}

#[test]
fn unknown_flags_are_usage_errors() {
    assert_eq!(ainf(&["verify", "--bogus"]).code, 2);
    assert_eq!(ainf(&["frobnicate"]).code, 2);
    assert_eq!(
        ainf(&["gen", "--seed", "1", "--profile", "flavor=z", "--out", "/dev/null"]).code,
        2
    );
}

#[test]
fn generated_structures_verify() {
    let dir = TempDir::new().unwrap();
    for base in ["dual", "upper", "exterior"] {
        for flavor in ["a", "b", "c"] {
            let p = gen(&dir, "v.json", 11, &format!("base={base},flavor={flavor},n=4"));
            verify_ok(&p);
        }
    }
}

/// Doubles the coefficient of `ε = 1·ε`, which breaks associativity.
fn corrupt(p: &Path) {
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
    let entries = doc["maps"]["mu.2"]["entries"].as_array_mut().unwrap();
    let e = entries
        .iter_mut()
        .find(|e| e[0] == serde_json::json!([0, 1]))
        .expect("unit times epsilon");
    e[2] = Value::String("2".into());
    std::fs::write(p, serde_json::to_string(&doc).unwrap()).unwrap();
}

#[test]
fn corrupted_structure_fails_at_arity_three() {
    let dir = TempDir::new().unwrap();
    let p = gen(&dir, "c.json", 1, "base=dual,flavor=a");
    corrupt(&p);
    let r = ainf(&["verify", "--in", s(&p)]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("FAIL algebra mu"), "{}", r.stdout);
    assert!(r.stdout.contains("arity=3"), "{}", r.stdout);
    // up to arity 2 there is nothing to see
    let r = ainf(&["verify", "--in", s(&p), "--object", "mu", "--arity-max", "2"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
}

#[test]
fn verify_rejects_missing_object() {
    let dir = TempDir::new().unwrap();
    let p = gen(&dir, "m.json", 1, "base=dual");
    let r = ainf(&["verify", "--in", s(&p), "--object", "ghost"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("ghost"));
}

#[test]
fn gen_is_reproducible() {
    let dir = TempDir::new().unwrap();
    for profile in ["interval", "base=upper,flavor=c,n=3"] {
        let a = std::fs::read(gen(&dir, "a.json", 42, profile)).unwrap();
        let b = std::fs::read(gen(&dir, "b.json", 42, profile)).unwrap();
        assert_eq!(a, b);
        let c = std::fs::read(gen(&dir, "c.json", 43, profile)).unwrap();
        if profile != "interval" {
            assert_ne!(a, c);
        }
    }
}

#[test]
fn transfer_and_extend_outputs_verify() {
    let dir = TempDir::new().unwrap();
    let i = gen(&dir, "i.json", 42, "interval");
    let t = path(&dir, "t.json");
    let r = ainf(&[
        "transfer",
        "--in",
        s(&i),
        "--structure",
        "mu",
        "--fwd",
        "f",
        "--bwd",
        "g",
        "--htpy",
        "h",
        "--htpy-b",
        "k",
        "--out",
        s(&t),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    verify_ok(&t);
    let b = parse(&std::fs::read_to_string(&t).unwrap(), Field::Rational).unwrap();
    for name in ["nu", "F", "G"] {
        assert!(
            b.algebras.contains_key(name) || b.morphisms.contains_key(name),
            "{name}"
        );
    }
    assert!(b.homotopies.contains_key("H"));

    // without the second homotopy only the structure and G are produced
    let t2 = path(&dir, "t2.json");
    let r = ainf(&[
        "transfer",
        "--in",
        s(&i),
        "--structure",
        "mu",
        "--fwd",
        "f",
        "--bwd",
        "g",
        "--htpy",
        "h",
        "--out",
        s(&t2),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    verify_ok(&t2);

    // extend G along the identity homotopy on its linear part
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&t).unwrap()).unwrap();
    let g1 = doc["morphisms"]["G"]["components"]["1"].as_str().unwrap().to_string();
    let src = doc["maps"][&g1]["source"].clone();
    let tgt = doc["maps"][&g1]["target"].clone();
    doc["maps"]["zero"] = serde_json::json!({"arity": 1, "degree": 1, "entries": [], "source": src, "target": tgt});
    std::fs::write(&t, serde_json::to_string(&doc).unwrap()).unwrap();
    for seed in [None, Some("3")] {
        let e = path(&dir, "e.json");
        let mut args = vec![
            "extend",
            "--in",
            s(&t),
            "--morphism",
            "G",
            "--map",
            &g1,
            "--htpy",
            "zero",
            "--out",
            s(&e),
        ];
        if let Some(sd) = seed {
            args.extend(["--seed", sd]);
        }
        let r = ainf(&args);
        assert_eq!(r.code, 0, "{}", r.stderr);
        verify_ok(&e);
    }
}

#[test]
fn non_homotopic_map_cannot_be_extended() {
    let dir = TempDir::new().unwrap();
    let i = gen(&dir, "i.json", 42, "interval");
    let t = path(&dir, "t.json");
    assert_eq!(
        ainf(&[
            "transfer",
            "--in",
            s(&i),
            "--structure",
            "mu",
            "--fwd",
            "f",
            "--bwd",
            "g",
            "--htpy",
            "h",
            "--htpy-b",
            "k",
            "--out",
            s(&t)
        ])
        .code,
        0
    );
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&t).unwrap()).unwrap();
    let f1 = doc["morphisms"]["F"]["components"]["1"].as_str().unwrap().to_string();
    let mut m = doc["maps"][&f1].clone();
    m["entries"] = serde_json::json!([]);
    doc["maps"]["zero1"] = m.clone();
    m["degree"] = serde_json::json!(1);
    doc["maps"]["zero2"] = m;
    std::fs::write(&t, serde_json::to_string(&doc).unwrap()).unwrap();
    // 0 − F₁ is not ∂0 + 0∂
    let r = ainf(&[
        "extend",
        "--in",
        s(&t),
        "--morphism",
        "F",
        "--map",
        "zero1",
        "--htpy",
        "zero2",
        "--out",
        s(&path(&dir, "e.json")),
    ]);
    assert_eq!(r.code, 1, "{}", r.stderr);
    assert!(r.stderr.contains("equation=homotopy arity=1"), "{}", r.stderr);
}

#[test]
fn lift_connect_compose_pipeline() {
    let dir = TempDir::new().unwrap();
    for (dir_flag, structure) in [("op", "mu"), ("fib", "mu_b")] {
        let g = gen(&dir, "p.json", 8, "base=exterior,flavor=c,n=3");
        let l1 = path(&dir, "l1.json");
        let l2 = path(&dir, "l2.json");
        let r = ainf(&[
            "lift",
            "--dir",
            dir_flag,
            "--in",
            s(&g),
            "--structure",
            structure,
            "--map",
            "f",
            "--seed",
            "1",
            "--out",
            s(&l1),
        ]);
        assert_eq!(r.code, 0, "{}", r.stderr);
        verify_ok(&l1);
        let r = ainf(&[
            "lift",
            "--dir",
            dir_flag,
            "--in",
            s(&l1),
            "--structure",
            structure,
            "--map",
            "f",
            "--seed",
            "2",
            "--out",
            s(&l2),
        ]);
        assert_eq!(r.code, 0, "{}", r.stderr);
        verify_ok(&l2);

        // an identity morphism on the fixed side
        let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&l2).unwrap()).unwrap();
        let alg = &doc["algebras"][structure];
        let cx = alg["complex"].as_str().unwrap();
        let space = doc["complexes"][cx]["space"].as_str().unwrap().to_string();
        let dims = doc["spaces"][&space].as_object().unwrap();
        let n: u64 = dims.values().map(|v| v.as_u64().unwrap()).sum();
        let entries: Vec<Value> = (0..n).map(|i| serde_json::json!([[i], i, "1"])).collect();
        doc["maps"]["one"] =
            serde_json::json!({"arity": 1, "degree": 0, "entries": entries, "source": space, "target": space});
        doc["morphisms"]["id"] =
            serde_json::json!({"components": {"1": "one"}, "source": structure, "target": structure});
        std::fs::write(&l2, serde_json::to_string(&doc).unwrap()).unwrap();

        let side = if dir_flag == "op" { "source" } else { "target" };
        let c = path(&dir, "c.json");
        let r = ainf(&[
            "connect",
            "--in",
            s(&l2),
            "--left",
            "F",
            "--right",
            "F_1",
            "--given-isotopy",
            "id",
            "--side",
            side,
            "--out",
            s(&c),
        ]);
        assert_eq!(r.code, 0, "{}", r.stderr);
        let r = ainf(&["verify", "--in", s(&c), "--object", "cert"]);
        assert_eq!(r.code, 0, "{}", r.stdout);
        verify_ok(&c);
    }

    // compose: lift along A → B, then again along a generated B → B
    let g = gen(&dir, "q.json", 9, "base=dual,flavor=c,n=3");
    let l = path(&dir, "ql.json");
    assert_eq!(
        ainf(&[
            "lift",
            "--dir",
            "op",
            "--in",
            s(&g),
            "--structure",
            "mu",
            "--map",
            "f",
            "--out",
            s(&l)
        ])
        .code,
        0
    );
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&l).unwrap()).unwrap();
    let n: u64 = doc["spaces"]["B"]
        .as_object()
        .unwrap()
        .values()
        .map(|v| v.as_u64().unwrap())
        .sum();
    let entries: Vec<Value> = (0..n).map(|i| serde_json::json!([[i], i, "1"])).collect();
    doc["maps"]["one"] = serde_json::json!({"arity": 1, "degree": 0, "entries": entries, "source": "B", "target": "B"});
    doc["morphisms"]["id"] = serde_json::json!({"components": {"1": "one"}, "source": "nu", "target": "nu"});
    std::fs::write(&l, serde_json::to_string(&doc).unwrap()).unwrap();
    let c = path(&dir, "qc.json");
    let r = ainf(&[
        "compose",
        "--in",
        s(&l),
        "--first",
        "F",
        "--second",
        "id",
        "--isotopy",
        "id",
        "--out",
        s(&c),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    verify_ok(&c);
    let b = parse(&std::fs::read_to_string(&c).unwrap(), Field::Rational).unwrap();
    assert_eq!(b.morphisms["composite"], b.morphisms["F"]);
}

#[test]
fn field_flag_and_environment() {
    let text = r#"{"spaces": {"V": {"0": 1}}, "maps": {"m": {"arity": 1, "degree": 0, "entries": [[[0], 0, "1/2"]], "source": "V", "target": "V"}}}"#;
    let f7: Field = "F7".parse().unwrap();
    let b = parse(text, f7).unwrap();
    assert_eq!(b.field, f7);
    assert!(emit(&b).unwrap().contains("\"4\""));

    let exe = env!("CARGO_BIN_EXE_ainf");
    let dir = TempDir::new().unwrap();
    let p = path(&dir, "f.json");
    let field_of = |p: &Path| -> String {
        let v: Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
        v["field"].as_str().unwrap().to_string()
    };
    let status = Command::new(exe)
        .args(["gen", "--seed", "1", "--profile", "base=dual", "--out", s(&p)])
        .env("AINF_FIELD", "F5")
        .output()
        .unwrap();
    assert!(status.status.success());
    assert_eq!(field_of(&p), "F5");
    let status = Command::new(exe)
        .args([
            "--field",
            "F3",
            "gen",
            "--seed",
            "1",
            "--profile",
            "base=dual",
            "--out",
            s(&p),
        ])
        .env("AINF_FIELD", "F5")
        .output()
        .unwrap();
    assert!(status.status.success());
    assert_eq!(field_of(&p), "F3");
    let bad = Command::new(exe)
        .args(["gen", "--seed", "1", "--profile", "base=dual", "--out", s(&p)])
        .env("AINF_FIELD", "F4")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn binary_exit_codes() {
    let exe = env!("CARGO_BIN_EXE_ainf");
    let dir = TempDir::new().unwrap();
    let p = gen(&dir, "b.json", 1, "base=dual,flavor=a");
    let ok = Command::new(exe).args(["verify", "--in", s(&p)]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    corrupt(&p);
    let fail = Command::new(exe).args(["verify", "--in", s(&p)]).output().unwrap();
    assert_eq!(fail.status.code(), Some(1));
    let usage = Command::new(exe).args(["verify"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
    let missing = Command::new(exe)
        .args(["verify", "--in", s(&path(&dir, "none.json"))])
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn documented_examples_verify_and_round_trip() {
    let docs = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/examples");
    for name in ["interval.json", "dual_numbers.json", "interval_transfer.json"] {
        let p = docs.join(name);
        verify_ok(&p);
        let text = std::fs::read_to_string(&p).unwrap();
        assert_eq!(emit(&parse(&text, Field::Rational).unwrap()).unwrap(), text, "{name}");
    }
}
