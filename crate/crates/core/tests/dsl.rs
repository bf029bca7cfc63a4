use std::fs;
use std::path::PathBuf;

use lsys::dsl::{format_definition, format_word, parse, parse_with_warnings, parse_word};
use lsys::{Module, ModuleString, ParamValue, Point};
use proptest::prelude::*;

fn definition_files() -> Vec<PathBuf> {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let mut files = Vec::new();
    for dir in [root.join("definitions"), root.join("../../definitions")] {
        for entry in fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.extension().is_some_and(|e| e == "lsys") {
                files.push(path);
            }
        }
    }
    files.sort();
    files
}

#[test]
fn every_shipped_definition_parses_cleanly_and_round_trips() {
    let files = definition_files();
    assert_eq!(files.len(), 12);
    for path in files {
        let text = fs::read_to_string(&path).unwrap();
        let (def, warnings) = parse_with_warnings(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert!(warnings.is_empty(), "{}: {warnings:?}", path.display());
        let again = parse(&format_definition(&def)).unwrap();
        assert_eq!(again, def, "{}", path.display());
    }
}

#[test]
fn first_matching_production_wins() {
    let src = |order: &str| format!("lsystem order {{ axiom: A(1); table p {{ {order} }} schedule 1 {{ p: 1; }} }}",);
    let a = parse(&src("p1: A(x) -> B(x); p2: A(x) -> C(x);")).unwrap();
    let b = parse(&src("p2: A(x) -> C(x); p1: A(x) -> B(x);")).unwrap();
    assert_eq!(a.derive(false).unwrap().result.to_string(), "B(1)");
    assert_eq!(b.derive(false).unwrap().result.to_string(), "C(1)");
    let labels: Vec<&str> = b
        .table("p")
        .unwrap()
        .productions()
        .iter()
        .map(|p| p.label.as_str())
        .collect();
    assert_eq!(labels, ["p2", "p1"]);
}

#[test]
fn errors_point_at_the_offending_token() {
    let text = "lsystem e {\n  axiom: A(1);\n  table p {\n    p1: A(x) -> A(y);\n  }\n  schedule 1 { p: 1; }\n}\n";
    let err = parse(text).unwrap_err();
    assert_eq!((err.line, err.column), (4, 19));
    assert_eq!(err.token, "y");

    let text = "lsystem e {\n  axiom: P((0, 0));\n  table p {\n    p1: P(v) -> P(1/2 * v + 1/4 * v);\n  }\n  schedule 1 { p: 1; }\n}\n";
    let err = parse(text).unwrap_err();
    assert_eq!(err.line, 4);
    assert!(err.message.contains("0.75"), "{err}");

    let err = parse("lsystem e { axiom: A(1); table p { } schedule 1 { q: 1; } }").unwrap_err();
    assert_eq!(err.token, "q");
}

fn module() -> impl Strategy<Value = Module> {
    let scalar = (-1000i32..1000, 0u32..3).prop_map(|(m, e)| ParamValue::Scalar(m as f64 / 10f64.powi(e as i32)));
    let point = (-100i32..100, -100i32..100)
        .prop_map(|(x, y)| ParamValue::Point(Point::new2(x as f64 / 4.0, y as f64).unwrap()));
    let param = prop_oneof![scalar, point];
    (
        prop::sample::select(vec!["A", "B", "P", "E", "L"]),
        prop::collection::vec(param, 0..3),
    )
        .prop_map(|(s, params)| Module::new(s, params))
}

proptest! {
    #[test]
    fn words_round_trip(ms in prop::collection::vec(module(), 1..10)) {
        let w = ModuleString::linear(ms);
        prop_assert_eq!(parse_word(&format_word(&w)).unwrap(), w);
    }
}
