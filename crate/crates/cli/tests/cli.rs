use std::io::Write;
use std::process::{Command, Output, Stdio};

use univalent_completion::io::{self, Kind};
use univalent_completion::sset::standard_simplex;

fn ucomp(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ucomp"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn text(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn demo(args: &[&str]) -> String {
    let out = ucomp(&[&["demo"], args].concat(), "");
    assert_eq!(out.status.code(), Some(0));
    text(&out)
}

#[test]
fn two_point_fiber_completes() {
    let out = ucomp(&["complete", "--max-dim", "2"], &demo(&["two-point-fiber"]));
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc = io::parse(&text(&out)).unwrap();
    assert_eq!(doc.kind, Kind::Completion);
    assert_eq!(
        doc.payload["classifying_sizes"],
        serde_json::json!([1, 2, 4])
    );
    assert_eq!(doc.payload["univalence"]["verdict"], "pass");
}

#[test]
fn split_demo_is_not_univalent() {
    let out = ucomp(&["check-univalence"], &demo(&["split-nonunivalent"]));
    assert_eq!(out.status.code(), Some(1));
    let doc = io::parse(&text(&out)).unwrap();
    assert_eq!(doc.payload["detail"]["component_condition"], "fail");
}

#[test]
fn broken_identity_is_named() {
    let mut d = io::sset_doc(standard_simplex(1, 2).sset());
    let edge = d.levels[1].iter().position(|id| id == "01").unwrap();
    let faces = &mut d.faces[1];
    let (a, b) = (faces["d0"][edge].clone(), faces["d1"][edge].clone());
    faces.get_mut("d0").unwrap()[edge] = b;
    faces.get_mut("d1").unwrap()[edge] = a;
    let input = io::serialize(&io::document(Kind::Sset, &d));
    let out = ucomp(&["validate"], &input);
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out).contains("d0 d1 != d0 d0"), "{}", text(&out));
}

#[test]
fn input_errors_exit_3() {
    assert_eq!(ucomp(&["validate"], "{").status.code(), Some(3));
    let s = io::serialize(&io::document(
        Kind::Sset,
        &io::sset_doc(standard_simplex(0, 0).sset()),
    ));
    assert_eq!(
        ucomp(
            &["validate"],
            &s.replace("\"version\": 1", "\"version\": 7")
        )
        .status
        .code(),
        Some(3)
    );
    assert_eq!(ucomp(&["demo", "nonsense"], "").status.code(), Some(3));
    assert_eq!(ucomp(&["check-kan"], &s).status.code(), Some(3));
}

#[test]
fn exhausted_budget_exits_2() {
    let out = ucomp(&["complete", "--budget", "10"], &demo(&["two-point-fiber"]));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn demos_validate_and_round_trip() {
    let cases: [&[&str]; 7] = [
        &["constant-group", "Z2"],
        &["constant-group", "Z3"],
        &["constant-group", "S3"],
        &["indiscrete", "3"],
        &["discrete", "2"],
        &["two-point-fiber"],
        &["split-nonunivalent"],
    ];
    for args in cases {
        let d = demo(args);
        assert_eq!(io::serialize(&io::parse(&d).unwrap()), d);
        let out = ucomp(&["validate"], &d);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", text(&out));
    }
}

#[test]
fn outputs_are_byte_identical() {
    let g = demo(&["constant-group", "S3"]);
    let a = ucomp(&["bg"], &g);
    let b = ucomp(&["bg"], &g);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let kan = ucomp(&["check-kan-complex"], &text(&a));
    assert_eq!(kan.status.code(), Some(0));
    let pi = ucomp(&["pi", "--base", "*"], &text(&a));
    let doc = io::parse(&text(&pi)).unwrap();
    assert_eq!(doc.payload["detail"]["order"]["finite"], 6);
}

#[test]
fn action_space_projection() {
    use std::sync::Arc;
    use univalent_completion::group::FiniteGroup;
    use univalent_completion::sgpd::{constant_group, translation_action};
    let z2 = FiniteGroup::cyclic(2);
    let a = translation_action(Arc::new(constant_group(&z2, 2).unwrap()), &z2).unwrap();
    let input = io::serialize(&io::document(Kind::Action, &io::action_doc(&a)));
    let out = ucomp(&["action-space"], &input);
    assert_eq!(out.status.code(), Some(0));
    let map =
        io::read_map(&io::payload(&io::parse(&text(&out)).unwrap(), Kind::Map).unwrap()).unwrap();
    assert_eq!(map.dom().level_sizes(), vec![2, 4, 8]);
    let kan = ucomp(&["check-kan"], &text(&out));
    assert_eq!(kan.status.code(), Some(0));
}
