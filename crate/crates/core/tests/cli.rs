use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str], stdin: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_dycktri"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin).unwrap();
    child.wait_with_output().unwrap()
}

fn pipe(first: &[&str], second: &[&str]) -> Output {
    let out = run(first, b"");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    run(second, &out.stdout)
}

#[test]
fn build_then_verify() {
    for family in [
        vec!["build", "dyck", "--n", "3"],
        vec!["build", "staircase", "--m", "3", "--n", "2"],
        vec!["build", "dyck-flip", "--n", "3"],
        vec!["build", "extended-dyck", "--n", "3"],
        vec!["build", "rational-dyck", "--r", "2", "--n", "2"],
        vec!["build", "extended-rational-dyck", "--r", "2", "--n", "2"],
        vec!["build", "random-regular", "--m", "3", "--n", "3", "--seed", "5"],
    ] {
        let out = pipe(&family, &["verify"]);
        assert_eq!(out.status.code(), Some(0), "{family:?}");
    }
}

#[test]
fn broken_triangulation_fails_verification() {
    let input = br#"{"m":2,"n":2,"simplices":[[[1,1],[1,2],[2,2]]]}"#;
    let out = run(&["verify"], input);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn flipped_boundary_does_not_extend() {
    let out = pipe(&["skeleton", "flipped-extended-boundary", "--n", "3"], &["skeleton", "extend"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("LaFailure"), "{err}");
    assert!(err.contains("[[1,2],[2,3],[3,1]]"), "{err}");
}

#[test]
fn restrict_then_extend() {
    let built = run(&["build", "staircase", "--m", "4", "--n", "2"], b"");
    let skeleton = run(&["skeleton", "restrict", "--k", "3"], &built.stdout);
    assert!(skeleton.status.success());
    let checked = run(&["skeleton", "check"], &skeleton.stdout);
    assert!(checked.status.success());
    let extended = run(&["skeleton", "extend"], &skeleton.stdout);
    assert!(extended.status.success());
    let a: serde_json::Value = serde_json::from_slice(&built.stdout).unwrap();
    let b: serde_json::Value = serde_json::from_slice(&extended.stdout).unwrap();
    assert_eq!(a, b);
}

#[test]
fn ensemble_round_trip() {
    let e = pipe(&["build", "dyck", "--n", "3"], &["ensemble", "from-triangulation"]);
    assert!(e.status.success());
    assert!(run(&["ensemble", "check"], &e.stdout).status.success());
    let t = run(&["ensemble", "reconstruct"], &e.stdout);
    assert!(t.status.success());
    let direct = run(&["build", "dyck", "--n", "3"], b"");
    assert_eq!(t.stdout, direct.stdout);
    let rot = run(&["ensemble", "dyck", "--n", "3"], b"");
    assert_eq!(rot.stdout, e.stdout);
}

#[test]
fn heights_commands() {
    let found = pipe(&["build", "dyck", "--n", "3"], &["heights", "find"]);
    assert!(found.status.success());
    let dir = std::env::temp_dir().join(format!("dycktri-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("h.json");
    std::fs::write(&path, &found.stdout).unwrap();
    let verified = pipe(&["build", "dyck", "--n", "3"], &["heights", "verify", "--heights", path.to_str().unwrap()]);
    assert!(verified.status.success());

    let symbolic = run(&["heights", "dyck", "--n", "3"], b"");
    std::fs::write(&path, &symbolic.stdout).unwrap();
    let rejected =
        pipe(&["build", "dyck-flip", "--n", "3"], &["heights", "verify", "--heights", path.to_str().unwrap()]);
    assert_eq!(rejected.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn render_and_cayley() {
    let svg = pipe(&["build", "dyck", "--n", "3"], &["render", "--format", "svg"]);
    assert!(svg.status.success());
    assert!(String::from_utf8(svg.stdout).unwrap().starts_with("<svg"));
    let mixed = pipe(&["build", "dyck", "--n", "3"], &["render", "--format", "mixed-svg"]);
    assert!(String::from_utf8(mixed.stdout).unwrap().contains("<polygon"));
    let too_big = pipe(&["build", "dyck", "--n", "4"], &["render", "--format", "mixed-svg"]);
    assert_eq!(too_big.status.code(), Some(2));
    let cells = pipe(&["build", "dyck", "--n", "2"], &["cayley"]);
    let parsed: serde_json::Value = serde_json::from_slice(&cells.stdout).unwrap();
    assert_eq!(parsed.as_array().unwrap().len(), 2);
}

#[test]
fn usage_and_parse_errors_exit_with_two() {
    let out = run(&["verify"], b"{\"m\": 2,");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 1"));
    assert_eq!(run(&["build", "dyck"], b"").status.code(), Some(2));
    assert_eq!(run(&["frobnicate"], b"").status.code(), Some(2));
    assert_eq!(run(&["build", "dyck", "--n", "0"], b"").status.code(), Some(2));
}
