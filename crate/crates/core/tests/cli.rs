use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const ATO: &str = "# four vertices\na\nb\nc\nd\nb a 1\na c 2\nb d 2\nc b 3\n";
const WOODY: &str = "alpha zeta 2\nzeta alpha 2\nbeta eta 1\neta beta 1\ngamma xi 2\nxi gamma 2\nbeta gamma 3\neta zeta 3\n";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_forest-atoms"))
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str], cwd: &Path) -> (i32, String, String) {
    let Output { status, stdout, stderr } = bin().args(args).current_dir(cwd).output().unwrap();
    (
        status.code().unwrap(),
        String::from_utf8(stdout).unwrap(),
        String::from_utf8(stderr).unwrap(),
    )
}

#[test]
fn phi_of_the_examples() {
    let dir = tempfile::tempdir().unwrap();
    let ato = write(dir.path(), "ato.txt", ATO);
    let (code, out, _) = run(&["phi", ato.to_str().unwrap()], dir.path());
    assert_eq!(code, 0);
    assert!(out.starts_with("phi: inf 7 3 1 0\n"), "{out}");
    let single = write(dir.path(), "one.txt", "x\n");
    let (code, out, _) = run(&["phi", single.to_str().unwrap()], dir.path());
    assert_eq!((code, out.lines().next().unwrap()), (0, "phi: inf 0"));
    let (_, json, _) = run(&["--json", "phi", ato.to_str().unwrap()], dir.path());
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["phi"], serde_json::json!(["inf", "7", "3", "1", "0"]));
}

#[test]
fn parse_errors_exit_2_with_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.txt", "a b 1\n\na b\n");
    let (code, _, err) = run(&["phi", bad.to_str().unwrap()], dir.path());
    assert_eq!(code, 2);
    assert!(err.contains("line 3"), "{err}");
    let (code, _, _) = run(&["phi"], dir.path());
    assert_eq!(code, 2);
}

#[test]
fn atoms_levels_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let ato = write(dir.path(), "ato.txt", ATO);
    let p = ato.to_str().unwrap();
    let (code, out, _) = run(&["atoms", p, "--k", "3"], dir.path());
    assert_eq!(code, 0);
    assert!(out.contains("atoms: [{a,b}*, {c}*, {d}*]") && out.contains("rho: [1, 0, 0]"), "{out}");
    let (_, out, _) = run(&["atoms", p, "--k", "2"], dir.path());
    assert!(out.contains("atoms: [{a,b,c}*, {d}*]") && out.contains("rho: [3, 0]"), "{out}");
    assert_eq!(run(&["atoms", p, "--k", "0"], dir.path()).0, 2);
    let woody = write(dir.path(), "woody.txt", WOODY);
    let (code, _, err) = run(&["atoms", woody.to_str().unwrap(), "--k", "1"], dir.path());
    assert_eq!(code, 4);
    assert!(err.contains("phi^1 = inf"), "{err}");
    assert_eq!(run(&["--cap", "3", "phi", p], dir.path()).0, 3);
    assert_eq!(run(&["phi", "/does/not/exist"], dir.path()).0, 5);
}

#[test]
fn verify_file_random_and_self_test() {
    let dir = tempfile::tempdir().unwrap();
    let ato = write(dir.path(), "ato.txt", ATO);
    let (code, out, _) = run(&["verify", ato.to_str().unwrap()], dir.path());
    assert_eq!(code, 0);
    assert!(out.contains("statements verified: ") && out.contains("not-applicable: "), "{out}");

    let args = ["--quiet", "verify", "--random", "n=5,trials=30,seed=42"];
    let (code, a, _) = run(&args, dir.path());
    let (_, b, _) = run(&args, dir.path());
    assert_eq!(code, 0);
    assert_eq!(a, b);

    let (code, out, _) = run(&["verify", "--self-test", "--witness", "w.json"], dir.path());
    assert_eq!(code, 1, "{out}");
    let w: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("w.json")).unwrap()).unwrap();
    assert!(!w.as_array().unwrap().is_empty());
    assert_eq!(w[0]["fault"], "merge_atoms");
}

#[test]
fn analyze_then_replay() {
    let dir = tempfile::tempdir().unwrap();
    let ato = write(dir.path(), "ato.txt", ATO);
    let (code, doc, _) = run(&["analyze", "--verify", ato.to_str().unwrap()], dir.path());
    assert_eq!(code, 0);
    let saved = write(dir.path(), "doc.json", &doc);
    let (code, out, _) = run(&["--quiet", "verify", "--replay", saved.to_str().unwrap()], dir.path());
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("replay: document reproduced"));

    let tampered = doc.replacen("\"7\"", "\"8\"", 1);
    let bad = write(dir.path(), "bad.json", &tampered);
    let (code, out, _) = run(&["verify", "--replay", bad.to_str().unwrap()], dir.path());
    assert_eq!(code, 1);
    assert!(out.contains("phi"), "{out}");
}

#[test]
fn hierarchy_text_and_dot() {
    let dir = tempfile::tempdir().unwrap();
    let ato = write(dir.path(), "ato.txt", ATO);
    let (code, out, _) = run(&["hierarchy", ato.to_str().unwrap(), "--dot", "h.dot"], dir.path());
    assert_eq!(code, 0);
    let gaps: Vec<&str> = out.lines().map(|l| l.split("gap = ").nth(1).unwrap().split(' ').next().unwrap()).collect();
    assert_eq!(gaps, ["inf", "4", "2", "1"]);
    let dot = std::fs::read_to_string(dir.path().join("h.dot")).unwrap();
    assert!(dot.starts_with("digraph hierarchy"));

    let woody = write(dir.path(), "woody.txt", WOODY);
    let (_, out, _) = run(&["hierarchy", woody.to_str().unwrap()], dir.path());
    let first = out.lines().next().unwrap();
    assert!(first.starts_with("k = 2  gap = inf"), "{first}");
    assert_eq!(first.matches('{').count(), 3);

    let empty = write(dir.path(), "three.txt", "p\nq\nr\n");
    let (_, out, _) = run(&["hierarchy", empty.to_str().unwrap()], dir.path());
    assert_eq!(out.trim(), "k = 3  gap = inf  atoms: [{p}*, {q}*, {r}*]");

    let (code, _, _) = run(&["hierarchy", ato.to_str().unwrap(), "--dot", "/no/such/dir/h.dot"], dir.path());
    assert_eq!(code, 5);
}

#[test]
fn matrix_input() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "ato.qp", "  a b c d\na - - 2 -\nb 1 - - 2\nc - 3 - -\nd - - - -\n");
    let (code, out, _) = run(&["phi", m.to_str().unwrap()], dir.path());
    assert_eq!(code, 0);
    assert!(out.starts_with("phi: inf 7 3 1 0"), "{out}");
}
