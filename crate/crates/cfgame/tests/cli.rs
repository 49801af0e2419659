use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const G1: &str = "alphabet: a b f\nfunctions: f\ntarget: regex a | b\nrule f: finite a , b\n";
const G3: &str = "alphabet: a f\nfunctions: f\ntarget: regex a\nrule f: finite f , a\n";
const G4: &str = "alphabet: a f\nfunctions: f\ntarget: regex a *\nrule f: regex a *\n";
// one left step wins "f g" here, so the unrestricted game beats left to right
const LEFT_STEP: &str = "alphabet: a f g\nfunctions: f g\ntarget: regex f | a | g g\nrule f: finite %e\nrule g: finite %e , a f\n";

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn cfgame(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cfgame"))
        .args(args)
        .output()
        .unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn decide_exit_codes() {
    let dir = TempDir::new().unwrap();
    let g1 = write(&dir, "g1.game", G1);
    let g3 = write(&dir, "g3.game", G3);
    let o = cfgame(&["decide", p(&g1), "--word", "f"]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "SAFE\n"));
    let o = cfgame(&["decide", p(&g1), "--word", "f f"]);
    assert_eq!(
        (o.status.code(), stdout(&o).as_str()),
        (Some(1), "UNSAFE\n")
    );
    let o = cfgame(&[
        "decide",
        p(&g3),
        "--word",
        "f",
        "--mode",
        "lr-oracle",
        "--budget",
        "4",
    ]);
    assert_eq!(
        (o.status.code(), stdout(&o).as_str()),
        (Some(3), "UNKNOWN\n")
    );
    let o = cfgame(&["decide", p(&g1), "--word", "f", "--mode", "any-oracle"]);
    assert_eq!(o.status.code(), Some(0));
    let o = cfgame(&[
        "decide",
        p(&g1),
        "--word",
        "f",
        "--mode",
        "multipass",
        "--k",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let g1 = write(&dir, "g1.game", G1);
    for args in [
        vec!["decide", p(&g1)],
        vec!["decide", p(&g1), "--word", "f", "--mode", "magic"],
        vec!["decide", p(&g1), "--word", "f", "--k", "1"],
        vec!["decide", p(&g1), "--word", "f", "--mode", "multipass"],
        vec!["decide", p(&g1), "--word", "c"],
        vec!["decide", "/nonexistent/file.game", "--word", "f"],
        vec!["validate", p(&g1), "--bogus"],
        vec!["gen", "--seed", "1", "--symbols", "1", "--functions", "2"],
        vec!["frobnicate"],
    ] {
        let o = cfgame(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn validate_reports_every_violation() {
    let dir = TempDir::new().unwrap();
    let good = write(&dir, "g1.game", G1);
    let o = cfgame(&["validate", p(&good)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("OK"));
    let bad = write(
        &dir,
        "bad.game",
        "alphabet: a f g\nfunctions: f g\ntarget: regex a\nrule f: finite a c\n",
    );
    let o = cfgame(&["validate", p(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("missing rule for g"), "{err}");
    assert!(err.contains("rule f uses undeclared symbol c"), "{err}");
    let syntax = write(&dir, "syntax.game", "alphabet: a\n\ntarget a\n");
    let err = String::from_utf8(cfgame(&["validate", p(&syntax)]).stderr).unwrap();
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn automaton_counts_and_dot() {
    let dir = TempDir::new().unwrap();
    let g1 = write(&dir, "g1.game", G1);
    let dot = dir.path().join("g1.dot");
    let o = cfgame(&["automaton", p(&g1), "--dot", p(&dot)]);
    assert_eq!(
        (o.status.code(), stdout(&o).as_str()),
        (Some(0), "STATES 4\n")
    );
    let text = std::fs::read_to_string(&dot).unwrap();
    assert!(text.starts_with("digraph safelr {"));
    assert!(text.contains("[label=\"{q1},{qs}\", shape=doublecircle]"));
    let o = cfgame(&["automaton", p(&g1), "--limit", "2"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(o.stdout.is_empty());
    let g4 = write(&dir, "g4.game", G4);
    assert_eq!(cfgame(&["automaton", p(&g4)]).status.code(), Some(0));
}

#[test]
fn compare_witnesses_replay() {
    let dir = TempDir::new().unwrap();
    let game = write(&dir, "left.game", LEFT_STEP);
    let o = cfgame(&["compare", p(&game), "--max-len", "2", "--budget", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    let witnesses: Vec<&str> = lines
        .iter()
        .filter_map(|l| l.strip_prefix("WITNESS "))
        .collect();
    assert!(witnesses.contains(&"f g"), "{out}");
    assert_eq!(
        lines.last().copied(),
        Some(format!("TOTAL {}", witnesses.len()).as_str())
    );
    for w in witnesses {
        let any = cfgame(&[
            "decide",
            p(&game),
            "--word",
            w,
            "--mode",
            "any-oracle",
            "--budget",
            "6",
        ]);
        assert_eq!(stdout(&any), "SAFE\n", "{w}");
        let lr = cfgame(&["decide", p(&game), "--word", w]);
        assert_eq!(stdout(&lr), "UNSAFE\n", "{w}");
    }
    let g1 = write(&dir, "g1.game", G1);
    let o = cfgame(&["compare", p(&g1), "--max-len", "2", "--budget", "4"]);
    assert_eq!(stdout(&o), "TOTAL 0\n");
}

#[test]
fn gen_is_reproducible() {
    let args = [
        "gen",
        "--seed",
        "42",
        "--symbols",
        "4",
        "--functions",
        "2",
        "--regular",
    ];
    let a = cfgame(&args);
    let b = cfgame(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let other = cfgame(&[
        "gen",
        "--seed",
        "43",
        "--symbols",
        "4",
        "--functions",
        "2",
        "--regular",
    ]);
    assert_ne!(a.stdout, other.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("alphabet: "), "{text}");
    assert!(cfgame_format_ok(&text));
}

fn cfgame_format_ok(text: &str) -> bool {
    cfgame::parse_game(text).is_ok()
}

#[test]
fn play_reads_stdin() {
    use std::io::Write;
    use std::process::Stdio;
    let dir = TempDir::new().unwrap();
    let g1 = write(&dir, "g1.game", G1);
    let mut child = Command::new(env!("CARGO_BIN_EXE_cfgame"))
        .args(["play", p(&g1), "--word", "f", "--as", "juliet"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"call\nread\n")
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("result: Juliet wins"), "{}", stdout(&o));
}
