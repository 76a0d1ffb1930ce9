use std::path::PathBuf;
use std::process::{Command, Output};

fn write_pres(name: &str, text: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn dgrp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dgrp")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn nf_prints_the_principal_left_trace() {
    let f = write_pres("nf.pres", "letters a b\nrule a a a = a\nrule a a a = a a\nrule b a a a = a a a b\n");
    let o = dgrp(&["--presentation", f.to_str().unwrap(), "nf", "a b a^3 b a^4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[0], "a b a^3 b a^4 -> a^4 b^2 a^4");
    assert_eq!(lines[5], "a^3 b^2 a -> a b^2 a");
}

#[test]
fn word_problem_on_a_builtin() {
    let o = dgrp(&["--builtin", "thompson", "wp", "[-|x>x x|-] ; [-|x>x x|-]~"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "trivial");
    let o = dgrp(&["--builtin", "thompson", "--format", "json", "wp", "[-|x>x x|-] ; [-|x>x x|x] ; [x|x x>x|-] ; [-|x x>x|-]"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], "dgrp.wp/1");
}

#[test]
fn squier_component_as_dot() {
    let f = write_pres("cycle.pres", "letters a b c\nrule a = b\nrule b = c\nrule c = a\n");
    let o = dgrp(&["--presentation", f.to_str().unwrap(), "--format", "dot", "squier", "a"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("graph squier {"));
    assert_eq!(out.lines().filter(|l| l.contains("[label=") && !l.contains("--")).count(), 3);
    assert_eq!(out.lines().filter(|l| l.contains(" -- ")).count(), 3);
}

#[test]
fn exit_codes() {
    let o = dgrp(&["--builtin", "thompson", "--budget-words", "20", "squier"]);
    assert_eq!(o.status.code(), Some(2), "truncated enumeration is undecided");
    let o = dgrp(&["--builtin", "thompson", "wp", "[-|y>x x|-]"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
    let o = dgrp(&["--presentation", "/nonexistent/file.pres", "validate"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn thompson_is_not_conspicial() {
    let o = dgrp(&["--builtin", "thompson", "conspicial"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("osculation"));
}
