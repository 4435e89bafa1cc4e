use std::path::Path;
use std::process::{Command, Output};

use qregular::automata::{parse_regex, write_dfa, Alphabet};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qregular")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn classify_or_regex() {
    let o = run(&["classify", "--regex", "~%0 1 ~%0", "--alphabet", "0 1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("SqrtN"), "{}", stdout(&o));
}

#[test]
fn classify_parity_file_prints_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("parity.dfa");
    let dfa = parse_regex("(0*10*1)*0*", &Alphabet::binary()).unwrap().to_dfa();
    std::fs::write(&path, write_dfa(&dfa)).unwrap();
    let o = run(&["classify", "--dfa", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("Linear"), "{text}");
    assert!(text.contains("MOD_2 witness"), "{text}");
    assert!(text.contains("witness check to m = 8: ok"), "{text}");
}

#[test]
fn classify_epsilon_is_zero_query() {
    let o = run(&["classify", "--regex", "%e"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("ZeroQuery"));
}

#[test]
fn decide_examples() {
    let o = run(&["decide", "--fixture", "infix", "--word", "1200211", "--model", "grover"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("accepted: true"));
    assert!(stdout(&o).contains("modeled cost"));

    let o = run(&["decide", "--fixture", "trivial", "--word", "ab", "--model", "classical"]);
    assert!(stdout(&o).contains("accepted: true"));
    assert!(stdout(&o).contains("classical reads: 2"));

    let o = run(&["decide", "--fixture", "sigma-star", "--word", ""]);
    assert!(stdout(&o).contains("accepted: true"));
    assert!(stdout(&o).contains("classical reads: 0"));
}

#[test]
fn decide_records_format() {
    let o = run(&["--format", "records", "decide", "--fixture", "or", "--word", "0010", "--model", "classical"]);
    assert_eq!(code(&o), 0);
    let line = stdout(&o);
    assert!(line.starts_with("record=decision class=SqrtN accepted=true"), "{line}");
}

#[test]
fn decompose_appendix_c() {
    let o = run(&["decompose", "--fixture", "appendix-c", "--element", "ab"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    for line in ["E = {(1,a)}", "F = {(b,1)}", "G = {(a,1,a), (b,1,b)}", "C = ∅", "verified: yes"] {
        assert!(text.contains(line), "missing {line} in {text}");
    }
    assert_eq!(code(&run(&["decompose", "--fixture", "appendix-c", "--element", "zz"])), 2);
}

#[test]
fn sensitivity_of_or() {
    let o = run(&["sensitivity", "--fixture", "or", "--n-max", "32"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("n,sensitivity\n"));
    assert!(text.contains("32,32\n"));
    assert!(text.trim_end().ends_with("# verdict: LinearLower(1, 0)"), "{text}");
}

fn curve(out: &Path, fixture: &str) -> Output {
    run(&[
        "--out",
        out.to_str().unwrap(),
        "cost-curve",
        "--fixture",
        fixture,
        "--n-min",
        "256",
        "--n-max",
        "2048",
        "--samples",
        "2",
        "--seed",
        "11",
    ])
}

#[test]
fn cost_curve_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    let first = curve(&a, "infix");
    assert_eq!(code(&first), 0);
    assert!(stdout(&first).contains("log-log slope of modeled cost"));
    assert_eq!(code(&curve(&b, "infix")), 0);
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    assert!(text.starts_with("n,classical,modeled\n"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn cost_curve_refuses_parity() {
    let dir = tempfile::tempdir().unwrap();
    let o = curve(&dir.path().join("p.csv"), "parity");
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("Linear"));
    assert_eq!(code(&run(&["cost-curve", "--fixture", "infix"])), 2, "seed is mandatory");
}

#[test]
fn fixtures_all_pass() {
    let o = run(&["fixtures", "--all"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
    assert!(stdout(&o).contains("golden tables PASS"));
    let listed = run(&["fixtures", "--list"]);
    assert!(stdout(&listed).lines().any(|l| l.starts_with("paren-4\tSqrtN")));
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(code(&run(&["classify", "--regex", "(0"])), 2);
    assert_eq!(code(&run(&["classify", "--fixture", "missing"])), 2);
    assert_eq!(code(&run(&["classify", "--dfa", "/nonexistent/x.dfa"])), 2);
    assert_eq!(code(&run(&["classify", "--regex", "0", "--fixture", "or"])), 2);
    assert_eq!(code(&run(&["fixtures", "--name", "missing"])), 2);
}

#[test]
fn outputs_are_byte_stable() {
    let args = ["--format", "records", "classify", "--fixture", "appendix-c"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let seq = run(&["--sequential", "--format", "records", "fixtures", "--all"]);
    let par = run(&["--format", "records", "fixtures", "--all"]);
    assert_eq!(seq.stdout, par.stdout);
}
