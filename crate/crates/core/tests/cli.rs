use std::path::PathBuf;
use std::process::{Command, Output};

fn partiality(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_partiality"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(path).expect("golden file")
}

#[test]
fn plus_steps_regression() {
    let o = partiality(&[
        "--machine",
        "--fuel",
        "1000",
        "eval",
        "R(P 1 1; C(S; P 3 3))",
        "2",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "CONVERGED 5 steps=0\n");
}

#[test]
fn minimization_takes_one_step_per_candidate() {
    let o = partiality(&[
        "--machine",
        "eval",
        "M(R(P 1 1; C(C(R(Z; P 2 3); P 1 1, P 1 1); P 3 3)))",
        "7",
    ]);
    assert_eq!(stdout(&o), "CONVERGED 7 steps=7\n");
}

#[test]
fn exhaustion_exits_2() {
    let o = partiality(&["--machine", "--fuel", "100", "eval", "M(C(S; P 2 2))", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout(&o), "EXHAUSTED fuel=100\n");
}

#[test]
fn errors_exit_1() {
    for args in [
        &["eval", "C(S; Z, Z)", "1"][..],
        &["eval", "P 0 2", "1"],
        &["eval", "R(P 1 1", "1"],
        &["eval", "plus", "1"],
        &["eval", "plus", "1", "two"],
        &["demo", "unknown"],
        &["--fuel", "-5", "demo", "nest"],
        &[],
    ] {
        assert_eq!(partiality(args).status.code(), Some(1), "{args:?}");
    }
    let o = partiality(&["eval", "P 0 2", "1"]);
    assert!(stdout(&o).starts_with("ERROR ill-formed code at root"));
    let o = partiality(&["eval", "C(S P 1 1)", "1"]);
    assert_eq!(
        stdout(&o),
        "ERROR syntax error at position 4: expected ';'\n"
    );
}

#[test]
fn help_exits_0() {
    let o = partiality(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("check-laws"));
}

#[test]
fn trace_is_one_line_per_step() {
    let o = partiality(&[
        "--machine",
        "--trace",
        "--fuel",
        "3",
        "eval",
        "always_diverge",
        "4",
    ]);
    assert_eq!(stdout(&o), "STEP 1\nSTEP 2\nSTEP 3\nEXHAUSTED fuel=3\n");
}

#[test]
fn human_output_adds_comments_only() {
    let o = partiality(&["eval", "plus", "2", "3"]);
    let text = stdout(&o);
    let results: Vec<_> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(results, ["CONVERGED 5 steps=0"]);
}

#[test]
fn demos_match_golden_output() {
    for demo in ["nest", "devil91", "sloth", "factorial-fix"] {
        let o = partiality(&["--machine", "demo", demo]);
        assert_eq!(o.status.code(), Some(0), "{demo}");
        assert_eq!(stdout(&o), golden(&format!("demo-{demo}.txt")), "{demo}");
    }
}

#[test]
fn sloth_at_small_fuel() {
    let o = partiality(&["--machine", "--fuel", "1000", "demo", "sloth"]);
    assert_eq!(
        stdout(&o),
        "sloth g(14) OBSERVED 0 ended=zero\n\
         sloth f(13) OBSERVED 19 ended=exhausted fuel=1000\n\
         strict g(14) EXHAUSTED fuel=1000\n"
    );
}

#[test]
fn check_laws_is_reproducible() {
    let args = [
        "--machine",
        "--fuel",
        "64",
        "check-laws",
        "--samples",
        "300",
        "--seed",
        "5",
    ];
    let (a, b) = (partiality(&args), partiality(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a)
        .lines()
        .all(|l| l.starts_with("LAW ") && !l.contains("FAILS")));
}
