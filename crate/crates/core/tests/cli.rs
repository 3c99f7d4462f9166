use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use coalres::engine::parse_trace;
use coalres::formula::parse;
use coalres::snf::negate_for_validity;

fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(rel)
}

fn coalres(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coalres")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn light_problem_is_refuted_with_a_replayable_trace() {
    let light = fixture("light.clp");
    let o = coalres(&["prove", path(&light), "--format", "problem", "--trace"]);
    assert_eq!(code(&o), 20);
    let out = stdout(&o);
    let (verdict, trace) = out.split_once('\n').unwrap();
    assert_eq!(verdict, "UNSAT");
    assert!(trace.lines().any(|l| l.contains(". false  (")));
    let d = parse_trace("trace", trace).unwrap();
    assert!(d.replay().unwrap() > 0);
}

#[test]
fn axioms_are_valid() {
    for entry in fs::read_dir(fixture("axioms")).unwrap() {
        let p = entry.unwrap().path();
        let o = coalres(&["prove", "--valid", path(&p)]);
        assert_eq!(code(&o), 20, "{}", p.display());
        assert_eq!(stdout(&o).lines().next(), Some("UNSAT"));
    }
}

#[test]
fn additivity_is_not_valid() {
    let o = coalres(&["prove", path(&fixture("sat/additivity_neg.cl"))]);
    assert_eq!(code(&o), 10);
    assert_eq!(stdout(&o).lines().next(), Some("SAT"));
}

#[test]
fn valid_flag_agrees_with_hand_negation() {
    let dir = tempfile::tempdir().unwrap();
    let mut files: Vec<PathBuf> = fs::read_dir(fixture("axioms")).unwrap().map(|e| e.unwrap().path()).collect();
    files.push(fixture("sat/additivity_neg.cl"));
    for p in files {
        let f = parse(&fs::read_to_string(&p).unwrap()).unwrap();
        let neg = dir.path().join("neg.cl");
        fs::write(&neg, negate_for_validity(&f).to_string()).unwrap();
        let a = code(&coalres(&["prove", "--valid", path(&p)]));
        let b = code(&coalres(&["prove", path(&neg)]));
        assert_eq!(a, b, "{}", p.display());
    }
}

#[test]
fn sigma_rule_switch() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.cl");
    fs::write(&f, "[] p & [1,2] ~p\n").unwrap();
    assert_eq!(code(&coalres(&["prove", path(&f)])), 20);
    assert_eq!(code(&coalres(&["prove", path(&f), "--sigma-rule", "off"])), 10);
}

#[test]
fn backward_subsumption_switch() {
    let light = fixture("light.clp");
    let removed = |switch: &str| {
        let o = coalres(&["prove", path(&light), "--porcelain", "--backward-subsumption", switch]);
        assert_eq!(code(&o), 20);
        let out = stdout(&o);
        out.lines().find_map(|l| l.strip_prefix("removed=")).unwrap().parse::<usize>().unwrap()
    };
    assert!(removed("on") > 0);
    assert_eq!(removed("off"), 0);
}

#[test]
fn porcelain_report() {
    let o = coalres(&["prove", path(&fixture("light.clp")), "--porcelain"]);
    let out = stdout(&o);
    let kv: Vec<(&str, &str)> = out.lines().map(|l| l.split_once('=').unwrap()).collect();
    assert_eq!(kv[0], ("verdict", "UNSAT"));
    let get = |k: &str| kv.iter().find(|(key, _)| *key == k).unwrap().1.parse::<f64>().unwrap();
    assert!(get("derived") >= get("proof_steps"));
    assert_eq!(get("input"), 14.0);
}

#[test]
fn clause_limit_times_out() {
    let o = coalres(&["prove", path(&fixture("light.clp")), "--max-clauses", "20"]);
    assert_eq!(code(&o), 30);
    assert_eq!(stdout(&o).lines().next(), Some("TIMEOUT"));
}

#[test]
fn parse_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.cl");
    fs::write(&f, "<1 p\n").unwrap();
    let o = coalres(&["prove", path(&f)]);
    assert_eq!(code(&o), 1);
    assert!(!o.stderr.is_empty());
    assert_eq!(code(&coalres(&["prove", path(&fixture("light.clp")), "--valid"])), 1);
    assert_eq!(code(&coalres(&["prove", path(&f), "--timeout", "0"])), 1);
}

#[test]
fn gen_writes_a_reproducible_suite() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &Path| {
        let o = coalres(&["gen", "-N", "5", "-A", "2", "-L", "9", "-D", "1", "-P", "1", "--count", "10", "--seed", "7", path(out)]);
        assert_eq!(code(&o), 0);
        o
    };
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let o = args(&a);
    args(&b);
    let set = a.join("5-2-009-1");
    assert_eq!(stdout(&o).trim(), path(&set.join("manifest.txt")));
    for i in 1..=10 {
        let name = format!("problem_{i}.cl");
        let x = fs::read_to_string(set.join(&name)).unwrap();
        assert_eq!(x, fs::read_to_string(b.join("5-2-009-1").join(&name)).unwrap());
        parse(&x).unwrap();
    }
    assert_eq!(fs::read_dir(&set).unwrap().count(), 11);
}

#[test]
fn gen_rejects_bad_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let o = coalres(&["gen", "-N", "5", "-A", "2", "-L", "0", "-D", "1", "-P", "1", path(dir.path())]);
    assert_eq!(code(&o), 1);
    let o = coalres(&["gen", "-N", "5", "-A", "2", "-L", "3", "-D", "1", "-P", "2", path(dir.path())]);
    assert_eq!(code(&o), 1);
}

#[test]
fn check_on_the_one_state_model() {
    let dir = tempfile::tempdir().unwrap();
    let model = fixture("models/one_state.cgm");
    let run = |text: &str| {
        let f = dir.path().join("f.cl");
        fs::write(&f, text).unwrap();
        let o = coalres(&["check", path(&model), path(&f)]);
        (code(&o), stdout(&o).trim().to_owned())
    };
    assert_eq!(run("<> p"), (0, "HOLDS".into()));
    assert_eq!(run("[1] ~p"), (2, "FAILS".into()));
    assert_eq!(run("<2> p").0, 1);
    let o = coalres(&["check", path(&model), path(&fixture("light.clp"))]);
    assert_eq!(code(&o), 1, "the light problem has two agents");
}

#[test]
fn light_problem_fails_on_a_two_agent_model() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.cgm");
    fs::write(&m, "agents: 1,2\nstates: 1\ndelta: 0 (0,0) 0\nval: 0 t0 t1 t4\n").unwrap();
    let o = coalres(&["check", path(&m), path(&fixture("light.clp"))]);
    assert_eq!((code(&o), stdout(&o).trim()), (2, "FAILS"));
}

#[test]
fn bench_tabulates_sets() {
    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("one");
    fs::create_dir(&one).unwrap();
    fs::copy(fixture("sat/additivity_neg.cl"), one.join("problem_1.cl")).unwrap();
    let o = coalres(&["bench", path(&one), "--porcelain"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 1);
    assert!(out.contains("problems=1 solved=1 sat=1 unsat=0 timeouts=0"), "{out}");

    let suite = dir.path().join("suite");
    for l in ["2", "3"] {
        let o = coalres(&["gen", "-N", "3", "-A", "2", "-L", l, "-D", "1", "-P", "1", "--count", "3", "--seed", "1", path(&suite)]);
        assert_eq!(code(&o), 0);
    }
    let o = coalres(&["bench", path(&suite), "--jobs", "2"]);
    assert_eq!(code(&o), 0);
    let table = stdout(&o);
    assert_eq!(table.lines().count(), 3, "{table}");
    assert!(table.contains("3-2-002-1") && table.contains("3-2-003-1"));

    let empty = dir.path().join("empty");
    fs::create_dir(&empty).unwrap();
    assert_eq!(code(&coalres(&["bench", path(&empty)])), 1);
}
