//! One PASS/FAIL line per acceptance criterion.
//!
//! Criteria listed in `EXPECTED_RED` are known to fail; the test asserts that
//! exactly those fail, so a regression or a fix both show up as a failure
//! here.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use coalres::bench::{gen_indexed, gen_suite, render_table, run_suite, summarize, BenchParams};
use coalres::engine::rules::{cres1, cres3};
use coalres::engine::{parse_trace, saturate, subsumes, Derivation, EngineConfig, RuleError, Verdict};
use coalres::formula::{Coalition, Formula};
use coalres::semantics::{bounded_search, find_model, Bounds};
use coalres::snf::{
    negate_for_validity, normalize, parse_clause, parse_problem, Body, CoalitionProblem, SetTag, Simplified,
    SymbolTable, RENAMING_PREFIX,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criterion 1 asks for the exact clause set of the reference proof; the
/// FIFO loop finds a different, equally short refutation.
const EXPECTED_RED: &[u32] = &[1];

/// Per-problem limit for criteria 1 to 3.
const QUICK: Duration = Duration::from_secs(1);
/// Per-problem cap for the benchmark sets.
const CAP: Duration = Duration::from_secs(100);

struct Report {
    results: Vec<(u32, bool)>,
    /// every refutation seen, with its problem
    proofs: Vec<(String, CoalitionProblem, Derivation)>,
}

impl Report {
    fn line(&mut self, n: u32, ok: bool, detail: impl AsRef<str>) {
        println!("criterion {n}: {} {}", if ok { "PASS" } else { "FAIL" }, detail.as_ref());
        self.results.push((n, ok));
    }

    /// Saturates and keeps the proof of an UNSAT verdict.
    fn prove(&mut self, name: &str, problem: &CoalitionProblem, config: &EngineConfig) -> (Verdict, Duration) {
        let start = Instant::now();
        let v = saturate(problem, config);
        let took = start.elapsed();
        if v.is_unsat() {
            let proof = v.proof().expect("refutation extracts");
            self.proofs.push((name.to_owned(), problem.clone(), proof));
        }
        (v, took)
    }
}

fn fixture(rel: &str) -> String {
    fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(rel)).unwrap()
}

fn quick() -> EngineConfig {
    EngineConfig {
        timeout: QUICK,
        ..EngineConfig::default()
    }
}

/// The reference refutation of the light problem, numbered after its 14
/// input clauses. Premise order and pivots follow this crate's rule
/// signatures.
const REFERENCE: &str = "\
15. ~t0 | t4  (U, gres1, 3, 4, pivot=t1)
16. ~l & t4 & tog1 => <1> false  (N, cres1, 5, 14, pivot=l)
17. t1 => <> t4  (N, cres2, 4, 13, pivot=~t1)
18. l | ~t4 | ~tog1  (U, rw1, 16)
19. t1 => <> l | ~tog1  (N, cres2, 18, 17, pivot=~t4)
20. t1 => <1> l  (N, cres1, 19, 9, pivot=~tog1)
21. t1 & t4 => <1> false  (N, cres1, 20, 14, pivot=l)
22. ~t1 | ~t4  (U, rw1, 21)
23. ~t0 | ~t1  (U, gres1, 22, 15, pivot=~t4)
24. ~t0  (U, gres1, 23, 3, pivot=~t1)
25. false  (I, ires1, 1, 24, pivot=t0)
";

fn reference_derivation(problem: &CoalitionProblem) -> Derivation {
    let mut text = format!("agents: {}\n", problem.sigma());
    for c in problem.clauses() {
        text.push_str(&format!("{}. {}  ({}, given)\n", c.id, c.body.display(problem.symbols()), c.kind().set_tag()));
    }
    text.push_str(REFERENCE);
    parse_trace("reference", &text).unwrap()
}

fn criterion_1(r: &mut Report) {
    let problem = parse_problem("light", &fixture("light.clp")).unwrap();
    let reference = reference_derivation(&problem);
    let replays = reference.replay().map(|n| n == 11).unwrap_or(false) && reference.check_given(&problem).is_ok();
    let (v, took) = r.prove("light", &problem, &quick());
    let Ok(proof) = v.proof() else {
        r.line(1, false, format!("light problem: {} in {took:?}", v.tag()));
        return;
    };
    let ours = proof.derived_bodies();
    let golden = reference.derived_bodies();
    let shared = ours.iter().filter(|b| golden.contains(b)).count();
    let ok = took < QUICK && ours == golden;
    r.line(
        1,
        ok,
        format!(
            "light problem UNSAT in {:.3} s; proof has {} derived clauses, {shared} of the 11 reference ones; reference derivation replays: {replays}",
            took.as_secs_f64(),
            ours.len()
        ),
    );
    assert!(replays, "the reference derivation must replay through the rules");
}

fn axiom_instances() -> Vec<(String, Formula)> {
    let (p, q) = (Formula::prop("p"), Formula::prop("q"));
    let coop = |c: &Coalition, f: Formula| Formula::coop(c.clone(), f);
    let mut out = Vec::new();
    for a in [Coalition::empty(), Coalition::of(&[1]), Coalition::of(&[1, 2])] {
        for b in [Coalition::empty(), Coalition::of(&[1]), Coalition::of(&[2]), Coalition::of(&[1, 2])] {
            if !a.is_subset(&b) {
                continue;
            }
            let rest = b.difference(&a);
            let tag = |name: &str| format!("{name} A={{{a}}} B={{{b}}}");
            out.push((tag("bot"), Formula::not(coop(&a, Formula::False))));
            out.push((tag("top"), coop(&a, Formula::True)));
            out.push((
                tag("M"),
                Formula::implies(coop(&a, Formula::and(p.clone(), q.clone())), coop(&a, p.clone())),
            ));
            out.push((
                tag("S"),
                Formula::implies(
                    Formula::and(coop(&a, p.clone()), coop(&rest, q.clone())),
                    coop(&b, Formula::and(p.clone(), q.clone())),
                ),
            ));
            out.push((
                tag("Sigma"),
                Formula::implies(Formula::not(coop(&Coalition::empty(), Formula::not(p.clone()))), coop(&b, p.clone())),
            ));
            out.push((
                tag("coop-dual"),
                Formula::implies(
                    Formula::and(coop(&a, p.clone()), Formula::dual(b.clone(), q.clone())),
                    Formula::dual(rest, Formula::and(p.clone(), q.clone())),
                ),
            ));
        }
    }
    out
}

fn criterion_2(r: &mut Report) {
    let mut bad = Vec::new();
    let mut slowest = Duration::ZERO;
    let instances = axiom_instances();
    for (name, f) in &instances {
        let (v, took) = r.prove(name, &normalize(&negate_for_validity(f)), &quick());
        slowest = slowest.max(took);
        if !v.is_unsat() || took >= QUICK {
            bad.push(format!("{name}: {}", v.tag()));
        }
    }
    r.line(
        2,
        bad.is_empty(),
        format!("{} axiom instances, slowest {:.3} s; failing: {bad:?}", instances.len(), slowest.as_secs_f64()),
    );
}

fn criterion_3(r: &mut Report) {
    let mut notes = Vec::new();
    let mut ok = true;
    for a in [Coalition::of(&[1]), Coalition::of(&[1, 2])] {
        let coop = |f: Formula| Formula::coop(a.clone(), f);
        let (p, q) = (Formula::prop("p"), Formula::prop("q"));
        let additivity = Formula::implies(Formula::and(coop(p.clone()), coop(q.clone())), coop(Formula::and(p, q)));
        let f = negate_for_validity(&additivity);
        let problem = normalize(&f);
        let (v, _) = r.prove("additivity", &problem, &quick());
        let witness = bounded_search(&problem, &Bounds::new(3, 2)).unwrap();
        let checked = witness.as_ref().is_some_and(|m| m.check_problem(&problem) && m.eval(m.init(), &f));
        ok &= v.is_sat() && checked;
        notes.push(format!(
            "A={{{a}}}: {}, witness {}",
            v.tag(),
            witness.map_or("none".into(), |m| format!("with {} states", m.num_states()))
        ));
    }
    r.line(3, ok, notes.join("; "));
}

fn oracle_suite() -> Vec<Formula> {
    let p = BenchParams {
        n_props: 2,
        n_agents: 2,
        n_conjuncts: 2,
        modal_degree: 1,
        probability: 1.0,
        seed: 1,
    };
    (1..=200).map(|i| gen_indexed(&p, i)).collect()
}

fn criterion_4(r: &mut Report, suite: &[Formula]) {
    let bounds = Bounds::new(2, 2);
    let (mut models, mut violations) = (0, Vec::new());
    for (i, f) in suite.iter().enumerate() {
        let problem = normalize(f);
        let (v, _) = r.prove(&format!("oracle {}", i + 1), &problem, &EngineConfig::default());
        if bounded_search(&problem, &bounds).unwrap().is_some() {
            models += 1;
            if !v.is_sat() {
                violations.push(i + 1);
            }
        }
    }
    r.line(
        4,
        violations.is_empty(),
        format!("{} formulas, {models} with a bounded model, violations: {violations:?}", suite.len()),
    );
}

fn criterion_5(r: &mut Report) {
    let dir = tempfile::tempdir().unwrap();
    for l in 5..=10 {
        let p = BenchParams {
            n_props: 5,
            n_agents: 2,
            n_conjuncts: l,
            modal_degree: 1,
            probability: 1.0,
            seed: 1,
        };
        gen_suite(&p, 10, dir.path()).unwrap();
    }
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
    let config = EngineConfig {
        timeout: CAP,
        ..EngineConfig::default()
    };
    let runs = run_suite(dir.path(), &config, jobs).unwrap();
    let rows = summarize(&runs, CAP);
    print!("{}", render_table(&rows));
    let solved: usize = rows.iter().map(|s| s.solved).sum();
    let total: usize = rows.iter().map(|s| s.problems).sum();
    for run in runs.iter().filter(|run| run.outcome == coalres::bench::Outcome::Unsat) {
        let problem = coalres::bench::load_problem(&run.path).unwrap();
        r.prove(&run.path.display().to_string(), &problem, &config);
    }
    r.line(5, total == 60 && solved == 60, format!("{solved}/{total} decided within {} s each", CAP.as_secs()));
}

fn criterion_6(r: &mut Report) {
    let mut bad = Vec::new();
    let mut steps = 0;
    for (name, problem, proof) in &r.proofs {
        match (proof.replay(), proof.check_given(problem)) {
            (Ok(n), Ok(())) if n == proof.derived().count() => steps += n,
            (replay, given) => bad.push(format!("{name}: {replay:?} {given:?}")),
        }
    }
    let n = r.proofs.len();
    r.line(6, bad.is_empty() && n > 0, format!("{n} refutations, {steps} derived steps replayed; failing: {bad:?}"));
}

/// A clause drawn over props a..d and agents 1..3, kept as plain sets for the
/// reference checks.
#[derive(Debug, Clone)]
struct Plain {
    kind: SetTag,
    negative: bool,
    cond: BTreeSet<String>,
    coalition: BTreeSet<u32>,
    disj: BTreeSet<String>,
}

impl Plain {
    fn random(rng: &mut ChaCha8Rng, kind: SetTag, negative: bool) -> Plain {
        let mut lits = |max: usize| {
            let n = rng.random_range(0..=max);
            (0..n)
                .map(|_| {
                    let atom = ["a", "b", "c", "d"][rng.random_range(0..4)];
                    if rng.random_bool(0.5) {
                        format!("~{atom}")
                    } else {
                        atom.to_owned()
                    }
                })
                .collect::<BTreeSet<_>>()
        };
        let cond = if kind == SetTag::N { lits(2) } else { BTreeSet::new() };
        let disj = lits(3);
        let coalition = (1..=3).filter(|_| rng.random_bool(0.5)).collect();
        Plain {
            kind,
            negative,
            cond,
            coalition,
            disj,
        }
    }

    /// A non-tautological coalition clause whose disjunction holds `pivot`
    /// but not its complement.
    fn resolvable(rng: &mut ChaCha8Rng, negative: bool, pivot: &str) -> Plain {
        let complement = pivot.strip_prefix('~').map_or(format!("~{pivot}"), str::to_owned);
        loop {
            let mut c = Plain::random(rng, SetTag::N, negative);
            c.disj.remove(&complement);
            c.disj.insert(pivot.to_owned());
            if !c.tautology() {
                return c;
            }
        }
    }

    fn text(&self) -> String {
        let join = |s: &BTreeSet<String>, sep: &str, empty: &str| {
            if s.is_empty() {
                empty.to_owned()
            } else {
                s.iter().cloned().collect::<Vec<_>>().join(sep)
            }
        };
        match self.kind {
            SetTag::N => {
                let agents = self.coalition.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
                let (o, c) = if self.negative { ("[", "]") } else { ("<", ">") };
                format!("{} => {o}{agents}{c} {}", join(&self.cond, " & ", "true"), join(&self.disj, " | ", "false"))
            }
            _ => join(&self.disj, " | ", "false"),
        }
    }

    fn has_complement(s: &BTreeSet<String>) -> bool {
        s.iter().any(|l| s.contains(&format!("~{l}")))
    }

    fn tautology(&self) -> bool {
        Plain::has_complement(&self.disj) || Plain::has_complement(&self.cond)
    }

    /// Subsumption straight from its set-inclusion definition.
    fn subsumes(&self, other: &Plain) -> bool {
        let disj = self.disj.is_subset(&other.disj);
        match (self.kind, other.kind) {
            (SetTag::U, SetTag::I | SetTag::U) | (SetTag::I, SetTag::I) => disj,
            (SetTag::N, SetTag::N) if self.negative == other.negative => {
                // a larger coalition can force more and avoid less
                let coalition = if self.negative {
                    other.coalition.is_subset(&self.coalition)
                } else {
                    self.coalition.is_subset(&other.coalition)
                };
                disj && coalition && self.cond.is_subset(&other.cond)
            }
            _ => false,
        }
    }
}

fn body(t: &mut SymbolTable, c: &Plain) -> Option<Body> {
    parse_clause(c.kind, &c.text(), t).unwrap().simplify().into_body()
}

fn criterion_7(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut problems = Vec::new();
    let (mut pairs, mut cres1_checked, mut cres3_checked, mut subsumption_checked) = (0, 0, 0, 0);
    let agents = |b: &Body| b.coalition().unwrap().iter().map(|a| a.id()).collect::<BTreeSet<u32>>();
    for i in 0..10_000 {
        let mut t = SymbolTable::new();
        // rule side: a positive clause against a positive or negative one
        // every pair gets a complementary pair on d
        let c1 = Plain::resolvable(&mut rng, false, "d");
        let c2 = Plain::resolvable(&mut rng, i % 2 == 1, "~d");
        if let (Some(b1), Some(b2)) = (body(&mut t, &c1), body(&mut t, &c2)) {
            pairs += 1;
            for pivot in b1.disj().iter().filter(|l| b2.disj().contains(l.negate())) {
                let (a, b) = (agents(&b1), agents(&b2));
                let (rule, expected, allowed) = if c2.negative {
                    cres3_checked += 1;
                    (cres3(&b1, &b2, pivot), b.difference(&a).copied().collect::<BTreeSet<_>>(), a.is_subset(&b))
                } else {
                    cres1_checked += 1;
                    (cres1(&b1, &b2, pivot), a.union(&b).copied().collect(), a.is_disjoint(&b))
                };
                match rule {
                    Ok(Simplified::Clause(res)) if allowed && agents(&res) == expected => {}
                    Ok(Simplified::Tautology) if allowed => {}
                    Err(RuleError::SideCondition { .. }) if !allowed => {}
                    other => problems.push(format!("{} / {}: {other:?}", c1.text(), c2.text())),
                }
            }
        }
        // subsumption side: any two clauses
        let kinds = [(SetTag::I, false), (SetTag::U, false), (SetTag::N, false), (SetTag::N, true)];
        let (k1, n1) = kinds[rng.random_range(0..4)];
        let (k2, n2) = kinds[rng.random_range(0..4)];
        let (d1, d2) = (Plain::random(&mut rng, k1, n1), Plain::random(&mut rng, k2, n2));
        if d1.tautology() || d2.tautology() {
            continue;
        }
        let (Some(b1), Some(b2)) = (body(&mut t, &d1), body(&mut t, &d2)) else {
            continue;
        };
        subsumption_checked += 1;
        if subsumes(&b1, &b2) != d1.subsumes(&d2) {
            problems.push(format!("subsumes({}, {})", d1.text(), d2.text()));
        }
    }
    r.line(
        7,
        problems.is_empty() && pairs == 10_000,
        format!(
            "{pairs} resolvable pairs with {cres1_checked} cres1 and {cres3_checked} cres3 applications, {subsumption_checked} subsumption pairs; disagreements: {}",
            problems.len()
        ),
    );
    for p in problems.iter().take(5) {
        println!("  {p}");
    }
}

fn criterion_8(r: &mut Report, suite: &[Formula]) {
    let bounds = Bounds::new(2, 2);
    let mut bad = Vec::new();
    for (i, f) in suite.iter().enumerate() {
        let problem = normalize(f);
        let direct = find_model(f, &bounds).unwrap();
        let clausal = bounded_search(&problem, &bounds).unwrap();
        if direct.is_some() != clausal.is_some() {
            bad.push(format!("{}: oracles disagree", i + 1));
        }
        if clausal.as_ref().is_some_and(|m| !m.eval(m.init(), f)) {
            bad.push(format!("{}: clausal model misses the formula", i + 1));
        }
        if saturate(&problem, &EngineConfig::default()).is_unsat() && direct.is_some() {
            bad.push(format!("{}: refuted but has a model", i + 1));
        }
        if problem.len() > 4 * f.size() {
            bad.push(format!("{}: {} clauses for size {}", i + 1, problem.len(), f.size()));
        }
        let props = f.props();
        let fresh_ok = problem.symbols().symbols().all(|s| {
            let name = problem.symbols().name(s);
            props.contains(name) != name.starts_with(RENAMING_PREFIX)
        });
        if !fresh_ok {
            bad.push(format!("{}: fresh symbol clash", i + 1));
        }
    }
    r.line(8, bad.is_empty(), format!("{} formulas; problems: {bad:?}", suite.len()));
}

fn main() {
    let mut r = Report {
        results: Vec::new(),
        proofs: Vec::new(),
    };
    let suite = oracle_suite();
    criterion_1(&mut r);
    criterion_2(&mut r);
    criterion_3(&mut r);
    criterion_4(&mut r, &suite);
    criterion_5(&mut r);
    criterion_6(&mut r);
    criterion_7(&mut r);
    criterion_8(&mut r, &suite);
    let red: Vec<u32> = r.results.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
    println!("failing criteria: {red:?}, expected: {EXPECTED_RED:?}");
    if red != EXPECTED_RED {
        eprintln!("failing criteria differ from the expected set");
        std::process::exit(1);
    }
}
