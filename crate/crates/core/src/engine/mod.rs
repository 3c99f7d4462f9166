//! Saturation of coalition problems under the resolution rules.
//!
//! The loop keeps a set `S` of processed clauses and a FIFO queue `N` of
//! unprocessed ones. Each round moves the oldest clause of `N` into `S`,
//! resolves it against every clause of `S` on every complementary pair,
//! simplifies the resolvents, discards tautologies and clauses subsumed by
//! anything stored so far, and queues the rest. Unary rewrites (`rw1`,
//! `rw2`, and `sigma` when enabled) are applied to every queued clause as
//! soon as it is stored, including input clauses. Deriving `false` as an
//! initial or global clause ends the run.
//!
//! With backward subsumption on, storing a clause also retires every stored
//! clause it subsumes. Retired clauses stay in the store so that proofs can
//! cite them, but they are no longer given or used as partners.

mod proof;
pub mod rules;
mod subsume;

use std::collections::VecDeque;
use std::fmt;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use proof::{parse_trace, Derivation, ProofError, ReplayError, TraceError};
pub use rules::RuleError;
pub use subsume::{subsumes, SubsumptionIndex};

use crate::formula::Coalition;
use crate::snf::{Body, Clause, ClauseId, ClauseKind, CoalitionProblem, Justification, Lit, Rule, Simplified};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngineConfig {
    pub timeout: Duration,
    pub sigma_rule: bool,
    /// 0 keeps plain FIFO order; any other value shuffles every batch of
    /// new clauses before it is queued.
    pub seed: u64,
    pub max_clauses: Option<usize>,
    /// Also remove stored clauses that a new clause subsumes.
    pub backward_subsumption: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            timeout: Duration::from_secs(100),
            sigma_rule: true,
            seed: 0,
            max_clauses: None,
            backward_subsumption: true,
        }
    }
}

/// Which limit stopped a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Limit {
    Time,
    Clauses,
}

impl fmt::Display for Limit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Limit::Time => "time",
            Limit::Clauses => "clauses",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Stats {
    pub input: usize,
    pub given: usize,
    pub generated: usize,
    pub derived: usize,
    pub subsumed: usize,
    /// stored clauses removed by later, stronger ones
    pub removed: usize,
    pub tautologies: usize,
    pub elapsed: Duration,
}

#[derive(Debug, Clone)]
pub enum Verdict {
    Unsatisfiable {
        derivation: Derivation,
        refutation: ClauseId,
    },
    Satisfiable {
        saturated: CoalitionProblem,
        derivation: Derivation,
    },
    Timeout {
        partial: Derivation,
        limit: Limit,
    },
}

impl Verdict {
    pub fn tag(&self) -> &'static str {
        match self {
            Verdict::Unsatisfiable { .. } => "UNSAT",
            Verdict::Satisfiable { .. } => "SAT",
            Verdict::Timeout { .. } => "TIMEOUT",
        }
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, Verdict::Unsatisfiable { .. })
    }

    pub fn is_sat(&self) -> bool {
        matches!(self, Verdict::Satisfiable { .. })
    }

    pub fn derivation(&self) -> &Derivation {
        match self {
            Verdict::Unsatisfiable { derivation, .. } | Verdict::Satisfiable { derivation, .. } => derivation,
            Verdict::Timeout { partial, .. } => partial,
        }
    }

    pub fn proof(&self) -> Result<Derivation, ProofError> {
        extract_proof(self)
    }
}

/// The part of an unsatisfiable verdict's derivation the contradiction
/// depends on.
pub fn extract_proof(v: &Verdict) -> Result<Derivation, ProofError> {
    match v {
        Verdict::Unsatisfiable { derivation, refutation } => derivation.refutation(*refutation),
        _ => Err(ProofError::NotUnsatisfiable),
    }
}

pub fn saturate(problem: &CoalitionProblem, config: &EngineConfig) -> Verdict {
    saturate_with_stats(problem, config).0
}

enum Stop {
    Refuted(ClauseId),
    Limit(Limit),
}

struct Candidate {
    rule: Rule,
    premises: Vec<ClauseId>,
    pivot: Option<Lit>,
    result: Simplified,
}

struct Prover<'a> {
    config: &'a EngineConfig,
    sigma: Coalition,
    store: Vec<Clause>,
    index: SubsumptionIndex,
    /// processed clauses by the literals of their disjunction
    occurs: Vec<Vec<ClauseId>>,
    queue: VecDeque<ClauseId>,
    /// clauses removed by backward subsumption, by id
    dead: Vec<bool>,
    rng: Option<ChaCha8Rng>,
    stats: Stats,
    start: Instant,
}

impl Prover<'_> {
    fn clause(&self, id: ClauseId) -> &Clause {
        &self.store[id.0 as usize - 1]
    }

    fn check_limits(&self) -> Result<(), Stop> {
        if self.config.max_clauses.is_some_and(|m| self.store.len() > m) {
            return Err(Stop::Limit(Limit::Clauses));
        }
        if self.start.elapsed() > self.config.timeout {
            return Err(Stop::Limit(Limit::Time));
        }
        Ok(())
    }

    fn is_dead(&self, id: ClauseId) -> bool {
        self.dead[id.0 as usize - 1]
    }

    fn store_clause(&mut self, body: Body, justification: Justification) -> ClauseId {
        let id = ClauseId(self.store.len() as u32 + 1);
        self.index.insert(id, &body);
        self.store.push(Clause { id, body, justification });
        self.queue.push_back(id);
        self.dead.push(false);
        id
    }

    fn rewrites(&self, id: ClauseId) -> Vec<Candidate> {
        let body = &self.clause(id).body;
        let mut out = Vec::new();
        let mut unary = |rule: Rule, result: Result<Simplified, RuleError>| {
            if let Ok(result) = result {
                out.push(Candidate {
                    rule,
                    premises: vec![id],
                    pivot: None,
                    result,
                });
            }
        };
        match body.kind() {
            ClauseKind::Positive => unary(Rule::Rw1, rules::rw1(body)),
            ClauseKind::Negative => {
                unary(Rule::Rw2, rules::rw2(body));
                if self.config.sigma_rule {
                    unary(Rule::Sigma, rules::sigma_lift(body, &self.sigma));
                }
            }
            _ => {}
        }
        out
    }

    /// Simplified, subsumption-checked insertion of a derived clause,
    /// followed by its unary rewrites.
    fn offer(&mut self, c: Candidate) -> Result<(), Stop> {
        self.stats.generated += 1;
        let Simplified::Clause(body) = c.result else {
            self.stats.tautologies += 1;
            return Ok(());
        };
        let store = &self.store;
        if self.index.find_subsumer(&body, |id| &store[id.0 as usize - 1].body).is_some() {
            self.stats.subsumed += 1;
            return Ok(());
        }
        let refuted = body.is_contradiction();
        let id = self.store_clause(
            body,
            Justification::Derived {
                rule: c.rule,
                premises: c.premises,
                pivot: c.pivot,
            },
        );
        self.stats.derived += 1;
        if refuted {
            return Err(Stop::Refuted(id));
        }
        if self.config.backward_subsumption {
            let store = &self.store;
            let body = &store[id.0 as usize - 1].body;
            for v in self.index.subsumed_by(body, |id| &store[id.0 as usize - 1].body) {
                if v != id {
                    self.index.remove(v);
                    self.dead[v.0 as usize - 1] = true;
                    self.stats.removed += 1;
                }
            }
        }
        self.check_limits()?;
        for r in self.rewrites(id) {
            self.offer(r)?;
        }
        Ok(())
    }

    fn offer_all(&mut self, mut batch: Vec<Candidate>) -> Result<(), Stop> {
        if let Some(rng) = self.rng.as_mut() {
            batch.shuffle(rng);
        }
        for c in batch {
            self.offer(c)?;
        }
        Ok(())
    }

    /// All resolvents between `g` and the processed clauses.
    fn resolvents(&self, g: ClauseId) -> Vec<Candidate> {
        use ClauseKind::*;
        let gc = self.clause(g);
        let mut out = Vec::new();
        for l in gc.body.disj().iter() {
            for &p in &self.occurs[l.negate().code()] {
                if self.is_dead(p) {
                    continue;
                }
                let pc = self.clause(p);
                // (first premise, second premise, pivot in the first)
                let (rule, first, second, pivot) = match (gc.kind(), pc.kind()) {
                    (Initial, Initial) | (Global, Global) | (Positive, Positive) => {
                        let rule = match gc.kind() {
                            Initial => Rule::Ires1,
                            Global => Rule::Gres1,
                            _ => Rule::Cres1,
                        };
                        if p < g {
                            (rule, p, g, l.negate())
                        } else {
                            (rule, g, p, l)
                        }
                    }
                    (Initial, Global) => (Rule::Ires1, g, p, l),
                    (Global, Initial) => (Rule::Ires1, p, g, l.negate()),
                    (Global, Positive) => (Rule::Cres2, g, p, l),
                    (Positive, Global) => (Rule::Cres2, p, g, l.negate()),
                    (Positive, Negative) => (Rule::Cres3, g, p, l),
                    (Negative, Positive) => (Rule::Cres3, p, g, l.negate()),
                    (Global, Negative) => (Rule::Cres4, g, p, l),
                    (Negative, Global) => (Rule::Cres4, p, g, l.negate()),
                    _ => continue,
                };
                let (b1, b2) = (&self.clause(first).body, &self.clause(second).body);
                let result = match rules::apply(rule, &[b1, b2], Some(pivot), &self.sigma) {
                    Ok(r) => r,
                    Err(RuleError::SideCondition { .. }) => continue,
                    Err(e) => unreachable!("dispatch produced an ill-formed application: {e}"),
                };
                out.push(Candidate {
                    rule,
                    premises: vec![first, second],
                    pivot: Some(pivot),
                    result,
                });
            }
        }
        out
    }

    fn run(&mut self, problem: &CoalitionProblem) -> Result<(), Stop> {
        for c in problem.clauses() {
            let id = self.store_clause(c.body.clone(), Justification::Given);
            if c.body.is_contradiction() {
                return Err(Stop::Refuted(id));
            }
        }
        self.stats.input = self.store.len();
        if let Some(rng) = self.rng.as_mut() {
            self.queue.make_contiguous().shuffle(rng);
        }
        for i in 0..self.stats.input {
            let batch = self.rewrites(ClauseId(i as u32 + 1));
            self.offer_all(batch)?;
        }
        while let Some(g) = self.queue.pop_front() {
            if self.is_dead(g) {
                continue;
            }
            self.check_limits()?;
            self.stats.given += 1;
            let lits: Vec<Lit> = self.clause(g).body.disj().iter().collect();
            for l in lits {
                self.occurs[l.code()].push(g);
            }
            let batch = self.resolvents(g);
            self.offer_all(batch)?;
        }
        Ok(())
    }

    fn derivation(&self, problem: &CoalitionProblem) -> Derivation {
        Derivation {
            origin: problem.name.clone(),
            symbols: problem.symbols().clone(),
            sigma: self.sigma.clone(),
            steps: self.store.clone(),
        }
    }
}

/// Runs the saturation loop and reports counters alongside the verdict.
pub fn saturate_with_stats(problem: &CoalitionProblem, config: &EngineConfig) -> (Verdict, Stats) {
    let mut prover = Prover {
        config,
        sigma: problem.sigma().clone(),
        store: Vec::with_capacity(problem.len()),
        index: SubsumptionIndex::new(),
        occurs: vec![Vec::new(); 2 * problem.symbols().len()],
        queue: VecDeque::new(),
        dead: Vec::new(),
        rng: (config.seed != 0).then(|| ChaCha8Rng::seed_from_u64(config.seed)),
        stats: Stats::default(),
        start: Instant::now(),
    };
    let outcome = prover.run(problem);
    prover.stats.elapsed = prover.start.elapsed();
    let derivation = prover.derivation(problem);
    let verdict = match outcome {
        Err(Stop::Refuted(refutation)) => Verdict::Unsatisfiable { derivation, refutation },
        Err(Stop::Limit(limit)) => Verdict::Timeout {
            partial: derivation,
            limit,
        },
        Ok(()) => Verdict::Satisfiable {
            saturated: CoalitionProblem::from_clauses(
                problem.name.clone(),
                problem.symbols().clone(),
                prover.sigma.clone(),
                prover.store.clone(),
            ),
            derivation,
        },
    };
    (verdict, prover.stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::snf::{normalize, SetTag};

    fn problem(lines: &[(SetTag, &str)]) -> CoalitionProblem {
        let mut p = CoalitionProblem::new("t");
        for &(s, t) in lines {
            p.add(s, t);
        }
        p
    }

    #[test]
    fn trivial_verdicts() {
        let cfg = EngineConfig::default();
        assert!(saturate(&problem(&[(SetTag::I, "p")]), &cfg).is_sat());
        let v = saturate(&problem(&[(SetTag::I, "p"), (SetTag::U, "~p")]), &cfg);
        let proof = v.proof().unwrap();
        assert_eq!(proof.len(), 3);
        assert_eq!(proof.replay(), Ok(1));
        assert_eq!(extract_proof(&saturate(&problem(&[]), &cfg)), Err(ProofError::NotUnsatisfiable));
    }

    #[test]
    fn modal_contradiction_needs_cres3_and_rw2() {
        let f = crate::formula::parse("<1> p & [1] ~p").unwrap();
        let v = saturate(&normalize(&f), &EngineConfig::default());
        let proof = v.proof().unwrap();
        let rules: Vec<Rule> = proof
            .derived()
            .map(|c| match &c.justification {
                Justification::Derived { rule, .. } => *rule,
                Justification::Given => unreachable!(),
            })
            .collect();
        assert!(rules.contains(&Rule::Cres3) && rules.contains(&Rule::Rw2), "{rules:?}");
        assert_eq!(proof.replay().unwrap(), rules.len());
    }

    #[test]
    fn sigma_rule_toggle() {
        let f = crate::formula::parse("[] p & [1,2] ~p").unwrap();
        let p = normalize(&f);
        assert!(saturate(&p, &EngineConfig::default()).is_unsat());
        let off = EngineConfig {
            sigma_rule: false,
            ..EngineConfig::default()
        };
        assert!(saturate(&p, &off).is_sat());
    }

    #[test]
    fn limits_are_reported() {
        let f = crate::formula::parse("<1> p & [1] ~p").unwrap();
        let cfg = EngineConfig {
            max_clauses: Some(3),
            ..EngineConfig::default()
        };
        match saturate(&normalize(&f), &cfg) {
            Verdict::Timeout { limit, .. } => assert_eq!(limit, Limit::Clauses),
            v => panic!("{}", v.tag()),
        }
    }

    #[test]
    fn seeded_runs_are_reproducible() {
        let f = crate::formula::parse("(<1> p | <2> q) & [1,2] ~p & [1,2] (~q | r) & <> ~r").unwrap();
        let p = normalize(&f);
        for seed in [0, 1, 99] {
            let cfg = EngineConfig {
                seed,
                ..EngineConfig::default()
            };
            let a = saturate(&p, &cfg).derivation().trace();
            let b = saturate(&p, &cfg).derivation().trace();
            assert_eq!(a, b);
        }
    }
}
