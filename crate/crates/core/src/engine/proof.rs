//! Derivations, proof extraction, the trace format and proof replay.
//!
//! A trace lists one clause per line:
//!
//! ```text
//! agents: 1,2
//! 1. t0  (I, given)
//! 15. ~t0 | t4  (U, gres1, 3, 4, pivot=t1)
//! 16. t4 & tog1 & ~l => <1> false  (N, cres1, 5, 14, pivot=l)
//! ```

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write;

use thiserror::Error;

use super::rules::{apply, RuleError};
use crate::formula::{Coalition, ParseError};
use crate::snf::text::parse_agent_list;
use crate::snf::{parse_clause, Body, Clause, ClauseId, CoalitionProblem, Justification, Rule, SetTag, Simplified, SymbolTable};

/// The clauses of one saturation run in the order they were stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub origin: String,
    pub symbols: SymbolTable,
    pub sigma: Coalition,
    pub steps: Vec<Clause>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofError {
    #[error("the verdict carries no refutation")]
    NotUnsatisfiable,
    #[error("clause {0} is not part of the derivation")]
    MissingClause(ClauseId),
    #[error("clause {0} is not a contradiction")]
    NotContradiction(ClauseId),
    #[error("clause {clause} cites premise {premise}, which does not precede it")]
    BadPremise { clause: ClauseId, premise: ClauseId },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("clause {clause}: premise {premise} does not precede it")]
    BadPremise { clause: ClauseId, premise: ClauseId },
    #[error("clause {clause}: {source}")]
    Rule { clause: ClauseId, source: RuleError },
    #[error("clause {clause}: the rule yields {got}")]
    Mismatch { clause: ClauseId, got: String },
    #[error("clause {0}: given clause does not occur in the problem")]
    UnknownGiven(ClauseId),
}

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("line {line}: {source}")]
    Clause { line: usize, source: ParseError },
}

impl Derivation {
    pub fn new(origin: impl Into<String>, symbols: SymbolTable, sigma: Coalition) -> Self {
        Derivation {
            origin: origin.into(),
            symbols,
            sigma,
            steps: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn get(&self, id: ClauseId) -> Option<&Clause> {
        // ids are increasing, though not necessarily dense
        self.steps
            .binary_search_by_key(&id, |c| c.id)
            .ok()
            .map(|i| &self.steps[i])
    }

    pub fn derived(&self) -> impl Iterator<Item = &Clause> {
        self.steps.iter().filter(|c| c.justification != Justification::Given)
    }

    /// The clauses reachable backwards from `goal` through premise ids, in
    /// derivation order.
    pub fn extract(&self, goal: ClauseId) -> Result<Derivation, ProofError> {
        let mut keep = BTreeSet::new();
        let mut todo = vec![goal];
        while let Some(id) = todo.pop() {
            if !keep.insert(id) {
                continue;
            }
            let clause = self.get(id).ok_or(ProofError::MissingClause(id))?;
            if let Justification::Derived { premises, .. } = &clause.justification {
                for &p in premises {
                    if p >= id {
                        return Err(ProofError::BadPremise { clause: id, premise: p });
                    }
                    todo.push(p);
                }
            }
        }
        Ok(Derivation {
            origin: self.origin.clone(),
            symbols: self.symbols.clone(),
            sigma: self.sigma.clone(),
            steps: keep.into_iter().map(|id| self.get(id).expect("checked").clone()).collect(),
        })
    }

    /// Extraction from a contradiction, see [`Derivation::extract`].
    pub fn refutation(&self, goal: ClauseId) -> Result<Derivation, ProofError> {
        let clause = self.get(goal).ok_or(ProofError::MissingClause(goal))?;
        if !clause.body.is_contradiction() {
            return Err(ProofError::NotContradiction(goal));
        }
        self.extract(goal)
    }

    pub fn render_step(&self, c: &Clause) -> String {
        let mut line = format!("{}. {}  ({}, ", c.id, c.body.display(&self.symbols), c.kind().set_tag());
        match &c.justification {
            Justification::Given => line.push_str("given"),
            Justification::Derived { rule, premises, pivot } => {
                line.push_str(rule.name());
                for p in premises {
                    let _ = write!(line, ", {p}");
                }
                if let Some(l) = pivot {
                    let _ = write!(line, ", pivot={}", l.display(&self.symbols));
                }
            }
        }
        line.push(')');
        line
    }

    /// The trace text: an `agents:` header when the agent universe is not
    /// empty, then one line per step.
    pub fn trace(&self) -> String {
        let mut out = String::new();
        if !self.sigma.is_empty() {
            let _ = writeln!(out, "agents: {}", self.sigma);
        }
        for c in &self.steps {
            out.push_str(&self.render_step(c));
            out.push('\n');
        }
        out
    }

    /// Checks every derived step by applying its rule to its premises.
    pub fn replay(&self) -> Result<usize, ReplayError> {
        let mut replayed = 0;
        for c in &self.steps {
            let Justification::Derived { rule, premises, pivot } = &c.justification else {
                continue;
            };
            let mut bodies = Vec::with_capacity(premises.len());
            for &p in premises {
                match self.get(p) {
                    Some(pc) if p < c.id => bodies.push(&pc.body),
                    _ => return Err(ReplayError::BadPremise { clause: c.id, premise: p }),
                }
            }
            let got = apply(*rule, &bodies, *pivot, &self.sigma).map_err(|source| ReplayError::Rule { clause: c.id, source })?;
            match got {
                Simplified::Clause(b) if b == c.body => replayed += 1,
                Simplified::Clause(b) => {
                    return Err(ReplayError::Mismatch {
                        clause: c.id,
                        got: b.display(&self.symbols).to_string(),
                    })
                }
                Simplified::Tautology => {
                    return Err(ReplayError::Mismatch {
                        clause: c.id,
                        got: "a tautology".into(),
                    })
                }
            }
        }
        Ok(replayed)
    }

    /// Checks that every given step occurs in `problem`. The symbol tables
    /// may differ.
    pub fn check_given(&self, problem: &CoalitionProblem) -> Result<(), ReplayError> {
        let inputs: BTreeSet<String> = problem
            .clauses()
            .iter()
            .map(|c| c.body.canonical(problem.symbols()))
            .collect();
        for c in &self.steps {
            if c.justification == Justification::Given && !inputs.contains(&c.body.canonical(&self.symbols)) {
                return Err(ReplayError::UnknownGiven(c.id));
            }
        }
        Ok(())
    }

    /// Canonical forms of the derived steps, sorted; equal for proofs that
    /// derive the same clauses in any order and numbering.
    pub fn derived_bodies(&self) -> Vec<String> {
        let mut v: Vec<String> = self.derived().map(|c| c.body.canonical(&self.symbols)).collect();
        v.sort();
        v
    }
}

/// Reads a trace back into a derivation.
pub fn parse_trace(origin: &str, text: &str) -> Result<Derivation, TraceError> {
    let mut d = Derivation::new(origin, SymbolTable::new(), Coalition::empty());
    let fail = |line: usize, message: String| TraceError::Format { line, message };
    let mut seen: HashMap<ClauseId, ()> = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("agents:") {
            d.sigma = parse_agent_list(rest).map_err(|m| fail(line_no, m))?;
            continue;
        }
        let (id, rest) = line.split_once('.').ok_or_else(|| fail(line_no, "missing clause id".into()))?;
        let id = ClauseId(id.trim().parse().map_err(|_| fail(line_no, format!("bad clause id `{id}`")))?);
        let open = rest.rfind('(').ok_or_else(|| fail(line_no, "missing justification".into()))?;
        let just = rest[open + 1..]
            .trim_end()
            .strip_suffix(')')
            .ok_or_else(|| fail(line_no, "unterminated justification".into()))?;
        let mut fields = just.split(',').map(str::trim);
        let tag = match fields.next() {
            Some("I") => SetTag::I,
            Some("U") => SetTag::U,
            Some("N") => SetTag::N,
            other => return Err(fail(line_no, format!("bad set tag `{}`", other.unwrap_or("")))),
        };
        let raw_clause = parse_clause(tag, rest[..open].trim(), &mut d.symbols).map_err(|source| TraceError::Clause { line: line_no, source })?;
        let body: Body = raw_clause
            .simplify()
            .into_body()
            .ok_or_else(|| fail(line_no, "tautologous clause".into()))?;
        let rule_name = fields.next().ok_or_else(|| fail(line_no, "missing rule".into()))?;
        let justification = if rule_name == "given" {
            Justification::Given
        } else {
            let rule: Rule = rule_name.parse().map_err(|m| fail(line_no, m))?;
            let mut premises = Vec::new();
            let mut pivot = None;
            for f in fields {
                if let Some(p) = f.strip_prefix("pivot=") {
                    pivot = Some(d.symbols.lit(p));
                } else {
                    let n = f.parse().map_err(|_| fail(line_no, format!("bad premise `{f}`")))?;
                    premises.push(ClauseId(n));
                }
            }
            Justification::Derived { rule, premises, pivot }
        };
        if d.steps.last().is_some_and(|c| c.id >= id) || seen.insert(id, ()).is_some() {
            return Err(fail(line_no, format!("clause id {id} out of order")));
        }
        d.steps.push(Clause { id, body, justification });
    }
    Ok(d)
}
