//! Bounded model search.
//!
//! Two independent routes. [`for_each_cgm`] enumerates explicit models
//! (states, valuations, move counts, transition tables) and is used to
//! evaluate formulas directly. [`bounded_search`] works on coalition
//! problems: whether a state can be completed into a model depends only on
//! its valuation and the set of valuations available as successors, so it
//! searches over sets of valuations and solves each state's move table
//! locally.
//!
//! Both searches are exhaustive within their bounds and deterministic.
//! Neither can certify unsatisfiability: "no model" only means none within
//! the bounds.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use thiserror::Error;

use super::Cgm;
use crate::formula::{Coalition, Formula};
use crate::snf::{Body, CoalitionProblem, LitSet, Symbol};

/// Largest number of explicit models [`for_each_cgm`] agrees to visit.
pub const MODEL_CEILING: u128 = 20_000_000;
/// Largest number of candidate state sets [`bounded_search`] agrees to try.
pub const STATE_SET_CEILING: u128 = 5_000_000;
/// Largest number of transition tables tried for a single state.
pub const TABLE_CEILING: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub max_states: usize,
    /// Moves per agent and state.
    pub max_moves: u32,
    /// Propositions the valuations range over; for problems this counts
    /// every symbol used by a clause.
    pub max_props: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_states: 3,
            max_moves: 2,
            max_props: 16,
        }
    }
}

impl Bounds {
    pub fn new(max_states: usize, max_moves: u32) -> Self {
        Bounds {
            max_states,
            max_moves,
            ..Bounds::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("{got} propositions exceed the bound of {max}")]
    TooManyProps { got: usize, max: usize },
    #[error("search space of {space} {what} exceeds the ceiling of {ceiling}")]
    TooLarge {
        what: &'static str,
        space: u128,
        ceiling: u128,
    },
    #[error("bounds must allow at least one state and one move")]
    EmptyBounds,
}

fn check_bounds(bounds: &Bounds) -> Result<(), SearchError> {
    if bounds.max_states == 0 || bounds.max_moves == 0 {
        return Err(SearchError::EmptyBounds);
    }
    Ok(())
}

fn pow(base: u128, exp: usize) -> u128 {
    (0..exp).fold(1u128, |acc, _| acc.saturating_mul(base))
}

/// Advances a mixed-radix counter; `false` once it wraps around.
fn bump(digits: &mut [usize], radix: impl Fn(usize) -> usize) -> bool {
    for i in (0..digits.len()).rev() {
        digits[i] += 1;
        if digits[i] < radix(i) {
            return true;
        }
        digits[i] = 0;
    }
    false
}

/// Visits every model over `agents` and `props` with at most
/// `bounds.max_states` states (state 0 initial) and at most
/// `bounds.max_moves` moves per agent, in lexicographic order: state count,
/// then valuations, then move counts, then transition tables.
pub fn for_each_cgm(
    agents: &Coalition,
    props: &[String],
    bounds: &Bounds,
    mut visit: impl FnMut(&Cgm) -> ControlFlow<()>,
) -> Result<(), SearchError> {
    check_bounds(bounds)?;
    if props.len() > bounds.max_props {
        return Err(SearchError::TooManyProps {
            got: props.len(),
            max: bounds.max_props,
        });
    }
    let k = agents.len();
    let max_vectors = pow(bounds.max_moves as u128, k);
    let space: u128 = (1..=bounds.max_states)
        .map(|n| {
            let per_state = pow(2, props.len())
                .saturating_mul(pow(bounds.max_moves as u128, k))
                .saturating_mul(pow(n as u128, max_vectors.min(64) as usize));
            pow(per_state, n)
        })
        .fold(0u128, u128::saturating_add);
    if space > MODEL_CEILING {
        return Err(SearchError::TooLarge {
            what: "models",
            space,
            ceiling: MODEL_CEILING,
        });
    }
    let vals = 1usize << props.len();
    let m = bounds.max_moves as usize;
    for n in 1..=bounds.max_states {
        let mut val = vec![0usize; n];
        loop {
            let valuation: Vec<BTreeSet<String>> = val
                .iter()
                .map(|&mask| {
                    props
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, p)| p.clone())
                        .collect()
                })
                .collect();
            // move counts minus one, state-major
            let mut moves = vec![0usize; n * k];
            loop {
                let rows: Vec<Vec<u32>> = (0..n)
                    .map(|s| moves[s * k..(s + 1) * k].iter().map(|&d| d as u32 + 1).collect())
                    .collect();
                let sizes: Vec<usize> = rows.iter().map(|r| r.iter().map(|&d| d as usize).product()).collect();
                let mut delta = vec![0usize; sizes.iter().sum()];
                loop {
                    let mut table = Vec::with_capacity(n);
                    let mut at = 0;
                    for &size in &sizes {
                        table.push(delta[at..at + size].to_vec());
                        at += size;
                    }
                    let model = Cgm::new(agents, 0, rows.clone(), table, valuation.clone()).expect("enumerated models are well-formed");
                    if visit(&model).is_break() {
                        return Ok(());
                    }
                    if !bump(&mut delta, |_| n) {
                        break;
                    }
                }
                if !bump(&mut moves, |_| m) {
                    break;
                }
            }
            if !bump(&mut val, |_| vals) {
                break;
            }
        }
    }
    Ok(())
}

/// The first enumerated model whose initial state satisfies `f`. The agent
/// set is `agents_of(f)` and valuations range over the propositions of `f`.
pub fn find_model(f: &Formula, bounds: &Bounds) -> Result<Option<Cgm>, SearchError> {
    let props: Vec<String> = f.props().into_iter().collect();
    let mut found = None;
    for_each_cgm(&f.agents(), &props, bounds, |m| {
        if m.eval(0, f) {
            found = Some(m.clone());
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(found)
}

/// A literal set over the used symbols as two bit masks.
#[derive(Debug, Clone, Copy)]
struct Mask {
    pos: u64,
    neg: u64,
}

impl Mask {
    fn of(set: &LitSet, bit: &impl Fn(Symbol) -> usize) -> Mask {
        let mut m = Mask { pos: 0, neg: 0 };
        for l in set.iter() {
            let b = 1u64 << bit(l.symbol());
            if l.is_negated() {
                m.neg |= b;
            } else {
                m.pos |= b;
            }
        }
        m
    }

    fn some_true(self, v: u64) -> bool {
        v & self.pos != 0 || !v & self.neg != 0
    }

    fn all_true(self, v: u64) -> bool {
        v & self.pos == self.pos && !v & self.neg == self.neg
    }
}

struct ModalClause {
    cond: Mask,
    /// positions of the coalition's members among the problem's agents
    members: Vec<usize>,
    disj: Mask,
    positive: bool,
}

/// Moves per agent and, for every move vector, the successor as an index
/// into the candidate set.
struct LocalConfig {
    moves: Vec<u32>,
    successors: Vec<usize>,
}

struct Compiled<'a> {
    bounds: &'a Bounds,
    agents: usize,
    modal: Vec<ModalClause>,
}

impl Compiled<'_> {
    /// Whether a state valued `v` can pick moves and successors among
    /// `set` satisfying every coalition clause it triggers.
    fn realize(&self, v: u64, set: &[u64]) -> Result<Option<LocalConfig>, SearchError> {
        let triggered: Vec<&ModalClause> = self.modal.iter().filter(|c| c.cond.all_true(v)).collect();
        let k = self.agents;
        if triggered.is_empty() {
            return Ok(Some(LocalConfig {
                moves: vec![1; k],
                successors: vec![0],
            }));
        }
        // successors matter only through which disjunctions they satisfy,
        // and satisfying more is never worse
        let mut types: Vec<(u64, usize)> = Vec::new();
        for (i, &w) in set.iter().enumerate() {
            let t = triggered
                .iter()
                .enumerate()
                .filter(|(_, c)| c.disj.some_true(w))
                .fold(0u64, |acc, (j, _)| acc | 1 << j);
            if !types.iter().any(|&(u, _)| u & t == t) {
                types.retain(|&(u, _)| u & t != u);
                types.push((t, i));
            }
        }
        let m = self.bounds.max_moves as usize;
        let mut counts = vec![0usize; k];
        loop {
            let radix: Vec<usize> = counts.iter().map(|&c| c + 1).collect();
            let vectors: usize = radix.iter().product();
            let tables = pow(types.len() as u128, vectors);
            if tables > TABLE_CEILING {
                return Err(SearchError::TooLarge {
                    what: "transition tables",
                    space: tables,
                    ceiling: TABLE_CEILING,
                });
            }
            let digits: Vec<Vec<usize>> = (0..vectors)
                .map(|mut x| {
                    let mut d = vec![0; k];
                    for i in (0..k).rev() {
                        d[i] = x % radix[i];
                        x /= radix[i];
                    }
                    d
                })
                .collect();
            // per clause: the A-move group of every vector
            let groups: Vec<(Vec<usize>, usize)> = triggered
                .iter()
                .map(|c| {
                    let mut keys: Vec<Vec<usize>> = digits.iter().map(|d| c.members.iter().map(|&i| d[i]).collect()).collect();
                    let mut distinct = keys.clone();
                    distinct.sort();
                    distinct.dedup();
                    let ids = keys.drain(..).map(|key| distinct.binary_search(&key).expect("present")).collect();
                    (ids, distinct.len())
                })
                .collect();
            let mut assign = vec![0usize; vectors];
            loop {
                let ok = triggered.iter().enumerate().all(|(j, c)| {
                    let (ids, n_groups) = &groups[j];
                    let mut all = vec![true; *n_groups];
                    let mut some = vec![false; *n_groups];
                    for (x, &g) in ids.iter().enumerate() {
                        let hit = types[assign[x]].0 >> j & 1 == 1;
                        all[g] &= hit;
                        some[g] |= hit;
                    }
                    if c.positive {
                        all.iter().any(|&b| b)
                    } else {
                        some.iter().all(|&b| b)
                    }
                });
                if ok {
                    return Ok(Some(LocalConfig {
                        moves: radix.iter().map(|&r| r as u32).collect(),
                        successors: assign.iter().map(|&a| types[a].1).collect(),
                    }));
                }
                if !bump(&mut assign, |_| types.len()) {
                    break;
                }
            }
            if !bump(&mut counts, |_| m) {
                return Ok(None);
            }
        }
    }
}

fn combinations(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    (0..r).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

/// Searches for a model of `problem` over exactly its agents, with at most
/// `bounds.max_states` states and `bounds.max_moves` moves per agent.
///
/// Candidate state sets are tried by size, then lexicographically by
/// valuation (the initial state first); the first one whose states can all
/// be completed wins.
pub fn bounded_search(problem: &CoalitionProblem, bounds: &Bounds) -> Result<Option<Cgm>, SearchError> {
    check_bounds(bounds)?;
    let used = problem.used_symbols();
    if used.len() > bounds.max_props.min(63) {
        return Err(SearchError::TooManyProps {
            got: used.len(),
            max: bounds.max_props.min(63),
        });
    }
    let mut bit_of = vec![usize::MAX; problem.symbols().len()];
    for (i, s) in used.iter().enumerate() {
        bit_of[s.index()] = i;
    }
    let bit = |s: Symbol| bit_of[s.index()];
    let sigma = problem.sigma();
    let agent_list: Vec<_> = sigma.iter().collect();
    let mut initial = Vec::new();
    let mut global = Vec::new();
    let mut modal = Vec::new();
    for c in problem.clauses() {
        match &c.body {
            Body::Initial(d) => initial.push(Mask::of(d, &bit)),
            Body::Global(d) => global.push(Mask::of(d, &bit)),
            Body::Positive { cond, coalition, disj } | Body::Negative { cond, coalition, disj } => modal.push(ModalClause {
                cond: Mask::of(cond, &bit),
                members: coalition
                    .iter()
                    .map(|a| agent_list.binary_search(&a).expect("sigma covers every coalition"))
                    .collect(),
                disj: Mask::of(disj, &bit),
                positive: matches!(c.body, Body::Positive { .. }),
            }),
        }
    }
    let compiled = Compiled {
        bounds,
        agents: agent_list.len(),
        modal,
    };

    let valid: Vec<u64> = (0..1u64 << used.len())
        .filter(|&v| global.iter().all(|d| d.some_true(v)))
        .collect();
    // greatest set of valuations all of whose members can be completed
    let mut pool = valid;
    loop {
        let mut keep = Vec::with_capacity(pool.len());
        for &v in &pool {
            if compiled.realize(v, &pool)?.is_some() {
                keep.push(v);
            }
        }
        if keep.len() == pool.len() {
            break;
        }
        pool = keep;
    }
    let starts: Vec<usize> = (0..pool.len())
        .filter(|&i| initial.iter().all(|d| d.some_true(pool[i])))
        .collect();
    if starts.is_empty() {
        return Ok(None);
    }
    let space: u128 = (1..=bounds.max_states)
        .map(|n| (starts.len() as u128).saturating_mul(combinations(pool.len() - 1, n - 1)))
        .fold(0, u128::saturating_add);
    if space > STATE_SET_CEILING {
        return Err(SearchError::TooLarge {
            what: "state sets",
            space,
            ceiling: STATE_SET_CEILING,
        });
    }
    for n in 1..=bounds.max_states.min(pool.len()) {
        for &s0 in &starts {
            let others: Vec<usize> = (0..pool.len()).filter(|&i| i != s0).collect();
            let mut pick: Vec<usize> = (0..n - 1).collect();
            loop {
                let set: Vec<u64> = std::iter::once(pool[s0]).chain(pick.iter().map(|&i| pool[others[i]])).collect();
                let mut configs = Vec::with_capacity(n);
                for &v in &set {
                    match compiled.realize(v, &set)? {
                        Some(c) => configs.push(c),
                        None => break,
                    }
                }
                if configs.len() == n {
                    return Ok(Some(build(problem, &used, sigma, &set, configs)));
                }
                if !next_combination(&mut pick, others.len()) {
                    break;
                }
            }
        }
    }
    Ok(None)
}

fn next_combination(pick: &mut [usize], n: usize) -> bool {
    let r = pick.len();
    for i in (0..r).rev() {
        if pick[i] < n - r + i {
            pick[i] += 1;
            for j in i + 1..r {
                pick[j] = pick[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn build(problem: &CoalitionProblem, used: &[Symbol], sigma: &Coalition, set: &[u64], configs: Vec<LocalConfig>) -> Cgm {
    let valuation = set
        .iter()
        .map(|&v| {
            used.iter()
                .enumerate()
                .filter(|(i, _)| v >> i & 1 == 1)
                .map(|(_, &s)| problem.symbols().name(s).to_owned())
                .collect()
        })
        .collect();
    let (moves, delta) = configs.into_iter().map(|c| (c.moves, c.successors)).unzip();
    Cgm::new(sigma, 0, moves, delta, valuation).expect("search builds well-formed models")
}
