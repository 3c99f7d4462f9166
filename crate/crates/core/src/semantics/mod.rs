//! Concurrent game models and the satisfaction relation.
//!
//! A model fixes a finite set of agents, a set of states with a designated
//! initial state, the number of moves `d(a, s) >= 1` each agent has at each
//! state, a total transition function from move vectors to states, and a
//! valuation. Move vectors list one move per agent in ascending agent order.
//!
//! A model over the empty agent set has exactly one (empty) move vector per
//! state, which is how problems without agents are evaluated.

mod search;
mod text;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

pub use search::{bounded_search, find_model, for_each_cgm, Bounds, SearchError};
pub use text::ModelFileError;

use crate::formula::{Agent, Coalition, Formula};
use crate::snf::{Body, CoalitionProblem, SymbolTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("a model needs at least one state")]
    NoStates,
    #[error("initial state {0} is out of range")]
    BadInitial(usize),
    #[error("state {0} is out of range")]
    StateOutOfRange(usize),
    #[error("agent {agent} has no moves at state {state}")]
    NoMoves { agent: Agent, state: usize },
    #[error("state {state}: transition table has {got} entries, expected {expected}")]
    DeltaSize { state: usize, got: usize, expected: usize },
    #[error("state {state}: transition leads to unknown state {target}")]
    BadTarget { state: usize, target: usize },
    #[error("agent {0} is not part of the model")]
    UnknownAgent(Agent),
    #[error("move {choice} of agent {agent} is not available at state {state}")]
    BadMove { agent: Agent, state: usize, choice: u32 },
    #[error("table sizes do not match the number of states")]
    Shape,
}

/// An explicit concurrent game model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cgm {
    agents: Vec<Agent>,
    init: usize,
    /// `moves[s][i]`: number of moves of the `i`-th agent at `s`
    moves: Vec<Vec<u32>>,
    /// `delta[s][v]`: successor for the move vector with mixed-radix index
    /// `v`, the first agent being the most significant digit
    delta: Vec<Vec<usize>>,
    valuation: Vec<BTreeSet<String>>,
}

impl Cgm {
    pub fn new(
        agents: &Coalition,
        init: usize,
        moves: Vec<Vec<u32>>,
        delta: Vec<Vec<usize>>,
        valuation: Vec<BTreeSet<String>>,
    ) -> Result<Cgm, ModelError> {
        let n = valuation.len();
        if n == 0 {
            return Err(ModelError::NoStates);
        }
        if init >= n {
            return Err(ModelError::BadInitial(init));
        }
        if moves.len() != n || delta.len() != n {
            return Err(ModelError::Shape);
        }
        let agents: Vec<Agent> = agents.iter().collect();
        for (s, row) in moves.iter().enumerate() {
            if row.len() != agents.len() {
                return Err(ModelError::Shape);
            }
            if let Some(i) = row.iter().position(|&k| k == 0) {
                return Err(ModelError::NoMoves { agent: agents[i], state: s });
            }
            let expected: usize = row.iter().map(|&k| k as usize).product();
            if delta[s].len() != expected {
                return Err(ModelError::DeltaSize {
                    state: s,
                    got: delta[s].len(),
                    expected,
                });
            }
            if let Some(&target) = delta[s].iter().find(|&&t| t >= n) {
                return Err(ModelError::BadTarget { state: s, target });
            }
        }
        Ok(Cgm {
            agents,
            init,
            moves,
            delta,
            valuation,
        })
    }

    /// The one-state model where every agent has a single move.
    pub fn single_state(agents: &Coalition, props: impl IntoIterator<Item = String>) -> Cgm {
        let k = agents.len();
        Cgm::new(agents, 0, vec![vec![1; k]], vec![vec![0]], vec![props.into_iter().collect()]).expect("well-formed")
    }

    pub fn agents(&self) -> Coalition {
        self.agents.iter().copied().collect()
    }

    pub fn num_states(&self) -> usize {
        self.valuation.len()
    }

    pub fn init(&self) -> usize {
        self.init
    }

    pub fn valuation(&self, s: usize) -> &BTreeSet<String> {
        &self.valuation[s]
    }

    fn agent_index(&self, a: Agent) -> Option<usize> {
        self.agents.binary_search(&a).ok()
    }

    /// `d(a, s)`.
    pub fn moves(&self, a: Agent, s: usize) -> Result<u32, ModelError> {
        let i = self.agent_index(a).ok_or(ModelError::UnknownAgent(a))?;
        self.moves.get(s).map(|row| row[i]).ok_or(ModelError::StateOutOfRange(s))
    }

    /// All move vectors at `s` with their successors, in index order.
    pub fn transitions(&self, s: usize) -> impl Iterator<Item = (Vec<u32>, usize)> + '_ {
        let radix = &self.moves[s];
        self.delta[s].iter().enumerate().map(move |(mut v, &t)| {
            let mut digits = vec![0; radix.len()];
            for i in (0..radix.len()).rev() {
                digits[i] = (v % radix[i] as usize) as u32;
                v /= radix[i] as usize;
            }
            (digits, t)
        })
    }

    pub fn successor(&self, s: usize, vector: &[u32]) -> Option<usize> {
        let radix = self.moves.get(s)?;
        if vector.len() != radix.len() {
            return None;
        }
        let mut v = 0usize;
        for (&m, &k) in vector.iter().zip(radix) {
            if m >= k {
                return None;
            }
            v = v * k as usize + m as usize;
        }
        Some(self.delta[s][v])
    }

    /// States reachable at `s` by move vectors that extend `mv`.
    pub fn outcomes(&self, s: usize, mv: &AMove) -> Result<BTreeSet<usize>, ModelError> {
        if s >= self.num_states() {
            return Err(ModelError::StateOutOfRange(s));
        }
        let mut fixed = Vec::new();
        for (&a, &choice) in &mv.choice {
            let i = self.agent_index(a).ok_or(ModelError::UnknownAgent(a))?;
            if choice >= self.moves[s][i] {
                return Err(ModelError::BadMove { agent: a, state: s, choice });
            }
            fixed.push((i, choice));
        }
        Ok(self
            .transitions(s)
            .filter(|(v, _)| fixed.iter().all(|&(i, c)| v[i] == c))
            .map(|(_, t)| t)
            .collect())
    }

    /// Positions of the members of `coalition` in a move vector.
    fn positions(&self, coalition: &Coalition) -> Vec<usize> {
        coalition
            .iter()
            .map(|a| {
                self.agent_index(a)
                    .unwrap_or_else(|| panic!("agent {a} is not part of the model"))
            })
            .collect()
    }

    /// For every A-move at `s`: whether all, and whether some, of its
    /// outcomes lie in `target`.
    fn amove_summary(&self, s: usize, positions: &[usize], target: &[bool]) -> Vec<(bool, bool)> {
        let mut groups: HashMap<Vec<u32>, (bool, bool)> = HashMap::new();
        for (v, t) in self.transitions(s) {
            let key: Vec<u32> = positions.iter().map(|&i| v[i]).collect();
            let e = groups.entry(key).or_insert((true, false));
            e.0 &= target[t];
            e.1 |= target[t];
        }
        groups.into_values().collect()
    }

    fn can_force(&self, s: usize, positions: &[usize], target: &[bool]) -> bool {
        self.amove_summary(s, positions, target).iter().any(|&(all, _)| all)
    }

    fn cannot_avoid(&self, s: usize, positions: &[usize], target: &[bool]) -> bool {
        self.amove_summary(s, positions, target).iter().all(|&(_, some)| some)
    }

    /// The states at which `f` holds.
    ///
    /// # Panics
    ///
    /// Panics if `f` mentions an agent outside the model.
    pub fn sat_set(&self, f: &Formula) -> Vec<bool> {
        let n = self.num_states();
        match f {
            Formula::True => vec![true; n],
            Formula::False => vec![false; n],
            Formula::Prop(p) => self.valuation.iter().map(|v| v.contains(p)).collect(),
            Formula::Not(g) => self.sat_set(g).into_iter().map(|b| !b).collect(),
            Formula::And(a, b) => zip(self.sat_set(a), self.sat_set(b), |x, y| x && y),
            Formula::Or(a, b) => zip(self.sat_set(a), self.sat_set(b), |x, y| x || y),
            Formula::Implies(a, b) => zip(self.sat_set(a), self.sat_set(b), |x, y| !x || y),
            Formula::Iff(a, b) => zip(self.sat_set(a), self.sat_set(b), |x, y| x == y),
            Formula::Coop(c, g) => {
                let (pos, target) = (self.positions(c), self.sat_set(g));
                (0..n).map(|s| self.can_force(s, &pos, &target)).collect()
            }
            Formula::DualCoop(c, g) => {
                let (pos, target) = (self.positions(c), self.sat_set(g));
                (0..n).map(|s| self.cannot_avoid(s, &pos, &target)).collect()
            }
        }
    }

    /// `M, s |= f`. Unknown propositions are false.
    ///
    /// # Panics
    ///
    /// Panics if `f` mentions an agent outside the model or `s` is out of
    /// range.
    pub fn eval(&self, s: usize, f: &Formula) -> bool {
        self.sat_set(f)[s]
    }

    fn lit_holds(&self, s: usize, l: crate::snf::Lit, symbols: &SymbolTable) -> bool {
        self.valuation[s].contains(symbols.name(l.symbol())) != l.is_negated()
    }

    /// Whether the clause holds at `s`.
    pub fn clause_holds(&self, s: usize, body: &Body, symbols: &SymbolTable) -> bool {
        let disj_set = |st: usize| body.disj().iter().any(|l| self.lit_holds(st, l, symbols));
        match body {
            Body::Initial(_) | Body::Global(_) => disj_set(s),
            Body::Positive { cond, coalition, .. } | Body::Negative { cond, coalition, .. } => {
                if !cond.iter().all(|l| self.lit_holds(s, l, symbols)) {
                    return true;
                }
                let target: Vec<bool> = (0..self.num_states()).map(disj_set).collect();
                let pos = self.positions(coalition);
                if matches!(body, Body::Positive { .. }) {
                    self.can_force(s, &pos, &target)
                } else {
                    self.cannot_avoid(s, &pos, &target)
                }
            }
        }
    }

    /// Initial clauses hold at the initial state, all others everywhere.
    ///
    /// # Panics
    ///
    /// Panics if the problem mentions an agent outside the model.
    pub fn check_problem(&self, problem: &CoalitionProblem) -> bool {
        let symbols = problem.symbols();
        problem.clauses().iter().all(|c| match &c.body {
            Body::Initial(_) => self.clause_holds(self.init, &c.body, symbols),
            _ => (0..self.num_states()).all(|s| self.clause_holds(s, &c.body, symbols)),
        })
    }

    /// The model-file text, see [`Cgm::parse`].
    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let agents: Coalition = self.agents();
        let _ = writeln!(out, "agents: {agents}");
        let _ = writeln!(out, "states: {}", self.num_states());
        let _ = writeln!(out, "init: {}", self.init);
        for s in 0..self.num_states() {
            for (i, a) in self.agents.iter().enumerate() {
                if self.moves[s][i] != 1 {
                    let _ = writeln!(out, "moves: {a} {s} {}", self.moves[s][i]);
                }
            }
        }
        for s in 0..self.num_states() {
            for (v, t) in self.transitions(s) {
                let v: Vec<String> = v.iter().map(u32::to_string).collect();
                let _ = writeln!(out, "delta: {s} ({}) {t}", v.join(","));
            }
        }
        for (s, props) in self.valuation.iter().enumerate() {
            let props: Vec<&str> = props.iter().map(String::as_str).collect();
            let _ = writeln!(out, "val: {s} {}", props.join(" ").trim_end());
        }
        out
    }

    pub fn parse(text: &str) -> Result<Cgm, ModelFileError> {
        text::parse_model(text)
    }
}

fn zip(a: Vec<bool>, b: Vec<bool>, op: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| op(x, y)).collect()
}

impl fmt::Display for Cgm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// A choice of move for each member of a coalition; other agents are free.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AMove {
    choice: BTreeMap<Agent, u32>,
}

impl AMove {
    pub fn new(choice: impl IntoIterator<Item = (Agent, u32)>) -> Self {
        AMove {
            choice: choice.into_iter().collect(),
        }
    }

    /// The move of the empty coalition.
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn coalition(&self) -> Coalition {
        self.choice.keys().copied().collect()
    }

    pub fn choice(&self, a: Agent) -> Option<u32> {
        self.choice.get(&a).copied()
    }
}
