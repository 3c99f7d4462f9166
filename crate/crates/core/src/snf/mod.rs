//! Clausal normal form for coalition problems.
//!
//! A coalition problem is a triple of clause sets: initial clauses `I` hold
//! at the initial state, global clauses `U` and coalition clauses `N` hold at
//! every state. Clauses are
//!
//! ```text
//! initial / global        l1 | ... | ln
//! positive coalition      l'1 & ... & l'm => <A> l1 | ... | ln
//! negative coalition      l'1 & ... & l'm => [A] l1 | ... | ln
//! ```
//!
//! with an empty antecedent standing for `true` and an empty disjunction for
//! `false`.

mod normalize;
pub(crate) mod text;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::formula::{Coalition, Formula};

pub use normalize::{normalize, RENAMING_PREFIX};
pub use text::{parse_clause, parse_problem, ProblemError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(u32);

impl Symbol {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Interns proposition names. Symbols are numbered in insertion order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SymbolTable {
    names: Vec<String>,
    index: HashMap<String, Symbol>,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, name: &str) -> Symbol {
        if let Some(&s) = self.index.get(name) {
            return s;
        }
        let s = Symbol(self.names.len() as u32);
        self.names.push(name.to_owned());
        self.index.insert(name.to_owned(), s);
        s
    }

    pub fn get(&self, name: &str) -> Option<Symbol> {
        self.index.get(name).copied()
    }

    pub fn name(&self, s: Symbol) -> &str {
        &self.names[s.index()]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> {
        (0..self.names.len() as u32).map(Symbol)
    }

    /// Convenience for building literals by name, e.g. `lit("~p")`.
    pub fn lit(&mut self, text: &str) -> Lit {
        match text.strip_prefix('~') {
            Some(name) => Lit::new(self.intern(name.trim()), true),
            None => Lit::new(self.intern(text.trim()), false),
        }
    }
}

/// A proposition or its negation, packed as `symbol << 1 | negated`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    pub fn new(symbol: Symbol, negated: bool) -> Lit {
        Lit(symbol.0 << 1 | u32::from(negated))
    }

    pub fn symbol(self) -> Symbol {
        Symbol(self.0 >> 1)
    }

    pub fn is_negated(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn negate(self) -> Lit {
        Lit(self.0 ^ 1)
    }

    pub fn code(self) -> usize {
        self.0 as usize
    }

    pub fn display(self, symbols: &SymbolTable) -> impl fmt::Display + '_ {
        LitDisplay(self, symbols)
    }
}

struct LitDisplay<'a>(Lit, &'a SymbolTable);

impl fmt::Display for LitDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_negated() {
            f.write_str("~")?;
        }
        f.write_str(self.1.name(self.0.symbol()))
    }
}

/// A sorted, duplicate-free set of literals. Whether it reads as a
/// conjunction or a disjunction depends on where it sits in a clause.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LitSet(Vec<Lit>);

static EMPTY: LitSet = LitSet(Vec::new());

impl LitSet {
    pub fn empty() -> &'static LitSet {
        &EMPTY
    }

    pub fn new(lits: impl IntoIterator<Item = Lit>) -> LitSet {
        let mut v: Vec<Lit> = lits.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        LitSet(v)
    }

    /// Wraps a strictly increasing sequence.
    pub(crate) fn from_sorted(v: Vec<Lit>) -> LitSet {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        LitSet(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Lit> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[Lit] {
        &self.0
    }

    pub fn first(&self) -> Option<Lit> {
        self.0.first().copied()
    }

    pub fn contains(&self, l: Lit) -> bool {
        self.0.binary_search(&l).is_ok()
    }

    /// Sorted-merge inclusion test.
    pub fn is_subset(&self, other: &LitSet) -> bool {
        if self.0.len() > other.0.len() {
            return false;
        }
        let mut rest = other.0.iter();
        self.0.iter().all(|l| rest.any(|m| m == l))
    }

    pub fn has_complementary_pair(&self) -> bool {
        // complements are adjacent in code order
        self.0.windows(2).any(|w| w[0].negate() == w[1])
    }

    pub fn display<'a>(&'a self, symbols: &'a SymbolTable, sep: &'static str, empty: &'static str) -> impl fmt::Display + 'a {
        SetDisplay { set: self, symbols, sep, empty }
    }
}

struct SetDisplay<'a> {
    set: &'a LitSet,
    symbols: &'a SymbolTable,
    sep: &'static str,
    empty: &'static str,
}

impl fmt::Display for SetDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.set.is_empty() {
            return f.write_str(self.empty);
        }
        for (i, l) in self.set.iter().enumerate() {
            if i > 0 {
                f.write_str(self.sep)?;
            }
            write!(f, "{}", l.display(self.symbols))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClauseKind {
    Initial,
    Global,
    Positive,
    Negative,
}

/// Which component of the problem a clause belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SetTag {
    I,
    U,
    N,
}

impl ClauseKind {
    pub fn set_tag(self) -> SetTag {
        match self {
            ClauseKind::Initial => SetTag::I,
            ClauseKind::Global => SetTag::U,
            ClauseKind::Positive | ClauseKind::Negative => SetTag::N,
        }
    }

    pub fn is_coalition(self) -> bool {
        matches!(self, ClauseKind::Positive | ClauseKind::Negative)
    }
}

impl fmt::Display for SetTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SetTag::I => "I",
            SetTag::U => "U",
            SetTag::N => "N",
        })
    }
}

/// The literal content of a clause.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Body {
    Initial(LitSet),
    Global(LitSet),
    Positive {
        cond: LitSet,
        coalition: Coalition,
        disj: LitSet,
    },
    Negative {
        cond: LitSet,
        coalition: Coalition,
        disj: LitSet,
    },
}

impl Body {
    pub fn kind(&self) -> ClauseKind {
        match self {
            Body::Initial(_) => ClauseKind::Initial,
            Body::Global(_) => ClauseKind::Global,
            Body::Positive { .. } => ClauseKind::Positive,
            Body::Negative { .. } => ClauseKind::Negative,
        }
    }

    /// Antecedent conjunction; empty for initial and global clauses.
    pub fn cond(&self) -> &LitSet {
        match self {
            Body::Initial(_) | Body::Global(_) => LitSet::empty(),
            Body::Positive { cond, .. } | Body::Negative { cond, .. } => cond,
        }
    }

    pub fn disj(&self) -> &LitSet {
        match self {
            Body::Initial(d) | Body::Global(d) => d,
            Body::Positive { disj, .. } | Body::Negative { disj, .. } => disj,
        }
    }

    pub fn coalition(&self) -> Option<&Coalition> {
        match self {
            Body::Initial(_) | Body::Global(_) => None,
            Body::Positive { coalition, .. } | Body::Negative { coalition, .. } => Some(coalition),
        }
    }

    /// `false` in `I` or `U`.
    pub fn is_contradiction(&self) -> bool {
        matches!(self, Body::Initial(d) | Body::Global(d) if d.is_empty())
    }

    pub fn display<'a>(&'a self, symbols: &'a SymbolTable) -> impl fmt::Display + 'a {
        BodyDisplay(self, symbols)
    }

    /// Rendering with literals sorted by name, independent of the symbol
    /// table's numbering. Two bodies from different tables are the same
    /// clause iff their canonical forms agree.
    pub fn canonical(&self, symbols: &SymbolTable) -> String {
        let sorted = |set: &LitSet, sep: &str, empty: &str| {
            let mut v: Vec<String> = set.iter().map(|l| l.display(symbols).to_string()).collect();
            v.sort_by(|a, b| a.trim_start_matches('~').cmp(b.trim_start_matches('~')).then(a.cmp(b)));
            if v.is_empty() {
                empty.to_owned()
            } else {
                v.join(sep)
            }
        };
        let tag = self.kind().set_tag();
        match self {
            Body::Initial(d) | Body::Global(d) => format!("{tag}: {}", sorted(d, " | ", "false")),
            Body::Positive { cond, coalition, disj } => {
                format!("N: {} => <{coalition}> {}", sorted(cond, " & ", "true"), sorted(disj, " | ", "false"))
            }
            Body::Negative { cond, coalition, disj } => {
                format!("N: {} => [{coalition}] {}", sorted(cond, " & ", "true"), sorted(disj, " | ", "false"))
            }
        }
    }
}

struct BodyDisplay<'a>(&'a Body, &'a SymbolTable);

impl fmt::Display for BodyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let syms = self.1;
        match self.0 {
            Body::Initial(d) | Body::Global(d) => write!(f, "{}", d.display(syms, " | ", "false")),
            Body::Positive { cond, coalition, disj } => write!(
                f,
                "{} => <{}> {}",
                cond.display(syms, " & ", "true"),
                coalition,
                disj.display(syms, " | ", "false")
            ),
            Body::Negative { cond, coalition, disj } => write!(
                f,
                "{} => [{}] {}",
                cond.display(syms, " & ", "true"),
                coalition,
                disj.display(syms, " | ", "false")
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClauseId(pub u32);

impl fmt::Display for ClauseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Ires1,
    Gres1,
    Cres1,
    Cres2,
    Cres3,
    Cres4,
    Rw1,
    Rw2,
    Sigma,
}

impl Rule {
    pub const ALL: [Rule; 9] = [
        Rule::Ires1,
        Rule::Gres1,
        Rule::Cres1,
        Rule::Cres2,
        Rule::Cres3,
        Rule::Cres4,
        Rule::Rw1,
        Rule::Rw2,
        Rule::Sigma,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Ires1 => "ires1",
            Rule::Gres1 => "gres1",
            Rule::Cres1 => "cres1",
            Rule::Cres2 => "cres2",
            Rule::Cres3 => "cres3",
            Rule::Cres4 => "cres4",
            Rule::Rw1 => "rw1",
            Rule::Rw2 => "rw2",
            Rule::Sigma => "sigma",
        }
    }

    /// Rules with a single premise and no pivot.
    pub fn is_unary(self) -> bool {
        matches!(self, Rule::Rw1 | Rule::Rw2 | Rule::Sigma)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Rule::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| format!("unknown rule `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    Given,
    /// Premises are listed in the argument order of the rule; the pivot is
    /// the literal resolved upon in the first premise.
    Derived {
        rule: Rule,
        premises: Vec<ClauseId>,
        pivot: Option<Lit>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub id: ClauseId,
    pub body: Body,
    pub justification: Justification,
}

impl Clause {
    pub fn kind(&self) -> ClauseKind {
        self.body.kind()
    }
}

/// A literal or a Boolean constant, as it may appear before simplification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Term {
    Lit(Lit),
    True,
    False,
}

impl From<Lit> for Term {
    fn from(l: Lit) -> Self {
        Term::Lit(l)
    }
}

/// A clause as written or computed, before Boolean simplification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawClause {
    pub kind: ClauseKind,
    pub cond: Vec<Term>,
    pub coalition: Coalition,
    pub disj: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Simplified {
    Clause(Body),
    Tautology,
}

impl Simplified {
    pub fn into_body(self) -> Option<Body> {
        match self {
            Simplified::Clause(b) => Some(b),
            Simplified::Tautology => None,
        }
    }
}

impl RawClause {
    pub fn initial(disj: impl IntoIterator<Item = Term>) -> Self {
        Self::propositional(ClauseKind::Initial, disj)
    }

    pub fn global(disj: impl IntoIterator<Item = Term>) -> Self {
        Self::propositional(ClauseKind::Global, disj)
    }

    fn propositional(kind: ClauseKind, disj: impl IntoIterator<Item = Term>) -> Self {
        RawClause {
            kind,
            cond: Vec::new(),
            coalition: Coalition::empty(),
            disj: disj.into_iter().collect(),
        }
    }

    pub fn positive(
        cond: impl IntoIterator<Item = Term>,
        coalition: Coalition,
        disj: impl IntoIterator<Item = Term>,
    ) -> Self {
        RawClause {
            kind: ClauseKind::Positive,
            cond: cond.into_iter().collect(),
            coalition,
            disj: disj.into_iter().collect(),
        }
    }

    pub fn negative(
        cond: impl IntoIterator<Item = Term>,
        coalition: Coalition,
        disj: impl IntoIterator<Item = Term>,
    ) -> Self {
        RawClause {
            kind: ClauseKind::Negative,
            ..RawClause::positive(cond, coalition, disj)
        }
    }

    /// Boolean simplification: duplicates merge, `true` leaves conjunctions
    /// and `false` leaves disjunctions. A complementary pair or `true` in the
    /// disjunction, or a complementary pair or `false` in the antecedent,
    /// makes the clause a tautology. An empty coalition disjunction is kept.
    pub fn simplify(self) -> Simplified {
        let mut cond = Vec::with_capacity(self.cond.len());
        for t in self.cond {
            match t {
                Term::Lit(l) => cond.push(l),
                Term::True => {}
                Term::False => return Simplified::Tautology,
            }
        }
        let mut disj = Vec::with_capacity(self.disj.len());
        for t in self.disj {
            match t {
                Term::Lit(l) => disj.push(l),
                Term::False => {}
                Term::True => return Simplified::Tautology,
            }
        }
        let cond = LitSet::new(cond);
        let disj = LitSet::new(disj);
        if cond.has_complementary_pair() || disj.has_complementary_pair() {
            return Simplified::Tautology;
        }
        Simplified::Clause(match self.kind {
            ClauseKind::Initial => Body::Initial(disj),
            ClauseKind::Global => Body::Global(disj),
            ClauseKind::Positive => Body::Positive {
                cond,
                coalition: self.coalition,
                disj,
            },
            ClauseKind::Negative => Body::Negative {
                cond,
                coalition: self.coalition,
                disj,
            },
        })
    }
}

/// Boolean simplification of a raw clause; see [`RawClause::simplify`].
pub fn clause_simplify(c: RawClause) -> Simplified {
    c.simplify()
}

/// `I`, `U` and `N` with the agent universe `sigma`.
///
/// Clause ids are `1..=n` in insertion order. `sigma` always contains every
/// agent of `U ∪ N`; it may be declared larger, which is how a formula's
/// agent set survives modal subformulas that simplify away.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CoalitionProblem {
    pub name: String,
    symbols: SymbolTable,
    clauses: Vec<Clause>,
    sigma: Coalition,
}

impl CoalitionProblem {
    pub fn new(name: impl Into<String>) -> Self {
        CoalitionProblem {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn with_symbols(name: impl Into<String>, symbols: SymbolTable) -> Self {
        CoalitionProblem {
            name: name.into(),
            symbols,
            ..Default::default()
        }
    }

    /// Assembles a problem from already numbered clauses, keeping their
    /// justifications.
    pub(crate) fn from_clauses(name: impl Into<String>, symbols: SymbolTable, sigma: Coalition, clauses: Vec<Clause>) -> Self {
        CoalitionProblem {
            name: name.into(),
            symbols,
            clauses,
            sigma,
        }
    }

    pub fn symbols(&self) -> &SymbolTable {
        &self.symbols
    }

    pub fn symbols_mut(&mut self) -> &mut SymbolTable {
        &mut self.symbols
    }

    pub fn sigma(&self) -> &Coalition {
        &self.sigma
    }

    /// Widens the agent universe.
    pub fn declare_agents(&mut self, agents: &Coalition) {
        self.sigma = self.sigma.union(agents);
    }

    pub fn push(&mut self, body: Body) -> ClauseId {
        if let Some(c) = body.coalition() {
            if !c.is_subset(&self.sigma) {
                self.sigma = self.sigma.union(c);
            }
        }
        let id = ClauseId(self.clauses.len() as u32 + 1);
        self.clauses.push(Clause {
            id,
            body,
            justification: Justification::Given,
        });
        id
    }

    /// Simplifies and adds; tautologies are dropped and yield `None`.
    pub fn push_raw(&mut self, raw: RawClause) -> Option<ClauseId> {
        raw.simplify().into_body().map(|b| self.push(b))
    }

    /// Parses one clause in the problem-file syntax and adds it.
    ///
    /// # Panics
    ///
    /// Panics on malformed text or on a tautology; meant for fixtures.
    pub fn add(&mut self, set: SetTag, text: &str) -> ClauseId {
        let raw = parse_clause(set, text, &mut self.symbols)
            .unwrap_or_else(|e| panic!("bad clause `{text}`: {e}"));
        self.push_raw(raw)
            .unwrap_or_else(|| panic!("clause `{text}` is a tautology"))
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn clause(&self, id: ClauseId) -> Option<&Clause> {
        self.clauses.get((id.0 as usize).checked_sub(1)?)
    }

    pub fn of_kind(&self, kind: ClauseKind) -> impl Iterator<Item = &Clause> {
        self.clauses.iter().filter(move |c| c.kind() == kind)
    }

    pub fn initial(&self) -> impl Iterator<Item = &Clause> {
        self.of_kind(ClauseKind::Initial)
    }

    pub fn global(&self) -> impl Iterator<Item = &Clause> {
        self.of_kind(ClauseKind::Global)
    }

    pub fn coalition(&self) -> impl Iterator<Item = &Clause> {
        self.clauses.iter().filter(|c| c.kind().is_coalition())
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Total literal occurrences over all clauses.
    pub fn literal_count(&self) -> usize {
        self.clauses
            .iter()
            .map(|c| c.body.cond().len() + c.body.disj().len())
            .sum()
    }

    /// Symbols that occur in at least one clause.
    pub fn used_symbols(&self) -> Vec<Symbol> {
        let mut used = vec![false; self.symbols.len()];
        for c in &self.clauses {
            for l in c.body.cond().iter().chain(c.body.disj().iter()) {
                used[l.symbol().index()] = true;
            }
        }
        self.symbols.symbols().filter(|s| used[s.index()]).collect()
    }

    /// Problem-file text: an `agents:` line when `sigma` is non-empty, then
    /// the `I:`, `U:` and `N:` sections.
    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        if !self.sigma.is_empty() {
            let _ = writeln!(out, "agents: {}", self.sigma);
        }
        for (tag, kinds) in [
            ("I", &[ClauseKind::Initial][..]),
            ("U", &[ClauseKind::Global][..]),
            ("N", &[ClauseKind::Positive, ClauseKind::Negative][..]),
        ] {
            let _ = writeln!(out, "{tag}:");
            for c in self.clauses.iter().filter(|c| kinds.contains(&c.kind())) {
                let _ = writeln!(out, "{}", c.body.display(&self.symbols));
            }
        }
        out
    }
}

/// The formula whose unsatisfiability is equivalent to the validity of `f`.
pub fn negate_for_validity(f: &Formula) -> Formula {
    Formula::not(f.clone()).nnf()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    #[test]
    fn literal_packing() {
        let mut t = SymbolTable::new();
        let p = t.lit("p");
        let np = t.lit("~p");
        assert_eq!(p.negate(), np);
        assert_eq!(np.symbol(), p.symbol());
        assert!(np.is_negated() && !p.is_negated());
        assert_eq!(np.display(&t).to_string(), "~p");
    }

    #[test]
    fn simplify_examples() {
        let mut t = SymbolTable::new();
        let nt0 = t.lit("~t0");
        let raw = RawClause::global([nt0.into(), nt0.into()]);
        assert_eq!(raw.simplify(), Simplified::Clause(Body::Global(LitSet::new([nt0]))));

        let p = t.lit("p");
        assert_eq!(RawClause::global([p.into(), p.negate().into()]).simplify(), Simplified::Tautology);

        let t1 = t.lit("t1");
        let l = t.lit("l");
        let raw = RawClause::positive([t1.into(), t1.into()], Coalition::of(&[1]), [l.into()]);
        assert_eq!(
            raw.simplify(),
            Simplified::Clause(Body::Positive {
                cond: LitSet::new([t1]),
                coalition: Coalition::of(&[1]),
                disj: LitSet::new([l]),
            })
        );
    }

    #[test]
    fn simplify_constants() {
        let mut t = SymbolTable::new();
        let p = t.lit("p");
        assert_eq!(RawClause::global([Term::True, p.into()]).simplify(), Simplified::Tautology);
        assert_eq!(
            RawClause::global([Term::False, p.into()]).simplify(),
            Simplified::Clause(Body::Global(LitSet::new([p])))
        );
        let c = Coalition::of(&[1]);
        assert_eq!(
            RawClause::negative([Term::False], c.clone(), [p.into()]).simplify(),
            Simplified::Tautology
        );
        assert_eq!(
            RawClause::negative([p.into(), p.negate().into()], c.clone(), [p.into()]).simplify(),
            Simplified::Tautology
        );
        // empty disjunction survives on coalition clauses
        assert_eq!(
            RawClause::positive([Term::True, p.into()], c.clone(), [Term::False]).simplify(),
            Simplified::Clause(Body::Positive {
                cond: LitSet::new([p]),
                coalition: c,
                disj: LitSet::default(),
            })
        );
    }

    #[test]
    fn subset() {
        let mut t = SymbolTable::new();
        let (a, b, c) = (t.lit("a"), t.lit("b"), t.lit("~c"));
        let small = LitSet::new([c, a]);
        let big = LitSet::new([a, b, c]);
        assert!(small.is_subset(&big));
        assert!(!big.is_subset(&small));
        assert!(LitSet::default().is_subset(&small));
    }

    #[test]
    fn negate_for_validity_examples() {
        assert_eq!(negate_for_validity(&parse("<1,2> true").unwrap()), parse("[1,2] false").unwrap());
        assert_eq!(
            negate_for_validity(&parse("<1>(p & q) -> <1> p").unwrap()),
            parse("<1>(p & q) & [1] ~p").unwrap()
        );
        assert_eq!(
            negate_for_validity(&parse("<1> p & [1,2] q -> [2](p & q)").unwrap()),
            parse("<1> p & [1,2] q & <2>(~p | ~q)").unwrap()
        );
    }

    #[test]
    fn sigma_tracks_clauses() {
        let mut problem = CoalitionProblem::new("t");
        problem.add(SetTag::N, "a => <2> b");
        problem.add(SetTag::N, "true => [1,3] false");
        assert_eq!(problem.sigma(), &Coalition::of(&[1, 2, 3]));
        problem.declare_agents(&Coalition::of(&[4]));
        assert_eq!(problem.sigma(), &Coalition::of(&[1, 2, 3, 4]));
        assert_eq!(problem.clause(ClauseId(2)).unwrap().kind(), ClauseKind::Negative);
        assert!(problem.clause(ClauseId(0)).is_none());
    }
}
