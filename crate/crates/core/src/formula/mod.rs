//! Coalition Logic formulas: abstract syntax, rendering, negation normal
//! form and agent extraction.
//!
//! The concrete syntax is ASCII:
//!
//! ```text
//! formula := iff ;  iff := imp { "<->" imp } ;  imp := or [ "->" imp ] ;
//! or := and { "|" and } ;  and := unary { "&" unary } ;
//! unary := "~" unary | "<" agents ">" unary | "[" agents "]" unary
//!        | atom | "(" formula ")" ;
//! agents := [ nat { "," nat } ] ;  atom := ident | "true" | "false"
//! ```
//!
//! `<1,2> p` is "agents 1 and 2 can jointly force `p`", `[1,2] p` is its dual
//! `~<1,2>~p`. `#` starts a line comment.

mod nnf;
pub(crate) mod parse;

use std::collections::BTreeSet;
use std::fmt;

pub use parse::{parse, ParseError};

/// An agent identifier. Ids are positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Agent(u32);

impl Agent {
    /// Returns `None` for id 0.
    pub fn new(id: u32) -> Option<Agent> {
        (id >= 1).then_some(Agent(id))
    }

    pub fn id(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Agent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite set of agents, possibly empty. Kept sorted and duplicate free,
/// so the derived equality is set equality.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coalition(Vec<Agent>);

impl Coalition {
    pub fn empty() -> Coalition {
        Coalition(Vec::new())
    }

    pub fn from_agents(agents: impl IntoIterator<Item = Agent>) -> Coalition {
        let mut v: Vec<Agent> = agents.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Coalition(v)
    }

    /// Builds a coalition from raw ids.
    ///
    /// # Panics
    ///
    /// Panics if an id is 0. Use [`Agent::new`] for untrusted input.
    pub fn of(ids: &[u32]) -> Coalition {
        Coalition::from_agents(
            ids.iter()
                .map(|&id| Agent::new(id).expect("agent ids start at 1")),
        )
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = Agent> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, a: Agent) -> bool {
        self.0.binary_search(&a).is_ok()
    }

    pub fn is_subset(&self, other: &Coalition) -> bool {
        let mut rest = other.0.iter();
        self.0.iter().all(|a| rest.any(|b| b == a))
    }

    pub fn is_disjoint(&self, other: &Coalition) -> bool {
        !self.0.iter().any(|&a| other.contains(a))
    }

    pub fn union(&self, other: &Coalition) -> Coalition {
        Coalition::from_agents(self.iter().chain(other.iter()))
    }

    pub fn difference(&self, other: &Coalition) -> Coalition {
        Coalition(self.iter().filter(|&a| !other.contains(a)).collect())
    }
}

impl FromIterator<Agent> for Coalition {
    fn from_iter<T: IntoIterator<Item = Agent>>(iter: T) -> Self {
        Coalition::from_agents(iter)
    }
}

/// Comma separated ids without braces, as written inside a modality.
impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Prop(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    /// `<A> f`: coalition `A` has a joint move forcing `f`.
    Coop(Coalition, Box<Formula>),
    /// `[A] f`: every move of `A` admits an outcome satisfying `f`.
    DualCoop(Coalition, Box<Formula>),
}

impl Formula {
    pub fn prop(name: impl Into<String>) -> Formula {
        Formula::Prop(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn coop(coalition: Coalition, f: Formula) -> Formula {
        Formula::Coop(coalition, Box::new(f))
    }

    pub fn dual(coalition: Coalition, f: Formula) -> Formula {
        Formula::DualCoop(coalition, Box::new(f))
    }

    /// Left-nested conjunction; `true` for an empty iterator.
    pub fn conjunction(items: impl IntoIterator<Item = Formula>) -> Formula {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    }

    /// Left-nested disjunction; `false` for an empty iterator.
    pub fn disjunction(items: impl IntoIterator<Item = Formula>) -> Formula {
        items
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::False)
    }

    pub fn is_literal(&self) -> bool {
        match self {
            Formula::Prop(_) => true,
            Formula::Not(inner) => matches!(**inner, Formula::Prop(_)),
            _ => false,
        }
    }

    /// The set of agents occurring in any coalition of the formula.
    pub fn agents(&self) -> Coalition {
        let mut acc = BTreeSet::new();
        self.collect_agents(&mut acc);
        Coalition(acc.into_iter().collect())
    }

    fn collect_agents(&self, acc: &mut BTreeSet<Agent>) {
        match self {
            Formula::True | Formula::False | Formula::Prop(_) => {}
            Formula::Not(a) => a.collect_agents(acc),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_agents(acc);
                b.collect_agents(acc);
            }
            Formula::Coop(c, a) | Formula::DualCoop(c, a) => {
                acc.extend(c.iter());
                a.collect_agents(acc);
            }
        }
    }

    /// Whether some coalition in the formula names an agent.
    pub(crate) fn mentions_agents(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Prop(_) => false,
            Formula::Not(a) => a.mentions_agents(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.mentions_agents() || b.mentions_agents()
            }
            Formula::Coop(c, a) | Formula::DualCoop(c, a) => !c.is_empty() || a.mentions_agents(),
        }
    }

    pub fn props(&self) -> BTreeSet<String> {
        let mut acc = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Prop(p) = f {
                acc.insert(p.clone());
            }
        });
        acc
    }

    /// Number of nodes in the syntax tree.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    /// Maximum nesting of coalition modalities.
    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Prop(_) => 0,
            Formula::Not(a) => a.modal_depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.modal_depth().max(b.modal_depth())
            }
            Formula::Coop(_, a) | Formula::DualCoop(_, a) => 1 + a.modal_depth(),
        }
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        match self {
            Formula::True | Formula::False | Formula::Prop(_) => {}
            Formula::Not(a) | Formula::Coop(_, a) | Formula::DualCoop(_, a) => a.visit(f),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }

    /// Negation normal form. See [`nnf`](crate::formula::nnf()).
    pub fn nnf(&self) -> Formula {
        nnf::nnf(self)
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            _ => 5,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            f.write_str("(")?;
            self.write_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Prop(p) => f.write_str(p),
            Formula::Not(a) => {
                f.write_str("~")?;
                a.write_at(f, 5)
            }
            Formula::Iff(a, b) => {
                a.write_at(f, 1)?;
                f.write_str(" <-> ")?;
                b.write_at(f, 2)
            }
            Formula::Implies(a, b) => {
                a.write_at(f, 3)?;
                f.write_str(" -> ")?;
                b.write_at(f, 2)
            }
            Formula::Or(a, b) => {
                a.write_at(f, 3)?;
                f.write_str(" | ")?;
                b.write_at(f, 4)
            }
            Formula::And(a, b) => {
                a.write_at(f, 4)?;
                f.write_str(" & ")?;
                b.write_at(f, 5)
            }
            Formula::Coop(c, a) => {
                write!(f, "<{c}> ")?;
                a.write_at(f, 5)
            }
            Formula::DualCoop(c, a) => {
                write!(f, "[{c}] ")?;
                a.write_at(f, 5)
            }
        }
    }
}

/// Renders with the fewest parentheses that still parse back to the same tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

pub fn render(f: &Formula) -> String {
    f.to_string()
}

/// Negation normal form with constant folding.
///
/// Implications and equivalences are expanded, negations are pushed down to
/// propositions (through modalities via `~<A>f == [A]~f`), `true`/`false` are
/// dropped as neutral elements, and absorbed when the absorbed operand names
/// no agents. The last restriction keeps `agents_of(nnf(f)) == agents_of(f)`,
/// which matters because the agent set fixes the meaning of `[]`.
pub fn nnf(f: &Formula) -> Formula {
    nnf::nnf(f)
}

/// The agents syntactically occurring in `f`.
pub fn agents_of(f: &Formula) -> Coalition {
    f.agents()
}
