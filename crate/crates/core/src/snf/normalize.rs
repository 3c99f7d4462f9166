//! Structure-preserving translation of a formula into a coalition problem.
//!
//! A fresh symbol `_t0` is asserted initially and defined globally by
//! `_t0 => nnf(f)`. Definitions `t => g` are expanded by structural
//! recursion: conjunctions split, literal disjuncts stay in place, and every
//! other disjunct (a conjunction or a coalition formula) is replaced by a
//! fresh symbol with its own definition. A coalition formula `<A> g` named
//! `s` becomes the coalition clause `s => <A> D`, where `D` is the disjunction
//! of `g` with the same renaming applied. Fresh symbols are numbered in
//! pre-order.

use std::collections::BTreeSet;

use super::{CoalitionProblem, Lit, RawClause, SymbolTable, Term};
use crate::formula::{Coalition, Formula};

/// Prefix of the symbols introduced by renaming. Formula identifiers cannot
/// start with `_`, so these never clash with parsed input.
pub const RENAMING_PREFIX: &str = "_t";

struct Renamer {
    symbols: SymbolTable,
    taken: BTreeSet<String>,
    next: usize,
    initial: Vec<RawClause>,
    global: Vec<RawClause>,
    coalition: Vec<RawClause>,
}

impl Renamer {
    fn fresh(&mut self) -> Lit {
        loop {
            let name = format!("{RENAMING_PREFIX}{}", self.next);
            self.next += 1;
            if !self.taken.contains(&name) {
                return Lit::new(self.symbols.intern(&name), false);
            }
        }
    }

    fn literal(&mut self, f: &Formula) -> Option<Lit> {
        match f {
            Formula::Prop(p) => Some(Lit::new(self.symbols.intern(p), false)),
            Formula::Not(inner) => match &**inner {
                Formula::Prop(p) => Some(Lit::new(self.symbols.intern(p), true)),
                _ => None,
            },
            _ => None,
        }
    }

    /// Emits clauses for `t => f` holding globally.
    fn define(&mut self, t: Lit, f: &Formula) {
        match f {
            Formula::True => {}
            Formula::And(a, b) => {
                self.define(t, a);
                self.define(t, b);
            }
            _ => {
                // reserve the slot so clauses come out in pre-order
                let slot = self.global.len();
                self.global.push(RawClause::global([]));
                let mut disj = vec![Term::Lit(t.negate())];
                for d in disjuncts(f) {
                    disj.push(self.term(d));
                }
                self.global[slot] = RawClause::global(disj);
            }
        }
    }

    /// A literal or constant standing for the disjunct `f`.
    fn term(&mut self, f: &Formula) -> Term {
        match f {
            Formula::True => Term::True,
            Formula::False => Term::False,
            _ => match self.literal(f) {
                Some(l) => Term::Lit(l),
                None => Term::Lit(self.name(f)),
            },
        }
    }

    fn name(&mut self, f: &Formula) -> Lit {
        let s = self.fresh();
        match f {
            Formula::Coop(c, g) => self.modal(s, c, g, true),
            Formula::DualCoop(c, g) => self.modal(s, c, g, false),
            _ => self.define(s, f),
        }
        s
    }

    fn modal(&mut self, s: Lit, coalition: &Coalition, f: &Formula, positive: bool) {
        let slot = self.coalition.len();
        self.coalition.push(RawClause::positive([], Coalition::empty(), []));
        let disj: Vec<Term> = disjuncts(f).into_iter().map(|d| self.term(d)).collect();
        let cond = [Term::Lit(s)];
        self.coalition[slot] = if positive {
            RawClause::positive(cond, coalition.clone(), disj)
        } else {
            RawClause::negative(cond, coalition.clone(), disj)
        };
    }
}

fn disjuncts(f: &Formula) -> Vec<&Formula> {
    fn go<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
        match f {
            Formula::Or(a, b) => {
                go(a, out);
                go(b, out);
            }
            _ => out.push(f),
        }
    }
    let mut out = Vec::new();
    go(f, &mut out);
    out
}

/// Translates `f` into an equisatisfiable coalition problem.
///
/// The problem's agent universe is `agents_of(f)` even when some modal
/// subformula simplifies away (for instance `<3> true`).
pub fn normalize(f: &Formula) -> CoalitionProblem {
    let g = f.nnf();
    let mut r = Renamer {
        symbols: SymbolTable::new(),
        taken: f.props(),
        next: 0,
        initial: Vec::new(),
        global: Vec::new(),
        coalition: Vec::new(),
    };
    let seed = r.fresh();
    r.initial.push(RawClause::initial([Term::Lit(seed)]));
    r.define(seed, &g);

    let mut problem = CoalitionProblem::with_symbols("formula", r.symbols);
    problem.declare_agents(&f.agents());
    for raw in r.initial.into_iter().chain(r.global).chain(r.coalition) {
        problem.push_raw(raw);
    }
    problem
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn lines(problem: &CoalitionProblem) -> Vec<String> {
        problem.to_text().lines().map(str::to_owned).collect()
    }

    #[test]
    fn single_proposition() {
        let problem = normalize(&parse("p").unwrap());
        assert_eq!(lines(&problem), ["I:", "_t0", "U:", "~_t0 | p", "N:"]);
    }

    #[test]
    fn modal_conjuncts_are_renamed() {
        let problem = normalize(&parse("<1> p & ~<2> q").unwrap());
        assert_eq!(
            lines(&problem),
            [
                "agents: 1,2",
                "I:",
                "_t0",
                "U:",
                "~_t0 | _t1",
                "~_t0 | _t2",
                "N:",
                "_t1 => <1> p",
                "_t2 => [2] ~q",
            ]
        );
    }

    #[test]
    fn nested_structure() {
        let problem = normalize(&parse("p | <1>(q & <2> r | s)").unwrap());
        assert_eq!(
            lines(&problem),
            [
                "agents: 1,2",
                "I:",
                "_t0",
                "U:",
                "~_t0 | p | _t1",
                "~_t2 | q",
                "~_t2 | _t3",
                "N:",
                "_t1 => <1> _t2 | s",
                "_t3 => <2> r",
            ]
        );
    }

    #[test]
    fn constants_under_modalities() {
        // <1> true is valid: its clause is a tautology and disappears, but the
        // agent stays in the universe
        let problem = normalize(&parse("<1> true | <2> false").unwrap());
        assert_eq!(problem.sigma(), &Coalition::of(&[1, 2]));
        assert_eq!(lines(&problem)[1..], ["I:", "_t0", "U:", "~_t0 | _t1 | _t2", "N:", "_t2 => <2> false"]);
        let problem = normalize(&parse("false").unwrap());
        assert_eq!(lines(&problem), ["I:", "_t0", "U:", "~_t0", "N:"]);
    }

    #[test]
    fn fresh_names_skip_taken_ones() {
        let f = Formula::and(Formula::prop("_t0"), Formula::prop("_t1"));
        let problem = normalize(&f);
        assert_eq!(lines(&problem), ["I:", "_t2", "U:", "~_t2 | _t0", "~_t2 | _t1", "N:"]);
    }
}
