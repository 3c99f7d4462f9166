//! The inference rules, one function each.
//!
//! Binary rules take their premises in the order of the rule schema and a
//! pivot literal occurring in the first premise's disjunction; its
//! complement must occur in the second premise's disjunction. Every
//! resolvent is returned simplified, so a result may be a tautology.

use thiserror::Error;

use crate::formula::Coalition;
use crate::snf::{Body, ClauseKind, Lit, LitSet, RawClause, Rule, Simplified, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("{rule}: premise {index} must be {expected}")]
    WrongKind {
        rule: Rule,
        index: usize,
        expected: &'static str,
    },
    #[error("{rule}: pivot pair absent")]
    PivotAbsent { rule: Rule },
    #[error("{rule}: coalition side condition does not hold")]
    SideCondition { rule: Rule },
    #[error("{rule}: the premise's disjunction is not empty")]
    NonEmptyDisjunction { rule: Rule },
    #[error("{rule}: expected {expected} premise(s) and {pivot} pivot, got {got} and {got_pivot}")]
    Arity {
        rule: Rule,
        expected: usize,
        pivot: &'static str,
        got: usize,
        got_pivot: &'static str,
    },
}

fn expect_kind(rule: Rule, index: usize, body: &Body, kinds: &[ClauseKind], expected: &'static str) -> Result<(), RuleError> {
    if kinds.contains(&body.kind()) {
        Ok(())
    } else {
        Err(RuleError::WrongKind { rule, index, expected })
    }
}

/// Sorted union of two sorted literal sequences; `None` when the union
/// holds a complementary pair.
fn merge(a: impl Iterator<Item = Lit>, b: impl Iterator<Item = Lit>) -> Option<LitSet> {
    let (mut a, mut b) = (a.peekable(), b.peekable());
    let mut out: Vec<Lit> = Vec::with_capacity(a.size_hint().0 + b.size_hint().0);
    loop {
        let next = match (a.peek(), b.peek()) {
            (Some(&x), Some(&y)) if x < y => a.next(),
            (Some(&x), Some(&y)) if x > y => b.next(),
            (Some(_), Some(_)) => {
                b.next();
                a.next()
            }
            (Some(_), None) => a.next(),
            (None, Some(_)) => b.next(),
            (None, None) => break,
        };
        let l = next.expect("peeked");
        // complements are adjacent in code order
        if out.last().is_some_and(|&m| m == l.negate()) {
            return None;
        }
        out.push(l);
    }
    Some(LitSet::from_sorted(out))
}

/// `D1 \ {pivot} ∪ D2 \ {~pivot}`, checking that the pair is present.
fn resolve_disj(rule: Rule, d1: &LitSet, d2: &LitSet, pivot: Lit) -> Result<Option<LitSet>, RuleError> {
    let other = pivot.negate();
    if !d1.contains(pivot) || !d2.contains(other) {
        return Err(RuleError::PivotAbsent { rule });
    }
    Ok(merge(d1.iter().filter(|&l| l != pivot), d2.iter().filter(|&l| l != other)))
}

/// Builds the simplified resolvent from already merged parts.
fn resolvent(cond: Option<LitSet>, disj: Option<LitSet>, make: impl FnOnce(LitSet, LitSet) -> Body) -> Simplified {
    match (cond, disj) {
        (Some(c), Some(d)) => Simplified::Clause(make(c, d)),
        _ => Simplified::Tautology,
    }
}

fn conj(c1: &LitSet, c2: &LitSet) -> Option<LitSet> {
    merge(c1.iter(), c2.iter())
}

fn coalition(body: &Body) -> &Coalition {
    body.coalition().expect("checked to be a coalition clause")
}

const PROP: &[ClauseKind] = &[ClauseKind::Initial, ClauseKind::Global];

/// Initial resolution: `D ∨ l ∈ I`, `D' ∨ ¬l ∈ I ∪ U` gives `D ∨ D' ∈ I`.
pub fn ires1(c1: &Body, c2: &Body, pivot: Lit) -> Result<Simplified, RuleError> {
    let rule = Rule::Ires1;
    expect_kind(rule, 1, c1, &[ClauseKind::Initial], "an initial clause")?;
    expect_kind(rule, 2, c2, PROP, "an initial or global clause")?;
    let disj = resolve_disj(rule, c1.disj(), c2.disj(), pivot)?;
    Ok(resolvent(Some(LitSet::default()), disj, |_, d| Body::Initial(d)))
}

/// Global resolution: `D ∨ l`, `D' ∨ ¬l ∈ U` give `D ∨ D' ∈ U`.
pub fn gres1(c1: &Body, c2: &Body, pivot: Lit) -> Result<Simplified, RuleError> {
    let rule = Rule::Gres1;
    expect_kind(rule, 1, c1, &[ClauseKind::Global], "a global clause")?;
    expect_kind(rule, 2, c2, &[ClauseKind::Global], "a global clause")?;
    let disj = resolve_disj(rule, c1.disj(), c2.disj(), pivot)?;
    Ok(resolvent(Some(LitSet::default()), disj, |_, d| Body::Global(d)))
}

/// `C => <A>(D ∨ l)`, `C' => <B>(D' ∨ ¬l)` with `A ∩ B = ∅` give
/// `C ∧ C' => <A ∪ B>(D ∨ D')`.
pub fn cres1(c1: &Body, c2: &Body, pivot: Lit) -> Result<Simplified, RuleError> {
    let rule = Rule::Cres1;
    expect_kind(rule, 1, c1, &[ClauseKind::Positive], "a positive coalition clause")?;
    expect_kind(rule, 2, c2, &[ClauseKind::Positive], "a positive coalition clause")?;
    let (a, b) = (coalition(c1), coalition(c2));
    if !a.is_disjoint(b) {
        return Err(RuleError::SideCondition { rule });
    }
    let disj = resolve_disj(rule, c1.disj(), c2.disj(), pivot)?;
    let coalition = a.union(b);
    Ok(resolvent(conj(c1.cond(), c2.cond()), disj, |cond, disj| Body::Positive { cond, coalition, disj }))
}

/// `D ∨ l ∈ U`, `C => <A>(D' ∨ ¬l)` give `C => <A>(D ∨ D')`.
pub fn cres2(c1: &Body, c2: &Body, pivot: Lit) -> Result<Simplified, RuleError> {
    let rule = Rule::Cres2;
    expect_kind(rule, 1, c1, &[ClauseKind::Global], "a global clause")?;
    expect_kind(rule, 2, c2, &[ClauseKind::Positive], "a positive coalition clause")?;
    let disj = resolve_disj(rule, c1.disj(), c2.disj(), pivot)?;
    let coalition = coalition(c2).clone();
    Ok(resolvent(Some(c2.cond().clone()), disj, |cond, disj| Body::Positive { cond, coalition, disj }))
}

/// `C => <A>(D ∨ l)`, `C' => [B](D' ∨ ¬l)` with `A ⊆ B` give
/// `C ∧ C' => [B \ A](D ∨ D')`.
pub fn cres3(c1: &Body, c2: &Body, pivot: Lit) -> Result<Simplified, RuleError> {
    let rule = Rule::Cres3;
    expect_kind(rule, 1, c1, &[ClauseKind::Positive], "a positive coalition clause")?;
    expect_kind(rule, 2, c2, &[ClauseKind::Negative], "a negative coalition clause")?;
    let (a, b) = (coalition(c1), coalition(c2));
    if !a.is_subset(b) {
        return Err(RuleError::SideCondition { rule });
    }
    let disj = resolve_disj(rule, c1.disj(), c2.disj(), pivot)?;
    let coalition = b.difference(a);
    Ok(resolvent(conj(c1.cond(), c2.cond()), disj, |cond, disj| Body::Negative { cond, coalition, disj }))
}

/// `D ∨ l ∈ U`, `C => [A](D' ∨ ¬l)` give `C => [A](D ∨ D')`.
pub fn cres4(c1: &Body, c2: &Body, pivot: Lit) -> Result<Simplified, RuleError> {
    let rule = Rule::Cres4;
    expect_kind(rule, 1, c1, &[ClauseKind::Global], "a global clause")?;
    expect_kind(rule, 2, c2, &[ClauseKind::Negative], "a negative coalition clause")?;
    let disj = resolve_disj(rule, c1.disj(), c2.disj(), pivot)?;
    let coalition = coalition(c2).clone();
    Ok(resolvent(Some(c2.cond().clone()), disj, |cond, disj| Body::Negative { cond, coalition, disj }))
}

fn negated_antecedent(cond: &LitSet) -> Simplified {
    RawClause::global(cond.iter().map(|l| Term::Lit(l.negate()))).simplify()
}

/// `l1 ∧ … ∧ ln => <A> false` gives `¬l1 ∨ … ∨ ¬ln ∈ U`.
pub fn rw1(c: &Body) -> Result<Simplified, RuleError> {
    let rule = Rule::Rw1;
    expect_kind(rule, 1, c, &[ClauseKind::Positive], "a positive coalition clause")?;
    if !c.disj().is_empty() {
        return Err(RuleError::NonEmptyDisjunction { rule });
    }
    Ok(negated_antecedent(c.cond()))
}

/// `l1 ∧ … ∧ ln => [A] false` gives `¬l1 ∨ … ∨ ¬ln ∈ U`.
pub fn rw2(c: &Body) -> Result<Simplified, RuleError> {
    let rule = Rule::Rw2;
    expect_kind(rule, 1, c, &[ClauseKind::Negative], "a negative coalition clause")?;
    if !c.disj().is_empty() {
        return Err(RuleError::NonEmptyDisjunction { rule });
    }
    Ok(negated_antecedent(c.cond()))
}

/// `C => [] D` gives `C => <Σ> D`: if no outcome can be avoided by the
/// empty coalition, the grand coalition can force it.
pub fn sigma_lift(c: &Body, sigma: &Coalition) -> Result<Simplified, RuleError> {
    let rule = Rule::Sigma;
    expect_kind(rule, 1, c, &[ClauseKind::Negative], "a negative coalition clause")?;
    if !coalition(c).is_empty() {
        return Err(RuleError::SideCondition { rule });
    }
    Ok(RawClause::positive(c.cond().iter().map(Term::Lit), sigma.clone(), c.disj().iter().map(Term::Lit)).simplify())
}

/// Applies `rule` to premises given in schema order.
pub fn apply(rule: Rule, premises: &[&Body], pivot: Option<Lit>, sigma: &Coalition) -> Result<Simplified, RuleError> {
    let arity_error = || RuleError::Arity {
        rule,
        expected: if rule.is_unary() { 1 } else { 2 },
        pivot: if rule.is_unary() { "no" } else { "a" },
        got: premises.len(),
        got_pivot: if pivot.is_some() { "a" } else { "no" },
    };
    match (rule.is_unary(), premises, pivot) {
        (true, [c], None) => match rule {
            Rule::Rw1 => rw1(c),
            Rule::Rw2 => rw2(c),
            _ => sigma_lift(c, sigma),
        },
        (false, [c1, c2], Some(l)) => match rule {
            Rule::Ires1 => ires1(c1, c2, l),
            Rule::Gres1 => gres1(c1, c2, l),
            Rule::Cres1 => cres1(c1, c2, l),
            Rule::Cres2 => cres2(c1, c2, l),
            Rule::Cres3 => cres3(c1, c2, l),
            _ => cres4(c1, c2, l),
        },
        _ => Err(arity_error()),
    }
}
