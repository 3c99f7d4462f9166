use super::Formula;

pub(super) fn nnf(f: &Formula) -> Formula {
    push(f, true)
}

/// NNF of `f` when `positive`, of `~f` otherwise.
fn push(f: &Formula, positive: bool) -> Formula {
    match (f, positive) {
        (Formula::True, true) | (Formula::False, false) => Formula::True,
        (Formula::True, false) | (Formula::False, true) => Formula::False,
        (Formula::Prop(_), true) => f.clone(),
        (Formula::Prop(_), false) => Formula::not(f.clone()),
        (Formula::Not(a), _) => push(a, !positive),
        (Formula::And(a, b), true) => and(push(a, true), push(b, true)),
        (Formula::And(a, b), false) => or(push(a, false), push(b, false)),
        (Formula::Or(a, b), true) => or(push(a, true), push(b, true)),
        (Formula::Or(a, b), false) => and(push(a, false), push(b, false)),
        (Formula::Implies(a, b), true) => or(push(a, false), push(b, true)),
        (Formula::Implies(a, b), false) => and(push(a, true), push(b, false)),
        (Formula::Iff(a, b), true) => and(
            or(push(a, false), push(b, true)),
            or(push(a, true), push(b, false)),
        ),
        (Formula::Iff(a, b), false) => or(
            and(push(a, true), push(b, false)),
            and(push(a, false), push(b, true)),
        ),
        (Formula::Coop(c, a), true) => Formula::coop(c.clone(), push(a, true)),
        (Formula::Coop(c, a), false) => Formula::dual(c.clone(), push(a, false)),
        (Formula::DualCoop(c, a), true) => Formula::dual(c.clone(), push(a, true)),
        (Formula::DualCoop(c, a), false) => Formula::coop(c.clone(), push(a, false)),
    }
}

fn and(a: Formula, b: Formula) -> Formula {
    match (a, b) {
        (Formula::True, x) | (x, Formula::True) => x,
        (Formula::False, x) | (x, Formula::False) if !x.mentions_agents() => Formula::False,
        (a, b) => Formula::and(a, b),
    }
}

fn or(a: Formula, b: Formula) -> Formula {
    match (a, b) {
        (Formula::False, x) | (x, Formula::False) => x,
        (Formula::True, x) | (x, Formula::True) if !x.mentions_agents() => Formula::True,
        (a, b) => Formula::or(a, b),
    }
}
