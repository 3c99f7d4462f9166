//! Reader for the line-oriented problem format.
//!
//! ```text
//! # light switch
//! agents: 1,2          (optional; widens the agent universe)
//! I:
//! t0
//! U:
//! ~t0 | ~l
//! N:
//! tog1 & ~l => <1> l
//! true => [] false
//! ```

use thiserror::Error;

use super::{CoalitionProblem, RawClause, SetTag, SymbolTable, Term};
use crate::formula::parse::{end_pos, lex, Parser, Tok};
use crate::formula::{Agent, Coalition, ParseError};

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("line {line}: {source}")]
    Clause { line: usize, source: ParseError },
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}

fn terms(p: &mut Parser<'_>, sep: &Tok, symbols: &mut SymbolTable) -> Result<Vec<Term>, ParseError> {
    let mut out = vec![term(p, symbols)?];
    while p.eat(sep) {
        out.push(term(p, symbols)?);
    }
    Ok(out)
}

fn term(p: &mut Parser<'_>, symbols: &mut SymbolTable) -> Result<Term, ParseError> {
    match p.peek() {
        Some(Tok::Not) => {
            p.next();
            Ok(match term(p, symbols)? {
                Term::Lit(l) => Term::Lit(l.negate()),
                Term::True => Term::False,
                Term::False => Term::True,
            })
        }
        Some(Tok::True) => {
            p.next();
            Ok(Term::True)
        }
        Some(Tok::False) => {
            p.next();
            Ok(Term::False)
        }
        Some(Tok::Ident(name)) => {
            p.next();
            Ok(Term::Lit(super::Lit::new(symbols.intern(name), false)))
        }
        _ => Err(p.unexpected("a literal")),
    }
}

/// Parses one clause. In `I` and `U` a clause is a disjunction of literals;
/// in `N` it is `C => <A> D` or `C => [A] D`.
pub fn parse_clause(set: SetTag, text: &str, symbols: &mut SymbolTable) -> Result<RawClause, ParseError> {
    let toks = lex(text, true)?;
    if toks.is_empty() {
        return Err(ParseError::Empty);
    }
    let mut p = Parser::new(&toks, end_pos(text));
    let raw = match set {
        SetTag::I => RawClause::initial(terms(&mut p, &Tok::Or, symbols)?),
        SetTag::U => RawClause::global(terms(&mut p, &Tok::Or, symbols)?),
        SetTag::N => {
            let cond = terms(&mut p, &Tok::And, symbols)?;
            p.expect(&Tok::Arrow)?;
            let positive = match p.peek() {
                Some(Tok::LAngle) => true,
                Some(Tok::LBracket) => false,
                _ => return Err(p.unexpected("`<` or `[`")),
            };
            p.next();
            let coalition = p.agents(if positive { &Tok::RAngle } else { &Tok::RBracket })?;
            let disj = terms(&mut p, &Tok::Or, symbols)?;
            if positive {
                RawClause::positive(cond, coalition, disj)
            } else {
                RawClause::negative(cond, coalition, disj)
            }
        }
    };
    if !p.is_done() {
        return Err(p.unexpected("end of clause"));
    }
    Ok(raw)
}

pub(crate) fn parse_agent_list(text: &str) -> Result<Coalition, String> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Coalition::empty());
    }
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<u32>()
                .ok()
                .and_then(Agent::new)
                .ok_or_else(|| format!("invalid agent id `{}`", s.trim()))
        })
        .collect()
}

fn section_header(line: &str) -> Option<(SetTag, &str)> {
    let (head, rest) = line.split_once(':')?;
    let tag = match head.trim() {
        "I" => SetTag::I,
        "U" => SetTag::U,
        "N" => SetTag::N,
        _ => return None,
    };
    Some((tag, rest))
}

/// Parses a problem file. Tautologous clauses are dropped on load.
pub fn parse_problem(name: &str, text: &str) -> Result<CoalitionProblem, ProblemError> {
    let mut problem = CoalitionProblem::new(name);
    let mut section = None;
    for (i, raw_line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("agents:") {
            let agents = parse_agent_list(rest).map_err(|message| ProblemError::Format { line: line_no, message })?;
            problem.declare_agents(&agents);
            continue;
        }
        let body = match section_header(line) {
            Some((tag, rest)) => {
                section = Some(tag);
                rest.trim()
            }
            None => line,
        };
        if body.is_empty() {
            continue;
        }
        let Some(tag) = section else {
            return Err(ProblemError::Format {
                line: line_no,
                message: "clause outside of an I:, U: or N: section".into(),
            });
        };
        let raw = parse_clause(tag, body, problem.symbols_mut())
            .map_err(|source| ProblemError::Clause { line: line_no, source })?;
        problem.push_raw(raw);
    }
    Ok(problem)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::snf::{Body, ClauseKind, LitSet};

    #[test]
    fn reads_sections_and_constants() {
        let text = "# demo\nagents: 3\nI:\nt0\nU:\n~t0 | ~l\np | ~p\nN:\ntog1 & ~l => <1> l\ntrue => [] false\nU: ~q | false\n";
        let problem = parse_problem("demo", text).unwrap();
        assert_eq!(problem.len(), 5, "the tautology p | ~p is dropped");
        assert_eq!(problem.sigma(), &Coalition::of(&[1, 3]));
        let kinds: Vec<_> = problem.clauses().iter().map(|c| c.kind()).collect();
        assert_eq!(
            kinds,
            [
                ClauseKind::Initial,
                ClauseKind::Global,
                ClauseKind::Positive,
                ClauseKind::Negative,
                ClauseKind::Global
            ]
        );
        let neg = &problem.clauses()[3].body;
        assert_eq!(
            neg,
            &Body::Negative {
                cond: LitSet::default(),
                coalition: Coalition::empty(),
                disj: LitSet::default()
            }
        );
        let reparsed = parse_problem("again", &problem.to_text()).unwrap();
        let bodies = |p: &CoalitionProblem| {
            let mut v: Vec<String> = p.clauses().iter().map(|c| c.body.display(p.symbols()).to_string()).collect();
            v.sort();
            v
        };
        assert_eq!(bodies(&reparsed), bodies(&problem));
        assert_eq!(reparsed.sigma(), problem.sigma());
    }

    #[test]
    fn reports_line_numbers() {
        match parse_problem("x", "I:\np\nN:\np => <1 q\n") {
            Err(ProblemError::Clause { line: 4, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse_problem("x", "p | q\n") {
            Err(ProblemError::Format { line: 1, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(parse_problem("x", "agents: 0\n").is_err());
        assert!(parse_problem("x", "U:\np => <1> q\n").is_err());
        assert!(parse_problem("x", "N:\np | q\n").is_err());
    }
}
