//! Model files.
//!
//! ```text
//! agents: 1,2
//! states: 2
//! init: 0
//! moves: 1 0 2        # agent 1 has two moves at state 0; the default is 1
//! delta: 0 (0,0) 1
//! delta: 0 (1,0) 0
//! delta: 1 (0,0) 1
//! val: 1 p q
//! ```

use std::collections::BTreeSet;

use thiserror::Error;

use super::{Cgm, ModelError};
use crate::formula::{Agent, Coalition};
use crate::snf::text::parse_agent_list;

#[derive(Debug, Error)]
pub enum ModelFileError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing `{0}` line")]
    Missing(&'static str),
    #[error("state {state}: no transition for move vector ({vector})")]
    Partial { state: usize, vector: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn nat<T: std::str::FromStr>(line: usize, s: &str) -> Result<T, ModelFileError> {
    s.trim().parse().map_err(|_| ModelFileError::Syntax {
        line,
        message: format!("expected a number, found `{}`", s.trim()),
    })
}

pub(super) fn parse_model(text: &str) -> Result<Cgm, ModelFileError> {
    let mut agents = Coalition::empty();
    let mut states: Option<usize> = None;
    let mut init = 0;
    let mut moves_lines = Vec::new();
    let mut delta_lines = Vec::new();
    let mut val_lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line.split_once(':').ok_or_else(|| ModelFileError::Syntax {
            line: line_no,
            message: "expected `key: value`".into(),
        })?;
        let rest = rest.trim();
        match key.trim() {
            "agents" => {
                agents = parse_agent_list(rest).map_err(|message| ModelFileError::Syntax { line: line_no, message })?;
            }
            "states" => states = Some(nat(line_no, rest)?),
            "init" => init = nat(line_no, rest)?,
            "moves" => moves_lines.push((line_no, rest)),
            "delta" => delta_lines.push((line_no, rest)),
            "val" => val_lines.push((line_no, rest)),
            other => {
                return Err(ModelFileError::Syntax {
                    line: line_no,
                    message: format!("unknown key `{other}`"),
                })
            }
        }
    }
    let n = states.ok_or(ModelFileError::Missing("states"))?;
    let order: Vec<Agent> = agents.iter().collect();
    let bad = |line: usize, message: String| ModelFileError::Syntax { line, message };

    let mut moves = vec![vec![1u32; order.len()]; n];
    for (line, rest) in moves_lines {
        let f: Vec<&str> = rest.split_whitespace().collect();
        let [a, s, k] = f[..] else {
            return Err(bad(line, "expected `moves: <agent> <state> <count>`".into()));
        };
        let a = Agent::new(nat(line, a)?).ok_or_else(|| bad(line, "agent ids start at 1".into()))?;
        let i = order
            .binary_search(&a)
            .map_err(|_| bad(line, format!("agent {a} is not declared")))?;
        let s: usize = nat(line, s)?;
        if s >= n {
            return Err(ModelError::StateOutOfRange(s).into());
        }
        moves[s][i] = nat(line, k)?;
    }

    let mut delta: Vec<Vec<Option<usize>>> = moves
        .iter()
        .map(|row| vec![None; row.iter().map(|&k| k as usize).product()])
        .collect();
    for (line, rest) in delta_lines {
        let (s, rest) = rest.split_once('(').ok_or_else(|| bad(line, "expected `delta: <state> (<moves>) <state>`".into()))?;
        let (vector, target) = rest.split_once(')').ok_or_else(|| bad(line, "unterminated move vector".into()))?;
        let s: usize = nat(line, s)?;
        let target: usize = nat(line, target)?;
        if s >= n {
            return Err(ModelError::StateOutOfRange(s).into());
        }
        let digits: Vec<u32> = if vector.trim().is_empty() {
            Vec::new()
        } else {
            vector.split(',').map(|d| nat(line, d)).collect::<Result<_, _>>()?
        };
        if digits.len() != order.len() {
            return Err(bad(line, format!("expected {} moves in the vector", order.len())));
        }
        let mut v = 0usize;
        for (i, (&m, &k)) in digits.iter().zip(&moves[s]).enumerate() {
            if m >= k {
                return Err(ModelError::BadMove {
                    agent: order[i],
                    state: s,
                    choice: m,
                }
                .into());
            }
            v = v * k as usize + m as usize;
        }
        delta[s][v] = Some(target);
    }
    let mut table = Vec::with_capacity(n);
    for (s, row) in delta.into_iter().enumerate() {
        let mut out = Vec::with_capacity(row.len());
        for (v, t) in row.into_iter().enumerate() {
            match t {
                Some(t) => out.push(t),
                None => {
                    let mut digits = vec![0; order.len()];
                    let mut rest = v;
                    for i in (0..order.len()).rev() {
                        digits[i] = rest % moves[s][i] as usize;
                        rest /= moves[s][i] as usize;
                    }
                    let vector: Vec<String> = digits.iter().map(usize::to_string).collect();
                    return Err(ModelFileError::Partial {
                        state: s,
                        vector: vector.join(","),
                    });
                }
            }
        }
        table.push(out);
    }

    let mut valuation = vec![BTreeSet::new(); n];
    for (line, rest) in val_lines {
        let mut f = rest.split_whitespace();
        let s: usize = nat(line, f.next().unwrap_or(""))?;
        if s >= n {
            return Err(ModelError::StateOutOfRange(s).into());
        }
        valuation[s].extend(f.map(str::to_owned));
    }
    Ok(Cgm::new(&agents, init, moves, table, valuation)?)
}
