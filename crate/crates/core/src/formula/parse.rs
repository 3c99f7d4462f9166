use thiserror::Error;

use super::{Agent, Coalition, Formula};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty input")]
    Empty,
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
}

impl ParseError {
    fn at(pos: Pos, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line: pos.line,
            column: pos.column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Nat(u64),
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Arrow,
    LAngle,
    RAngle,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Nat(n) => format!("`{n}`"),
            Tok::True => "`true`".into(),
            Tok::False => "`false`".into(),
            Tok::Not => "`~`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Implies => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::Arrow => "`=>`".into(),
            Tok::LAngle => "`<`".into(),
            Tok::RAngle => "`>`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
        }
    }
}

/// Tokenizes `text`. With `allow_underscore`, identifiers may also start
/// with `_` (used by the clause reader, where renaming symbols appear).
pub(crate) fn lex(text: &str, allow_underscore: bool) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let mut pos = Pos { line: 1, column: 1 };

    fn bump(chars: &mut std::iter::Peekable<std::str::Chars<'_>>, pos: &mut Pos) -> Option<char> {
        let c = chars.next()?;
        if c == '\n' {
            pos.line += 1;
            pos.column = 1;
        } else {
            pos.column += 1;
        }
        Some(c)
    }

    while let Some(&c) = chars.peek() {
        let start = pos;
        match c {
            c if c.is_whitespace() => {
                bump(&mut chars, &mut pos);
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump(&mut chars, &mut pos);
                }
            }
            'a'..='z' | '_' if c != '_' || allow_underscore => {
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        word.push(c);
                        bump(&mut chars, &mut pos);
                    } else {
                        break;
                    }
                }
                let tok = match word.as_str() {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    _ => Tok::Ident(word),
                };
                out.push((tok, start));
            }
            '0'..='9' => {
                let mut n: u64 = 0;
                while let Some(&c) = chars.peek() {
                    let Some(d) = c.to_digit(10) else { break };
                    n = n
                        .checked_mul(10)
                        .and_then(|n| n.checked_add(u64::from(d)))
                        .ok_or_else(|| ParseError::at(start, "number too large"))?;
                    bump(&mut chars, &mut pos);
                }
                out.push((Tok::Nat(n), start));
            }
            _ => {
                bump(&mut chars, &mut pos);
                let tok = match c {
                    '~' => Tok::Not,
                    '&' => Tok::And,
                    '|' => Tok::Or,
                    '>' => Tok::RAngle,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    '-' if chars.peek() == Some(&'>') => {
                        bump(&mut chars, &mut pos);
                        Tok::Implies
                    }
                    '=' if chars.peek() == Some(&'>') => {
                        bump(&mut chars, &mut pos);
                        Tok::Arrow
                    }
                    '<' => {
                        let mut look = chars.clone();
                        if look.next() == Some('-') && look.next() == Some('>') {
                            bump(&mut chars, &mut pos);
                            bump(&mut chars, &mut pos);
                            Tok::Iff
                        } else {
                            Tok::LAngle
                        }
                    }
                    other => {
                        return Err(ParseError::at(start, format!("unexpected character `{other}`")))
                    }
                };
                out.push((tok, start));
            }
        }
    }
    Ok(out)
}

/// Recursive-descent parser over a token slice; shared with the clause reader.
pub(crate) struct Parser<'a> {
    toks: &'a [(Tok, Pos)],
    at: usize,
    end: Pos,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(toks: &'a [(Tok, Pos)], end: Pos) -> Self {
        Parser { toks, at: 0, end }
    }

    pub(crate) fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    pub(crate) fn pos(&self) -> Pos {
        self.toks.get(self.at).map_or(self.end, |&(_, p)| p)
    }

    pub(crate) fn is_done(&self) -> bool {
        self.at >= self.toks.len()
    }

    pub(crate) fn next(&mut self) -> Option<&'a Tok> {
        let t = self.peek();
        self.at += 1;
        t
    }

    pub(crate) fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, tok: &Tok) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    pub(crate) fn unexpected(&self, wanted: &str) -> ParseError {
        match self.peek() {
            Some(t) => ParseError::at(self.pos(), format!("expected {wanted}, found {}", t.describe())),
            None => ParseError::at(self.pos(), format!("expected {wanted}, found end of input")),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.implication()?;
        while self.eat(&Tok::Iff) {
            let rhs = self.implication()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Implies) {
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.eat(&Tok::Or) {
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::And) {
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Not) => {
                self.at += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::LAngle) => {
                self.at += 1;
                let c = self.agents(&Tok::RAngle)?;
                Ok(Formula::coop(c, self.unary()?))
            }
            Some(Tok::LBracket) => {
                self.at += 1;
                let c = self.agents(&Tok::RBracket)?;
                Ok(Formula::dual(c, self.unary()?))
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let f = self.formula()?;
                self.expect(&Tok::RParen)?;
                Ok(f)
            }
            Some(Tok::True) => {
                self.at += 1;
                Ok(Formula::True)
            }
            Some(Tok::False) => {
                self.at += 1;
                Ok(Formula::False)
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                Ok(Formula::Prop(name.clone()))
            }
            _ => Err(self.unexpected("a formula")),
        }
    }

    /// Parses `a1,...,ak` up to and including `close`.
    pub(crate) fn agents(&mut self, close: &Tok) -> Result<Coalition, ParseError> {
        let mut agents = Vec::new();
        if self.eat(close) {
            return Ok(Coalition::empty());
        }
        loop {
            let pos = self.pos();
            match self.next() {
                Some(Tok::Nat(n)) => {
                    let agent = u32::try_from(*n)
                        .ok()
                        .and_then(Agent::new)
                        .ok_or_else(|| ParseError::at(pos, format!("invalid agent id {n}; ids start at 1")))?;
                    agents.push(agent);
                }
                _ => {
                    self.at -= 1;
                    return Err(self.unexpected("an agent id"));
                }
            }
            if self.eat(close) {
                return Ok(Coalition::from_agents(agents));
            }
            self.expect(&Tok::Comma)?;
        }
    }

}

pub(crate) fn end_pos(text: &str) -> Pos {
    let line = text.matches('\n').count() + 1;
    let column = text.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    Pos { line, column }
}

/// Parses a formula. Whitespace and `#` comments are ignored.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text, false)?;
    if toks.is_empty() {
        return Err(ParseError::Empty);
    }
    let mut p = Parser::new(&toks, end_pos(text));
    let f = p.formula()?;
    if !p.is_done() {
        return Err(p.unexpected("end of input"));
    }
    Ok(f)
}
