//! Text syntax: `term := var | '(' term '*' term ')'`, with the outermost
//! parentheses optional and whitespace ignored. `⋆` is accepted for `*`.

use super::{Term, VarId};
use crate::error::{Error, Result};

pub fn parse_term(text: &str) -> Result<Term> {
    let mut parser = Parser { text, pos: 0 };
    parser.skip_ws();
    let first = parser.operand()?;
    parser.skip_ws();
    let term = if parser.eat_star() {
        let right = parser.operand()?;
        Term::op(first, right)
    } else {
        first
    };
    parser.skip_ws();
    if parser.pos < text.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(term)
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) {
        if let Some(c) = self.peek() {
            self.pos += c.len_utf8();
        }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn error(&self, message: &str) -> Error {
        let found = match self.peek() {
            Some(c) => format!("{message} (found `{c}`)"),
            None => format!("{message} (found end of input)"),
        };
        Error::Syntax { position: self.pos, message: found }
    }

    fn eat_star(&mut self) -> bool {
        self.skip_ws();
        if matches!(self.peek(), Some('*' | '⋆')) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn operand(&mut self) -> Result<Term> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.bump();
                let left = self.operand()?;
                if !self.eat_star() {
                    return Err(self.error("expected `*`"));
                }
                let right = self.operand()?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.bump();
                Ok(Term::op(left, right))
            }
            Some(c) if c.is_ascii_alphabetic() || c == 'χ' => {
                let start = self.pos;
                if c == 'χ' {
                    self.bump();
                } else {
                    while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
                        self.bump();
                    }
                }
                let name = &self.text[start..self.pos];
                VarId::new(name)
                    .map(Term::Var)
                    .map_err(|_| Error::Syntax { position: start, message: format!("bad variable `{name}`") })
            }
            _ => Err(self.error("expected a variable or `(`")),
        }
    }
}
