//! Concrete syntax for Hennessy-Milner formulas.
//!
//! ```text
//! F ::= 'tt' | 'ff' | '<' LABEL '>' F | '[' LABEL ']' F | '!' F
//!     | F '&' F | F '|' F | '(' F ')'
//! ```
//!
//! Prefix operators (`!`, modalities) bind tightest, then `&`, then `|`; both
//! binary operators associate to the left. `ff` is read as `!tt`.

use super::Formula;
use crate::error::FormulaError;
use crate::lts::Label;

const RESERVED: &[char] = &['<', '>', '[', ']', '!', '&', '|', '(', ')', '"'];

fn is_label_char(c: char) -> bool {
    !c.is_whitespace() && !RESERVED.contains(&c)
}

pub fn parse_formula(text: &str) -> Result<Formula, FormulaError> {
    let mut p = Parser { text, pos: 0 };
    let f = p.disjunction()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(p.error(format!("unexpected {:?}", p.peek().unwrap_or(' '))));
    }
    Ok(f)
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> FormulaError {
        FormulaError {
            position: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), FormulaError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected {c:?}")))
        }
    }

    fn word(&mut self) -> &str {
        self.skip_ws();
        let start = self.pos;
        let len: usize = self.text[start..]
            .chars()
            .take_while(|c| is_label_char(*c))
            .map(char::len_utf8)
            .sum();
        self.pos += len;
        &self.text[start..self.pos]
    }

    fn disjunction(&mut self) -> Result<Formula, FormulaError> {
        let mut f = self.conjunction()?;
        while self.eat('|') {
            f = Formula::or(f, self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula, FormulaError> {
        let mut f = self.unary()?;
        while self.eat('&') {
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula, FormulaError> {
        if self.eat('!') {
            return Ok(Formula::not(self.unary()?));
        }
        if self.eat('<') {
            let label = self.label()?;
            self.expect('>')?;
            return Ok(Formula::diamond(label, self.unary()?));
        }
        if self.eat('[') {
            let label = self.label()?;
            self.expect(']')?;
            return Ok(Formula::boxed(label, self.unary()?));
        }
        if self.eat('(') {
            let f = self.disjunction()?;
            self.expect(')')?;
            return Ok(f);
        }
        let start = self.pos;
        match self.word() {
            "tt" => Ok(Formula::Top),
            "ff" => Ok(Formula::not(Formula::Top)),
            "" => Err(self.error(match self.peek() {
                Some(c) => format!("unexpected {c:?}, expected a formula"),
                None => "unexpected end of input, expected a formula".to_string(),
            })),
            other => Err(FormulaError {
                position: start,
                message: format!("unexpected {other:?}, expected `tt`, `ff` or an operator"),
            }),
        }
    }

    fn label(&mut self) -> Result<Label, FormulaError> {
        let name = self.word().to_string();
        if name.is_empty() {
            return Err(self.error("empty label inside modality"));
        }
        Label::new(&name).map_err(|e| self.error(e.to_string()))
    }
}
