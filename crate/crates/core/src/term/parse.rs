use crate::ontology::MonoclType;

use super::{MonoclTerm, TermError, KEYWORDS};

pub fn parse_term(text: &str) -> Result<MonoclTerm, TermError> {
    let mut p = Parser { text, pos: 0 };
    let term = p.term()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(term)
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

fn is_ident_start(c: u8) -> bool {
    c.is_ascii_lowercase()
}

fn is_ident_char(c: u8) -> bool {
    c.is_ascii_lowercase() || c.is_ascii_digit() || c == b'-'
}

impl<'a> Parser<'a> {
    fn line_col(&self, offset: usize) -> (usize, usize) {
        let before = &self.text[..offset];
        let line = before.matches('\n').count() + 1;
        let column = before.rfind('\n').map_or(offset, |i| offset - i - 1) + 1;
        (line, column)
    }

    fn error_at(&self, offset: usize, message: impl Into<String>) -> TermError {
        let (line, column) = self.line_col(offset);
        TermError::Syntax {
            offset,
            line,
            column,
            message: message.into(),
        }
    }

    fn error(&self, message: impl Into<String>) -> TermError {
        self.error_at(self.pos, message)
    }

    fn peek(&self) -> Option<u8> {
        self.text.as_bytes().get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), TermError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{}`", c as char)))
        }
    }

    fn unexpected(&self, wanted: &str) -> TermError {
        match self.text[self.pos..].chars().next() {
            None => self.error(format!("expected {wanted}, found end of input")),
            Some(c) => self.error(format!("expected {wanted}, found `{c}`")),
        }
    }

    /// Reads an identifier or keyword at the cursor.
    fn word(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        if !self.peek().is_some_and(is_ident_start) {
            return None;
        }
        while self.peek().is_some_and(is_ident_char) {
            self.pos += 1;
        }
        Some(&self.text[start..self.pos])
    }

    fn term(&mut self) -> Result<MonoclTerm, TermError> {
        self.skip_ws();
        let start = self.pos;
        let Some(word) = self.word() else {
            return Err(self.unexpected("a term"));
        };
        match word {
            "compose" | "product" => {
                let construct = if word == "compose" { "compose" } else { "product" };
                self.expect(b'(')?;
                let mut args = vec![self.term()?];
                while self.eat(b',') {
                    args.push(self.term()?);
                }
                self.expect(b')')?;
                if args.len() < 2 {
                    let (line, column) = self.line_col(start);
                    return Err(TermError::Arity {
                        construct,
                        offset: start,
                        line,
                        column,
                        count: args.len(),
                    });
                }
                Ok(if construct == "compose" {
                    MonoclTerm::Compose(args)
                } else {
                    MonoclTerm::Product(args)
                })
            }
            "id" | "copy" | "delete" => {
                self.expect(b'[')?;
                let t = self.ty()?;
                self.expect(b']')?;
                Ok(match word {
                    "id" => MonoclTerm::Id(t),
                    "copy" => MonoclTerm::Copy(t),
                    _ => MonoclTerm::Delete(t),
                })
            }
            "braid" | "coerce" => {
                self.expect(b'[')?;
                let a = self.ty()?;
                self.expect(b',')?;
                let b = self.ty()?;
                self.expect(b']')?;
                Ok(if word == "braid" {
                    MonoclTerm::Braid(a, b)
                } else {
                    MonoclTerm::Coerce(a, b)
                })
            }
            id => Ok(MonoclTerm::Generator(id.to_owned())),
        }
    }

    fn ty(&mut self) -> Result<MonoclType, TermError> {
        self.skip_ws();
        let start = self.pos;
        if self.eat(b'(') {
            if self.eat(b')') {
                return Ok(MonoclType::unit());
            }
            let mut t = self.ty()?;
            while self.eat(b'*') {
                t = t.concat(&self.ty()?);
            }
            self.expect(b')')?;
            return Ok(t);
        }
        match self.word() {
            Some(w) if KEYWORDS.contains(&w) => {
                Err(self.error_at(start, format!("`{w}` is a keyword, not a type")))
            }
            Some(w) => Ok(MonoclType::basic(w)),
            None => Err(self.unexpected("a type")),
        }
    }
}
