//! Recursive-descent parser for the formula grammar.
//!
//! ```text
//! iff   := imp ("<->" imp)*        left-associative
//! imp   := or ("->" imp)?          right-associative
//! or    := and ("|" and)*
//! and   := unary ("&" unary)*
//! unary := "~" unary | atom
//! atom  := IDENT | "T" | "F" | "(" iff ")"
//! ```

use super::{Formula, FormulaError};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, FormulaError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'~' => Tok::Not,
            b'&' => Tok::And,
            b'|' => Tok::Or,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Implies
            }
            b'<' if src[i..].starts_with("<->") => {
                i += 2;
                Tok::Iff
            }
            c if c == b'_' || c.is_ascii_alphabetic() => {
                while i + 1 < bytes.len() && (bytes[i + 1] == b'_' || bytes[i + 1].is_ascii_alphanumeric()) {
                    i += 1;
                }
                match &src[start..=i] {
                    "T" => Tok::True,
                    "F" => Tok::False,
                    name => Tok::Ident(name.to_string()),
                }
            }
            _ => {
                return Err(FormulaError::Parse {
                    pos: i,
                    msg: format!("unexpected character `{}`", src[i..].chars().next().unwrap()),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.len)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn error<T>(&self, msg: &str) -> Result<T, FormulaError> {
        Err(FormulaError::Parse { pos: self.pos(), msg: msg.to_string() })
    }

    fn iff(&mut self) -> Result<Formula, FormulaError> {
        let mut lhs = self.imp()?;
        while self.eat(&Tok::Iff) {
            lhs = Formula::iff(lhs, self.imp()?);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, FormulaError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Implies) {
            Ok(Formula::implies(lhs, self.imp()?))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula, FormulaError> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Or) {
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, FormulaError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::And) {
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, FormulaError> {
        if self.eat(&Tok::Not) {
            return Ok(Formula::not(self.unary()?));
        }
        let tok = match self.peek() {
            Some(t) => t.clone(),
            None => return self.error("unexpected end of input"),
        };
        self.at += 1;
        match tok {
            Tok::Ident(name) => Ok(Formula::Var(name)),
            Tok::True => Ok(Formula::Const(true)),
            Tok::False => Ok(Formula::Const(false)),
            Tok::LParen => {
                let inner = self.iff()?;
                if !self.eat(&Tok::RParen) {
                    return self.error("expected `)`");
                }
                Ok(inner)
            }
            _ => {
                self.at -= 1;
                self.error("expected a variable, constant, `~` or `(`")
            }
        }
    }
}

pub fn parse(src: &str) -> Result<Formula, FormulaError> {
    let mut p = Parser { toks: lex(src)?, at: 0, len: src.len() };
    let f = p.iff()?;
    if p.at != p.toks.len() {
        return p.error("trailing input");
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Formula {
        Formula::var(s)
    }

    #[test]
    fn precedence() {
        assert_eq!(
            parse("~a & b | c -> d <-> e").unwrap(),
            Formula::iff(
                Formula::implies(
                    Formula::or(Formula::and(Formula::not(v("a")), v("b")), v("c")),
                    v("d")
                ),
                v("e")
            )
        );
    }

    #[test]
    fn associativity() {
        assert_eq!(
            parse("a -> b -> c").unwrap(),
            Formula::implies(v("a"), Formula::implies(v("b"), v("c")))
        );
        assert_eq!(parse("a | b | c").unwrap(), Formula::or(Formula::or(v("a"), v("b")), v("c")));
        assert_eq!(
            parse("a <-> b <-> c").unwrap(),
            Formula::iff(Formula::iff(v("a"), v("b")), v("c"))
        );
    }

    #[test]
    fn constants_and_identifiers() {
        assert_eq!(parse("T").unwrap(), Formula::Const(true));
        assert_eq!(parse("F").unwrap(), Formula::Const(false));
        assert_eq!(parse("Tx").unwrap(), v("Tx"));
        assert_eq!(parse("_z0 & x_1").unwrap(), Formula::and(v("_z0"), v("x_1")));
    }

    #[test]
    fn errors() {
        assert!(matches!(parse(""), Err(FormulaError::Parse { pos: 0, .. })));
        assert!(matches!(parse("a &"), Err(FormulaError::Parse { pos: 3, .. })));
        assert!(matches!(parse("(a"), Err(FormulaError::Parse { .. })));
        assert!(matches!(parse("a b"), Err(FormulaError::Parse { pos: 2, .. })));
        assert!(matches!(parse("a + b"), Err(FormulaError::Parse { pos: 2, .. })));
        assert!(matches!(parse("1x"), Err(FormulaError::Parse { pos: 0, .. })));
    }
}
