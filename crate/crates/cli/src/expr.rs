//! Surface syntax for hyper-power-set elements.
//!
//! ```text
//! expr   := term ("|" term)*
//! term   := factor ("&" factor)*
//! factor := atom | "0" | "(" expr ")"
//! atom   := name | "t" digits
//! ```
//!
//! `t1` is the first atom. Names come from the frame's name table and take
//! precedence over the `t` form.

use dsmt_core::hyperlattice::{Element, LatticeError};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Atom names of a frame, `t1..tn` when none are given.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    n: usize,
    names: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameError {
    #[error("frame size must be at least 1")]
    Empty,
    #[error("expected {expected} atom names, got {found}")]
    NameCount { expected: usize, found: usize },
    #[error("invalid atom name `{0}`")]
    InvalidName(String),
    #[error("duplicate atom name `{0}`")]
    DuplicateName(String),
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn default_index(s: &str) -> Option<usize> {
    let digits = s.strip_prefix('t')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

impl Frame {
    pub fn new(n: usize, names: Option<Vec<String>>) -> Result<Self, FrameError> {
        if n == 0 {
            return Err(FrameError::Empty);
        }
        let names = match names {
            None => Vec::new(),
            Some(names) => {
                if names.len() != n {
                    return Err(FrameError::NameCount { expected: n, found: names.len() });
                }
                for (i, name) in names.iter().enumerate() {
                    // A name spelled like a default atom must denote that atom.
                    let clashes = default_index(name).is_some_and(|k| k != i + 1);
                    if !is_identifier(name) || clashes {
                        return Err(FrameError::InvalidName(name.clone()));
                    }
                    if names[..i].contains(name) {
                        return Err(FrameError::DuplicateName(name.clone()));
                    }
                }
                names
            }
        };
        Ok(Frame { n, names })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn render(&self, e: &Element) -> String {
        e.display_with(&self.names)
    }

    fn resolve(&self, word: &str) -> Result<Element, ExprError> {
        if let Some(i) = self.names.iter().position(|x| x == word) {
            return Ok(Element::atom(i));
        }
        match default_index(word) {
            Some(k) if (1..=self.n).contains(&k) => Ok(Element::atom(k - 1)),
            _ => Err(ExprError::UnknownAtom(word.to_string())),
        }
    }

    pub fn parse(&self, text: &str) -> Result<Element, ExprError> {
        let mut parser = Parser { frame: self, text, pos: 0 };
        let e = parser.expr()?;
        parser.skip_ws();
        if parser.pos < text.len() {
            return Err(parser.error("unexpected input"));
        }
        Ok(e)
    }
}

struct Parser<'a> {
    frame: &'a Frame,
    text: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn error(&self, message: &str) -> ExprError {
        ExprError::Syntax { pos: self.pos, message: message.to_string() }
    }

    fn expr(&mut self) -> Result<Element, ExprError> {
        let mut acc = self.term()?;
        while self.peek() == Some('|') {
            self.pos += 1;
            acc = acc.join(&self.term()?);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Element, ExprError> {
        let mut acc = self.factor()?;
        while self.peek() == Some('&') {
            self.pos += 1;
            acc = acc.meet(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Element, ExprError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some('0') => {
                self.pos += 1;
                Ok(Element::empty())
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let start = self.pos;
                let len = self.text[start..]
                    .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
                    .unwrap_or(self.text.len() - start);
                self.pos += len;
                self.frame.resolve(&self.text[start..self.pos])
            }
            Some(_) => Err(self.error("expected an atom, `0` or `(`")),
            None => Err(self.error("unexpected end of expression")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(i: usize) -> Element {
        Element::atom(i - 1)
    }

    #[test]
    fn precedence_and_grouping() {
        let f = Frame::new(3, None).unwrap();
        assert_eq!(f.parse("t1 & t2").unwrap(), t(1).meet(&t(2)));
        assert_eq!(f.parse("t1 | t2 & t3").unwrap(), t(1).join(&t(2).meet(&t(3))));
        assert_eq!(
            f.parse("(t1|t2) & t3").unwrap(),
            t(1).meet(&t(3)).join(&t(2).meet(&t(3)))
        );
        assert_eq!(f.parse(" 0 ").unwrap(), Element::empty());
        assert_eq!(f.parse("t1 | 0").unwrap(), t(1));
    }

    #[test]
    fn names() {
        let f = Frame::new(3, Some(vec!["M".into(), "C".into(), "T".into()])).unwrap();
        assert_eq!(f.parse("M & C").unwrap(), t(1).meet(&t(2)));
        assert_eq!(f.parse("t3").unwrap(), t(3));
        assert_eq!(f.render(&t(1).meet(&t(3)).join(&t(2))), "M&T|C");
        assert_eq!(f.parse("X"), Err(ExprError::UnknownAtom("X".into())));
        assert!(Frame::new(2, Some(vec!["t2".into(), "b".into()])).is_err());
        assert!(Frame::new(2, Some(vec!["a".into(), "a".into()])).is_err());
        assert!(Frame::new(2, Some(vec!["a b".into(), "c".into()])).is_err());
        assert!(Frame::new(2, Some(vec!["a".into()])).is_err());
    }

    #[test]
    fn errors_carry_positions() {
        let f = Frame::new(2, None).unwrap();
        assert_eq!(f.parse("t1 &"), Err(ExprError::Syntax { pos: 4, message: "unexpected end of expression".into() }));
        assert!(matches!(f.parse("(t1 | t2"), Err(ExprError::Syntax { pos: 8, .. })));
        assert!(matches!(f.parse("t1 t2"), Err(ExprError::Syntax { pos: 3, .. })));
        assert!(matches!(f.parse("t1 + t2"), Err(ExprError::Syntax { pos: 3, .. })));
        assert_eq!(f.parse("t3"), Err(ExprError::UnknownAtom("t3".into())));
        assert_eq!(f.parse("t0"), Err(ExprError::UnknownAtom("t0".into())));
    }
}
