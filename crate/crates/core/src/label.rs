//! Basis labels.
//!
//! Labels are opaque to the algebra: a [`crate::relalg::FinBasis`] only cares
//! that they are distinct. They do carry enough structure to print and parse
//! the canonical forms used in matrix headers, `(a,b)` for pairs and
//! `[a,b,...]` for lists, so that any printed label pastes back as input.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A basis element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    /// A bare token such as `0`, `1` or `0110`.
    Atom(String),
    /// The single inhabitant of the unit type, printed `()`.
    Unit,
    Pair(Box<Label>, Box<Label>),
    List(Vec<Label>),
    /// Left injection into a coproduct, printed `inl(x)`.
    Inl(Box<Label>),
    /// Right injection into a coproduct, printed `inr(x)`.
    Inr(Box<Label>),
}

impl Label {
    pub fn atom(s: impl Into<String>) -> Self {
        Label::Atom(s.into())
    }

    /// The bit `0` or `1`.
    pub fn bit(b: bool) -> Self {
        Label::Atom(if b { "1" } else { "0" }.to_string())
    }

    pub fn pair(a: Label, b: Label) -> Self {
        Label::Pair(Box::new(a), Box::new(b))
    }

    pub fn list(items: Vec<Label>) -> Self {
        Label::List(items)
    }

    pub fn inl(x: Label) -> Self {
        Label::Inl(Box::new(x))
    }

    pub fn inr(x: Label) -> Self {
        Label::Inr(Box::new(x))
    }

    pub fn as_pair(&self) -> Option<(&Label, &Label)> {
        match self {
            Label::Pair(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Label]> {
        match self {
            Label::List(xs) => Some(xs),
            _ => None,
        }
    }

    pub fn as_bit(&self) -> Option<bool> {
        match self {
            Label::Atom(s) if s == "0" => Some(false),
            Label::Atom(s) if s == "1" => Some(true),
            _ => None,
        }
    }

    /// A list of bits, e.g. `[0,1,1]`.
    pub fn bits(bits: &[bool]) -> Self {
        Label::List(bits.iter().map(|&b| Label::bit(b)).collect())
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Atom(s) => f.write_str(s),
            Label::Unit => f.write_str("()"),
            Label::Pair(a, b) => write!(f, "({a},{b})"),
            Label::List(xs) => {
                f.write_str("[")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str("]")
            }
            Label::Inl(x) => write!(f, "inl({x})"),
            Label::Inr(x) => write!(f, "inr({x})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse label {input:?} at byte {pos}: {msg}")]
pub struct LabelParseError {
    pub input: String,
    pub pos: usize,
    pub msg: &'static str,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &'static str) -> LabelParseError {
        LabelParseError {
            input: self.src.to_string(),
            pos: self.pos,
            msg,
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
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

    fn expect(&mut self, c: char, msg: &'static str) -> Result<(), LabelParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(msg))
        }
    }

    fn token(&mut self) -> &'a str {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if "()[],".contains(c) || c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
        &self.src[start..self.pos]
    }

    fn label(&mut self) -> Result<Label, LabelParseError> {
        if self.eat('(') {
            if self.eat(')') {
                return Ok(Label::Unit);
            }
            let a = self.label()?;
            self.expect(',', "expected ',' in pair")?;
            let b = self.label()?;
            self.expect(')', "expected ')' closing pair")?;
            return Ok(Label::pair(a, b));
        }
        if self.eat('[') {
            let mut items = Vec::new();
            if self.eat(']') {
                return Ok(Label::List(items));
            }
            loop {
                items.push(self.label()?);
                if self.eat(']') {
                    return Ok(Label::List(items));
                }
                self.expect(',', "expected ',' or ']' in list")?;
            }
        }
        let tok = self.token();
        if tok.is_empty() {
            return Err(self.err("expected a label"));
        }
        if tok == "inl" || tok == "inr" {
            self.skip_ws();
            if self.peek() == Some('(') {
                self.pos += 1;
                let inner = self.label()?;
                self.expect(')', "expected ')' closing injection")?;
                return Ok(if tok == "inl" {
                    Label::inl(inner)
                } else {
                    Label::inr(inner)
                });
            }
        }
        Ok(Label::Atom(tok.to_string()))
    }
}

impl FromStr for Label {
    type Err = LabelParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser { src: s, pos: 0 };
        let l = p.label()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(p.err("trailing input"));
        }
        Ok(l)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prints_canonical_headers() {
        let l = Label::pair(Label::bits(&[true, false]), Label::bit(true));
        assert_eq!(l.to_string(), "([1,0],1)");
        assert_eq!(
            Label::pair(Label::bits(&[]), Label::bit(false)).to_string(),
            "([],0)"
        );
        assert_eq!(Label::inr(Label::Unit).to_string(), "inr(())");
    }

    #[test]
    fn parses_what_it_prints() {
        for s in ["([0,1,1,1],0)", "((0,1),1)", "inl((0,[1]))", "()", "0110", "[]"] {
            let l: Label = s.parse().unwrap();
            assert_eq!(l.to_string(), s);
        }
        let spaced: Label = " ( [0, 1] , 0 ) ".parse().unwrap();
        assert_eq!(spaced.to_string(), "([0,1],0)");
    }

    #[test]
    fn rejects_malformed() {
        assert!("(0,1".parse::<Label>().is_err());
        assert!("[0,".parse::<Label>().is_err());
        assert!("(0,1) x".parse::<Label>().is_err());
        assert!("".parse::<Label>().is_err());
    }
}
