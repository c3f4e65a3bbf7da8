//! Symbolic terms: `grasp(x,y)`, `vec(E_Y)`, `top(+Y, glass)`.
//!
//! Used for voxeme bodies, habitat constraints, affordance events and scene
//! facts. Terms are compared structurally; the canonical rendering puts no
//! spaces around argument commas.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    pub head: String,
    pub args: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed term `{text}` at offset {offset}: {reason}")]
pub struct TermError {
    pub text: String,
    pub offset: usize,
    pub reason: &'static str,
}

impl Term {
    pub fn atom(head: impl Into<String>) -> Self {
        Term {
            head: head.into(),
            args: Vec::new(),
        }
    }

    pub fn app(head: impl Into<String>, args: Vec<Term>) -> Self {
        Term {
            head: head.into(),
            args,
        }
    }

    pub fn is_atom(&self) -> bool {
        self.args.is_empty()
    }

    pub fn parse(text: &str) -> Result<Term, TermError> {
        let mut p = TermParser {
            text,
            chars: text.char_indices().collect(),
            i: 0,
        };
        let term = p.term()?;
        p.skip_ws();
        if p.i != p.chars.len() {
            return Err(p.error("trailing input"));
        }
        Ok(term)
    }

    /// Replace atoms according to `map`, at any depth.
    pub fn substitute(&self, map: &BTreeMap<String, String>) -> Term {
        if self.is_atom() {
            if let Some(v) = map.get(&self.head) {
                return Term::atom(v.clone());
            }
        }
        Term {
            head: self.head.clone(),
            args: self.args.iter().map(|a| a.substitute(map)).collect(),
        }
    }

    /// Every atom occurring in the term (the head excluded for compounds).
    pub fn atoms(&self) -> Vec<&str> {
        if self.is_atom() {
            return vec![&self.head];
        }
        self.args.iter().flat_map(|a| a.atoms()).collect()
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.head)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (n, a) in self.args.iter().enumerate() {
                if n > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", a)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Term {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        Term::parse(&text).map_err(serde::de::Error::custom)
    }
}

impl std::str::FromStr for Term {
    type Err = TermError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Term::parse(s)
    }
}

struct TermParser<'a> {
    text: &'a str,
    chars: Vec<(usize, char)>,
    i: usize,
}

impl TermParser<'_> {
    fn error(&self, reason: &'static str) -> TermError {
        TermError {
            text: self.text.to_string(),
            offset: self
                .chars
                .get(self.i)
                .map(|&(o, _)| o)
                .unwrap_or(self.text.len()),
            reason,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.i).map(|&(_, c)| c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.i += 1;
        }
    }

    fn term(&mut self) -> Result<Term, TermError> {
        self.skip_ws();
        let start = self.i;
        while self
            .peek()
            .is_some_and(|c| !c.is_whitespace() && !matches!(c, '(' | ')' | ','))
        {
            self.i += 1;
        }
        if self.i == start {
            return Err(self.error("expected a name"));
        }
        let head: String = self.chars[start..self.i].iter().map(|&(_, c)| c).collect();
        self.skip_ws();
        if self.peek() != Some('(') {
            return Ok(Term::atom(head));
        }
        self.i += 1;
        let mut args = Vec::new();
        loop {
            args.push(self.term()?);
            self.skip_ws();
            match self.peek() {
                Some(',') => self.i += 1,
                Some(')') => {
                    self.i += 1;
                    return Ok(Term::app(head, args));
                }
                _ => return Err(self.error("expected `,` or `)`")),
            }
        }
    }
}
