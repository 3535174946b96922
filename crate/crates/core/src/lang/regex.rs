//! Regex syntax: parsing, printing and compilation to tries.
//!
//! ```text
//! union  := inter ('+' inter)*
//! inter  := cat ('&' cat)*
//! cat    := unary unary*
//! unary  := '~' unary | atom '*'*
//! atom   := '0' | '1' | symbol | '(' union ')'
//! ```
//!
//! `0` is the empty language, `1` the empty word, `~` complement. Star and
//! complement bind tightest, then juxtaposition, then `&`, then `+`.

use std::fmt;

use super::trie::{chr_index, comp, concat, empty, eps, inter, star, union, Lang};
use super::{Alphabet, LangError};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Regex {
    Empty,
    Eps,
    Chr(char),
    Union(Box<Regex>, Box<Regex>),
    Inter(Box<Regex>, Box<Regex>),
    Comp(Box<Regex>),
    Cat(Box<Regex>, Box<Regex>),
    Star(Box<Regex>),
}

impl Regex {
    pub fn union(a: Regex, b: Regex) -> Regex {
        Regex::Union(Box::new(a), Box::new(b))
    }

    pub fn inter(a: Regex, b: Regex) -> Regex {
        Regex::Inter(Box::new(a), Box::new(b))
    }

    pub fn comp(a: Regex) -> Regex {
        Regex::Comp(Box::new(a))
    }

    pub fn cat(a: Regex, b: Regex) -> Regex {
        Regex::Cat(Box::new(a), Box::new(b))
    }

    pub fn star(a: Regex) -> Regex {
        Regex::Star(Box::new(a))
    }

    /// Number of constructors.
    pub fn size(&self) -> usize {
        match self {
            Regex::Empty | Regex::Eps | Regex::Chr(_) => 1,
            Regex::Comp(a) | Regex::Star(a) => 1 + a.size(),
            Regex::Union(a, b) | Regex::Inter(a, b) | Regex::Cat(a, b) => 1 + a.size() + b.size(),
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Regex::Union(..) => 0,
            Regex::Inter(..) => 1,
            Regex::Cat(..) => 2,
            Regex::Comp(_) => 3,
            Regex::Star(_) => 4,
            Regex::Empty | Regex::Eps | Regex::Chr(_) => 5,
        }
    }

    fn fmt_at(&self, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.prec() < min {
            f.write_str("(")?;
            self.fmt_at(0, f)?;
            return f.write_str(")");
        }
        match self {
            Regex::Empty => f.write_str("0"),
            Regex::Eps => f.write_str("1"),
            Regex::Chr(c) => write!(f, "{c}"),
            Regex::Union(a, b) => {
                a.fmt_at(0, f)?;
                f.write_str("+")?;
                b.fmt_at(1, f)
            }
            Regex::Inter(a, b) => {
                a.fmt_at(1, f)?;
                f.write_str("&")?;
                b.fmt_at(2, f)
            }
            Regex::Cat(a, b) => {
                a.fmt_at(2, f)?;
                b.fmt_at(3, f)
            }
            Regex::Comp(a) => {
                f.write_str("~")?;
                a.fmt_at(3, f)
            }
            Regex::Star(a) => {
                a.fmt_at(5, f)?;
                f.write_str("*")
            }
        }
    }
}

/// Prints in the parser's syntax with the fewest parentheses that
/// round-trip.
impl fmt::Display for Regex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(0, f)
    }
}

/// A syntax error at a character offset.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at position {position}: expected {expected}")]
pub struct ParseError {
    pub position: usize,
    pub expected: String,
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    sigma: &'a Alphabet,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn error(&self, expected: &str) -> LangError {
        LangError::Parse(ParseError {
            position: self.pos,
            expected: expected.to_string(),
        })
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Some(c) => matches!(c, '0' | '1' | '(' | '~') || self.sigma.index(c).is_some(),
            None => false,
        }
    }

    fn union(&mut self) -> Result<Regex, LangError> {
        let mut r = self.inter()?;
        while self.peek() == Some('+') {
            self.pos += 1;
            r = Regex::union(r, self.inter()?);
        }
        Ok(r)
    }

    fn inter(&mut self) -> Result<Regex, LangError> {
        let mut r = self.cat()?;
        while self.peek() == Some('&') {
            self.pos += 1;
            r = Regex::inter(r, self.cat()?);
        }
        Ok(r)
    }

    fn cat(&mut self) -> Result<Regex, LangError> {
        let mut r = self.unary()?;
        while self.starts_atom() {
            r = Regex::cat(r, self.unary()?);
        }
        Ok(r)
    }

    fn unary(&mut self) -> Result<Regex, LangError> {
        if self.peek() == Some('~') {
            self.pos += 1;
            return Ok(Regex::comp(self.unary()?));
        }
        let mut r = self.atom()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            r = Regex::star(r);
        }
        Ok(r)
    }

    fn atom(&mut self) -> Result<Regex, LangError> {
        let c = match self.peek() {
            None => return Err(self.error("an expression")),
            Some(c) => c,
        };
        let r = match c {
            '0' => Regex::Empty,
            '1' => Regex::Eps,
            '(' => {
                self.pos += 1;
                let r = self.union()?;
                if self.peek() != Some(')') {
                    return Err(self.error("')'"));
                }
                r
            }
            c if self.sigma.index(c).is_some() => Regex::Chr(c),
            '+' | '&' | '*' | ')' => return Err(self.error("an expression")),
            c => return Err(self.error(&format!("an alphabet symbol, found {c:?}"))),
        };
        self.pos += 1;
        Ok(r)
    }
}

/// Parse `text` with symbols drawn from `sigma`.
pub fn parse_regex(text: &str, sigma: &Alphabet) -> Result<Regex, LangError> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        sigma,
    };
    let r = p.union()?;
    if p.pos < p.chars.len() {
        return Err(p.error("end of input"));
    }
    Ok(r)
}

/// Build the trie of `r`.
pub fn compile(r: &Regex, sigma: &Alphabet) -> Result<Lang, LangError> {
    Ok(match r {
        Regex::Empty => empty(sigma),
        Regex::Eps => eps(sigma),
        Regex::Chr(c) => chr_index(sigma.len(), sigma.index(*c).ok_or(LangError::UnknownSymbol(*c))?),
        Regex::Union(a, b) => union(&compile(a, sigma)?, &compile(b, sigma)?),
        Regex::Inter(a, b) => inter(&compile(a, sigma)?, &compile(b, sigma)?),
        Regex::Comp(a) => comp(&compile(a, sigma)?),
        Regex::Cat(a, b) => concat(&compile(a, sigma)?, &compile(b, sigma)?),
        Regex::Star(a) => star(&compile(a, sigma)?),
    })
}

/// Parse and compile in one step.
pub fn compile_str(text: &str, sigma: &Alphabet) -> Result<Lang, LangError> {
    compile(&parse_regex(text, sigma)?, sigma)
}
