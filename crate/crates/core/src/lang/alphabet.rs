//! Finite ordered alphabets.

use std::fmt;
use std::rc::Rc;

use super::LangError;

/// Characters that carry meaning in the regex grammar and so cannot be
/// alphabet symbols.
pub const RESERVED: &[char] = &['0', '1', '+', '&', '~', '*', '(', ')'];

/// A nonempty ordered list of distinct symbols.
///
/// The position of a symbol is its index; every trie node has one child per
/// index, in this order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Alphabet(Rc<[char]>);

impl Alphabet {
    pub fn new(symbols: &str) -> Result<Self, LangError> {
        let syms: Vec<char> = symbols.chars().collect();
        if syms.is_empty() {
            return Err(LangError::EmptyAlphabet);
        }
        for (i, &c) in syms.iter().enumerate() {
            if RESERVED.contains(&c) || c.is_whitespace() {
                return Err(LangError::ReservedSymbol(c));
            }
            if syms[..i].contains(&c) {
                return Err(LangError::DuplicateSymbol(c));
            }
        }
        Ok(Alphabet(syms.into()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn symbols(&self) -> &[char] {
        &self.0
    }

    pub fn symbol(&self, index: usize) -> char {
        self.0[index]
    }

    pub fn index(&self, c: char) -> Option<usize> {
        self.0.iter().position(|&s| s == c)
    }

    /// Symbol indices of `s`, or the first symbol not in the alphabet.
    pub fn encode(&self, s: &str) -> Result<Vec<usize>, LangError> {
        s.chars()
            .map(|c| self.index(c).ok_or(LangError::UnknownSymbol(c)))
            .collect()
    }

    pub fn decode(&self, word: &[usize]) -> String {
        word.iter().map(|&i| self.0[i]).collect()
    }

    /// Every word of length at most `max_len`, shortest first and in
    /// alphabet order within each length.
    pub fn words_upto(&self, max_len: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        let mut layer = vec![Vec::new()];
        for _ in 0..max_len {
            let mut next = Vec::with_capacity(layer.len() * self.len());
            for w in &layer {
                for i in 0..self.len() {
                    let mut v = w.clone();
                    v.push(i);
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

impl Default for Alphabet {
    fn default() -> Self {
        Alphabet::new("ab").expect("valid default alphabet")
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alphabet({:?})", self.0.iter().collect::<String>())
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.iter().collect::<String>())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert_eq!(Alphabet::new(""), Err(LangError::EmptyAlphabet));
        assert_eq!(Alphabet::new("aba"), Err(LangError::DuplicateSymbol('a')));
        assert_eq!(Alphabet::new("a*"), Err(LangError::ReservedSymbol('*')));
        let s = Alphabet::new("xyz").unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.index('z'), Some(2));
        assert_eq!(s.index('a'), None);
        assert_eq!(s.encode("zx").unwrap(), vec![2, 0]);
        assert_eq!(s.encode("xq"), Err(LangError::UnknownSymbol('q')));
        assert_eq!(s.decode(&[1, 1]), "yy");
    }

    #[test]
    fn word_enumeration_order() {
        let s = Alphabet::default();
        let words: Vec<String> = s.words_upto(2).iter().map(|w| s.decode(w)).collect();
        assert_eq!(words, ["", "a", "b", "aa", "ab", "ba", "bb"]);
        assert_eq!(s.words_upto(6).len(), 127);
    }
}
