//! Regular languages as lazy tries over a finite alphabet.

mod alphabet;
pub mod laws;
pub mod regex;
pub mod trie;

pub use alphabet::{Alphabet, RESERVED};
pub use laws::{ka_axiom_suite, LawsReport};
pub use regex::{compile, compile_str, parse_regex, ParseError, Regex};
pub use trie::{
    chr, comp, concat, containment_witness, empty, eps, equiv_upto, in_lang, in_lang_str, inter, lang_idl, lang_incl,
    le_upto, star, tconcat, union, Equiv, LNode, Lang, TLang,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LangError {
    #[error("alphabet is empty")]
    EmptyAlphabet,
    #[error("symbol {0:?} appears twice in the alphabet")]
    DuplicateSymbol(char),
    #[error("symbol {0:?} is reserved by the regex syntax")]
    ReservedSymbol(char),
    #[error("symbol {0:?} is not in the alphabet")]
    UnknownSymbol(char),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("step budget exhausted")]
    Exhausted,
}
