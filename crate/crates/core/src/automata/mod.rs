//! Finite automata over small explicit alphabets.
//!
//! Words are slices of symbol indices into an [`Alphabet`]. Every DFA is
//! complete; partial machines are rejected at the boundary.

mod dfa;
mod format;
mod nfa;
mod regex;

pub use dfa::{code_width, decode_binary, encode_binary, Dfa, Equivalence};
pub use format::{parse_dfa, write_dfa};
pub use nfa::Nfa;
pub use regex::{parse_regex, parse_regex_file, regex_to_dfa, Regex, RegexAst};

use crate::error::{Error, Result};

/// A symbol is an index into its alphabet.
pub type Symbol = usize;

/// Characters that may not appear inside a symbol identifier.
pub(crate) const RESERVED: &[char] = &['*', '~', '&', '|', '(', ')', '%'];

/// Ordered set of distinct symbol identifiers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet is empty".into()));
        }
        for (i, s) in symbols.iter().enumerate() {
            if s.is_empty() || s.chars().any(|c| c.is_whitespace() || RESERVED.contains(&c)) {
                return Err(Error::InvalidAlphabet(format!("bad symbol identifier `{s}`")));
            }
            if symbols[..i].contains(s) {
                return Err(Error::InvalidAlphabet(format!("duplicate symbol `{s}`")));
            }
        }
        Ok(Alphabet { symbols })
    }

    /// Parses a whitespace-separated symbol list.
    pub fn parse(text: &str) -> Result<Self> {
        Alphabet::new(text.split_whitespace())
    }

    pub fn binary() -> Self {
        Alphabet::new(["0", "1"]).expect("valid")
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn name(&self, a: Symbol) -> &str {
        &self.symbols[a]
    }

    pub fn index_of(&self, name: &str) -> Option<Symbol> {
        self.symbols.iter().position(|s| s == name)
    }

    /// True when every identifier is a single character, so words can be
    /// written without separators.
    pub fn is_compact(&self) -> bool {
        self.symbols.iter().all(|s| s.chars().count() == 1)
    }

    /// Renders a word, unseparated for compact alphabets and space-separated
    /// otherwise. The empty word renders as the empty string.
    pub fn render(&self, word: &[Symbol]) -> String {
        let sep = if self.is_compact() { "" } else { " " };
        word.iter().map(|&a| self.name(a)).collect::<Vec<_>>().join(sep)
    }

    /// Parses a word: whitespace-separated identifiers, or a bare character
    /// string when the alphabet is compact.
    pub fn parse_word(&self, text: &str) -> Result<Vec<Symbol>> {
        let text = text.trim();
        let lookup = |t: &str| self.index_of(t).ok_or_else(|| Error::UnknownSymbol(t.to_string()));
        if self.is_compact() && !text.contains(char::is_whitespace) {
            return text.chars().map(|c| lookup(c.encode_utf8(&mut [0; 4]))).collect();
        }
        text.split_whitespace().map(lookup).collect()
    }

    /// Iterates every word up to `max_len` in length-then-lex order.
    pub fn all_words(&self, max_len: usize) -> WordIter {
        WordIter { k: self.len(), max_len, current: Some(Vec::new()) }
    }
}

impl std::fmt::Display for Alphabet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.symbols.join(" "))
    }
}

/// All words of length at most `max_len`, in length-then-lex order.
pub struct WordIter {
    k: usize,
    max_len: usize,
    current: Option<Vec<Symbol>>,
}

impl Iterator for WordIter {
    type Item = Vec<Symbol>;

    fn next(&mut self) -> Option<Vec<Symbol>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        let mut i = next.len();
        loop {
            if i == 0 {
                if next.len() < self.max_len {
                    next = vec![0; next.len() + 1];
                    self.current = Some(next);
                }
                break;
            }
            i -= 1;
            if next[i] + 1 < self.k {
                next[i] += 1;
                self.current = Some(next);
                break;
            }
            next[i] = 0;
        }
        Some(out)
    }
}

/// All words of exactly length `n`, lexicographic.
pub fn words_of_length(k: usize, n: usize) -> impl Iterator<Item = Vec<Symbol>> {
    let total = (k as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    (0..total).map(move |mut code| {
        let mut w = vec![0; n];
        for slot in w.iter_mut().rev() {
            *slot = (code % k as u128) as usize;
            code /= k as u128;
        }
        w
    })
}
