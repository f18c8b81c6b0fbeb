//! Letters, alphabets and finite words.
//!
//! Letters are plain integers in `[0, size)`. An [`Alphabet`] optionally
//! carries a display map used only when words are parsed from or rendered
//! to text.

use std::fmt;
use std::ops::{Deref, Range};

use serde::{Deserialize, Serialize};

use crate::error::{QwError, Result};

pub type Letter = u32;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alphabet {
    size: usize,
    display: Option<Vec<char>>,
}

impl Alphabet {
    /// An alphabet of `size` letters rendered as comma-separated integers.
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(QwError::Malformed(
                "alphabet size must be at least 1".into(),
            ));
        }
        Ok(Alphabet {
            size,
            display: None,
        })
    }

    /// Letters rendered by the given symbols, letter `i` as `symbols[i]`.
    pub fn with_symbols(symbols: &str) -> Result<Self> {
        let display: Vec<char> = symbols.chars().collect();
        if display.is_empty() {
            return Err(QwError::Malformed(
                "alphabet needs at least one symbol".into(),
            ));
        }
        for (i, c) in display.iter().enumerate() {
            if display[..i].contains(c) {
                return Err(QwError::Malformed(format!(
                    "display map is not injective: '{c}' repeated"
                )));
            }
        }
        Ok(Alphabet {
            size: display.len(),
            display: Some(display),
        })
    }

    /// `{0, .., size-1}` shown as decimal digits when `size <= 10`.
    pub fn digits(size: usize) -> Self {
        let size = size.max(1);
        let display = (size <= 10).then(|| {
            (0..size)
                .map(|d| char::from_digit(d as u32, 10).unwrap())
                .collect()
        });
        Alphabet { size, display }
    }

    pub fn binary() -> Self {
        Alphabet::digits(2)
    }

    /// Guess an alphabet for a literal: all-digit text maps digits to their
    /// values, anything else uses its sorted distinct characters.
    pub fn infer(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Err(QwError::Malformed(
                "cannot infer an alphabet from empty text".into(),
            ));
        }
        if text.chars().all(|c| c.is_ascii_digit()) {
            let max = text
                .chars()
                .filter_map(|c| c.to_digit(10))
                .max()
                .unwrap_or(0);
            return Ok(Alphabet::digits((max as usize + 1).max(2)));
        }
        let mut chars: Vec<char> = text.chars().collect();
        chars.sort_unstable();
        chars.dedup();
        Alphabet::with_symbols(&chars.into_iter().collect::<String>())
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn symbols(&self) -> Option<&[char]> {
        self.display.as_deref()
    }

    pub fn contains(&self, letter: Letter) -> bool {
        (letter as usize) < self.size
    }

    pub fn check(&self, word: &[Letter]) -> Result<()> {
        match word.iter().find(|&&a| !self.contains(a)) {
            Some(&letter) => Err(QwError::LetterOutOfRange {
                letter,
                size: self.size,
            }),
            None => Ok(()),
        }
    }

    pub fn symbol_of(&self, c: char) -> Option<Letter> {
        self.display
            .as_ref()
            .and_then(|d| d.iter().position(|&s| s == c))
            .map(|i| i as Letter)
    }

    /// Parse a word: one symbol per character with a display map, otherwise
    /// comma-separated integers.
    pub fn parse(&self, text: &str) -> Result<FiniteWord> {
        let text = text.trim();
        let letters = match &self.display {
            Some(_) => text
                .chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| {
                    self.symbol_of(c)
                        .ok_or_else(|| QwError::Malformed(format!("symbol '{c}' not in alphabet")))
                })
                .collect::<Result<Vec<_>>>()?,
            None => {
                if text.is_empty() {
                    Vec::new()
                } else {
                    text.split(',')
                        .map(|t| {
                            t.trim()
                                .parse::<Letter>()
                                .map_err(|_| QwError::Malformed(format!("bad letter '{t}'")))
                        })
                        .collect::<Result<Vec<_>>>()?
                }
            }
        };
        self.check(&letters)?;
        Ok(FiniteWord::new(letters))
    }

    pub fn render(&self, word: &[Letter]) -> String {
        match &self.display {
            Some(d) => word
                .iter()
                .map(|&a| d.get(a as usize).copied().unwrap_or('?'))
                .collect(),
            None => word
                .iter()
                .map(|a| a.to_string())
                .collect::<Vec<_>>()
                .join(","),
        }
    }
}

/// A finite sequence of letters.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FiniteWord(Vec<Letter>);

impl FiniteWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        FiniteWord(letters)
    }

    pub fn empty() -> Self {
        FiniteWord(Vec::new())
    }

    /// Build from ASCII digits, e.g. `"010"`. Panics on non-digits; intended
    /// for literals in code and tests.
    pub fn from_digits(text: &str) -> Self {
        FiniteWord(
            text.chars()
                .map(|c| c.to_digit(10).expect("digit literal"))
                .collect(),
        )
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    /// The factor covering `range` (half-open).
    pub fn factor(&self, range: Range<usize>) -> FiniteWord {
        FiniteWord(self.0[range].to_vec())
    }

    pub fn prefix(&self, n: usize) -> FiniteWord {
        FiniteWord(self.0[..n.min(self.0.len())].to_vec())
    }

    pub fn is_prefix_of(&self, other: &[Letter]) -> bool {
        other.starts_with(&self.0)
    }

    pub fn concat(&self, other: &[Letter]) -> FiniteWord {
        let mut v = Vec::with_capacity(self.0.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(other);
        FiniteWord(v)
    }

    pub fn repeat(&self, k: usize) -> FiniteWord {
        FiniteWord(self.0.repeat(k))
    }

    pub fn max_letter(&self) -> Option<Letter> {
        self.0.iter().copied().max()
    }
}

impl std::borrow::Borrow<[Letter]> for FiniteWord {
    fn borrow(&self) -> &[Letter] {
        &self.0
    }
}

impl Deref for FiniteWord {
    type Target = [Letter];
    fn deref(&self) -> &[Letter] {
        &self.0
    }
}

impl From<Vec<Letter>> for FiniteWord {
    fn from(v: Vec<Letter>) -> Self {
        FiniteWord(v)
    }
}

impl From<&[Letter]> for FiniteWord {
    fn from(v: &[Letter]) -> Self {
        FiniteWord(v.to_vec())
    }
}

impl fmt::Debug for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&a| a < 10) {
            let s: String = self
                .0
                .iter()
                .map(|&a| char::from_digit(a, 10).unwrap())
                .collect();
            write!(f, "\"{s}\"")
        } else {
            write!(f, "{:?}", self.0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render_with_symbols() {
        let ab = Alphabet::with_symbols("ab").unwrap();
        let w = ab.parse("abba").unwrap();
        assert_eq!(w.letters(), &[0, 1, 1, 0]);
        assert_eq!(ab.render(&w), "abba");
        assert!(ab.parse("abc").is_err());
    }

    #[test]
    fn non_injective_display_rejected() {
        assert!(Alphabet::with_symbols("aba").is_err());
        assert!(Alphabet::new(0).is_err());
    }

    #[test]
    fn large_alphabets_render_as_integers() {
        let a = Alphabet::digits(12);
        let w = FiniteWord::new(vec![0, 11, 3]);
        assert_eq!(a.render(&w), "0,11,3");
        assert_eq!(a.parse("0,11,3").unwrap(), w);
        assert!(a.parse("12").is_err());
    }

    #[test]
    fn infer_alphabets() {
        assert_eq!(Alphabet::infer("010").unwrap(), Alphabet::digits(2));
        assert_eq!(Alphabet::infer("0").unwrap().size(), 2);
        let a = Alphabet::infer("aabcaa").unwrap();
        assert_eq!(a.symbols().unwrap(), &['a', 'b', 'c']);
    }

    #[test]
    fn factor_and_prefix() {
        let w = FiniteWord::from_digits("01001");
        assert_eq!(w.factor(1..4), FiniteWord::from_digits("100"));
        assert_eq!(w.prefix(2), FiniteWord::from_digits("01"));
        assert!(w.prefix(3).is_prefix_of(&w));
    }
}
