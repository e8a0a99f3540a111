use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Letter code; valid letters of a `k`-letter alphabet are `1..=k`.
pub type Letter = u32;

/// Code used for the character `0` when transcribing digit strings.
pub const ZERO_DIGIT_CODE: Letter = 10;

/// A finite word over the alphabet `{1, ..., k}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    letters: Vec<Letter>,
    alphabet_size: u32,
}

impl Word {
    pub fn new(letters: Vec<Letter>, alphabet_size: u32) -> Result<Self> {
        if alphabet_size == 0 {
            return Err(Error::InvalidParams("alphabet size must be positive".into()));
        }
        check_letters(&letters, alphabet_size)?;
        Ok(Word { letters, alphabet_size })
    }

    pub fn empty(alphabet_size: u32) -> Self {
        Word {
            letters: Vec::new(),
            alphabet_size,
        }
    }

    /// Transcribes a digit string: `1`..`9` map to themselves and `0` maps
    /// to [`ZERO_DIGIT_CODE`].
    pub fn from_digits(digits: &str, alphabet_size: u32) -> Result<Self> {
        let letters = digits
            .chars()
            .map(|c| match c.to_digit(10) {
                Some(0) => Ok(ZERO_DIGIT_CODE),
                Some(d) => Ok(d),
                None => Err(Error::InvalidParams(format!("not a digit: {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Word::new(letters, alphabet_size)
    }

    /// Parses whitespace-separated letter codes.
    pub fn parse_codes(text: &str, alphabet_size: u32) -> Result<Self> {
        let letters = text
            .split_whitespace()
            .map(|tok| {
                tok.parse::<Letter>()
                    .map_err(|_| Error::InvalidParams(format!("bad letter code {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Word::new(letters, alphabet_size)
    }

    /// Inverse of [`Word::from_digits`], when every letter is a digit code.
    pub fn to_digits(&self) -> Option<String> {
        letters_to_digits(&self.letters)
    }

    pub fn alphabet_size(&self) -> u32 {
        self.alphabet_size
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub(crate) fn from_raw(letters: Vec<Letter>, alphabet_size: u32) -> Self {
        debug_assert!(check_letters(&letters, alphabet_size).is_ok());
        Word { letters, alphabet_size }
    }
}

impl Deref for Word {
    type Target = [Letter];

    fn deref(&self) -> &[Letter] {
        &self.letters
    }
}

impl AsRef<[Letter]> for Word {
    fn as_ref(&self) -> &[Letter] {
        &self.letters
    }
}

/// Space-separated letter codes.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

pub(crate) fn check_letters(letters: &[Letter], alphabet_size: u32) -> Result<()> {
    match letters.iter().find(|&&a| a == 0 || a > alphabet_size) {
        Some(&letter) => Err(Error::LetterOutOfRange { letter, alphabet_size }),
        None => Ok(()),
    }
}

pub fn letters_to_digits(letters: &[Letter]) -> Option<String> {
    letters
        .iter()
        .map(|&a| match a {
            ZERO_DIGIT_CODE => Some('0'),
            1..=9 => char::from_digit(a, 10),
            _ => None,
        })
        .collect()
}

/// A witness for a longest common subsequence: matched index pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alignment {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl Alignment {
    pub fn len(&self) -> usize {
        self.left.len()
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty()
    }

    /// Checks that this alignment is a common subsequence of `x` and `y`.
    pub fn is_valid_for(&self, x: &[Letter], y: &[Letter]) -> bool {
        self.left.len() == self.right.len()
            && self.left.windows(2).all(|w| w[0] < w[1])
            && self.right.windows(2).all(|w| w[0] < w[1])
            && self
                .left
                .iter()
                .zip(&self.right)
                .all(|(&i, &j)| i < x.len() && j < y.len() && x[i] == y[j])
    }
}
