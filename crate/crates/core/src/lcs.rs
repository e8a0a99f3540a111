//! Longest common subsequences: a reference dynamic program, the canonical
//! alignment used by the log codec, and a bit-parallel length kernel used by
//! every scanning routine.

use std::borrow::Cow;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::word::{Alignment, Letter};

/// Length of a longest common subsequence (two-row dynamic program).
pub fn lcs_length(x: &[Letter], y: &[Letter]) -> usize {
    if x.is_empty() || y.is_empty() {
        return 0;
    }
    let mut prev = vec![0usize; y.len() + 1];
    let mut curr = vec![0usize; y.len() + 1];
    for &a in x {
        for (j, &b) in y.iter().enumerate() {
            curr[j + 1] = if a == b { prev[j] + 1 } else { prev[j + 1].max(curr[j]) };
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    prev[y.len()]
}

/// The canonical longest common subsequence of `x` and `y`.
///
/// Traceback runs from the end of the full table and, at each cell, prefers
/// a match, then stepping back in `x`, then stepping back in `y`. The result
/// is a function of the inputs, which the log encoding relies on.
pub fn lcs_alignment(x: &[Letter], y: &[Letter]) -> Alignment {
    let (n, m) = (x.len(), y.len());
    let width = m + 1;
    let mut table = vec![0u32; (n + 1) * width];
    for i in 1..=n {
        for j in 1..=m {
            table[i * width + j] = if x[i - 1] == y[j - 1] {
                table[(i - 1) * width + j - 1] + 1
            } else {
                table[(i - 1) * width + j].max(table[i * width + j - 1])
            };
        }
    }

    let mut left = Vec::with_capacity(table[n * width + m] as usize);
    let mut right = Vec::with_capacity(left.capacity());
    let (mut i, mut j) = (n, m);
    while i > 0 && j > 0 {
        if x[i - 1] == y[j - 1] {
            left.push(i - 1);
            right.push(j - 1);
            i -= 1;
            j -= 1;
        } else if table[(i - 1) * width + j] == table[i * width + j] {
            i -= 1;
        } else {
            j -= 1;
        }
    }
    left.reverse();
    right.reverse();
    Alignment { left, right }
}

/// `lcs(x, y) / |x|` for equal-length, nonempty factors.
pub fn similarity(x: &[Letter], y: &[Letter]) -> Result<Rational> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    if x.is_empty() {
        return Err(Error::EmptyFactor);
    }
    Ok(Rational::ratio(lcs_length(x, y), x.len()))
}

/// Letters above this value are rank-compressed before building match masks.
const DENSE_LETTER_LIMIT: Letter = 1 << 16;

/// Returns `z` itself when its letters are small enough to index the mask
/// table directly, otherwise a copy with letters replaced by their ranks.
pub(crate) fn compact_letters(z: &[Letter]) -> Cow<'_, [Letter]> {
    if z.iter().all(|&a| a <= DENSE_LETTER_LIMIT) {
        return Cow::Borrowed(z);
    }
    let mut distinct: Vec<Letter> = z.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    Cow::Owned(
        z.iter()
            .map(|a| distinct.binary_search(a).unwrap() as Letter + 1)
            .collect(),
    )
}

/// Bit-parallel LCS length (Allison–Dix / Crochemore et al. recurrence).
///
/// Each letter of `x` updates a bit vector over the positions of `y` in
/// `ceil(|y| / 64)` word operations. The mask table is kept zeroed between
/// calls so a single kernel can be reused across many factor pairs.
#[derive(Debug, Default)]
pub struct BitLcs {
    masks: Vec<u64>,
    row: Vec<u64>,
}

impl BitLcs {
    pub fn new() -> Self {
        Self::default()
    }

    /// Letters must be at most `2^16`; see [`lcs_length_fast`] for arbitrary input.
    pub fn lcs(&mut self, x: &[Letter], y: &[Letter]) -> usize {
        if x.is_empty() || y.is_empty() {
            return 0;
        }
        let words = y.len().div_ceil(64);
        let max_letter = *y.iter().max().unwrap() as usize;
        let needed = (max_letter + 1) * words;
        if self.masks.len() < needed {
            self.masks.resize(needed, 0);
        }
        for (j, &b) in y.iter().enumerate() {
            self.masks[b as usize * words + j / 64] |= 1u64 << (j % 64);
        }

        self.row.clear();
        self.row.resize(words, !0u64);
        for &a in x {
            let a = a as usize;
            if a > max_letter {
                // No matches: V' = (V + 0) | V = V.
                continue;
            }
            let mask = &self.masks[a * words..(a + 1) * words];
            let mut carry = false;
            for (v, &m) in self.row.iter_mut().zip(mask) {
                let u = *v & m;
                let (sum, c1) = v.overflowing_add(u);
                let (sum, c2) = sum.overflowing_add(carry as u64);
                carry = c1 || c2;
                *v = sum | (*v & !m);
            }
        }

        let tail = y.len() % 64;
        let ones: usize = self
            .row
            .iter()
            .enumerate()
            .map(|(w, &v)| {
                let v = if w + 1 == words && tail != 0 {
                    v & ((1u64 << tail) - 1)
                } else {
                    v
                };
                v.count_ones() as usize
            })
            .sum();

        for (j, &b) in y.iter().enumerate() {
            self.masks[b as usize * words + j / 64] = 0;
        }
        y.len() - ones
    }
}

/// LCS length through the bit-parallel kernel, for arbitrary letter codes.
pub fn lcs_length_fast(x: &[Letter], y: &[Letter]) -> usize {
    let mut joined = x.to_vec();
    joined.extend_from_slice(y);
    let joined = compact_letters(&joined);
    BitLcs::new().lcs(&joined[..x.len()], &joined[x.len()..])
}
