//! Similarity coefficient of a word: the maximum of `lcs(x, x') / |x|` over
//! all adjacent factor pairs `xx'` with `|x| = |x'| >= 1`.
//!
//! Ties between pairs of equal similarity are broken by smallest factor
//! length, then smallest start offset. Start offsets are 0-based.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::lcs::{compact_letters, lcs_alignment, BitLcs};
use crate::par::{self, Exec};
use crate::rational::Rational;
use crate::word::{Alignment, Letter};

/// Below this length the per-ending scan stays sequential even when asked
/// to run in parallel.
const PAR_MIN_LEN: usize = 192;

/// The condition a kept word must satisfy against the threshold.
///
/// `Le` keeps `simc <= alpha`, so a pair is a violation when `s > alpha`
/// (the randomized generator). `Lt` keeps `simc < alpha`, so a pair is a
/// violation when `s >= alpha` (the backtracking search).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Predicate {
    Lt,
    Le,
}

impl Predicate {
    pub fn violates(self, lcs: usize, ell: usize, alpha: Rational) -> bool {
        let ord = alpha.cmp_ratio(lcs as u64, ell as u64);
        match self {
            Predicate::Lt => ord != Ordering::Less,
            Predicate::Le => ord == Ordering::Greater,
        }
    }

    pub fn accepts(self, value: Rational, alpha: Rational) -> bool {
        match self {
            Predicate::Lt => value < alpha,
            Predicate::Le => value <= alpha,
        }
    }

    /// The kept relation, e.g. `simc < alpha`.
    pub fn kept_symbol(self) -> &'static str {
        match self {
            Predicate::Lt => "<",
            Predicate::Le => "<=",
        }
    }

    /// The violating relation, e.g. `s >= alpha`.
    pub fn violation_symbol(self) -> &'static str {
        match self {
            Predicate::Lt => ">=",
            Predicate::Le => ">",
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Predicate::Lt => "lt",
            Predicate::Le => "le",
        })
    }
}

impl FromStr for Predicate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "lt" => Ok(Predicate::Lt),
            "le" => Ok(Predicate::Le),
            _ => Err(Error::InvalidParams(format!("predicate must be lt or le, got {s:?}"))),
        }
    }
}

/// A witnessed factor pair `x = z[t..t+ell)`, `x' = z[t+ell..t+2ell)` with
/// similarity `beta` and the canonical alignment of `x` against `x'`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Violation {
    pub t: usize,
    pub ell: usize,
    pub beta: Rational,
    pub alignment: Alignment,
}

impl Violation {
    pub fn x<'a>(&self, z: &'a [Letter]) -> &'a [Letter] {
        &z[self.t..self.t + self.ell]
    }

    pub fn x_prime<'a>(&self, z: &'a [Letter]) -> &'a [Letter] {
        &z[self.t + self.ell..self.t + 2 * self.ell]
    }

    /// The 0-based position just past `x'`.
    pub fn end(&self) -> usize {
        self.t + 2 * self.ell
    }
}

/// A scored factor pair before its alignment is materialized.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Candidate {
    pub lcs: usize,
    pub ell: usize,
    pub t: usize,
}

impl Candidate {
    pub fn beta(&self) -> Rational {
        Rational::ratio(self.lcs, self.ell)
    }

    /// `Greater` means `self` is preferred: higher similarity, then shorter
    /// factors, then earlier start.
    fn rank(&self, other: &Candidate) -> Ordering {
        let lhs = self.lcs as u128 * other.ell as u128;
        let rhs = other.lcs as u128 * self.ell as u128;
        lhs.cmp(&rhs).then(other.ell.cmp(&self.ell)).then(other.t.cmp(&self.t))
    }

    pub fn into_violation(self, z: &[Letter]) -> Violation {
        let x = &z[self.t..self.t + self.ell];
        let x_prime = &z[self.t + self.ell..self.t + 2 * self.ell];
        Violation {
            t: self.t,
            ell: self.ell,
            beta: self.beta(),
            alignment: lcs_alignment(x, x_prime),
        }
    }
}

pub(crate) fn prefer(a: Option<Candidate>, b: Option<Candidate>) -> Option<Candidate> {
    match (a, b) {
        (Some(a), Some(b)) => Some(if b.rank(&a) == Ordering::Greater { b } else { a }),
        (a, None) => a,
        (None, b) => b,
    }
}

/// Best pair of factor length `ell` anywhere in `z`.
pub(crate) fn best_of_length(kernel: &mut BitLcs, z: &[Letter], ell: usize) -> Option<Candidate> {
    let mut best: Option<Candidate> = None;
    for t in 0..=z.len().saturating_sub(2 * ell) {
        if t + 2 * ell > z.len() {
            break;
        }
        let lcs = kernel.lcs(&z[t..t + ell], &z[t + ell..t + 2 * ell]);
        best = prefer(best, Some(Candidate { lcs, ell, t }));
        if lcs == ell {
            // Nothing later at this length can beat a perfect match.
            break;
        }
    }
    best
}

/// Similarity coefficient with a witnessing pair; `(0, None)` for words
/// shorter than two letters.
pub fn similarity_coefficient(z: &[Letter]) -> (Rational, Option<Violation>) {
    similarity_coefficient_with(z, Exec::default())
}

pub fn similarity_coefficient_with(z: &[Letter], exec: Exec) -> (Rational, Option<Violation>) {
    if z.len() < 2 {
        return (Rational::ZERO, None);
    }
    let compact = compact_letters(z);
    let best = par::map_reduce_range(
        1..z.len() / 2 + 1,
        exec,
        BitLcs::new,
        |kernel, ell| best_of_length(kernel, &compact, ell),
        None,
        prefer,
    )
    .expect("at least one factor pair");
    (best.beta(), Some(best.into_violation(z)))
}

/// Best pair ending exactly at the last position of `z`.
pub(crate) fn best_ending_at(kernel: &mut BitLcs, z: &[Letter]) -> Option<Candidate> {
    let e = z.len();
    let mut best = None;
    for ell in 1..=e / 2 {
        let t = e - 2 * ell;
        let lcs = kernel.lcs(&z[t..t + ell], &z[t + ell..]);
        best = prefer(best, Some(Candidate { lcs, ell, t }));
    }
    best
}

/// Among pairs `xx'` ending at the last letter of `z`, the most similar one
/// if it violates `simc <= alpha` (i.e. `s > alpha`).
///
/// When every proper prefix of `z` already satisfies the threshold, this is
/// exactly the check needed after appending the last letter.
pub fn max_similarity_ending_at(z: &[Letter], alpha: Rational) -> Option<Violation> {
    max_similarity_ending_at_with(z, alpha, Predicate::Le, Exec::Sequential)
}

pub fn max_similarity_ending_at_with(
    z: &[Letter],
    alpha: Rational,
    predicate: Predicate,
    exec: Exec,
) -> Option<Violation> {
    let e = z.len();
    if e < 2 {
        return None;
    }
    let compact = compact_letters(z);
    let best = if e >= PAR_MIN_LEN && exec.is_parallel() {
        par::map_reduce_range(
            1..e / 2 + 1,
            exec,
            BitLcs::new,
            |kernel, ell| {
                let t = e - 2 * ell;
                let lcs = kernel.lcs(&compact[t..t + ell], &compact[t + ell..]);
                Some(Candidate { lcs, ell, t })
            },
            None,
            prefer,
        )
    } else {
        best_ending_at(&mut BitLcs::new(), &compact)
    }?;
    predicate
        .violates(best.lcs, best.ell, alpha)
        .then(|| best.into_violation(z))
}

/// Reusable checker for words that grow one letter at a time.
#[derive(Debug, Default)]
pub struct EndingScanner {
    kernel: BitLcs,
}

impl EndingScanner {
    pub fn new() -> Self {
        Self::default()
    }

    /// Same contract as [`max_similarity_ending_at_with`], sequential.
    pub fn max_violation(&mut self, z: &[Letter], alpha: Rational, predicate: Predicate) -> Option<Violation> {
        let compact = compact_letters(z);
        let best = best_ending_at(&mut self.kernel, &compact)?;
        predicate
            .violates(best.lcs, best.ell, alpha)
            .then(|| best.into_violation(z))
    }

    /// True if any pair ending at the last letter violates; stops at the
    /// first violating factor length.
    pub fn any_violation(&mut self, z: &[Letter], alpha: Rational, predicate: Predicate) -> bool {
        let compact = compact_letters(z);
        let e = compact.len();
        (1..=e / 2).any(|ell| {
            let t = e - 2 * ell;
            let lcs = self.kernel.lcs(&compact[t..t + ell], &compact[t + ell..]);
            predicate.violates(lcs, ell, alpha)
        })
    }
}
