//! Randomized backtracking construction of a word with `simc <= alpha`.
//!
//! Each step draws a letter uniformly from `{1..k}` and appends it. If some
//! factor pair `xx'` ending at the new letter has `s(x, x') > alpha`, the most
//! similar such pair is chosen (ties: shortest, then earliest) and `x'` is
//! erased. Because the word before the append was clean, only pairs ending at
//! the new letter need checking.
//!
//! Letters come from ChaCha8 seeded with the run's 64-bit seed via
//! `seed_from_u64`, sampled with `gen_range(1..=k)`; both are stable across
//! platforms for a fixed `rand` major version.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::codec::{Mark, Symbol};
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::rational::Rational;
use crate::simc::{EndingScanner, Predicate};
use crate::word::{check_letters, Letter, Word};

pub const DEFAULT_MAX_STEPS: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunParams {
    pub n: usize,
    pub k: u32,
    pub alpha: Rational,
    pub seed: u64,
    /// Cap on the number of appended letters; `None` means unbounded.
    pub max_steps: Option<u64>,
}

impl RunParams {
    pub fn new(n: usize, k: u32, alpha: Rational, seed: u64) -> Self {
        RunParams {
            n,
            k,
            alpha,
            seed,
            max_steps: Some(DEFAULT_MAX_STEPS),
        }
    }

    pub fn with_max_steps(mut self, max_steps: Option<u64>) -> Self {
        self.max_steps = max_steps;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParams("n must be at least 1".into()));
        }
        if self.k < 2 {
            return Err(Error::InvalidParams("k must be at least 2".into()));
        }
        if !self.alpha.is_proper_fraction() {
            return Err(Error::InvalidParams(format!(
                "alpha must lie strictly between 0 and 1, got {}",
                self.alpha
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "lowercase")]
pub enum RunEvent {
    Append {
        letter: Letter,
    },
    /// `x = S[t..t+ell)` and `x' = S[t+ell..t+2ell)` (0-based) were too
    /// similar and `x'` was removed. `x_block` is `x'` with its canonical LCS
    /// positions starred; `y_block` stars the matching positions of `x` and
    /// marks the rest with zero.
    Erase {
        t: usize,
        ell: usize,
        x_block: Vec<Symbol>,
        y_block: Vec<Mark>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "word", rename_all = "snake_case")]
pub enum Outcome {
    Completed(Word),
    StepBudgetExhausted(Word),
}

impl Outcome {
    pub fn word(&self) -> &Word {
        match self {
            Outcome::Completed(w) | Outcome::StepBudgetExhausted(w) => w,
        }
    }

    pub fn is_completed(&self) -> bool {
        matches!(self, Outcome::Completed(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunTrace {
    pub params: RunParams,
    pub events: Vec<RunEvent>,
    pub random_choices: Vec<Letter>,
    pub outcome: Outcome,
}

impl RunTrace {
    /// Number of appended letters.
    pub fn steps(&self) -> usize {
        self.random_choices.len()
    }

    pub fn erase_count(&self) -> usize {
        self.events
            .iter()
            .filter(|e| matches!(e, RunEvent::Erase { .. }))
            .count()
    }
}

/// Runs the generator with letters drawn from the seeded PRNG.
pub fn run(params: &RunParams) -> Result<RunTrace> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let k = params.k;
    execute(params, || Some(rng.random_range(1..=k)))
}

/// Runs the generator consuming `choices` in order. Running out of choices
/// before the word is complete ends the run as `StepBudgetExhausted`.
pub fn replay(params: &RunParams, choices: &[Letter]) -> Result<RunTrace> {
    params.validate()?;
    check_letters(choices, params.k)?;
    let mut it = choices.iter().copied();
    execute(params, || it.next())
}

/// Independent runs, one per parameter set, in input order.
pub fn run_batch(params: &[RunParams], exec: Exec) -> Vec<Result<RunTrace>> {
    par::map_slice(params, exec, run)
}

fn execute(params: &RunParams, mut draw: impl FnMut() -> Option<Letter>) -> Result<RunTrace> {
    let mut scanner = EndingScanner::new();
    let mut word: Vec<Letter> = Vec::with_capacity(params.n);
    let mut events = Vec::new();
    let mut choices = Vec::new();
    let budget = params.max_steps.unwrap_or(u64::MAX);

    while word.len() < params.n {
        if choices.len() as u64 >= budget {
            break;
        }
        let Some(letter) = draw() else { break };
        choices.push(letter);
        word.push(letter);
        events.push(RunEvent::Append { letter });

        if let Some(v) = scanner.max_violation(&word, params.alpha, Predicate::Le) {
            let x = v.x(&word);
            let mut x_block: Vec<Symbol> = v.x_prime(&word).iter().map(|&a| Symbol::Letter(a)).collect();
            let mut y_block = vec![Mark::Zero; x.len()];
            for (&i, &j) in v.alignment.left.iter().zip(&v.alignment.right) {
                y_block[i] = Mark::Star;
                x_block[j] = Symbol::Star;
            }
            word.truncate(v.t + v.ell);
            events.push(RunEvent::Erase {
                t: v.t,
                ell: v.ell,
                x_block,
                y_block,
            });
        }
    }

    let word = Word::from_raw(word, params.k);
    let outcome = if word.len() == params.n {
        Outcome::Completed(word)
    } else {
        Outcome::StepBudgetExhausted(word)
    };
    Ok(RunTrace {
        params: params.clone(),
        events,
        random_choices: choices,
        outcome,
    })
}
