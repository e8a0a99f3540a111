//! Deterministic depth-first search for long words below a threshold.
//!
//! Letters are tried in increasing order. A candidate letter is rejected
//! when it completes a factor pair ending at it that violates the predicate;
//! when no letter fits, the search backtracks one more letter. The first
//! word of the target length reached is therefore the lexicographically
//! smallest one, and the longest word seen is the lexicographically smallest
//! among words of maximal length.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::rational::Rational;
use crate::simc::{EndingScanner, Predicate};
use crate::word::{Letter, Word};

pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub predicate: Predicate,
    /// Maximum number of candidate letters tested.
    pub node_budget: u64,
    /// Branch only on letter 1 at the root. Renaming letters maps every
    /// other root subtree onto this one, so outcomes are unchanged.
    pub symmetry_reduction: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            predicate: Predicate::Lt,
            node_budget: DEFAULT_NODE_BUDGET,
            symmetry_reduction: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SearchOutcome {
    Found { word: Word },
    Exhausted { longest: Word, max_length: usize },
    BudgetExceeded { longest: Word, nodes: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    pub outcome: SearchOutcome,
    pub nodes_visited: u64,
}

impl SearchResult {
    /// The found word, or the longest word seen.
    pub fn best_word(&self) -> &Word {
        match &self.outcome {
            SearchOutcome::Found { word } => word,
            SearchOutcome::Exhausted { longest, .. } | SearchOutcome::BudgetExceeded { longest, .. } => longest,
        }
    }
}

/// Snapshot passed to progress callbacks.
#[derive(Clone, Copy, Debug)]
pub struct SearchProgress {
    pub nodes: u64,
    pub depth: usize,
    pub longest: usize,
}

const PROGRESS_INTERVAL: u64 = 1 << 20;

fn check(k: u32, alpha: Rational, n: usize) -> Result<()> {
    if k == 0 || n == 0 {
        return Err(Error::InvalidParams("k and n must be positive".into()));
    }
    if alpha.is_zero() {
        return Err(Error::InvalidParams("alpha must be positive".into()));
    }
    Ok(())
}

pub fn search(k: u32, alpha: Rational, n: usize, options: &SearchOptions) -> Result<SearchResult> {
    search_with_progress(k, alpha, n, options, |_| {})
}

/// Like [`search`], calling `progress` every 2^20 nodes.
pub fn search_with_progress(
    k: u32,
    alpha: Rational,
    n: usize,
    options: &SearchOptions,
    progress: impl FnMut(SearchProgress),
) -> Result<SearchResult> {
    check(k, alpha, n)?;
    let root_limit = if options.symmetry_reduction { 1 } else { k };
    Ok(dfs(k, alpha, n, options, Vec::new(), root_limit, progress))
}

/// DFS below a fixed `prefix`; the first free position branches on
/// `1..=first_limit`.
fn dfs(
    k: u32,
    alpha: Rational,
    n: usize,
    options: &SearchOptions,
    prefix: Vec<Letter>,
    first_limit: u32,
    mut progress: impl FnMut(SearchProgress),
) -> SearchResult {
    let base = prefix.len();
    let mut scanner = EndingScanner::new();
    let mut word = prefix;
    let mut longest = word.clone();
    let mut next: Vec<Letter> = vec![1];
    let mut nodes = 0u64;

    if word.len() >= n {
        word.truncate(n);
        return SearchResult {
            outcome: SearchOutcome::Found {
                word: Word::from_raw(word, k),
            },
            nodes_visited: 0,
        };
    }

    loop {
        let depth = word.len() - base;
        let limit = if depth == 0 { first_limit } else { k };
        let letter = next[depth];
        if letter > limit {
            if depth == 0 {
                let max_length = longest.len();
                return SearchResult {
                    outcome: SearchOutcome::Exhausted {
                        longest: Word::from_raw(longest, k),
                        max_length,
                    },
                    nodes_visited: nodes,
                };
            }
            word.pop();
            next.pop();
            next[depth - 1] += 1;
            continue;
        }
        if nodes == options.node_budget {
            return SearchResult {
                outcome: SearchOutcome::BudgetExceeded {
                    longest: Word::from_raw(longest, k),
                    nodes,
                },
                nodes_visited: nodes,
            };
        }
        nodes += 1;
        if nodes.is_multiple_of(PROGRESS_INTERVAL) {
            progress(SearchProgress {
                nodes,
                depth: word.len(),
                longest: longest.len(),
            });
        }

        word.push(letter);
        if scanner.any_violation(&word, alpha, options.predicate) {
            word.pop();
            next[depth] += 1;
            continue;
        }
        if word.len() > longest.len() {
            longest.clone_from(&word);
        }
        if word.len() == n {
            return SearchResult {
                outcome: SearchOutcome::Found {
                    word: Word::from_raw(word, k),
                },
                nodes_visited: nodes,
            };
        }
        next.push(1);
    }
}

/// Runs one DFS per valid two-letter prefix and merges them.
///
/// Every branch runs to its own end (each with the full `node_budget`), so
/// the result does not depend on scheduling: `Found` comes from the
/// lexicographically first branch that found a word (the same word the
/// sequential search finds when neither hits its budget), `Exhausted` needs
/// every branch exhausted, and `nodes_visited` is the sum over branches.
pub fn search_parallel(k: u32, alpha: Rational, n: usize, options: &SearchOptions, exec: Exec) -> Result<SearchResult> {
    check(k, alpha, n)?;
    let root_limit = if options.symmetry_reduction { 1 } else { k };
    let mut scanner = EndingScanner::new();
    let mut prefixes = Vec::new();
    let mut root_nodes = 0u64;
    let mut longest: Vec<Letter> = Vec::new();
    for a in 1..=root_limit {
        root_nodes += 1;
        if longest.is_empty() {
            longest = vec![a];
        }
        if n == 1 {
            return Ok(SearchResult {
                outcome: SearchOutcome::Found {
                    word: Word::from_raw(vec![a], k),
                },
                nodes_visited: root_nodes,
            });
        }
        for b in 1..=k {
            root_nodes += 1;
            let w = vec![a, b];
            if !scanner.any_violation(&w, alpha, options.predicate) {
                prefixes.push(w);
            }
        }
    }

    let results = par::map_slice(&prefixes, exec, |p| dfs(k, alpha, n, options, p.clone(), k, |_| {}));
    let nodes_visited = root_nodes + results.iter().map(|r| r.nodes_visited).sum::<u64>();

    if let Some(found) = results
        .iter()
        .find(|r| matches!(r.outcome, SearchOutcome::Found { .. }))
    {
        return Ok(SearchResult {
            outcome: found.outcome.clone(),
            nodes_visited,
        });
    }
    for r in &results {
        if r.best_word().len() > longest.len() {
            longest = r.best_word().letters().to_vec();
        }
    }
    let longest = Word::from_raw(longest, k);
    let outcome = if results
        .iter()
        .any(|r| matches!(r.outcome, SearchOutcome::BudgetExceeded { .. }))
    {
        SearchOutcome::BudgetExceeded {
            longest,
            nodes: nodes_visited,
        }
    } else {
        let max_length = longest.len();
        SearchOutcome::Exhausted { longest, max_length }
    };
    Ok(SearchResult { outcome, nodes_visited })
}
