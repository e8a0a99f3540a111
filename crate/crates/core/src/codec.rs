//! The execution log `{R, X, Y, S}` of a generator run and its inverse.
//!
//! * `R` is a lattice route: one up-step per appended letter, one down-step
//!   per erased letter, then one down-step per letter of the final word.
//! * `X` concatenates the erased blocks `x'` with their canonical LCS
//!   positions replaced by `*`, padded with `*` to length `M`.
//! * `Y` concatenates masks over the matching `x`: `*` on LCS positions and
//!   `0` elsewhere, padded with `*` to length `M`.
//! * `S` is the word held after the last step.
//!
//! [`decode`] recovers the full sequence of drawn letters from a log alone,
//! which makes the map from choice sequences to logs injective.
//!
//! JSON form (see `tests/golden/worked_log.json`):
//!
//! ```text
//! { "params": {"k": 43, "alpha": "37/50", "n": 12},
//!   "M": 12,
//!   "R": "1111...0000",        // 1 = up, 0 = down
//!   "X": ["*", 5, "*", ...],   // "*" or a letter code
//!   "Y": ["*", "*", 0, ...],   // "*" or 0
//!   "S": [1, 2, 10, ...] }
//! ```

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::error::{Error, Result};
use crate::generator::{RunEvent, RunTrace};
use crate::rational::Rational;
use crate::simc::Predicate;
use crate::word::{Letter, ZERO_DIGIT_CODE};

/// Entry of `X`: a star or an explicit letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symbol {
    Star,
    Letter(Letter),
}

/// Entry of `Y`: a star or zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mark {
    Star,
    Zero,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawSymbol {
    Text(String),
    Code(u32),
}

impl Serialize for Symbol {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Symbol::Star => s.serialize_str("*"),
            Symbol::Letter(a) => s.serialize_u32(*a),
        }
    }
}

impl<'de> Deserialize<'de> for Symbol {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match RawSymbol::deserialize(d)? {
            RawSymbol::Text(t) if t == "*" => Ok(Symbol::Star),
            RawSymbol::Code(a) if a > 0 => Ok(Symbol::Letter(a)),
            _ => Err(serde::de::Error::custom(
                "X entries are \"*\" or a positive letter code",
            )),
        }
    }
}

impl Serialize for Mark {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Mark::Star => s.serialize_str("*"),
            Mark::Zero => s.serialize_u32(0),
        }
    }
}

impl<'de> Deserialize<'de> for Mark {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match RawSymbol::deserialize(d)? {
            RawSymbol::Text(t) if t == "*" => Ok(Mark::Star),
            RawSymbol::Code(0) => Ok(Mark::Zero),
            _ => Err(serde::de::Error::custom("Y entries are \"*\" or 0")),
        }
    }
}

/// Renders `X` entries compactly: `*`, digits for codes 1..=9, `0` for the
/// zero-digit code, `[c]` otherwise.
pub fn render_symbols(symbols: &[Symbol]) -> String {
    symbols
        .iter()
        .map(|s| match *s {
            Symbol::Star => "*".to_string(),
            Symbol::Letter(ZERO_DIGIT_CODE) => "0".to_string(),
            Symbol::Letter(a @ 1..=9) => a.to_string(),
            Symbol::Letter(a) => format!("[{a}]"),
        })
        .collect()
}

pub fn render_marks(marks: &[Mark]) -> String {
    marks
        .iter()
        .map(|m| match m {
            Mark::Star => '*',
            Mark::Zero => '0',
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    Up,
    Down,
}

/// A route of up/down steps, serialized as a string of `1` (up) and `0` (down).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DyckRoute {
    pub steps: Vec<Step>,
}

impl DyckRoute {
    pub fn from_bits(bits: &str) -> Result<Self> {
        let steps = bits
            .chars()
            .map(|c| match c {
                '1' => Ok(Step::Up),
                '0' => Ok(Step::Down),
                _ => Err(Error::MalformedLog(format!("route symbol {c:?} is not 0 or 1"))),
            })
            .collect::<Result<_>>()?;
        Ok(DyckRoute { steps })
    }

    pub fn to_bits(&self) -> String {
        self.steps
            .iter()
            .map(|s| if *s == Step::Up { '1' } else { '0' })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Route problems relative to a run of `m` steps: total length `2m`,
    /// exactly `m` up-steps, never below the axis.
    pub fn violations(&self, m: usize) -> Vec<LogViolation> {
        let mut out = Vec::new();
        if self.steps.len() != 2 * m {
            out.push(LogViolation::RouteLength {
                expected: 2 * m,
                actual: self.steps.len(),
            });
        }
        let ups = self.steps.iter().filter(|s| **s == Step::Up).count();
        if ups != m {
            out.push(LogViolation::UpCount {
                expected: m,
                actual: ups,
            });
        }
        let mut height = 0i64;
        for (i, s) in self.steps.iter().enumerate() {
            height += if *s == Step::Up { 1 } else { -1 };
            if height < 0 {
                out.push(LogViolation::BelowAxis { step: i });
                break;
            }
        }
        out
    }

    pub fn is_valid(&self, m: usize) -> bool {
        self.violations(m).is_empty()
    }
}

impl Serialize for DyckRoute {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_bits())
    }
}

impl<'de> Deserialize<'de> for DyckRoute {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let bits = String::deserialize(d)?;
        DyckRoute::from_bits(&bits).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogParams {
    pub k: u32,
    pub alpha: Rational,
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExecutionLog {
    pub params: LogParams,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "R")]
    pub route: DyckRoute,
    #[serde(rename = "X")]
    pub x: Vec<Symbol>,
    #[serde(rename = "Y")]
    pub y: Vec<Mark>,
    #[serde(rename = "S")]
    pub s: Vec<Letter>,
}

impl ExecutionLog {
    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("log serializes");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::MalformedLog(e.to_string()))
    }
}

/// A broken log invariant. [`validate`] collects all of them.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LogViolation {
    #[error("route has {actual} steps, expected {expected}")]
    RouteLength { expected: usize, actual: usize },
    #[error("route has {actual} up-steps, expected {expected}")]
    UpCount { expected: usize, actual: usize },
    #[error("route goes below the axis at step {step}")]
    BelowAxis { step: usize },
    #[error("X has length {actual}, expected {expected}")]
    XLength { expected: usize, actual: usize },
    #[error("Y has length {actual}, expected {expected}")]
    YLength { expected: usize, actual: usize },
    #[error("S has length {len}, more than n = {n}")]
    SLongerThanN { len: usize, n: usize },
    #[error("letter {letter} in {field} outside 1..={k}")]
    LetterOutOfRange {
        field: &'static str,
        letter: Letter,
        k: u32,
    },
    #[error("the last |S| = {len} route steps are not all down-steps")]
    FinalDescent { len: usize },
    #[error("erase block {block} of length {ell} starts at {start}, leaving no room for the matching factor")]
    MissingFactor { block: usize, start: usize, ell: usize },
    #[error("erased letters {erased} exceed X/Y capacity {capacity}")]
    ErasedOverflow { erased: usize, capacity: usize },
    #[error("padding entry {index} of {field} is not a star")]
    PaddingNotStar { field: &'static str, index: usize },
    #[error("block {block}: X has {x_stars} stars but Y has {y_stars}")]
    StarMismatch {
        block: usize,
        x_stars: usize,
        y_stars: usize,
    },
    #[error("block {block}: {stars} stars out of {ell} is not more than alpha = {alpha}")]
    StarCountTooLow {
        block: usize,
        stars: usize,
        ell: usize,
        alpha: Rational,
    },
}

impl LogViolation {
    /// False only for violations that leave the log decodable.
    pub fn blocks_decoding(&self) -> bool {
        !matches!(self, LogViolation::StarCountTooLow { .. })
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Star => f.write_str("*"),
            Symbol::Letter(a) => write!(f, "{a}"),
        }
    }
}

/// Encodes a generator trace as its log.
pub fn encode(trace: &RunTrace) -> Result<ExecutionLog> {
    let bad = |msg: String| Error::InconsistentTrace(msg);
    let alpha = trace.params.alpha;
    let m = trace.steps();
    let mut steps = Vec::with_capacity(2 * m);
    let mut x = Vec::with_capacity(m);
    let mut y = Vec::with_capacity(m);
    let mut word: Vec<Letter> = Vec::new();
    let mut appended = 0usize;
    let mut last_was_append = false;

    for (index, event) in trace.events.iter().enumerate() {
        match event {
            RunEvent::Append { letter } => {
                if trace.random_choices.get(appended) != Some(letter) {
                    return Err(bad(format!("append {index} does not match choice {appended}")));
                }
                appended += 1;
                word.push(*letter);
                steps.push(Step::Up);
                last_was_append = true;
            }
            RunEvent::Erase {
                t,
                ell,
                x_block,
                y_block,
            } => {
                let (t, ell) = (*t, *ell);
                if !last_was_append {
                    return Err(bad(format!("erase {index} does not follow an append")));
                }
                if ell == 0 || x_block.len() != ell || y_block.len() != ell {
                    return Err(bad(format!("erase {index} has inconsistent block lengths")));
                }
                if t + 2 * ell != word.len() {
                    return Err(bad(format!("erase {index} does not end at the last letter")));
                }
                let x_stars = x_block.iter().filter(|s| **s == Symbol::Star).count();
                let y_stars = y_block.iter().filter(|s| **s == Mark::Star).count();
                if x_stars != y_stars || !Predicate::Le.violates(x_stars, ell, alpha) {
                    return Err(bad(format!("erase {index} star counts {x_stars}/{y_stars} invalid")));
                }
                let (xf, xpf) = word[t..].split_at(ell);
                let mut matched = xf
                    .iter()
                    .zip(y_block)
                    .filter(|(_, m)| **m == Mark::Star)
                    .map(|(a, _)| a);
                for (sym, a) in x_block.iter().zip(xpf) {
                    let ok = match sym {
                        Symbol::Letter(b) => b == a,
                        Symbol::Star => matched.next() == Some(a),
                    };
                    if !ok {
                        return Err(bad(format!("erase {index} block does not describe the erased factor")));
                    }
                }
                word.truncate(t + ell);
                steps.extend(std::iter::repeat_n(Step::Down, ell));
                x.extend_from_slice(x_block);
                y.extend_from_slice(y_block);
                last_was_append = false;
            }
        }
    }
    if appended != m {
        return Err(bad(format!("{appended} appends but {m} choices")));
    }
    if word.as_slice() != trace.outcome.word().letters() {
        return Err(bad("final word differs from replayed events".into()));
    }

    steps.extend(std::iter::repeat_n(Step::Down, word.len()));
    x.resize(m, Symbol::Star);
    y.resize(m, Mark::Star);
    Ok(ExecutionLog {
        params: LogParams {
            k: trace.params.k,
            alpha,
            n: trace.params.n,
        },
        m,
        route: DyckRoute { steps },
        x,
        y,
        s: word,
    })
}

/// One step of the forward reading of `R`.
#[derive(Clone, Copy, Debug)]
enum Move {
    /// A letter appended at this 0-based position.
    Append { pos: usize },
    /// Block `block` of `ell` letters erased, starting at `start`; the
    /// matching factor `x` occupies `[start - ell, start)`.
    Erase { start: usize, ell: usize, block: usize },
}

struct Plan {
    moves: Vec<Move>,
    /// Offset of each erase block inside `X` and `Y`.
    offsets: Vec<usize>,
}

/// Preparatory pass: reads the route forward, strips the final descent and
/// maps every down-run to its block. Returns the plan when the structure is
/// sound enough to attempt decoding.
fn analyze(log: &ExecutionLog, out: &mut Vec<LogViolation>) -> Option<Plan> {
    let m = log.m;
    let k = log.params.k;
    let route_problems = log.route.violations(m);
    let route_ok = route_problems.is_empty();
    out.extend(route_problems);
    if log.x.len() != m {
        out.push(LogViolation::XLength {
            expected: m,
            actual: log.x.len(),
        });
    }
    if log.y.len() != m {
        out.push(LogViolation::YLength {
            expected: m,
            actual: log.y.len(),
        });
    }
    if log.s.len() > log.params.n {
        out.push(LogViolation::SLongerThanN {
            len: log.s.len(),
            n: log.params.n,
        });
    }
    for (field, letters) in [
        ("S", log.s.clone()),
        (
            "X",
            log.x
                .iter()
                .filter_map(|s| match s {
                    Symbol::Letter(a) => Some(*a),
                    Symbol::Star => None,
                })
                .collect(),
        ),
    ] {
        if let Some(&letter) = letters.iter().find(|&&a| a == 0 || a > k) {
            out.push(LogViolation::LetterOutOfRange { field, letter, k });
        }
    }
    if !route_ok {
        return None;
    }

    let body_len = match (2 * m).checked_sub(log.s.len()) {
        Some(b) if log.route.steps[b..].iter().all(|s| *s == Step::Down) => b,
        _ => {
            out.push(LogViolation::FinalDescent { len: log.s.len() });
            return None;
        }
    };

    let mut moves = Vec::with_capacity(body_len);
    let mut offsets = Vec::new();
    let mut len = 0usize;
    let mut erased = 0usize;
    let mut structural = false;
    let body = &log.route.steps[..body_len];
    let mut i = 0;
    while i < body.len() {
        if body[i] == Step::Up {
            moves.push(Move::Append { pos: len });
            len += 1;
            i += 1;
            continue;
        }
        let ell = body[i..].iter().take_while(|s| **s == Step::Down).count();
        let block = offsets.len();
        // Route validity already guarantees len >= ell.
        let start = len - ell;
        if start < ell {
            out.push(LogViolation::MissingFactor { block, start, ell });
            structural = true;
        }
        moves.push(Move::Erase { start, ell, block });
        offsets.push(erased);
        erased += ell;
        len = start;
        i += ell;
    }

    let capacity = log.x.len().min(log.y.len());
    if erased > capacity {
        out.push(LogViolation::ErasedOverflow { erased, capacity });
        return None;
    }
    for (index, s) in log.x.iter().enumerate().skip(erased) {
        if *s != Symbol::Star {
            out.push(LogViolation::PaddingNotStar { field: "X", index });
        }
    }
    for (index, s) in log.y.iter().enumerate().skip(erased) {
        if *s != Mark::Star {
            out.push(LogViolation::PaddingNotStar { field: "Y", index });
        }
    }
    for mv in &moves {
        if let Move::Erase { ell, block, .. } = *mv {
            let off = offsets[block];
            let x_stars = log.x[off..off + ell].iter().filter(|s| **s == Symbol::Star).count();
            let y_stars = log.y[off..off + ell].iter().filter(|s| **s == Mark::Star).count();
            if x_stars != y_stars {
                out.push(LogViolation::StarMismatch {
                    block,
                    x_stars,
                    y_stars,
                });
            }
            if !Predicate::Le.violates(x_stars, ell, log.params.alpha) {
                out.push(LogViolation::StarCountTooLow {
                    block,
                    stars: x_stars,
                    ell,
                    alpha: log.params.alpha,
                });
            }
        }
    }
    (!structural).then_some(Plan { moves, offsets })
}

/// Every broken invariant of `log`; empty for a well-formed log.
pub fn validate(log: &ExecutionLog) -> Vec<LogViolation> {
    let mut out = Vec::new();
    analyze(log, &mut out);
    out
}

/// Recovers the drawn letters `r_1..r_M` from a log.
///
/// Walks the route backward from its end. An up-step pops the letter that
/// step appended. A down-run restores its erased block: the starred
/// positions of the `Y` block pick the LCS letters out of the factor `x`
/// sitting just before the block, and those letters fill the stars of the
/// `X` block in order.
pub fn decode(log: &ExecutionLog) -> Result<Vec<Letter>> {
    let mut problems = Vec::new();
    let plan = analyze(log, &mut problems);
    if let Some(p) = problems.iter().find(|p| p.blocks_decoding()) {
        return Err(Error::MalformedLog(p.to_string()));
    }
    let plan = plan.ok_or_else(|| Error::MalformedLog("route could not be analyzed".into()))?;

    let mut word = log.s.clone();
    let mut choices = vec![0; log.m];
    let mut j = log.m;
    for mv in plan.moves.iter().rev() {
        match *mv {
            Move::Append { pos } => {
                if word.len() != pos + 1 {
                    return Err(Error::MalformedLog(format!("no letter at position {pos}")));
                }
                j -= 1;
                choices[j] = word.pop().unwrap();
            }
            Move::Erase { start, ell, block } => {
                if word.len() != start || start < ell {
                    return Err(Error::MalformedLog(format!("block {block} cannot be restored")));
                }
                let off = plan.offsets[block];
                let x_block = &log.x[off..off + ell];
                let y_block = &log.y[off..off + ell];
                let lcs: Vec<Letter> = word[start - ell..start]
                    .iter()
                    .zip(y_block)
                    .filter(|(_, m)| **m == Mark::Star)
                    .map(|(a, _)| *a)
                    .collect();
                let mut fill = lcs.into_iter();
                for sym in x_block {
                    let letter = match *sym {
                        Symbol::Letter(a) => a,
                        Symbol::Star => fill
                            .next()
                            .ok_or_else(|| Error::MalformedLog(format!("block {block} has too many stars")))?,
                    };
                    word.push(letter);
                }
            }
        }
    }
    if j != 0 || !word.is_empty() {
        return Err(Error::MalformedLog("route does not account for every step".into()));
    }
    Ok(choices)
}
