//! Words whose adjacent equal-length factors are never too similar.
//!
//! The similarity of two equal-length words is `lcs(x, x') / |x|`, and the
//! similarity coefficient of a word is the largest similarity over its
//! adjacent factor pairs `xx'`. This crate provides:
//!
//! * exact LCS and similarity-coefficient computation ([`lcs`], [`simc`]),
//!   with a brute-force reference in [`oracle`];
//! * a randomized backtracking generator for words with coefficient at most
//!   `alpha` ([`generator`]);
//! * the execution log of a generator run and its decoder, which shows runs
//!   are recoverable from their logs ([`codec`]);
//! * exact evaluation of the resulting counting bound ([`bounds`]);
//! * a deterministic exhaustive search ([`search`]) and profiling of morphic
//!   words ([`morphic`]).
//!
//! Data-parallel loops run on rayon when the `parallel` feature is enabled
//! (the default); see [`Exec`].

pub mod bounds;
pub mod codec;
pub mod error;
pub mod generator;
pub mod lcs;
pub mod morphic;
pub mod oracle;
mod par;
pub mod rational;
pub mod search;
pub mod simc;
pub mod word;

pub use error::{Error, Result};
pub use par::Exec;
pub use rational::Rational;
pub use simc::{Predicate, Violation};
pub use word::{Alignment, Letter, Word};
