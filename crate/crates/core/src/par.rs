//! Execution strategy for the data-parallel loops.
//!
//! With the `parallel` feature (default) [`Exec::Parallel`] runs on rayon's
//! global pool. Without it every strategy collapses to the sequential loop,
//! so results never depend on the feature set.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// Maps every index of `range` with per-worker scratch state and folds the
/// results with an associative `reduce`.
pub(crate) fn map_reduce_range<S, T, Init, Map, Red>(
    range: Range<usize>,
    exec: Exec,
    init: Init,
    map: Map,
    identity: T,
    reduce: Red,
) -> T
where
    S: Send,
    T: Send + Clone + Sync,
    Init: Fn() -> S + Send + Sync,
    Map: Fn(&mut S, usize) -> T + Send + Sync,
    Red: Fn(T, T) -> T + Send + Sync,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return range
            .into_par_iter()
            .map_init(&init, &map)
            .reduce(|| identity.clone(), &reduce);
    }
    let _ = exec;
    let mut state = init();
    range.fold(identity, |acc, i| reduce(acc, map(&mut state, i)))
}

/// Order-preserving map over a slice.
pub(crate) fn map_slice<I, O, F>(items: &[I], exec: Exec, f: F) -> Vec<O>
where
    I: Sync,
    O: Send,
    F: Fn(&I) -> O + Send + Sync,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Smallest index in `range` satisfying `pred`.
pub(crate) fn find_first<F>(range: Range<usize>, exec: Exec, pred: F) -> Option<usize>
where
    F: Fn(usize) -> bool + Send + Sync,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return range.into_par_iter().find_first(|&i| pred(i));
    }
    let _ = exec;
    range.into_iter().find(|&i| pred(i))
}
