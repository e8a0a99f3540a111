//! Brute-force reference for the similarity coefficient.
//!
//! Every factor pair is scored with its own quadratic dynamic program. The
//! code deliberately shares nothing with the fast scanning routines so it
//! can be used to check them (and to re-verify generator output).

use crate::rational::Rational;
use crate::simc::Predicate;
use crate::word::Letter;

/// A scored pair found by the oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OraclePair {
    pub t: usize,
    pub ell: usize,
    pub lcs: usize,
}

impl OraclePair {
    pub fn beta(&self) -> Rational {
        Rational::new(self.lcs as u64, self.ell as u64).unwrap()
    }
}

fn table_lcs(x: &[Letter], y: &[Letter], rows: &mut [Vec<usize>; 2]) -> usize {
    for row in rows.iter_mut() {
        row.clear();
        row.resize(y.len() + 1, 0);
    }
    for (i, &a) in x.iter().enumerate() {
        let (prev, cur) = if i % 2 == 0 {
            let (p, c) = rows.split_at_mut(1);
            (&p[0], &mut c[0])
        } else {
            let (c, p) = rows.split_at_mut(1);
            (&p[0], &mut c[0])
        };
        for (j, &b) in y.iter().enumerate() {
            cur[j + 1] = if a == b { prev[j] + 1 } else { prev[j + 1].max(cur[j]) };
        }
    }
    rows[x.len() % 2][y.len()]
}

/// Every adjacent equal-length factor pair of `z` with its LCS length,
/// ordered by `ell`, then `t`.
pub fn all_pairs(z: &[Letter]) -> Vec<OraclePair> {
    let mut out = Vec::new();
    let mut rows = [Vec::new(), Vec::new()];
    for ell in 1..=z.len() / 2 {
        for t in 0..=z.len() - 2 * ell {
            let lcs = table_lcs(&z[t..t + ell], &z[t + ell..t + 2 * ell], &mut rows);
            out.push(OraclePair { t, ell, lcs });
        }
    }
    out
}

/// First maximum in (ell, t) order, which is the library's tie-break.
fn first_max(pairs: impl Iterator<Item = OraclePair>) -> Option<OraclePair> {
    let mut best: Option<OraclePair> = None;
    for p in pairs {
        let better = match best {
            None => true,
            Some(b) => p.lcs * b.ell > b.lcs * p.ell,
        };
        if better {
            best = Some(p);
        }
    }
    best
}

/// `simc(z)` with its tie-broken witness; `(0, None)` below length two.
pub fn simc(z: &[Letter]) -> (Rational, Option<OraclePair>) {
    match first_max(all_pairs(z).into_iter()) {
        Some(p) => (p.beta(), Some(p)),
        None => (Rational::ZERO, None),
    }
}

/// Most similar pair ending at the last letter, if it violates `predicate`.
pub fn violation_ending_at(z: &[Letter], alpha: Rational, predicate: Predicate) -> Option<OraclePair> {
    let end = z.len();
    let best = first_max(all_pairs(z).into_iter().filter(|p| p.t + 2 * p.ell == end))?;
    predicate.violates(best.lcs, best.ell, alpha).then_some(best)
}

/// True if every factor pair of `z` satisfies `predicate` against `alpha`.
pub fn satisfies(z: &[Letter], alpha: Rational, predicate: Predicate) -> bool {
    predicate.accepts(simc(z).0, alpha)
}
