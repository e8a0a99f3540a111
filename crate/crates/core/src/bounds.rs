//! Exact evaluation of the log-counting bound.
//!
//! After `M` steps there are `k^M` choice sequences, and each maps to a
//! distinct log. The number of logs is at most
//!
//! ```text
//! (k^(n+1) - 1)/(k - 1) * C_M * sum_{j = ceil(alpha M)}^{M} binom(M, j)^2 k^(M-j)
//! ```
//!
//! (choices of `S`, of the route, of the `(X, Y)` pair). Any `M` for which
//! this is smaller than `k^M` is a contradiction, so the generator must
//! finish within `M` steps for some choice sequence.

use std::io::{self, Write};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::rational::Rational;

/// The `M`-th Catalan number.
pub fn catalan(m: u64) -> BigUint {
    binomial(2 * m, m) / BigUint::from(m + 1)
}

pub fn binomial(n: u64, r: u64) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigUint::one();
    for i in 0..r {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

fn check_params(k: u64, alpha: Rational, n: u64, m: u64) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidParams("k must be at least 2".into()));
    }
    if n < 1 || m < 1 {
        return Err(Error::InvalidParams("n and M must be at least 1".into()));
    }
    if !alpha.is_proper_fraction() {
        return Err(Error::InvalidParams(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    Ok(())
}

/// Number of possible final words: `(k^(n+1) - 1) / (k - 1)`.
fn word_count(k: u64, n: u64) -> BigUint {
    (BigUint::from(k).pow(n as u32 + 1) - 1u32) / BigUint::from(k - 1)
}

/// Number of `(X, Y)` pairs with at least `ceil(alpha M)` stars.
fn star_pair_count(k: u64, alpha: Rational, m: u64) -> BigUint {
    let lo = alpha.ceil_mul(m);
    let k = BigUint::from(k);
    let mut total = BigUint::zero();
    let mut choose = binomial(m, lo);
    for j in lo..=m {
        total += &choose * &choose * k.pow((m - j) as u32);
        choose = choose * (m - j) / (j + 1);
    }
    total
}

/// The exact upper bound on the number of logs after `m` steps.
pub fn log_count_upper_bound(k: u64, alpha: Rational, n: u64, m: u64) -> Result<BigUint> {
    check_params(k, alpha, n, m)?;
    Ok(word_count(k, n) * catalan(m) * star_pair_count(k, alpha, m))
}

fn ser_big<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Both sides of the counting inequality; `contradiction` means `rhs < lhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub k: u64,
    pub alpha: Rational,
    pub n: u64,
    #[serde(rename = "M")]
    pub m: u64,
    #[serde(serialize_with = "ser_big")]
    pub lhs: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub rhs: BigUint,
    pub contradiction: bool,
}

pub fn bound_report(k: u64, alpha: Rational, n: u64, m: u64) -> Result<BoundReport> {
    let rhs = log_count_upper_bound(k, alpha, n, m)?;
    let lhs = BigUint::from(k).pow(m as u32);
    Ok(BoundReport {
        k,
        alpha,
        n,
        m,
        contradiction: rhs < lhs,
        lhs,
        rhs,
    })
}

/// Smallest `M <= m_max` at which the exact bound falls below `k^M`.
pub fn find_contradiction_m(k: u64, alpha: Rational, n: u64, m_max: u64) -> Result<Option<BoundReport>> {
    find_contradiction_m_with(k, alpha, n, m_max, Exec::default())
}

pub fn find_contradiction_m_with(
    k: u64,
    alpha: Rational,
    n: u64,
    m_max: u64,
    exec: Exec,
) -> Result<Option<BoundReport>> {
    check_params(k, alpha, n, 1)?;
    let found = par::find_first(1..m_max as usize + 1, exec, |m| {
        bound_report(k, alpha, n, m as u64).is_ok_and(|r| r.contradiction)
    });
    found.map(|m| bound_report(k, alpha, n, m as u64)).transpose()
}

/// Reports for every `M` in `1..=m_max`, in order.
pub fn bound_grid(k: u64, alpha: Rational, n: u64, m_max: u64, exec: Exec) -> Result<Vec<BoundReport>> {
    check_params(k, alpha, n, 1)?;
    let ms: Vec<u64> = (1..=m_max).collect();
    par::map_slice(&ms, exec, |&m| bound_report(k, alpha, n, m))
        .into_iter()
        .collect()
}

pub fn write_csv<W: Write>(mut out: W, rows: &[BoundReport]) -> io::Result<()> {
    writeln!(out, "k,alpha,n,M,lhs,rhs,contradiction")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.k, r.alpha, r.n, r.m, r.lhs, r.rhs, r.contradiction
        )?;
    }
    Ok(())
}

/// Smallest integer `k` with `k > 16^(1/alpha)`.
///
/// With `alpha = q/p` in lowest terms this is the smallest `k` with
/// `k^q > 16^p`, i.e. one more than the integer `q`-th root of `16^p`
/// (whether or not that root is exact).
pub fn min_alphabet(alpha: Rational) -> Result<BigUint> {
    if !alpha.is_proper_fraction() {
        return Err(Error::InvalidParams(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let (q, p) = (alpha.numer(), alpha.denom());
    let q32 = u32::try_from(q).map_err(|_| Error::InvalidParams("alpha numerator too large".into()))?;
    let p32 = u32::try_from(p).map_err(|_| Error::InvalidParams("alpha denominator too large".into()))?;
    let power = BigUint::from(16u32).pow(p32);
    let root = power.nth_root(q32);
    debug_assert!(root.pow(q32) <= power && (&root + 1u32).pow(q32) > power);
    Ok(root + 1u32)
}

/// Base-2 logarithms of the quantities in the relaxed (asymptotic) chain.
///
/// `relaxed_rhs` is `k^(n+2) 16^M / (M sqrt(pi M)) * k^(M(1-alpha)) / (k-1)^2`.
/// Diagnostic only; it uses floating point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RelaxedBound {
    pub log2_lhs: f64,
    pub log2_exact_rhs: f64,
    pub log2_relaxed_rhs: f64,
}

fn log2_big(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().unwrap().log2();
    }
    let shift = bits - 64;
    (v >> shift).to_f64().unwrap().log2() + shift as f64
}

pub fn relaxed_bound(k: u64, alpha: Rational, n: u64, m: u64) -> Result<RelaxedBound> {
    let report = bound_report(k, alpha, n, m)?;
    let (kf, mf) = (k as f64, m as f64);
    let relaxed = (n as f64 + 2.0) * kf.log2() + mf * 4.0 - (mf * (std::f64::consts::PI * mf).sqrt()).log2()
        + mf * (1.0 - alpha.to_f64()) * kf.log2()
        - 2.0 * (kf - 1.0).log2();
    Ok(RelaxedBound {
        log2_lhs: mf * kf.log2(),
        log2_exact_rhs: log2_big(&report.rhs),
        log2_relaxed_rhs: relaxed,
    })
}
