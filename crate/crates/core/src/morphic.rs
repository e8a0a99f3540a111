//! Fixed points of prolongable morphisms and similarity profiles of long
//! prefixes.

use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lcs::{compact_letters, BitLcs};
use crate::par::{self, Exec};
use crate::rational::Rational;
use crate::simc::{best_of_length, Violation};
use crate::word::{check_letters, Letter, Word};

/// A morphism given as data, e.g.
///
/// ```json
/// {"alphabet_size": 2, "seed": 1, "images": {"1": [1, 2], "2": [2, 1]}}
/// ```
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismSpec {
    pub alphabet_size: u32,
    pub images: BTreeMap<Letter, Vec<Letter>>,
    pub seed: Letter,
}

impl MorphismSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidParams(format!("morphism spec: {e}")))
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.alphabet_size;
        check_letters(&[self.seed], k)?;
        for a in 1..=k {
            let image = self
                .images
                .get(&a)
                .ok_or_else(|| Error::InvalidParams(format!("no image for letter {a}")))?;
            if image.is_empty() {
                return Err(Error::ImageEmpty(a));
            }
            check_letters(image, k)?;
        }
        if let Some(extra) = self.images.keys().find(|&&a| a == 0 || a > k) {
            return Err(Error::LetterOutOfRange {
                letter: *extra,
                alphabet_size: k,
            });
        }
        let seed_image = &self.images[&self.seed];
        if seed_image[0] != self.seed || seed_image.len() < 2 {
            return Err(Error::NotProlongable(self.seed));
        }
        Ok(())
    }
}

/// Prefix of length `target_length` of the fixed point `h^ω(seed)`.
///
/// Uses `u = h(u_0) h(u_1) h(u_2) ...`: each letter already produced
/// contributes its image, so the cost is linear in the output.
pub fn iterate(spec: &MorphismSpec, target_length: usize) -> Result<Word> {
    spec.validate()?;
    let mut word: Vec<Letter> = spec.images[&spec.seed].clone();
    let mut i = 1;
    while word.len() < target_length {
        let a = word[i];
        word.extend_from_slice(&spec.images[&a]);
        i += 1;
    }
    word.truncate(target_length);
    Ok(Word::from_raw(word, spec.alphabet_size))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimilarityProfile {
    pub prefix_length: usize,
    pub max_factor_length: usize,
    pub best: Rational,
    pub witness: Violation,
    /// `(ell, max similarity over pairs with that ell)` for every scanned ell.
    pub per_length_max: Vec<(usize, Rational)>,
    /// Per-length maxima never decrease across the scanned range.
    pub monotone_increase: bool,
}

/// Scans all factor pairs with `1 <= ell <= max_factor_length`.
pub fn profile(word: &[Letter], max_factor_length: usize) -> Result<SimilarityProfile> {
    profile_with(word, max_factor_length, Exec::default())
}

pub fn profile_with(word: &[Letter], max_factor_length: usize, exec: Exec) -> Result<SimilarityProfile> {
    if max_factor_length == 0 || max_factor_length > word.len() / 2 {
        return Err(Error::InvalidParams(format!(
            "max factor length must be in 1..={}, got {max_factor_length}",
            word.len() / 2
        )));
    }
    let compact = compact_letters(word);
    let ells: Vec<usize> = (1..=max_factor_length).collect();
    let per_length = par::map_slice(&ells, exec, |&ell| {
        best_of_length(&mut BitLcs::new(), &compact, ell).expect("ell fits in word")
    });

    let best = per_length
        .iter()
        .copied()
        .map(Some)
        .fold(None, crate::simc::prefer)
        .expect("nonempty");
    let per_length_max: Vec<(usize, Rational)> = per_length.iter().map(|c| (c.ell, c.beta())).collect();
    let monotone_increase = per_length_max.windows(2).all(|w| w[0].1 <= w[1].1);
    Ok(SimilarityProfile {
        prefix_length: word.len(),
        max_factor_length,
        best: best.beta(),
        witness: best.into_violation(word),
        per_length_max,
        monotone_increase,
    })
}

/// One summary row: alphabet size, coefficient (`-` when the per-length
/// maxima keep increasing), prefix length, factor length.
pub fn write_table_csv<W: Write>(mut out: W, alphabet_size: u32, profiles: &[SimilarityProfile]) -> io::Result<()> {
    writeln!(out, "alphabet_size,coefficient,prefix_length,factor_length")?;
    for p in profiles {
        let coefficient = if p.monotone_increase {
            "-".to_string()
        } else {
            p.best.to_string()
        };
        writeln!(
            out,
            "{alphabet_size},{coefficient},{},{}",
            p.prefix_length, p.max_factor_length
        )?;
    }
    Ok(())
}

pub fn write_per_length_csv<W: Write>(mut out: W, profile: &SimilarityProfile) -> io::Result<()> {
    writeln!(out, "ell,max_similarity")?;
    for (ell, s) in &profile.per_length_max {
        writeln!(out, "{ell},{s}")?;
    }
    Ok(())
}
