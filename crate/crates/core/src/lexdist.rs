//! First-letter mismatch distances between languages.

use serde::{Deserialize, Serialize};

use crate::corpus::{first_grapheme, Lexicon};
use crate::error::{Error, Result};

/// 0 when both words start with the same letter key, 1 otherwise.
pub fn letter_distance(w1: &str, w2: &str) -> Result<u32> {
    Ok(u32::from(first_grapheme(w1)? != first_grapheme(w2)?))
}

/// Symmetric, zero-diagonal matrix of summed letter distances between three
/// languages. The triangle inequality is not enforced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceMatrix3 {
    pub labels: [String; 3],
    pub d: [[u32; 3]; 3],
}

impl DistanceMatrix3 {
    /// Matrix from the three off-diagonal entries (0-1, 0-2, 1-2).
    pub fn from_pairs(labels: [&str; 3], d01: u32, d02: u32, d12: u32) -> Self {
        Self {
            labels: labels.map(str::to_owned),
            d: [[0, d01, d02], [d01, 0, d12], [d02, d12, 0]],
        }
    }

    pub fn get(&self, a: usize, b: usize) -> u32 {
        self.d[a][b]
    }

    /// Entry by language label.
    pub fn between(&self, a: &str, b: &str) -> Option<u32> {
        let ia = self.labels.iter().position(|l| l == a)?;
        let ib = self.labels.iter().position(|l| l == b)?;
        Some(self.d[ia][ib])
    }

    /// Relabels so that new position `i` holds old language `perm[i]`.
    pub fn permuted(&self, perm: [usize; 3]) -> Self {
        let mut d = [[0; 3]; 3];
        for (i, row) in d.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = self.d[perm[i]][perm[j]];
            }
        }
        Self { labels: perm.map(|p| self.labels[p].clone()), d }
    }

    pub fn is_symmetric_zero_diagonal(&self) -> bool {
        (0..3).all(|i| self.d[i][i] == 0 && (0..3).all(|j| self.d[i][j] == self.d[j][i]))
    }
}

/// Summed letter distance between two languages over `concepts`.
pub fn pair_distance(lexicon: &Lexicon, concepts: &[String], a: &str, b: &str) -> Result<u32> {
    let ia = lexicon.language_index(a)?;
    let ib = lexicon.language_index(b)?;
    concepts.iter().try_fold(0, |acc, concept| {
        let c = lexicon
            .concept_index(concept)
            .map_err(|_| Error::MissingCell { concept: concept.clone(), language: a.to_owned() })?;
        Ok(acc + letter_distance(lexicon.word(c, ia), lexicon.word(c, ib))?)
    })
}

/// Distance matrix of three languages summed over a set of concepts
/// (normally one sampled triple, but any count works).
pub fn triple_matrix(lexicon: &Lexicon, concepts: &[String], languages: [&str; 3]) -> Result<DistanceMatrix3> {
    let d01 = pair_distance(lexicon, concepts, languages[0], languages[1])?;
    let d02 = pair_distance(lexicon, concepts, languages[0], languages[2])?;
    let d12 = pair_distance(lexicon, concepts, languages[1], languages[2])?;
    Ok(DistanceMatrix3::from_pairs(languages, d01, d02, d12))
}
