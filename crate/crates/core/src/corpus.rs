//! Aligned multilingual word lists and seeded sampling of word triples.
//!
//! The input is delimiter-separated UTF-8 text: a header naming the
//! `concept` column followed by one column per language, then one row per
//! concept. Tab or comma is picked from the header line.

use std::collections::{HashMap, HashSet};
use std::fmt;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};
use crate::rng;

const CONCEPT_COLUMN: &str = "concept";

/// Language-indexed aligned word lists.
///
/// Every (concept, language) cell is non-empty; rows with a blank cell are
/// dropped while parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    languages: Vec<String>,
    concepts: Vec<String>,
    /// `words[concept][language]`
    words: Vec<Vec<String>>,
}

impl Lexicon {
    /// Builds a lexicon from already-split rows, applying the same
    /// validation and complete-case filtering as the parser.
    pub fn from_rows<L, R, C, W>(languages: L, rows: R) -> Result<Self>
    where
        L: IntoIterator,
        L::Item: Into<String>,
        R: IntoIterator<Item = (C, Vec<W>)>,
        C: Into<String>,
        W: Into<String>,
    {
        let languages: Vec<String> = languages.into_iter().map(Into::into).collect();
        check_languages(&languages, 1)?;
        let mut builder = Builder::new(languages.len());
        for (i, (concept, words)) in rows.into_iter().enumerate() {
            let words: Vec<String> = words.into_iter().map(Into::into).collect();
            builder.push(i as u64 + 2, concept.into(), words)?;
        }
        builder.finish(languages)
    }

    /// Parses every language column.
    pub fn parse(input: &[u8]) -> Result<Self> {
        parse_impl(input, None)
    }

    /// Parses only the named language columns, in the given order.
    ///
    /// Complete-case filtering considers the selected columns only.
    pub fn parse_selected(input: &[u8], languages: &[&str]) -> Result<Self> {
        parse_impl(input, Some(languages))
    }

    pub fn languages(&self) -> &[String] {
        &self.languages
    }

    pub fn concepts(&self) -> &[String] {
        &self.concepts
    }

    /// Number of retained concepts.
    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn language_index(&self, language: &str) -> Result<usize> {
        self.languages
            .iter()
            .position(|l| l == language)
            .ok_or_else(|| Error::UnknownLanguage(language.to_owned()))
    }

    pub fn concept_index(&self, concept: &str) -> Result<usize> {
        self.concepts
            .iter()
            .position(|c| c == concept)
            .ok_or_else(|| Error::UnknownConcept(concept.to_owned()))
    }

    /// Word form for `concept` in `language`.
    pub fn entry(&self, concept: &str, language: &str) -> Result<&str> {
        let c = self.concept_index(concept)?;
        let l = self.language_index(language)?;
        Ok(self.word(c, l))
    }

    /// Word form by index. Panics on an out-of-range index.
    pub fn word(&self, concept: usize, language: usize) -> &str {
        &self.words[concept][language]
    }

    /// Restricts to the named languages, re-applying complete-case filtering.
    pub fn select(&self, languages: &[&str]) -> Result<Self> {
        let idx = languages
            .iter()
            .map(|l| self.language_index(l))
            .collect::<Result<Vec<_>>>()?;
        let rows = self
            .concepts
            .iter()
            .zip(&self.words)
            .map(|(c, w)| (c.clone(), idx.iter().map(|&i| w[i].clone()).collect::<Vec<_>>()));
        Self::from_rows(languages.iter().copied(), rows)
    }

    /// Tab-separated text that [`Lexicon::parse`] reads back unchanged.
    pub fn to_tsv(&self) -> String {
        let mut out = csv::WriterBuilder::new()
            .delimiter(b'\t')
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let header = std::iter::once(CONCEPT_COLUMN).chain(self.languages.iter().map(String::as_str));
        out.write_record(header).expect("write to Vec");
        for (concept, words) in self.concepts.iter().zip(&self.words) {
            let row = std::iter::once(concept.as_str()).chain(words.iter().map(String::as_str));
            out.write_record(row).expect("write to Vec");
        }
        let bytes = out.into_inner().expect("flush to Vec");
        String::from_utf8(bytes).expect("input was UTF-8")
    }
}

fn check_languages(languages: &[String], line: u64) -> Result<()> {
    if languages.is_empty() {
        return Err(Error::Parse { line, message: "no language columns".into() });
    }
    let mut seen = HashSet::new();
    for l in languages {
        if l.is_empty() {
            return Err(Error::Parse { line, message: "empty language name in header".into() });
        }
        if !seen.insert(l.as_str()) {
            return Err(Error::Parse { line, message: format!("duplicate language column `{l}`") });
        }
    }
    Ok(())
}

struct Builder {
    width: usize,
    seen: HashSet<String>,
    concepts: Vec<String>,
    words: Vec<Vec<String>>,
}

impl Builder {
    fn new(width: usize) -> Self {
        Self { width, seen: HashSet::new(), concepts: Vec::new(), words: Vec::new() }
    }

    fn push(&mut self, line: u64, concept: String, words: Vec<String>) -> Result<()> {
        if words.len() != self.width {
            return Err(Error::Parse {
                line,
                message: format!("expected {} word columns, found {}", self.width, words.len()),
            });
        }
        let concept = concept.trim().to_owned();
        if concept.is_empty() {
            return Err(Error::Parse { line, message: "empty concept identifier".into() });
        }
        if !self.seen.insert(concept.clone()) {
            return Err(Error::Parse { line, message: format!("duplicate concept `{concept}`") });
        }
        let words: Vec<String> = words.into_iter().map(|w| w.trim().to_owned()).collect();
        if words.iter().any(String::is_empty) {
            return Ok(());
        }
        self.concepts.push(concept);
        self.words.push(words);
        Ok(())
    }

    fn finish(self, languages: Vec<String>) -> Result<Lexicon> {
        if self.concepts.is_empty() {
            return Err(Error::NoConcepts);
        }
        Ok(Lexicon { languages, concepts: self.concepts, words: self.words })
    }
}

fn parse_impl(input: &[u8], selection: Option<&[&str]>) -> Result<Lexicon> {
    let text = std::str::from_utf8(input).map_err(|e| {
        let line = input[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count() as u64 + 1;
        Error::Parse { line, message: "invalid UTF-8".into() }
    })?;
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let header_line = text.lines().next().unwrap_or("");
    if header_line.trim().is_empty() {
        return Err(Error::Parse { line: 1, message: "missing header".into() });
    }
    let delimiter = if header_line.contains('\t') { b'\t' } else { b',' };

    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut records = reader.records();

    let header = match records.next() {
        Some(Ok(h)) => h,
        Some(Err(e)) => return Err(csv_error(e)),
        None => return Err(Error::Parse { line: 1, message: "missing header".into() }),
    };
    let mut cols = header.iter().map(str::trim);
    if !cols.next().is_some_and(|c| c.eq_ignore_ascii_case(CONCEPT_COLUMN)) {
        return Err(Error::Parse {
            line: 1,
            message: format!("first header column must be `{CONCEPT_COLUMN}`"),
        });
    }
    let all_languages: Vec<String> = cols.map(str::to_owned).collect();
    check_languages(&all_languages, 1)?;

    let column_of: HashMap<&str, usize> =
        all_languages.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    let (languages, picks): (Vec<String>, Vec<usize>) = match selection {
        None => (all_languages.clone(), (0..all_languages.len()).collect()),
        Some(sel) => {
            let picks = sel
                .iter()
                .map(|l| column_of.get(l).copied().ok_or_else(|| Error::UnknownLanguage((*l).to_owned())))
                .collect::<Result<Vec<_>>>()?;
            let names: Vec<String> = sel.iter().map(|s| (*s).to_owned()).collect();
            check_languages(&names, 1)?;
            (names, picks)
        }
    };

    let mut builder = Builder::new(languages.len());
    for record in records {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        if record.len() != all_languages.len() + 1 {
            return Err(Error::Parse {
                line,
                message: format!("expected {} columns, found {}", all_languages.len() + 1, record.len()),
            });
        }
        let words = picks.iter().map(|&i| record[i + 1].to_owned()).collect();
        builder.push(line, record[0].to_owned(), words)?;
    }
    builder.finish(languages)
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    Error::Parse { line, message: e.to_string() }
}

/// Comparison key for a word: its first letter after normalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LetterKey(pub char);

impl fmt::Display for LetterKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// First letter of the first whitespace-delimited token, after NFC
/// normalization and lowercasing. Diacritics are kept, so `é` and `e`
/// are different keys.
pub fn first_grapheme(word: &str) -> Result<LetterKey> {
    let normalized: String = word.nfc().collect();
    let first = normalized
        .split_whitespace()
        .next()
        .and_then(|tok| tok.chars().next())
        .ok_or(Error::EmptyWord)?;
    // Full lowercase mappings can expand (U+0130); the leading scalar is the
    // simple mapping for every letter in practice.
    let lower = first.to_lowercase().next().unwrap_or(first);
    Ok(LetterKey(lower))
}

/// Three concepts sampled together from one population.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleSample {
    pub population_id: u8,
    pub concepts: [String; 3],
}

/// Seeded split of a lexicon's concepts into two populations of triples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplingPlan {
    pub seed: u64,
    pub population_sizes: [usize; 2],
    pub triples: Vec<TripleSample>,
    /// Concepts left over when the count does not split into whole triples.
    pub unused: Vec<String>,
}

pub const PLAN_FORMAT: &str = "lexspider.sampling-plan";
pub const PLAN_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct PlanDocument {
    format: String,
    version: u32,
    #[serde(flatten)]
    plan: SamplingPlan,
}

impl SamplingPlan {
    /// Triples of one population (1 or 2) with their index inside it.
    pub fn population(&self, population_id: u8) -> impl Iterator<Item = (usize, &TripleSample)> {
        self.triples.iter().filter(move |t| t.population_id == population_id).enumerate()
    }

    /// Versioned pretty JSON.
    pub fn to_document(&self) -> String {
        let doc = PlanDocument { format: PLAN_FORMAT.into(), version: PLAN_VERSION, plan: self.clone() };
        serde_json::to_string_pretty(&doc).expect("plan serializes")
    }

    pub fn from_document(text: &str) -> Result<Self> {
        let doc: PlanDocument = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line() as u64,
            message: e.to_string(),
        })?;
        if doc.format != PLAN_FORMAT || doc.version != PLAN_VERSION {
            return Err(Error::Parse {
                line: 1,
                message: format!("unsupported document {} v{}", doc.format, doc.version),
            });
        }
        Ok(doc.plan)
    }
}

/// Shuffles the concepts under `seed` and cuts them into two populations of
/// whole triples. For 207 concepts this gives populations of 102 and 105
/// (34 and 35 triples).
pub fn partition_populations(lexicon: &Lexicon, seed: u64) -> Result<SamplingPlan> {
    let n = lexicon.len();
    if n < 6 {
        return Err(Error::InsufficientConcepts { found: n });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng::substream(seed, rng::PARTITION_STREAM));

    let first = (n / 2) / 3 * 3;
    let second = (n - first) / 3 * 3;
    let name = |i: usize| lexicon.concepts()[i].clone();

    let mut triples = Vec::with_capacity((first + second) / 3);
    for (population_id, range) in [(1u8, 0..first), (2u8, first..first + second)] {
        for chunk in order[range].chunks_exact(3) {
            triples.push(TripleSample {
                population_id,
                concepts: [name(chunk[0]), name(chunk[1]), name(chunk[2])],
            });
        }
    }
    let unused = order[first + second..].iter().map(|&i| name(i)).collect();
    Ok(SamplingPlan { seed, population_sizes: [first, second], triples, unused })
}
