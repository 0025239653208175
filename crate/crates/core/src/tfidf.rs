//! Corpus-level TF-IDF over job descriptions.
//!
//! Two weightings are supported:
//!
//! * [`TfidfMode::Naive`]: `(tf / doc_len) * log10(N / df)`, unnormalized.
//! * [`TfidfMode::Smooth`]: `tf * (ln((1 + N) / (1 + df)) + 1)`, then each
//!   document vector is scaled to unit L2 norm.
//!
//! Terms are whitespace tokens of [`normalize_text`] output with at least two
//! characters.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::textprep::normalize_text;

#[derive(Debug, Error, PartialEq)]
pub enum TfidfError {
    #[error("cannot fit on an empty corpus")]
    EmptyCorpus,
    #[error("document id {0:?} appears more than once")]
    DuplicateDocId(String),
    #[error("unknown document {0:?}")]
    UnknownDoc(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TfidfMode {
    Naive,
    #[default]
    Smooth,
}

impl FromStr for TfidfMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "naive" => Ok(Self::Naive),
            "smooth" => Ok(Self::Smooth),
            other => Err(format!("unknown tf-idf mode {other:?} (expected naive|smooth)")),
        }
    }
}

impl fmt::Display for TfidfMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Naive => "naive",
            Self::Smooth => "smooth",
        })
    }
}

/// What a job's term scores are computed against.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CorpusScope {
    /// Every job description in the store is one document.
    #[default]
    Jobs,
    /// The sentences of the single job description form the corpus.
    SingleDocSentences,
}

impl FromStr for CorpusScope {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "jobs" => Ok(Self::Jobs),
            "single-doc-sentences" => Ok(Self::SingleDocSentences),
            other => Err(format!(
                "unknown corpus scope {other:?} (expected jobs|single-doc-sentences)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermScore {
    pub term: String,
    pub score: f64,
}

/// Indexed terms of already-normalized text.
pub fn terms(normalized: &str) -> impl Iterator<Item = &str> {
    normalized
        .split(' ')
        .filter(|t| t.chars().nth(1).is_some())
}

/// Weight of one term in one document before any vector normalization.
pub fn tfidf_score(
    tf_count: u32,
    doc_len: u32,
    df: u32,
    n_docs: u32,
    mode: TfidfMode,
) -> Result<f64, TfidfError> {
    if doc_len == 0 {
        return Err(TfidfError::Precondition("doc_len must be at least 1".into()));
    }
    if tf_count > doc_len {
        return Err(TfidfError::Precondition(format!(
            "tf_count {tf_count} exceeds doc_len {doc_len}"
        )));
    }
    if df == 0 || df > n_docs {
        return Err(TfidfError::Precondition(format!(
            "df {df} outside 1..={n_docs}"
        )));
    }
    Ok(match mode {
        TfidfMode::Naive => {
            (f64::from(tf_count) / f64::from(doc_len)) * (f64::from(n_docs) / f64::from(df)).log10()
        }
        TfidfMode::Smooth => f64::from(tf_count) * smooth_idf(df, n_docs),
    })
}

fn smooth_idf(df: u32, n_docs: u32) -> f64 {
    ((1.0 + f64::from(n_docs)) / (1.0 + f64::from(df))).ln() + 1.0
}

#[derive(Debug, Clone)]
struct DocStats {
    /// term -> raw count, sorted by term
    counts: Vec<(String, u32)>,
    len: u32,
}

impl DocStats {
    fn from_normalized(text: &str) -> Self {
        let mut counts: HashMap<&str, u32> = HashMap::new();
        let mut len = 0;
        for t in terms(text) {
            *counts.entry(t).or_default() += 1;
            len += 1;
        }
        let mut counts: Vec<(String, u32)> =
            counts.into_iter().map(|(t, c)| (t.to_string(), c)).collect();
        counts.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        Self { counts, len }
    }
}

/// Immutable fitted model.
#[derive(Debug, Clone)]
pub struct TfidfModel {
    mode: TfidfMode,
    df: BTreeMap<String, u32>,
    docs: IndexMap<String, DocStats>,
}

impl TfidfModel {
    /// Fits document frequencies over `corpus`. Texts are normalized here, so
    /// raw or pre-normalized input gives the same model.
    pub fn fit<I, K, T>(corpus: I, mode: TfidfMode) -> Result<Self, TfidfError>
    where
        I: IntoIterator<Item = (K, T)>,
        K: Into<String>,
        T: AsRef<str>,
    {
        let mut docs = IndexMap::new();
        let mut df: BTreeMap<String, u32> = BTreeMap::new();
        for (id, text) in corpus {
            let id = id.into();
            if docs.contains_key(&id) {
                return Err(TfidfError::DuplicateDocId(id));
            }
            let stats = DocStats::from_normalized(&normalize_text(text.as_ref()));
            for (term, _) in &stats.counts {
                match df.get_mut(term) {
                    Some(n) => *n += 1,
                    None => {
                        df.insert(term.clone(), 1);
                    }
                }
            }
            docs.insert(id, stats);
        }
        if docs.is_empty() {
            return Err(TfidfError::EmptyCorpus);
        }
        Ok(Self { mode, df, docs })
    }

    pub fn mode(&self) -> TfidfMode {
        self.mode
    }

    pub fn n_docs(&self) -> u32 {
        self.docs.len() as u32
    }

    pub fn df(&self, term: &str) -> Option<u32> {
        self.df.get(term).copied()
    }

    /// Indexed terms in lexicographic order.
    pub fn vocab(&self) -> impl Iterator<Item = &str> {
        self.df.keys().map(String::as_str)
    }

    pub fn vocab_len(&self) -> usize {
        self.df.len()
    }

    pub fn contains_doc(&self, doc_id: &str) -> bool {
        self.docs.contains_key(doc_id)
    }

    pub fn doc_ids(&self) -> impl Iterator<Item = &str> {
        self.docs.keys().map(String::as_str)
    }

    /// IDF under the model's mode, `None` for unindexed terms.
    pub fn idf(&self, term: &str) -> Option<f64> {
        let df = self.df(term)?;
        Some(match self.mode {
            TfidfMode::Naive => (f64::from(self.n_docs()) / f64::from(df)).log10(),
            TfidfMode::Smooth => smooth_idf(df, self.n_docs()),
        })
    }

    /// Every term of a fitted document, best first (ties by term).
    pub fn term_scores(&self, doc_id: &str) -> Result<Vec<TermScore>, TfidfError> {
        let doc = self
            .docs
            .get(doc_id)
            .ok_or_else(|| TfidfError::UnknownDoc(doc_id.to_string()))?;
        self.weigh(doc)
    }

    /// Scores unseen text against the fitted document frequencies. Terms the
    /// model never saw are skipped.
    pub fn score_text(&self, text: &str) -> Vec<TermScore> {
        let mut doc = DocStats::from_normalized(&normalize_text(text));
        doc.counts.retain(|(t, _)| self.df.contains_key(t));
        self.weigh(&doc).unwrap_or_default()
    }

    fn weigh(&self, doc: &DocStats) -> Result<Vec<TermScore>, TfidfError> {
        let n = self.n_docs();
        let mut scores = Vec::with_capacity(doc.counts.len());
        for (term, count) in &doc.counts {
            let df = self.df[term];
            scores.push(TermScore {
                term: term.clone(),
                score: tfidf_score(*count, doc.len, df, n, self.mode)?,
            });
        }
        if self.mode == TfidfMode::Smooth {
            let norm = scores.iter().map(|s| s.score * s.score).sum::<f64>().sqrt();
            if norm > 0.0 {
                for s in &mut scores {
                    s.score /= norm;
                }
            }
        }
        sort_term_scores(&mut scores);
        Ok(scores)
    }
}

/// Score descending, then term ascending.
pub fn sort_term_scores(scores: &mut [TermScore]) {
    scores.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.term.cmp(&b.term)));
}

/// Splits raw text into sentences on `.`, `!`, `?` and line breaks.
pub fn sentences(raw: &str) -> Vec<&str> {
    raw.split(['.', '!', '?', '\n'])
        .map(str::trim)
        .filter(|s| terms(&normalize_text(s)).next().is_some())
        .collect()
}

/// Term scores for one description with its own sentences as the corpus.
pub fn single_doc_term_scores(description: &str, mode: TfidfMode) -> Vec<TermScore> {
    let parts = sentences(description);
    if parts.is_empty() {
        return Vec::new();
    }
    match TfidfModel::fit(parts.iter().enumerate().map(|(i, s)| (i.to_string(), *s)), mode) {
        Ok(model) => model.score_text(description),
        Err(_) => Vec::new(),
    }
}
