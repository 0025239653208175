//! Token frequency tables for job descriptions (word-cloud data).

use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::textprep::normalize_text;

const DEFAULT_STOPWORDS: &str = include_str!("../data/stopwords.txt");

#[derive(Debug, Clone, Default)]
pub struct Stopwords(HashSet<String>);

impl Stopwords {
    /// Built-in English list.
    pub fn english() -> Self {
        Self::parse(DEFAULT_STOPWORDS)
    }

    /// One token per line; entries are normalized, blanks and `#` lines skipped.
    pub fn parse(text: &str) -> Self {
        Self(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .flat_map(|l| {
                    normalize_text(l)
                        .split(' ')
                        .map(String::from)
                        .collect::<Vec<_>>()
                })
                .filter(|t| !t.is_empty())
                .collect(),
        )
    }

    pub fn load(path: impl AsRef<Path>) -> std::io::Result<Self> {
        Ok(Self::parse(&fs::read_to_string(path)?))
    }

    pub fn contains(&self, token: &str) -> bool {
        self.0.contains(token)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<S: Into<String>> FromIterator<S> for Stopwords {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        Self(iter.into_iter().map(Into::into).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenCount {
    pub token: String,
    pub count: u32,
}

/// Sorted by count descending, then token ascending.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FrequencyTable {
    pub entries: Vec<TokenCount>,
}

impl FrequencyTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn first(&self) -> Option<&TokenCount> {
        self.entries.first()
    }
}

pub fn word_frequencies(text: &str, stopwords: &Stopwords) -> FrequencyTable {
    let normalized = normalize_text(text);
    let mut counts: HashMap<&str, u32> = HashMap::new();
    for tok in normalized.split(' ') {
        if tok.chars().nth(1).is_none() || stopwords.contains(tok) {
            continue;
        }
        *counts.entry(tok).or_default() += 1;
    }
    let mut entries: Vec<TokenCount> = counts
        .into_iter()
        .map(|(token, count)| TokenCount {
            token: token.to_string(),
            count,
        })
        .collect();
    entries.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.token.cmp(&b.token)));
    FrequencyTable { entries }
}

pub fn top_n(table: &FrequencyTable, n: usize) -> FrequencyTable {
    FrequencyTable {
        entries: table.entries.iter().take(n).cloned().collect(),
    }
}
