use std::collections::HashMap;
use std::fs;
use std::path::Path;

use super::ExtractError;
use crate::textprep::normalize_text;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkillEntry {
    pub canonical: String,
    pub aliases: Vec<String>,
}

/// Closed vocabulary of canonical skills, indexed by normalized alias.
#[derive(Debug, Clone, Default)]
pub struct SkillLexicon {
    entries: Vec<SkillEntry>,
    matcher: PhraseMatcher,
}

impl SkillLexicon {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, ExtractError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| ExtractError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Parses `canonical<TAB>alias1,alias2,...` lines. Blank lines and lines
    /// starting with `#` are ignored; the alias column is optional.
    pub fn parse(text: &str) -> Result<Self, ExtractError> {
        let mut entries = Vec::new();
        let mut lines = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let (canonical, aliases) = match line.split_once('\t') {
                Some((c, rest)) => (c.trim(), rest),
                None => (line.trim(), ""),
            };
            if canonical.is_empty() {
                return Err(ExtractError::Parse {
                    line: idx + 1,
                    message: "empty canonical skill".into(),
                });
            }
            let aliases = aliases
                .split(',')
                .map(str::trim)
                .filter(|a| !a.is_empty())
                .map(String::from)
                .collect();
            entries.push(SkillEntry {
                canonical: canonical.to_string(),
                aliases,
            });
            lines.push(idx + 1);
        }
        Self::build(entries, &lines)
    }

    pub fn from_entries(entries: Vec<SkillEntry>) -> Result<Self, ExtractError> {
        let lines: Vec<usize> = (1..=entries.len()).collect();
        Self::build(entries, &lines)
    }

    fn build(entries: Vec<SkillEntry>, lines: &[usize]) -> Result<Self, ExtractError> {
        let mut seen = HashMap::new();
        for (i, e) in entries.iter().enumerate() {
            if seen.insert(e.canonical.as_str(), i).is_some() {
                return Err(ExtractError::DuplicateCanonical {
                    canonical: e.canonical.clone(),
                    line: lines[i],
                });
            }
        }
        let mut matcher = PhraseMatcher::default();
        for (i, e) in entries.iter().enumerate() {
            for alias in std::iter::once(&e.canonical).chain(&e.aliases) {
                let key = normalize_text(alias);
                if key.is_empty() {
                    return Err(ExtractError::Parse {
                        line: lines[i],
                        message: format!("alias {alias:?} is empty after normalization"),
                    });
                }
                if let Some(other) = matcher.insert(key.clone(), i) {
                    return Err(ExtractError::DuplicateAlias {
                        alias: key,
                        first: entries[other].canonical.clone(),
                        second: e.canonical.clone(),
                    });
                }
            }
        }
        Ok(Self { entries, matcher })
    }

    pub fn entries(&self) -> &[SkillEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of normalized alias keys (canonicals included).
    pub fn index_len(&self) -> usize {
        self.matcher.index.len()
    }

    /// Canonical skill for a normalized alias key.
    pub fn lookup(&self, key: &str) -> Option<&str> {
        self.matcher
            .index
            .get(key)
            .map(|&i| self.entries[i].canonical.as_str())
    }

    pub fn contains_canonical(&self, skill: &str) -> bool {
        self.entries.iter().any(|e| e.canonical == skill)
    }

    /// Canonical skills mentioned in `text`, in first-occurrence order.
    pub fn find(&self, text: &str) -> Vec<String> {
        let normalized = normalize_text(text);
        self.matcher
            .scan(&normalized)
            .into_iter()
            .map(|i| self.entries[i].canonical.clone())
            .collect()
    }
}

/// Longest-match-first phrase lookup over whole normalized tokens.
#[derive(Debug, Clone, Default)]
pub(crate) struct PhraseMatcher {
    index: HashMap<String, usize>,
    max_tokens: usize,
}

impl PhraseMatcher {
    /// Returns the previous owner of `key` if it was already mapped to a different value.
    pub(crate) fn insert(&mut self, key: String, value: usize) -> Option<usize> {
        let n = key.split(' ').count();
        match self.index.get(&key) {
            Some(&prev) if prev != value => Some(prev),
            Some(_) => None,
            None => {
                self.max_tokens = self.max_tokens.max(n);
                self.index.insert(key, value);
                None
            }
        }
    }

    /// Matched values in first-occurrence order, deduplicated. `normalized`
    /// must already be the output of `normalize_text`.
    pub(crate) fn scan(&self, normalized: &str) -> Vec<usize> {
        if normalized.is_empty() || self.index.is_empty() {
            return Vec::new();
        }
        let tokens: Vec<&str> = normalized.split(' ').collect();
        let mut found = Vec::new();
        let mut key = String::new();
        let mut i = 0;
        while i < tokens.len() {
            let longest = self.max_tokens.min(tokens.len() - i);
            let mut step = 1;
            for len in (1..=longest).rev() {
                key.clear();
                for (j, t) in tokens[i..i + len].iter().enumerate() {
                    if j > 0 {
                        key.push(' ');
                    }
                    key.push_str(t);
                }
                if let Some(&v) = self.index.get(key.as_str()) {
                    if !found.contains(&v) {
                        found.push(v);
                    }
                    step = len;
                    break;
                }
            }
            i += step;
        }
        found
    }
}
