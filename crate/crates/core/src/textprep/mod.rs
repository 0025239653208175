//! Text normalization and the BERT-style input pipeline.
//!
//! [`normalize_text`] is the single normalizer used everywhere in the engine
//! (skill lexicon keys, TF-IDF terms, word frequencies). The WordPiece
//! tokenizer and [`Vocabulary::encode`] produce the fixed-length
//! `input_ids` / `segment_ids` / `attention_mask` triple.

mod wordpiece;

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use wordpiece::wordpiece_tokenize;

pub const PAD_TOKEN: &str = "[PAD]";
pub const UNK_TOKEN: &str = "[UNK]";
pub const CLS_TOKEN: &str = "[CLS]";
pub const SEP_TOKEN: &str = "[SEP]";

/// Continuation prefix for non-initial word pieces.
pub const CONTINUATION_PREFIX: &str = "##";

/// Sequence length used for job descriptions.
pub const JOB_MAX_LEN: usize = 256;
/// Sequence length used for résumés.
pub const RESUME_MAX_LEN: usize = 500;

#[derive(Debug, Error)]
pub enum TextError {
    #[error("vocabulary is missing special token {0}")]
    MissingSpecial(&'static str),
    #[error("[PAD] must have id 0, found {0}")]
    PadNotZero(u32),
    #[error("duplicate vocabulary token {token:?} at line {line}")]
    DuplicateToken { token: String, line: usize },
    #[error("vocabulary has no regular tokens")]
    EmptyVocabulary,
    #[error("max_len must be at least 2, got {0}")]
    MaxLenTooSmall(usize),
    #[error("reading vocabulary {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn is_ascii_punct(c: char) -> bool {
    c.is_ascii_punctuation()
}

/// Lowercases, replaces ASCII punctuation with spaces and collapses whitespace.
///
/// Non-ASCII punctuation is left untouched.
pub fn normalize_text(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    let mut pending_space = false;
    for c in raw.chars() {
        if c.is_whitespace() || is_ascii_punct(c) {
            pending_space = !out.is_empty();
            continue;
        }
        if pending_space {
            out.push(' ');
            pending_space = false;
        }
        out.extend(c.to_lowercase());
    }
    out
}

/// Token ↔ id table loaded from a one-token-per-line file (line number = id).
#[derive(Debug, Clone)]
pub struct Vocabulary {
    ids: HashMap<String, u32>,
    tokens: Vec<String>,
    pad_id: u32,
    unk_id: u32,
    cls_id: u32,
    sep_id: u32,
}

impl Vocabulary {
    pub fn from_tokens<I, S>(tokens: I) -> Result<Self, TextError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let tokens: Vec<String> = tokens.into_iter().map(Into::into).collect();
        let mut ids = HashMap::with_capacity(tokens.len());
        for (line, token) in tokens.iter().enumerate() {
            if ids.insert(token.clone(), line as u32).is_some() {
                return Err(TextError::DuplicateToken {
                    token: token.clone(),
                    line: line + 1,
                });
            }
        }
        let special = |name: &'static str| ids.get(name).copied().ok_or(TextError::MissingSpecial(name));
        let pad_id = special(PAD_TOKEN)?;
        if pad_id != 0 {
            return Err(TextError::PadNotZero(pad_id));
        }
        let unk_id = special(UNK_TOKEN)?;
        let cls_id = special(CLS_TOKEN)?;
        let sep_id = special(SEP_TOKEN)?;
        Ok(Self {
            ids,
            tokens,
            pad_id,
            unk_id,
            cls_id,
            sep_id,
        })
    }

    /// Builds a vocabulary with the four special tokens at ids 0..4 followed by `tokens`.
    pub fn with_specials<I, S>(tokens: I) -> Result<Self, TextError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let all = [PAD_TOKEN, UNK_TOKEN, CLS_TOKEN, SEP_TOKEN]
            .into_iter()
            .map(String::from)
            .chain(tokens.into_iter().map(Into::into));
        Self::from_tokens(all)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, TextError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| TextError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, TextError> {
        Self::from_tokens(text.lines().map(|l| l.trim_end_matches('\r')))
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Number of entries that are not one of the four special tokens.
    pub fn regular_len(&self) -> usize {
        self.tokens.len() - 4
    }

    pub fn id(&self, token: &str) -> Option<u32> {
        self.ids.get(token).copied()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.ids.contains_key(token)
    }

    pub fn token(&self, id: u32) -> Option<&str> {
        self.tokens.get(id as usize).map(String::as_str)
    }

    pub fn pad_id(&self) -> u32 {
        self.pad_id
    }
    pub fn unk_id(&self) -> u32 {
        self.unk_id
    }
    pub fn cls_id(&self) -> u32 {
        self.cls_id
    }
    pub fn sep_id(&self) -> u32 {
        self.sep_id
    }

    fn is_special(&self, id: u32) -> bool {
        id == self.pad_id || id == self.unk_id || id == self.cls_id || id == self.sep_id
    }

    /// Wraps `tokens` as `[CLS] … [SEP]`, truncating the head to fit, and pads to `max_len`.
    pub fn encode<S: AsRef<str>>(
        &self,
        tokens: &[S],
        max_len: usize,
    ) -> Result<EncodedSequence, TextError> {
        if max_len < 2 {
            return Err(TextError::MaxLenTooSmall(max_len));
        }
        let kept = tokens.len().min(max_len - 2);
        let mut input_ids = Vec::with_capacity(max_len);
        input_ids.push(self.cls_id);
        input_ids.extend(
            tokens[..kept]
                .iter()
                .map(|t| self.id(t.as_ref()).unwrap_or(self.unk_id)),
        );
        input_ids.push(self.sep_id);
        let token_count = input_ids.len();
        input_ids.resize(max_len, self.pad_id);

        let mut attention_mask = vec![0u8; max_len];
        attention_mask[..token_count].fill(1);

        Ok(EncodedSequence {
            input_ids,
            segment_ids: vec![0; max_len],
            attention_mask,
            token_count,
        })
    }

    /// Normalizes, tokenizes and encodes raw text in one step.
    pub fn encode_text(&self, raw: &str, max_len: usize) -> Result<EncodedSequence, TextError> {
        let tokens = wordpiece_tokenize(&normalize_text(raw), self)?;
        self.encode(&tokens, max_len)
    }

    /// Inverse of encoding for in-vocabulary text: drops special tokens and
    /// glues `##` continuations back onto the previous piece.
    pub fn decode(&self, ids: &[u32]) -> String {
        let mut out = String::new();
        for &id in ids {
            if self.is_special(id) {
                continue;
            }
            let Some(tok) = self.token(id) else { continue };
            match tok.strip_prefix(CONTINUATION_PREFIX) {
                Some(rest) => out.push_str(rest),
                None => {
                    if !out.is_empty() {
                        out.push(' ');
                    }
                    out.push_str(tok);
                }
            }
        }
        out
    }
}

/// Fixed-length model input for a single sentence (batch size 1).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodedSequence {
    pub input_ids: Vec<u32>,
    pub segment_ids: Vec<u32>,
    pub attention_mask: Vec<u8>,
    /// Real tokens including `[CLS]` and `[SEP]`.
    pub token_count: usize,
}

impl EncodedSequence {
    pub fn max_len(&self) -> usize {
        self.input_ids.len()
    }

    /// `(rows, cols)` of the id matrix; always `(1, max_len)`.
    pub fn shape(&self) -> (usize, usize) {
        (1, self.input_ids.len())
    }
}
