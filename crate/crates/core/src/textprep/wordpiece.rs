use super::{TextError, Vocabulary, CONTINUATION_PREFIX, UNK_TOKEN};

/// Words longer than this are emitted as `[UNK]` without searching.
const MAX_WORD_CHARS: usize = 100;

/// Greedy longest-prefix WordPiece over whitespace-separated words.
///
/// A word whose remainder cannot be matched at some point becomes a single
/// `[UNK]`; partial pieces are discarded.
pub fn wordpiece_tokenize(text: &str, vocab: &Vocabulary) -> Result<Vec<String>, TextError> {
    if vocab.regular_len() == 0 {
        return Err(TextError::EmptyVocabulary);
    }
    let mut out = Vec::new();
    for word in text.split_whitespace() {
        match split_word(word, vocab) {
            Some(pieces) => out.extend(pieces),
            None => out.push(UNK_TOKEN.to_string()),
        }
    }
    Ok(out)
}

fn split_word(word: &str, vocab: &Vocabulary) -> Option<Vec<String>> {
    // char boundaries, so slicing never splits a code point
    let bounds: Vec<usize> = word
        .char_indices()
        .map(|(i, _)| i)
        .chain(std::iter::once(word.len()))
        .collect();
    let n_chars = bounds.len() - 1;
    if n_chars > MAX_WORD_CHARS {
        return None;
    }

    let mut pieces = Vec::new();
    let mut start = 0;
    let mut candidate = String::new();
    while start < n_chars {
        let mut end = n_chars;
        let mut found = None;
        while end > start {
            candidate.clear();
            if start > 0 {
                candidate.push_str(CONTINUATION_PREFIX);
            }
            candidate.push_str(&word[bounds[start]..bounds[end]]);
            if vocab.contains(&candidate) {
                found = Some(candidate.clone());
                break;
            }
            end -= 1;
        }
        pieces.push(found?);
        start = end;
    }
    Some(pieces)
}
