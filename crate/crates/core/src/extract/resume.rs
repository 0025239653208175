use std::path::Path;
use std::sync::LazyLock;

use regex::Regex;

use super::lexicon::PhraseMatcher;
use super::{read_list, ExtractError};
use crate::textprep::normalize_text;

static EMAIL: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"[A-Za-z0-9._%+\-]+@[A-Za-z0-9\-]+(?:\.[A-Za-z0-9\-]+)*\.[A-Za-z]{2,}").unwrap()
});

static YEARS: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)\b(\d+(?:\.\d+)?)\s*\+?\s*years?\b").unwrap());

/// First mailbox-shaped substring of the raw text.
pub fn extract_email(text: &str) -> Option<String> {
    EMAIL.find(text).map(|m| m.as_str().to_string())
}

/// First line made of 2 to 4 capitalized alphabetic words and no digits.
pub fn extract_name(text: &str) -> Option<String> {
    text.lines().find_map(|line| {
        let line = line.trim();
        if line.chars().any(|c| c.is_ascii_digit()) {
            return None;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        if !(2..=4).contains(&words.len()) {
            return None;
        }
        let capitalized = words.iter().all(|w| {
            w.chars().all(char::is_alphabetic) && w.chars().next().is_some_and(char::is_uppercase)
        });
        capitalized.then(|| words.join(" "))
    })
}

/// Largest `N years` / `N+ years` figure in the text.
pub fn extract_years_experience(text: &str) -> Option<f64> {
    YEARS
        .captures_iter(text)
        .filter_map(|c| c[1].parse::<f64>().ok())
        .filter(|y| y.is_finite())
        .fold(None, |best: Option<f64>, y| Some(best.map_or(y, |b| b.max(y))))
}

/// Fixed list of entity names (job titles, institutions) matched on whole
/// normalized tokens.
#[derive(Debug, Clone, Default)]
pub struct EntityList {
    names: Vec<String>,
    matcher: PhraseMatcher,
}

impl EntityList {
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut list = Self::default();
        for name in names {
            let name = name.into();
            let key = normalize_text(&name);
            if key.is_empty() {
                continue;
            }
            let idx = list.names.len();
            // first listed wins when two names normalize alike
            if list.matcher.insert(key, idx).is_none() {
                list.names.push(name);
            }
        }
        list
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ExtractError> {
        Ok(Self::new(read_list(path.as_ref())?))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Entry whose mention occurs earliest in `text`.
    pub fn first_in(&self, text: &str) -> Option<String> {
        self.matcher
            .scan(&normalize_text(text))
            .first()
            .map(|&i| self.names[i].clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn years_takes_max() {
        assert_eq!(
            extract_years_experience("3+ years of Go, 10 years overall"),
            Some(10.0)
        );
        assert_eq!(extract_years_experience("2.5 Years in Rust"), Some(2.5));
        assert_eq!(extract_years_experience("1 year"), Some(1.0));
        assert_eq!(extract_years_experience("yearly bonus"), None);
    }

    #[test]
    fn email_first_match() {
        assert_eq!(
            extract_email("contact: a.b+c@mail.example.co.uk or x@y.io").as_deref(),
            Some("a.b+c@mail.example.co.uk")
        );
        assert_eq!(extract_email("no at sign here"), None);
        assert_eq!(extract_email("broken@host"), None);
    }

    #[test]
    fn name_rules() {
        assert_eq!(
            extract_name("resume\nMary Ann Lee\n").as_deref(),
            Some("Mary Ann Lee")
        );
        assert_eq!(extract_name("John Smith 2nd\nJohn"), None);
        assert_eq!(extract_name("Mr Big Long Name Here"), None);
        assert_eq!(extract_name("José Álvarez").as_deref(), Some("José Álvarez"));
        assert_eq!(extract_name("john smith"), None);
    }

    #[test]
    fn entity_list_first_occurrence() {
        let list = EntityList::new(["Data Scientist", "Engineer", ""]);
        assert_eq!(list.len(), 2);
        assert_eq!(
            list.first_in("engineer, later data-scientist").as_deref(),
            Some("Engineer")
        );
        assert_eq!(list.first_in("nothing"), None);
    }
}
