//! Skill and résumé-entity extraction.
//!
//! [`SkillExtractor`] is the seam between ranking and whatever produces skill
//! sets. [`RuleExtractor`] is the deterministic lexicon implementation; a
//! model-backed service can implement the same trait.

mod lexicon;
mod resume;

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use lexicon::{SkillEntry, SkillLexicon};
pub use resume::{extract_email, extract_name, extract_years_experience, EntityList};

#[derive(Debug, Error)]
pub enum ExtractError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("alias {alias:?} maps to both {first:?} and {second:?}")]
    DuplicateAlias {
        alias: String,
        first: String,
        second: String,
    },
    #[error("line {line}: canonical skill {canonical:?} listed twice")]
    DuplicateCanonical { canonical: String, line: usize },
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Entities pulled from a résumé. Absent fields were not found, never guessed.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ResumeProfile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub email: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub designation: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub college_name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub years_experience: Option<f64>,
    #[serde(default)]
    pub skills: Vec<String>,
}

/// Produces canonical skill sets from raw text.
///
/// Implementations must be deterministic and draw skills from a closed set.
pub trait SkillExtractor: Send + Sync {
    fn job_skills(&self, description: &str) -> Vec<String>;
    fn resume_profile(&self, resume_text: &str) -> ResumeProfile;
}

/// Canonical skills in `description`, longest alias first, whole tokens only.
pub fn extract_job_skills(description: &str, lexicon: &SkillLexicon) -> Vec<String> {
    lexicon.find(description)
}

pub fn extract_resume_profile(resume_text: &str, lexicon: &SkillLexicon) -> ResumeProfile {
    ResumeProfile {
        name: extract_name(resume_text),
        email: extract_email(resume_text),
        designation: None,
        college_name: None,
        years_experience: extract_years_experience(resume_text),
        skills: extract_job_skills(resume_text, lexicon),
    }
}

#[derive(Debug, Clone, Default)]
pub struct RuleExtractor {
    lexicon: SkillLexicon,
    titles: Option<EntityList>,
    institutions: Option<EntityList>,
}

impl RuleExtractor {
    pub fn new(lexicon: SkillLexicon) -> Self {
        Self {
            lexicon,
            titles: None,
            institutions: None,
        }
    }

    /// Job titles used to fill `designation`.
    pub fn with_titles(mut self, titles: EntityList) -> Self {
        self.titles = Some(titles);
        self
    }

    /// Institution names used to fill `college_name`.
    pub fn with_institutions(mut self, institutions: EntityList) -> Self {
        self.institutions = Some(institutions);
        self
    }

    pub fn lexicon(&self) -> &SkillLexicon {
        &self.lexicon
    }
}

impl SkillExtractor for RuleExtractor {
    fn job_skills(&self, description: &str) -> Vec<String> {
        extract_job_skills(description, &self.lexicon)
    }

    fn resume_profile(&self, resume_text: &str) -> ResumeProfile {
        let mut profile = extract_resume_profile(resume_text, &self.lexicon);
        profile.designation = self.titles.as_ref().and_then(|t| t.first_in(resume_text));
        profile.college_name = self
            .institutions
            .as_ref()
            .and_then(|t| t.first_in(resume_text));
        profile
    }
}

/// Reads a one-entry-per-line list, skipping blanks and `#` comments.
pub(crate) fn read_list(path: &Path) -> Result<Vec<String>, ExtractError> {
    let text = fs::read_to_string(path).map_err(|source| ExtractError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lex(table: &str) -> SkillLexicon {
        SkillLexicon::parse(table).unwrap()
    }

    #[test]
    fn job_skills_in_first_occurrence_order() {
        let l = lex("java\nsql\ngo\n");
        assert_eq!(
            extract_job_skills("experience with java and sql required", &l),
            vec!["java", "sql"]
        );
        assert_eq!(extract_job_skills("SQL, then Java, then sql", &l), vec!["sql", "java"]);
    }

    #[test]
    fn token_boundaries() {
        let l = lex("java\njavascript\n");
        assert_eq!(
            extract_job_skills("strong javascript skills", &l),
            vec!["javascript"]
        );
    }

    #[test]
    fn empty_description() {
        assert!(extract_job_skills("", &lex("java\n")).is_empty());
    }

    #[test]
    fn resume_profile_rules() {
        let l = lex("java\nsql\n");
        let p = extract_resume_profile("John Smith\njohn@x.io\n5 years Java and SQL", &l);
        assert_eq!(p.name.as_deref(), Some("John Smith"));
        assert_eq!(p.email.as_deref(), Some("john@x.io"));
        assert_eq!(p.years_experience, Some(5.0));
        assert_eq!(p.skills, vec!["java", "sql"]);
        assert_eq!(p.designation, None);
    }

    #[test]
    fn empty_resume() {
        let p = extract_resume_profile("", &lex("java\n"));
        assert_eq!(p, ResumeProfile::default());
    }

    #[test]
    fn designation_and_college_from_lists() {
        let ex = RuleExtractor::new(lex("rust\n"))
            .with_titles(EntityList::new(["Data Scientist", "Software Engineer"]))
            .with_institutions(EntityList::new(["University of Nottingham"]));
        let p = ex.resume_profile(
            "Jane Doe\nSenior software engineer at Acme\nBSc, University of Nottingham\nRust",
        );
        assert_eq!(p.designation.as_deref(), Some("Software Engineer"));
        assert_eq!(p.college_name.as_deref(), Some("University of Nottingham"));
        assert_eq!(p.skills, vec!["rust"]);

        let bare = RuleExtractor::new(lex("rust\n")).resume_profile("Software Engineer");
        assert_eq!(bare.designation, None);
    }

    proptest! {
        #[test]
        fn case_and_punctuation_noise_do_not_change_skills(
            words in proptest::collection::vec(
                prop_oneof![Just("java"), Just("sql"), Just("machine"), Just("learning"), Just("and"), Just("node"), Just("js")],
                0..16,
            ),
            noise in proptest::collection::vec(prop_oneof![Just(","), Just("!"), Just(" ; "), Just(".")], 16),
            upper in proptest::collection::vec(any::<bool>(), 16),
        ) {
            let l = lex("java\nsql\nmachine learning\tml\nnode\tnode.js\n");
            let clean = words.join(" ");
            let noisy: String = words
                .iter()
                .enumerate()
                .map(|(i, w)| {
                    let w = if upper[i] { w.to_uppercase() } else { w.to_string() };
                    format!("{w}{} ", noise[i])
                })
                .collect();
            let skills = extract_job_skills(&noisy, &l);
            prop_assert_eq!(&skills, &extract_job_skills(&clean, &l));
            for s in &skills {
                prop_assert!(l.contains_canonical(s));
            }
        }

        #[test]
        fn lexicon_order_does_not_change_extracted_set(seed in any::<u64>()) {
            use rand::{seq::SliceRandom, SeedableRng};
            let mut lines = ["java", "sql", "machine learning\tml", "go\tgolang", "rust", "learning"];
            let text = "We want golang, Rust and ML; machine learning is a plus. SQL or java.";
            let base = extract_job_skills(text, &lex(&lines.join("\n")));
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            lines.shuffle(&mut rng);
            prop_assert_eq!(base, extract_job_skills(text, &lex(&lines.join("\n"))));
        }
    }
}
