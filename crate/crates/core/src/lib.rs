//! Job/candidate matching: skill extraction, TF-IDF term scoring, skill-based
//! ranking in both directions, and retrieval metrics.

pub mod engine;
pub mod extract;
pub mod metrics;
pub mod ranker;
pub mod stats;
pub mod store;
pub mod textprep;
pub mod tfidf;

pub use engine::{Engine, EngineConfig, EngineError, Ranking};
pub use extract::{ResumeProfile, RuleExtractor, SkillExtractor, SkillLexicon};
pub use ranker::{RankedEntry, RankedResult, ScoredSkill};
pub use stats::{FrequencyTable, Stopwords};
pub use store::{ApplicantProfile, ApplicationRecord, JobPosting, Store};
pub use textprep::{EncodedSequence, Vocabulary};
pub use tfidf::{CorpusScope, TermScore, TfidfMode, TfidfModel};

/// Skill lexicon shipped with the crate, used when none is configured.
pub const DEFAULT_LEXICON: &str = include_str!("../data/skills.tsv");

pub fn default_lexicon() -> SkillLexicon {
    SkillLexicon::parse(DEFAULT_LEXICON).expect("bundled lexicon is valid")
}
