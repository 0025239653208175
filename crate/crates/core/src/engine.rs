//! Ties the store, extractor, TF-IDF model and ranker together. Every
//! request works against one store snapshot.

use std::sync::Arc;

use parking_lot::Mutex;
use thiserror::Error;

use crate::extract::SkillExtractor;
use crate::ranker::{self, ApplicantInput, JobInput, RankedResult, ScoredSkill};
use crate::stats::{self, FrequencyTable, Stopwords};
use crate::store::{
    ApplicantProfile, ApplicationRecord, JobPosting, Snapshot, Store, StoreError,
};
use crate::textprep::{EncodedSequence, TextError, Vocabulary, JOB_MAX_LEN, RESUME_MAX_LEN};
use crate::tfidf::{self, CorpusScope, TermScore, TfidfError, TfidfMode, TfidfModel};

pub const JOB2SKILL_LIMIT: usize = 20;
pub const WORDCLOUD_LIMIT: usize = 100;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error(transparent)]
    Tfidf(#[from] TfidfError),
    #[error(transparent)]
    Text(#[from] TextError),
    #[error("no vocabulary configured")]
    NoVocabulary,
    #[error("bad request: {0}")]
    BadRequest(String),
}

impl EngineError {
    pub fn is_not_found(&self) -> bool {
        matches!(self, Self::Store(StoreError::NotFound { .. }))
    }
}

pub type Result<T, E = EngineError> = std::result::Result<T, E>;

#[derive(Debug, Clone)]
pub struct EngineConfig {
    pub mode: TfidfMode,
    pub scope: CorpusScope,
    pub job_max_len: usize,
    pub resume_max_len: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            mode: TfidfMode::Smooth,
            scope: CorpusScope::Jobs,
            job_max_len: JOB_MAX_LEN,
            resume_max_len: RESUME_MAX_LEN,
        }
    }
}

/// A ranking plus request-level warnings (unknown or dangling ids).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Ranking {
    pub result: RankedResult,
    pub diagnostics: Vec<String>,
}

pub struct Engine {
    store: Store,
    extractor: Arc<dyn SkillExtractor>,
    stopwords: Stopwords,
    vocab: Option<Vocabulary>,
    config: EngineConfig,
    model: Mutex<Option<(u64, Arc<TfidfModel>)>>,
}

impl Engine {
    pub fn new(store: Store, extractor: Arc<dyn SkillExtractor>) -> Self {
        Self {
            store,
            extractor,
            stopwords: Stopwords::english(),
            vocab: None,
            config: EngineConfig::default(),
            model: Mutex::new(None),
        }
    }

    pub fn with_stopwords(mut self, stopwords: Stopwords) -> Self {
        self.stopwords = stopwords;
        self
    }

    pub fn with_vocabulary(mut self, vocab: Vocabulary) -> Self {
        self.vocab = Some(vocab);
        self
    }

    pub fn with_config(mut self, config: EngineConfig) -> Self {
        self.config = config;
        *self.model.lock() = None;
        self
    }

    pub fn store(&self) -> &Store {
        &self.store
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn extractor(&self) -> &dyn SkillExtractor {
        self.extractor.as_ref()
    }

    /// Corpus model for `snap`, refitted when the job set has changed.
    pub fn model(&self, snap: &Snapshot) -> Result<Arc<TfidfModel>> {
        let generation = snap.jobs_generation();
        let mut cached = self.model.lock();
        if let Some((g, m)) = cached.as_ref() {
            if *g == generation {
                return Ok(m.clone());
            }
        }
        let model = Arc::new(TfidfModel::fit(
            snap.jobs().map(|j| (j.job_id.as_str(), j.description.as_str())),
            self.config.mode,
        )?);
        *cached = Some((generation, model.clone()));
        Ok(model)
    }

    /// TF-IDF terms of one job under the configured corpus scope.
    pub fn job_terms(&self, snap: &Snapshot, job_id: &str) -> Result<Vec<TermScore>> {
        let job = snap.get_job(job_id)?;
        Ok(match self.config.scope {
            CorpusScope::Jobs => self.model(snap)?.term_scores(job_id)?,
            CorpusScope::SingleDocSentences => {
                tfidf::single_doc_term_scores(&job.description, self.config.mode)
            }
        })
    }

    /// Scored skills of a job, uncapped.
    pub fn scored_skills(&self, snap: &Snapshot, job_id: &str) -> Result<Vec<ScoredSkill>> {
        let job = snap.get_job(job_id)?;
        let terms = self.job_terms(snap, job_id)?;
        Ok(ranker::job_scored_skills(
            self.extractor(),
            &JobInput {
                id: job_id,
                description: &job.description,
                terms: &terms,
            },
        ))
    }

    /// The top scored skills of a job.
    pub fn job2skill(&self, job_id: &str) -> Result<Vec<ScoredSkill>> {
        let mut skills = self.scored_skills(&self.store.snapshot(), job_id)?;
        skills.truncate(JOB2SKILL_LIMIT);
        Ok(skills)
    }

    pub fn word_cloud(&self, job_id: &str) -> Result<FrequencyTable> {
        let snap = self.store.snapshot();
        let job = snap.get_job(job_id)?;
        let table = stats::word_frequencies(&job.description, &self.stopwords);
        Ok(stats::top_n(&table, WORDCLOUD_LIMIT))
    }

    /// Ranks the given applicants for a job. Unknown applicant ids are
    /// skipped and reported.
    pub fn job_match_cv(&self, job_id: &str, applicant_ids: &[String]) -> Result<Ranking> {
        let snap = self.store.snapshot();
        self.job_match_cv_in(&snap, job_id, applicant_ids)
    }

    fn job_match_cv_in(
        &self,
        snap: &Snapshot,
        job_id: &str,
        applicant_ids: &[String],
    ) -> Result<Ranking> {
        let job = snap.get_job(job_id)?;
        let terms = self.job_terms(snap, job_id)?;
        let mut diagnostics = Vec::new();
        let mut applicants = Vec::with_capacity(applicant_ids.len());
        for id in applicant_ids {
            match snap.get_applicant(id) {
                Ok(a) => applicants.push(ApplicantInput {
                    id: &a.applicant_id,
                    resume_text: Some(&a.resume_text),
                }),
                Err(_) => diagnostics.push(format!("applicant {id:?} not found; skipped")),
            }
        }
        let result = ranker::rank_applicants(
            self.extractor(),
            &JobInput {
                id: job_id,
                description: &job.description,
                terms: &terms,
            },
            &applicants,
        );
        collect_entry_diagnostics(&result, &mut diagnostics);
        Ok(Ranking {
            result,
            diagnostics,
        })
    }

    /// Ranks every applicant who applied to `job_id`.
    pub fn rank_job_applicants(&self, job_id: &str) -> Result<Ranking> {
        let snap = self.store.snapshot();
        let list = snap.list_applicants_for_job(job_id)?;
        let mut ranking = self.job_match_cv_in(&snap, job_id, &list.ids)?;
        for id in list.dangling {
            ranking
                .diagnostics
                .insert(0, format!("applicant {id:?} no longer exists; skipped"));
        }
        Ok(ranking)
    }

    /// Ranks the given jobs for an applicant. Unknown job ids are skipped and
    /// reported.
    pub fn cv_match_job(&self, applicant_id: &str, job_ids: &[String]) -> Result<Ranking> {
        let snap = self.store.snapshot();
        self.cv_match_job_in(&snap, applicant_id, job_ids)
    }

    fn cv_match_job_in(
        &self,
        snap: &Snapshot,
        applicant_id: &str,
        job_ids: &[String],
    ) -> Result<Ranking> {
        let applicant = snap.get_applicant(applicant_id)?;
        let mut diagnostics = Vec::new();
        let mut found = Vec::with_capacity(job_ids.len());
        for id in job_ids {
            match snap.get_job(id) {
                Ok(job) => found.push((job, self.job_terms(snap, id)?)),
                Err(_) => diagnostics.push(format!("job {id:?} not found; skipped")),
            }
        }
        let jobs: Vec<JobInput<'_>> = found
            .iter()
            .map(|(job, terms)| JobInput {
                id: &job.job_id,
                description: &job.description,
                terms,
            })
            .collect();
        let result = ranker::rank_jobs(
            self.extractor(),
            &ApplicantInput {
                id: applicant_id,
                resume_text: Some(&applicant.resume_text),
            },
            &jobs,
        );
        collect_entry_diagnostics(&result, &mut diagnostics);
        Ok(Ranking {
            result,
            diagnostics,
        })
    }

    /// Ranks every stored job for an applicant.
    pub fn recommend(&self, applicant_id: &str) -> Result<Ranking> {
        let snap = self.store.snapshot();
        let ids: Vec<String> = snap.jobs().map(|j| j.job_id.clone()).collect();
        self.cv_match_job_in(&snap, applicant_id, &ids)
    }

    /// Stores a job with its extracted skills. An empty id is replaced by the
    /// next `job-N`.
    pub fn ingest_job(&self, job: JobPosting) -> Result<String> {
        Ok(self.ingest_jobs(vec![job])?.remove(0))
    }

    pub fn ingest_jobs(&self, jobs: Vec<JobPosting>) -> Result<Vec<String>> {
        let snap = self.store.snapshot();
        let mut next = snap
            .next_id("job-")
            .trim_start_matches("job-")
            .parse::<u64>()
            .unwrap_or(1);
        let jobs = jobs
            .into_iter()
            .map(|mut j| {
                if j.job_id.is_empty() {
                    j.job_id = format!("job-{next}");
                    next += 1;
                }
                j.skills = self.extractor.job_skills(&j.description);
                j
            })
            .collect();
        Ok(self.store.upsert_jobs(jobs)?)
    }

    /// Stores résumé text and its extracted profile, creating the applicant
    /// if needed. Name and email are filled from the profile when unset.
    pub fn ingest_resume(&self, applicant_id: &str, text: &str) -> Result<ApplicantProfile> {
        let profile = self.extractor.resume_profile(text);
        Ok(self.store.update_applicant(applicant_id, |a| {
            if a.name.is_empty() {
                a.name = profile.name.clone().unwrap_or_default();
            }
            if a.email.is_empty() {
                a.email = profile.email.clone().unwrap_or_default();
            }
            a.resume_text = text.to_string();
            a.resume_profile = Some(profile);
        })?)
    }

    pub fn apply(&self, applicant_id: &str, job_id: &str) -> Result<ApplicationRecord> {
        Ok(self.store.record_application(job_id, applicant_id)?)
    }

    pub fn encode_job(&self, job_id: &str) -> Result<EncodedSequence> {
        let vocab = self.vocab.as_ref().ok_or(EngineError::NoVocabulary)?;
        let job = self.store.get_job(job_id)?;
        Ok(vocab.encode_text(&job.description, self.config.job_max_len)?)
    }

    pub fn encode_resume(&self, applicant_id: &str) -> Result<EncodedSequence> {
        let vocab = self.vocab.as_ref().ok_or(EngineError::NoVocabulary)?;
        let a = self.store.get_applicant(applicant_id)?;
        Ok(vocab.encode_text(&a.resume_text, self.config.resume_max_len)?)
    }
}

fn collect_entry_diagnostics(result: &RankedResult, out: &mut Vec<String>) {
    for e in &result.entries {
        if let Some(d) = &e.diagnostic {
            out.push(format!("{}: {d}", e.entity_id));
        }
    }
}
