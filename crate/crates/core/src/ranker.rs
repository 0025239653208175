//! Skill-weighted matching between jobs and résumés.
//!
//! A job's TF-IDF terms are filtered down to the job's extracted skills
//! ([`score_job_skills`]). A résumé's score against the job is the summed
//! TF-IDF weight of the scored skills it holds, multiplied by the fraction of
//! scored skills it holds ([`match_score`]).

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::extract::SkillExtractor;
use crate::tfidf::TermScore;

#[derive(Debug, Error, PartialEq)]
pub enum RankError {
    #[error("job has no extractable skills")]
    EmptyJobSkills,
}

/// A job skill annotated with the TF-IDF term that matched it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredSkill {
    pub skill: String,
    pub score: f64,
    /// `len(term) / len(skill)` in characters.
    pub ratio: f64,
    #[serde(rename = "match")]
    pub matched: String,
}

/// Filters TF-IDF terms to those occurring inside a job skill.
///
/// Every (term, skill) pair where the term is a case-insensitive substring of
/// the skill yields a candidate. Candidates are ordered by ratio, then score
/// (both descending), then skill, and only the first entry per skill survives.
pub fn score_job_skills<S: AsRef<str>>(terms: &[TermScore], job_skills: &[S]) -> Vec<ScoredSkill> {
    let lowered: Vec<String> = job_skills.iter().map(|s| s.as_ref().to_lowercase()).collect();
    let mut out = Vec::new();
    for term in terms {
        let needle = term.term.to_lowercase();
        if needle.is_empty() {
            continue;
        }
        for (skill, low) in job_skills.iter().zip(&lowered) {
            if low.contains(&needle) {
                let skill = skill.as_ref();
                let ratio = term.term.chars().count() as f64 / skill.chars().count() as f64;
                out.push(ScoredSkill {
                    skill: skill.to_string(),
                    score: term.score,
                    ratio: ratio.min(1.0),
                    matched: term.term.clone(),
                });
            }
        }
    }
    out.sort_by(|a, b| {
        b.ratio
            .total_cmp(&a.ratio)
            .then_with(|| b.score.total_cmp(&a.score))
            .then_with(|| a.skill.cmp(&b.skill))
    });
    let mut seen = HashSet::new();
    out.retain(|s| seen.insert(s.skill.clone()));
    out
}

/// Percentage of `job_skills` that were matched.
pub fn match_ratio<A, B>(matched: &[A], job_skills: &[B]) -> Result<f64, RankError> {
    if job_skills.is_empty() {
        return Err(RankError::EmptyJobSkills);
    }
    Ok(100.0 * matched.len() as f64 / job_skills.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchScore {
    pub score: f64,
    /// Match ratio as a percentage.
    pub ratio: f64,
    pub match_list: Vec<String>,
}

/// Scores one résumé's skills against a job's scored skills.
///
/// `score = sum(tf-idf of matched skills) * match_ratio / 100`. A job with no
/// scored skills yields a zero score and [`RankError::EmptyJobSkills`] as the
/// diagnostic.
pub fn match_score<S: AsRef<str>>(
    scored: &[ScoredSkill],
    cv_skills: &[S],
) -> (MatchScore, Option<RankError>) {
    let cv: HashSet<String> = cv_skills.iter().map(|s| s.as_ref().to_lowercase()).collect();
    let matched: Vec<&ScoredSkill> = scored
        .iter()
        .filter(|s| cv.contains(&s.skill.to_lowercase()))
        .collect();
    let ratio = match match_ratio(&matched, scored) {
        Ok(r) => r,
        Err(e) => {
            return (
                MatchScore {
                    score: 0.0,
                    ratio: 0.0,
                    match_list: Vec::new(),
                },
                Some(e),
            )
        }
    };
    let weight: f64 = matched.iter().map(|s| s.score).sum();
    (
        MatchScore {
            score: weight * ratio / 100.0,
            ratio,
            match_list: matched.iter().map(|s| s.skill.clone()).collect(),
        },
        None,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedEntry {
    pub entity_id: String,
    pub score: f64,
    pub ratio: f64,
    pub match_list: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

/// Entries by score descending, ties by id ascending.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RankedResult {
    pub entries: Vec<RankedEntry>,
}

impl RankedResult {
    fn from_unsorted(mut entries: Vec<RankedEntry>) -> Self {
        entries.sort_by(|a, b| {
            b.score
                .total_cmp(&a.score)
                .then_with(|| a.entity_id.cmp(&b.entity_id))
        });
        Self { entries }
    }

    pub fn ids(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.entity_id.as_str()).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// A job as the ranker needs it: its description and TF-IDF term scores.
#[derive(Debug, Clone, Copy)]
pub struct JobInput<'a> {
    pub id: &'a str,
    pub description: &'a str,
    pub terms: &'a [TermScore],
}

/// An applicant; `resume_text` is `None` or empty before upload.
#[derive(Debug, Clone, Copy)]
pub struct ApplicantInput<'a> {
    pub id: &'a str,
    pub resume_text: Option<&'a str>,
}

impl ApplicantInput<'_> {
    fn resume(&self) -> Option<&str> {
        self.resume_text.filter(|t| !t.trim().is_empty())
    }
}

pub const NO_RESUME: &str = "no résumé text";

/// Scored skills of one job under `extractor`.
pub fn job_scored_skills(extractor: &dyn SkillExtractor, job: &JobInput<'_>) -> Vec<ScoredSkill> {
    let skills = extractor.job_skills(job.description);
    score_job_skills(job.terms, &skills)
}

fn entry(id: &str, outcome: (MatchScore, Option<RankError>)) -> RankedEntry {
    let (m, err) = outcome;
    RankedEntry {
        entity_id: id.to_string(),
        score: m.score,
        ratio: m.ratio,
        match_list: m.match_list,
        diagnostic: err.map(|e| e.to_string()),
    }
}

fn zero_entry(id: &str, why: &str) -> RankedEntry {
    RankedEntry {
        entity_id: id.to_string(),
        score: 0.0,
        ratio: 0.0,
        match_list: Vec::new(),
        diagnostic: Some(why.to_string()),
    }
}

/// Ranks applicants for one job. Duplicate applicant ids are scored once.
pub fn rank_applicants(
    extractor: &dyn SkillExtractor,
    job: &JobInput<'_>,
    applicants: &[ApplicantInput<'_>],
) -> RankedResult {
    let scored = job_scored_skills(extractor, job);
    let mut seen = HashSet::new();
    let entries = applicants
        .iter()
        .filter(|a| seen.insert(a.id))
        .map(|a| match a.resume() {
            None => zero_entry(a.id, NO_RESUME),
            Some(text) => {
                let cv = extractor.resume_profile(text).skills;
                entry(a.id, match_score(&scored, &cv))
            }
        })
        .collect();
    RankedResult::from_unsorted(entries)
}

/// Ranks jobs for one applicant. Duplicate job ids are scored once.
pub fn rank_jobs(
    extractor: &dyn SkillExtractor,
    applicant: &ApplicantInput<'_>,
    jobs: &[JobInput<'_>],
) -> RankedResult {
    let mut seen = HashSet::new();
    let jobs = jobs.iter().filter(|j| seen.insert(j.id));
    let Some(text) = applicant.resume() else {
        return RankedResult::from_unsorted(jobs.map(|j| zero_entry(j.id, NO_RESUME)).collect());
    };
    let cv = extractor.resume_profile(text).skills;
    let entries = jobs
        .map(|j| entry(j.id, match_score(&job_scored_skills(extractor, j), &cv)))
        .collect();
    RankedResult::from_unsorted(entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ts(term: &str, score: f64) -> TermScore {
        TermScore {
            term: term.into(),
            score,
        }
    }

    fn skill(name: &str, score: f64) -> ScoredSkill {
        ScoredSkill {
            skill: name.into(),
            score,
            ratio: 1.0,
            matched: name.into(),
        }
    }

    #[test]
    fn ratio_counts_raw_skill_length() {
        let s = score_job_skills(&[ts("python", 0.4)], &["python programming"]);
        assert_eq!(s.len(), 1);
        assert!((s[0].ratio - 6.0 / 18.0).abs() < 1e-15);
        assert_eq!(s[0].matched, "python");
        assert_eq!(s[0].score, 0.4);
    }

    #[test]
    fn exact_term_sorts_before_partial() {
        let s = score_job_skills(&[ts("sql", 0.3), ts("postgresql", 0.5)], &["postgresql"]);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].matched, "postgresql");
        assert_eq!(s[0].ratio, 1.0);
    }

    #[test]
    fn matching_is_case_insensitive() {
        let s = score_job_skills(&[ts("sql", 0.3)], &["MySQL"]);
        assert_eq!(s[0].skill, "MySQL");
        assert!((s[0].ratio - 0.6).abs() < 1e-15);
    }

    #[test]
    fn empty_inputs() {
        assert!(score_job_skills::<&str>(&[], &[]).is_empty());
        assert!(score_job_skills(&[ts("go", 1.0)], &["rust"]).is_empty());
    }

    #[test]
    fn match_ratio_bounds() {
        assert_eq!(match_ratio(&[1, 2], &[1, 2, 3, 4]), Ok(50.0));
        assert_eq!(match_ratio(&[1, 2], &[1, 2]), Ok(100.0));
        assert_eq!(match_ratio::<i32, i32>(&[], &[1]), Ok(0.0));
        assert_eq!(
            match_ratio::<i32, i32>(&[], &[]),
            Err(RankError::EmptyJobSkills)
        );
    }

    #[test]
    fn match_score_examples() {
        let scored = [skill("java", 0.4), skill("sql", 0.3)];
        let (m, err) = match_score(&scored, &["Java"]);
        assert!(err.is_none());
        assert_eq!(m.match_list, vec!["java"]);
        assert_eq!(m.ratio, 50.0);
        assert!((m.score - 0.2).abs() < 1e-15);

        let (m, _) = match_score(&scored, &["go"]);
        assert_eq!(m.score, 0.0);
        assert!(m.match_list.is_empty());

        let (m, _) = match_score(&scored, &["sql", "java", "go"]);
        assert!((m.score - 0.7).abs() < 1e-15);
        assert_eq!(m.ratio, 100.0);
    }

    #[test]
    fn match_score_on_skill_less_job() {
        let (m, err) = match_score::<&str>(&[], &["java"]);
        assert_eq!(m.score, 0.0);
        assert_eq!(err, Some(RankError::EmptyJobSkills));
    }

    #[test]
    fn ties_order_by_id() {
        let r = RankedResult::from_unsorted(vec![
            zero_entry("b", "x"),
            zero_entry("a", "x"),
            RankedEntry {
                score: 0.5,
                ..zero_entry("c", "x")
            },
        ]);
        assert_eq!(r.ids(), vec!["c", "a", "b"]);
    }
}
