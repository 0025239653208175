//! Classification and ranking metrics.
//!
//! Undefined ratios (0/0) evaluate to 0 rather than NaN so that metric values
//! always sort.

use std::collections::{HashMap, HashSet};
use std::hash::Hash;

use indexmap::IndexMap;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MetricError {
    #[error("confusion counts are all zero")]
    NoObservations,
    #[error("rank must be at least 1")]
    RankBelowOne,
    #[error("cutoff k must be at least 1")]
    ZeroCutoff,
    #[error("relevant set is empty")]
    EmptyRelevant,
    #[error("no queries")]
    NoQueries,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub tn: u64,
    pub fp: u64,
    pub fn_: u64,
}

impl ConfusionCounts {
    pub fn new(tp: u64, tn: u64, fp: u64, fn_: u64) -> Self {
        Self { tp, tn, fp, fn_ }
    }

    fn total(&self) -> u64 {
        self.tp + self.tn + self.fp + self.fn_
    }
}

fn ratio_or_zero(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

pub fn accuracy(c: &ConfusionCounts) -> Result<f64, MetricError> {
    if c.total() == 0 {
        return Err(MetricError::NoObservations);
    }
    Ok((c.tp + c.tn) as f64 / c.total() as f64)
}

pub fn precision(c: &ConfusionCounts) -> f64 {
    ratio_or_zero(c.tp as f64, (c.tp + c.fp) as f64)
}

pub fn recall(c: &ConfusionCounts) -> f64 {
    ratio_or_zero(c.tp as f64, (c.tp + c.fn_) as f64)
}

/// Harmonic mean of precision and recall.
pub fn f1(c: &ConfusionCounts) -> f64 {
    f1_from(precision(c), recall(c))
}

pub fn f1_from(p: f64, r: f64) -> f64 {
    ratio_or_zero(2.0 * p * r, p + r)
}

/// Mean reciprocal rank. `None` marks a query with no relevant hit and
/// contributes 0.
pub fn mrr(ranks: &[Option<usize>]) -> Result<f64, MetricError> {
    if ranks.is_empty() {
        return Err(MetricError::NoQueries);
    }
    let mut sum = 0.0;
    for r in ranks {
        match r {
            Some(0) => return Err(MetricError::RankBelowOne),
            Some(r) => sum += 1.0 / *r as f64,
            None => {}
        }
    }
    Ok(sum / ranks.len() as f64)
}

/// `sum_{i=1..=min(k, n)} rel_i / log2(i + 1)`.
pub fn dcg(rel: &[f64], k: usize) -> Result<f64, MetricError> {
    if k == 0 {
        return Err(MetricError::ZeroCutoff);
    }
    Ok(rel
        .iter()
        .take(k)
        .enumerate()
        .map(|(i, r)| r / ((i + 2) as f64).log2())
        .sum())
}

/// DCG@k over IDCG@k; 0 when the ideal gain is 0.
pub fn ndcg(rel: &[f64], k: usize) -> Result<f64, MetricError> {
    let actual = dcg(rel, k)?;
    let mut ideal = rel.to_vec();
    ideal.sort_by(|a, b| b.total_cmp(a));
    let best = dcg(&ideal, k)?;
    Ok(if best > 0.0 {
        (actual / best).min(1.0)
    } else {
        0.0
    })
}

/// Fraction of `relevant` found in the first `k` entries of `ranked`.
pub fn recall_at_k<T: Eq + Hash>(
    ranked: &[T],
    relevant: &HashSet<T>,
    k: usize,
) -> Result<f64, MetricError> {
    if k == 0 {
        return Err(MetricError::ZeroCutoff);
    }
    if relevant.is_empty() {
        return Err(MetricError::EmptyRelevant);
    }
    let mut hit = HashSet::new();
    for id in ranked.iter().take(k) {
        if relevant.contains(id) {
            hit.insert(id);
        }
    }
    Ok(hit.len() as f64 / relevant.len() as f64)
}

/// Ranked ids per query, in file order.
pub type Run = IndexMap<String, Vec<String>>;
/// Graded relevance per query.
pub type Qrels = HashMap<String, HashMap<String, f64>>;

/// Parses `query_id<TAB>id[,id...]` lines. Repeated query lines append.
pub fn parse_run(text: &str) -> Result<Run, MetricError> {
    let mut run = Run::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let mut cols = line.split('\t');
        let query = cols.next().unwrap_or_default().trim();
        let ids: Vec<String> = cols
            .flat_map(|c| c.split(','))
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(String::from)
            .collect();
        if query.is_empty() || ids.is_empty() {
            return Err(MetricError::Parse {
                line: idx + 1,
                message: "expected query_id<TAB>ranked ids".into(),
            });
        }
        run.entry(query.to_string()).or_default().extend(ids);
    }
    Ok(run)
}

/// Parses `query_id<TAB>id<TAB>grade` lines.
pub fn parse_qrels(text: &str) -> Result<Qrels, MetricError> {
    let mut qrels = Qrels::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
        let err = |message: String| MetricError::Parse {
            line: idx + 1,
            message,
        };
        let [query, id, grade] = cols[..] else {
            return Err(err(format!("expected 3 tab-separated columns, got {}", cols.len())));
        };
        let grade: f64 = grade
            .parse()
            .map_err(|_| err(format!("bad grade {grade:?}")))?;
        if !grade.is_finite() || grade < 0.0 {
            return Err(err(format!("grade must be finite and non-negative, got {grade}")));
        }
        qrels
            .entry(query.to_string())
            .or_default()
            .insert(id.to_string(), grade);
    }
    Ok(qrels)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricRow {
    pub metric: String,
    pub value: f64,
    pub queries: usize,
}

/// Mean MRR, nDCG@{10,50,100} and Recall@{10,50,100} over run queries.
///
/// Queries absent from the qrels are skipped; recall ignores queries without
/// a relevant id.
pub fn evaluate_run(run: &Run, qrels: &Qrels) -> Result<Vec<MetricRow>, MetricError> {
    let mut first_hits = Vec::new();
    let mut ndcgs: [Vec<f64>; 3] = Default::default();
    let mut recalls: [Vec<f64>; 3] = Default::default();
    const CUTOFFS: [usize; 3] = [10, 50, 100];

    for (query, ranked) in run {
        let Some(grades) = qrels.get(query) else { continue };
        let rel: Vec<f64> = ranked
            .iter()
            .map(|id| grades.get(id).copied().unwrap_or(0.0))
            .collect();
        first_hits.push(rel.iter().position(|&g| g > 0.0).map(|p| p + 1));

        // the ideal ordering may include relevant ids the run never returned
        let mut ideal: Vec<f64> = grades.values().copied().collect();
        ideal.sort_by(|a, b| b.total_cmp(a));
        let relevant: HashSet<&String> = grades
            .iter()
            .filter(|(_, &g)| g > 0.0)
            .map(|(id, _)| id)
            .collect();
        let ranked_refs: Vec<&String> = ranked.iter().collect();
        for (slot, &k) in CUTOFFS.iter().enumerate() {
            let best = dcg(&ideal, k)?;
            ndcgs[slot].push(if best > 0.0 { dcg(&rel, k)? / best } else { 0.0 });
            if !relevant.is_empty() {
                recalls[slot].push(recall_at_k(&ranked_refs, &relevant, k)?);
            }
        }
    }
    if first_hits.is_empty() {
        return Err(MetricError::NoQueries);
    }
    let mean = |v: &[f64]| if v.is_empty() { 0.0 } else { v.iter().sum::<f64>() / v.len() as f64 };
    let mut rows = vec![MetricRow {
        metric: "mrr".into(),
        value: mrr(&first_hits)?,
        queries: first_hits.len(),
    }];
    for (slot, k) in CUTOFFS.iter().enumerate() {
        rows.push(MetricRow {
            metric: format!("ndcg@{k}"),
            value: mean(&ndcgs[slot]),
            queries: ndcgs[slot].len(),
        });
    }
    for (slot, k) in CUTOFFS.iter().enumerate() {
        rows.push(MetricRow {
            metric: format!("recall@{k}"),
            value: mean(&recalls[slot]),
            queries: recalls[slot].len(),
        });
    }
    Ok(rows)
}
