//! Brute-force reference implementations. Nothing here calls into the
//! library's scoring code; inputs are plain vectors and strings.
#![allow(dead_code)]

use std::collections::BTreeMap;

/// Accuracy/precision/recall/F1 from explicit label/prediction vectors.
pub fn classification(labels: &[bool], preds: &[bool]) -> (Option<f64>, f64, f64, f64) {
    let mut tp = 0.0;
    let mut tn = 0.0;
    let mut fp = 0.0;
    let mut fneg = 0.0;
    for (l, p) in labels.iter().zip(preds) {
        match (l, p) {
            (true, true) => tp += 1.0,
            (false, false) => tn += 1.0,
            (false, true) => fp += 1.0,
            (true, false) => fneg += 1.0,
        }
    }
    let n = labels.len() as f64;
    let acc = if labels.is_empty() {
        None
    } else {
        Some((tp + tn) / n)
    };
    let p = if tp + fp == 0.0 { 0.0 } else { tp / (tp + fp) };
    let r = if tp + fneg == 0.0 { 0.0 } else { tp / (tp + fneg) };
    let f = if p + r == 0.0 { 0.0 } else { 1.0 / ((1.0 / p + 1.0 / r) / 2.0) };
    (acc, p, r, f)
}

/// Reciprocal rank of the first relevant flag in each list, averaged.
pub fn mrr(lists: &[Vec<bool>]) -> f64 {
    let mut total = 0.0;
    for l in lists {
        for (i, &hit) in l.iter().enumerate() {
            if hit {
                total += 1.0 / (i as f64 + 1.0);
                break;
            }
        }
    }
    total / lists.len() as f64
}

pub fn dcg(rel: &[f64], k: usize) -> f64 {
    let mut s = 0.0;
    let mut i = 1usize;
    while i <= k && i <= rel.len() {
        s += rel[i - 1] * std::f64::consts::LN_2 / ((i + 1) as f64).ln();
        i += 1;
    }
    s
}

fn permutations(items: &[f64]) -> Vec<Vec<f64>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Ideal DCG: exhaustive over orderings for short lists, grade buckets
/// (integer grades only) otherwise.
pub fn idcg(rel: &[f64], k: usize) -> f64 {
    if rel.len() <= 6 {
        permutations(rel)
            .iter()
            .map(|p| dcg(p, k))
            .fold(0.0, f64::max)
    } else {
        let mut buckets: BTreeMap<i64, usize> = BTreeMap::new();
        for r in rel {
            *buckets.entry(-(*r as i64)).or_default() += 1;
        }
        let ordered: Vec<f64> = buckets
            .iter()
            .flat_map(|(g, n)| std::iter::repeat_n((-g) as f64, *n))
            .collect();
        dcg(&ordered, k)
    }
}

pub fn ndcg(rel: &[f64], k: usize) -> f64 {
    let ideal = idcg(rel, k);
    if ideal == 0.0 {
        0.0
    } else {
        dcg(rel, k) / ideal
    }
}

pub fn recall_at_k(ranked: &[u32], relevant: &[u32], k: usize) -> f64 {
    let mut hits = 0;
    for r in relevant {
        if ranked.iter().take(k).any(|x| x == r) {
            hits += 1;
        }
    }
    hits as f64 / relevant.len() as f64
}

/// Tokens of at least two chars, lowercase alphanumerics only (inputs are
/// generated from lowercase words, so no punctuation handling is needed).
pub fn tokens(text: &str) -> Vec<String> {
    text.split_whitespace()
        .map(|t| t.to_lowercase())
        .filter(|t| t.chars().count() >= 2)
        .collect()
}

/// Term weights of document `target` with the same two formulas, written out
/// longhand. Returns term -> weight (L2-normalized in smooth mode).
pub fn tfidf_weights(docs: &[&str], target: usize, smooth: bool) -> BTreeMap<String, f64> {
    let toks: Vec<Vec<String>> = docs.iter().map(|d| tokens(d)).collect();
    let n = docs.len() as f64;
    let mut out = BTreeMap::new();
    for term in &toks[target] {
        if out.contains_key(term) {
            continue;
        }
        let tf = toks[target].iter().filter(|t| *t == term).count() as f64;
        let df = toks.iter().filter(|d| d.contains(term)).count() as f64;
        let w = if smooth {
            tf * (((1.0 + n) / (1.0 + df)).ln() + 1.0)
        } else {
            tf / toks[target].len() as f64 * (n / df).log10()
        };
        out.insert(term.clone(), w);
    }
    if smooth {
        let norm: f64 = out.values().map(|w| w * w).sum::<f64>().sqrt();
        for w in out.values_mut() {
            *w /= norm;
        }
    }
    out
}

/// Job-vs-CV score recomputed from term weights and skill lists.
///
/// For every job skill, the best (ratio, then weight) term that is a
/// substring of it supplies the skill's weight; skills with no such term are
/// dropped. Score = sum of weights of skills the CV holds * held / scored.
pub fn match_score(
    weights: &BTreeMap<String, f64>,
    job_skills: &[String],
    cv_skills: &[String],
) -> f64 {
    let mut scored: Vec<(String, f64)> = Vec::new();
    for skill in job_skills {
        let low = skill.to_lowercase();
        let mut best: Option<(f64, f64)> = None;
        for (term, w) in weights {
            if low.contains(term.as_str()) {
                let ratio = term.chars().count() as f64 / skill.chars().count() as f64;
                let better = match best {
                    None => true,
                    Some((br, bw)) => ratio > br || (ratio == br && *w > bw),
                };
                if better {
                    best = Some((ratio, *w));
                }
            }
        }
        if let Some((_, w)) = best {
            scored.push((skill.clone(), w));
        }
    }
    if scored.is_empty() {
        return 0.0;
    }
    let held: Vec<&(String, f64)> = scored
        .iter()
        .filter(|(s, _)| cv_skills.iter().any(|c| c.eq_ignore_ascii_case(s)))
        .collect();
    let sum: f64 = held.iter().map(|(_, w)| w).sum();
    sum * held.len() as f64 / scored.len() as f64
}
