//! Deterministic synthetic corpora for the benchmarks.

use rand::rngs::StdRng;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};

pub const SKILLS: &[&str] = &[
    "python", "java", "rust", "sql", "docker", "kubernetes", "terraform", "aws", "linux", "git",
    "react", "django", "flask", "pandas", "numpy", "tensorflow", "pytorch", "kafka", "redis",
    "postgresql", "mongodb", "spark", "airflow", "agile",
];

const FILLER: &[&str] = &[
    "team", "build", "deliver", "platform", "customers", "design", "services", "product",
    "quality", "scale", "reliable", "growth", "modern", "engineering", "support", "remote",
];

/// `n` descriptions of `words` tokens, about one in ten a skill.
pub fn descriptions(n: usize, words: usize, seed: u64) -> Vec<(String, String)> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let text: Vec<&str> = (0..words)
                .map(|_| {
                    if rng.random_bool(0.1) {
                        *SKILLS.choose(&mut rng).unwrap()
                    } else {
                        *FILLER.choose(&mut rng).unwrap()
                    }
                })
                .collect();
            (format!("job-{i}"), text.join(" "))
        })
        .collect()
}

/// `n` short résumés listing 2..=10 skills each.
pub fn resumes(n: usize, seed: u64) -> Vec<(String, String)> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let k = rng.random_range(2..=10);
            let skills: Vec<&str> = SKILLS.choose_multiple(&mut rng, k).copied().collect();
            (format!("cv-{i}"), format!("Skills: {}", skills.join(", ")))
        })
        .collect()
}
