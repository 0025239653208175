//! Fixtures shared by the service tests and the acceptance run: synthetic
//! jobs and résumés built from the bundled lexicon, and a server launcher.
#![allow(dead_code)]

use std::sync::Arc;

use chrono::NaiveDate;
use jobham_cli::server;
use jobham_core::{default_lexicon, Engine, JobPosting, RuleExtractor, Store};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

/// Single-word canonical skills from the bundled lexicon.
pub const SKILLS: &[&str] = &[
    "python", "java", "rust", "ruby", "php", "scala", "kotlin", "swift", "sql", "redis", "kafka",
    "docker", "kubernetes", "terraform", "ansible", "aws", "azure", "gcp", "linux", "git",
    "jenkins", "react", "angular", "vue", "django", "flask", "fastapi", "spring", "html", "css",
    "graphql", "tensorflow", "pytorch", "pandas", "numpy", "tableau", "excel", "agile", "figma",
    "photoshop", "selenium", "mysql", "sqlite", "mongodb", "hadoop", "airflow", "postgresql",
];

/// Words that are neither stopwords nor skills.
pub const FILLER: &[&str] = &[
    "team", "build", "deliver", "platform", "customers", "design", "services", "product",
    "quality", "scale", "reliable", "growth", "modern", "engineering", "support", "office",
    "remote", "features", "pipeline", "backend", "frontend", "mentor", "ship", "clients",
];

pub fn deadline() -> NaiveDate {
    NaiveDate::from_ymd_opt(2030, 1, 31).unwrap()
}

pub fn job(id: &str, description: &str) -> JobPosting {
    JobPosting {
        job_id: id.to_string(),
        title: format!("Role {id}"),
        company: "Acme".into(),
        location: "Remote".into(),
        job_type: Default::default(),
        description: description.to_string(),
        salary: String::new(),
        deadline: deadline(),
        skills: Vec::new(),
    }
}

/// A description of `words` tokens mixing 3..=8 skills with filler.
pub fn synthetic_description<R: Rng>(rng: &mut R, words: usize) -> String {
    let k = rng.random_range(3..=8);
    let skills: Vec<&str> = SKILLS.choose_multiple(rng, k).copied().collect();
    let mut out: Vec<&str> = (0..words)
        .map(|i| {
            if i < skills.len() || rng.random_bool(0.1) {
                *skills.choose(rng).unwrap()
            } else {
                *FILLER.choose(rng).unwrap()
            }
        })
        .collect();
    out.shuffle(rng);
    out.join(" ")
}

pub fn synthetic_jobs<R: Rng>(rng: &mut R, n: usize) -> Vec<JobPosting> {
    (0..n)
        .map(|i| job(&format!("job-{}", i + 1), &synthetic_description(rng, 40)))
        .collect()
}

pub fn synthetic_resume<R: Rng>(rng: &mut R, n: usize) -> String {
    let k = rng.random_range(2..=10);
    let skills: Vec<&str> = SKILLS.choose_multiple(rng, k).copied().collect();
    format!(
        "Applicant Number {}\nperson{n}@example.com\n6 years experience\nSkills: {}\n",
        ["One", "Two", "Three", "Four", "Five"][n % 5],
        skills.join(", ")
    )
}

pub fn engine() -> Engine {
    Engine::new(Store::in_memory(), Arc::new(RuleExtractor::new(default_lexicon())))
}

/// Starts the service on an ephemeral port inside the current runtime and
/// returns its base URL.
pub async fn serve(engine: Engine) -> String {
    let (addr, fut) = server::bind(Arc::new(engine), "127.0.0.1:0".parse().unwrap())
        .await
        .expect("bind");
    tokio::spawn(fut);
    format!("http://{addr}")
}
