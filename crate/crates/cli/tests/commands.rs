use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn jobham(data: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jobham"))
        .arg("--data-dir")
        .arg(data)
        .args(args)
        .env_remove("JOBHAM_LEXICON")
        .env_remove("JOBHAM_VOCAB")
        .output()
        .expect("run jobham")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Two jobs, three applicants who applied to job-1, one of them without text.
fn seeded() -> TempDir {
    let dir = TempDir::new().unwrap();
    let data = dir.path().join("data");
    let jobs = dir.path().join("jobs.jsonl");
    fs::write(
        &jobs,
        concat!(
            r#"{"title":"Backend","description":"We need python, docker and kubernetes. Python daily.","deadline":"2030-01-31"}"#,
            "\n",
            r#"{"job_id":"web","title":"Web","description":"react css html and some python","deadline":"2030-02-28"}"#,
            "\n",
        ),
    )
    .unwrap();
    let out = jobham(&data, &["ingest-jobs", jobs.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stdout(&out), "job-1\nweb\n");

    for (id, text) in [
        ("ann", "Ann Lee\nann@example.com\npython docker kubernetes"),
        ("bob", "Bob Ray\nbob@example.com\npython"),
    ] {
        let f = dir.path().join(format!("{id}.txt"));
        fs::write(&f, text).unwrap();
        let out = jobham(&data, &["ingest-resume", id, f.to_str().unwrap()]);
        assert!(out.status.success(), "{}", stderr(&out));
    }
    let empty = dir.path().join("empty.txt");
    fs::write(&empty, "").unwrap();
    assert!(jobham(&data, &["ingest-resume", "cat", empty.to_str().unwrap()]).status.success());
    for id in ["bob", "ann", "cat"] {
        assert!(jobham(&data, &["apply", id, "job-1"]).status.success());
    }
    dir
}

#[test]
fn rank_applicants_is_deterministic_and_ordered() {
    let dir = seeded();
    let data = dir.path().join("data");
    let first = jobham(&data, &["rank-applicants", "job-1"]);
    let second = jobham(&data, &["rank-applicants", "job-1"]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let ids: Vec<String> = stdout(&first)
        .lines()
        .map(|l| l.split('\t').nth(1).unwrap().to_string())
        .collect();
    assert_eq!(ids, ["ann", "bob", "cat"]);
    assert!(stderr(&first).contains("warning: cat"));
}

#[test]
fn recommend_without_resume_warns_and_succeeds() {
    let dir = seeded();
    let data = dir.path().join("data");
    let out = jobham(&data, &["recommend", "cat"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 2);
    assert!(stderr(&out).contains("warning:"));

    let out = jobham(&data, &["recommend", "ann"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("1\tjob-1\t"));
}

#[test]
fn duplicate_apply_is_a_warning() {
    let dir = seeded();
    let out = jobham(&dir.path().join("data"), &["apply", "ann", "job-1"]);
    assert!(out.status.success());
    assert!(stderr(&out).contains("warning:"));
}

#[test]
fn unknown_ids_fail_with_message() {
    let dir = seeded();
    let out = jobham(&dir.path().join("data"), &["job2skill", "nope"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error:"));
}

#[test]
fn usage_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let out = jobham(dir.path(), &["rank-applicants"]);
    assert_eq!(out.status.code(), Some(2));
    let out = jobham(dir.path(), &["--mode", "fancy", "wordcloud", "x"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tfidf_job2skill_and_wordcloud() {
    let dir = seeded();
    let data = dir.path().join("data");
    let out = jobham(&data, &["tfidf", "--doc", "job-1"]);
    assert!(out.status.success());
    let first = stdout(&out).lines().next().unwrap().to_string();
    assert!(first.starts_with("python\t"), "{first}");

    let out = jobham(&data, &["wordcloud", "job-1"]);
    assert_eq!(stdout(&out).lines().next(), Some("python\t2"));

    let out = jobham(&data, &["job2skill", "job-1"]);
    let skills: Vec<String> = stdout(&out)
        .lines()
        .map(|l| l.split('\t').next().unwrap().to_string())
        .collect();
    assert_eq!(skills.len(), 3);
    assert!(skills.contains(&"kubernetes".to_string()));
}

#[test]
fn encode_requires_vocabulary() {
    let dir = seeded();
    let data = dir.path().join("data");
    let out = jobham(&data, &["encode", "job", "job-1"]);
    assert_eq!(out.status.code(), Some(1));

    let vocab = dir.path().join("vocab.txt");
    fs::write(&vocab, "[PAD]\n[UNK]\n[CLS]\n[SEP]\npython\ndocker\n").unwrap();
    let out = jobham(&data, &["--vocab", vocab.to_str().unwrap(), "encode", "job", "job-1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["input_ids"].as_array().unwrap().len(), 256);
}

#[test]
fn eval_reports_metrics() {
    let dir = TempDir::new().unwrap();
    let run = dir.path().join("run.tsv");
    let qrels = dir.path().join("qrels.tsv");
    fs::write(&run, "q1\tb,a,c\nq2\tx,y\n").unwrap();
    fs::write(&qrels, "q1\ta\t1\nq2\tz\t2\n").unwrap();
    let out = jobham(dir.path(), &["eval", run.to_str().unwrap(), qrels.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("metric\tvalue\tqueries\n"));
    assert!(text.contains("mrr\t0.250000\t2"), "{text}");
    assert!(text.contains("recall@10\t0.500000\t2"), "{text}");
}
