use std::fmt::Write as _;
use std::fs;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use jobham_core::engine::EngineConfig;
use jobham_core::extract::EntityList;
use jobham_core::metrics;
use jobham_core::store::StoreError;
use jobham_core::{
    default_lexicon, CorpusScope, Engine, EngineError, JobPosting, Ranking, RuleExtractor,
    SkillLexicon, Stopwords, Store, TfidfMode, Vocabulary,
};

use crate::server;

#[derive(Debug, Parser)]
#[command(name = "jobham", version, about = "Match jobs and résumés by skill")]
pub struct Cli {
    /// Directory holding job.jsonl, user.jsonl and application.jsonl.
    #[arg(long, global = true, env = "JOBHAM_DATA_DIR", default_value = "data")]
    pub data_dir: PathBuf,
    /// Skill lexicon (`canonical<TAB>alias,alias`); the bundled list if unset.
    #[arg(long, global = true, env = "JOBHAM_LEXICON")]
    pub lexicon: Option<PathBuf>,
    /// WordPiece vocabulary, one token per line.
    #[arg(long, global = true, env = "JOBHAM_VOCAB")]
    pub vocab: Option<PathBuf>,
    /// Stopword list, one token per line; the bundled English list if unset.
    #[arg(long, global = true)]
    pub stopwords: Option<PathBuf>,
    /// Job titles used to fill the résumé designation.
    #[arg(long, global = true)]
    pub titles: Option<PathBuf>,
    /// Institution names used to fill the résumé college.
    #[arg(long, global = true)]
    pub institutions: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Smooth)]
    pub mode: ModeArg,
    #[arg(long, global = true, value_enum, default_value_t = CorpusArg::Jobs)]
    pub corpus: CorpusArg,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Naive,
    Smooth,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CorpusArg {
    Jobs,
    SingleDocSentences,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum EncodeTarget {
    Job,
    Resume,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load jobs from a JSON-lines file (one job record per line).
    IngestJobs { file: PathBuf },
    /// Store a résumé text file for an applicant, creating the applicant if needed.
    IngestResume {
        applicant_id: String,
        file: PathBuf,
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        email: Option<String>,
    },
    /// Record that an applicant applied to a job.
    Apply { applicant_id: String, job_id: String },
    /// Rank everyone who applied to a job.
    RankApplicants { job_id: String },
    /// Rank every stored job for an applicant.
    Recommend { applicant_id: String },
    /// Scored skills of a job (top 20).
    Job2skill { job_id: String },
    /// Token frequencies of a job description (top 100).
    Wordcloud { job_id: String },
    /// TF-IDF term scores of one job.
    Tfidf {
        #[arg(long)]
        doc: String,
    },
    /// Encode a job description or résumé into fixed-length id vectors.
    Encode { target: EncodeTarget, id: String },
    /// Score a run file against graded relevance judgements.
    Eval { run: PathBuf, qrels: PathBuf },
    /// Serve the HTTP API.
    Serve {
        #[arg(long, env = "JOBHAM_PORT", default_value_t = 8000)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
    },
}

impl Cli {
    pub fn engine_config(&self) -> EngineConfig {
        EngineConfig {
            mode: match self.mode {
                ModeArg::Naive => TfidfMode::Naive,
                ModeArg::Smooth => TfidfMode::Smooth,
            },
            scope: match self.corpus {
                CorpusArg::Jobs => CorpusScope::Jobs,
                CorpusArg::SingleDocSentences => CorpusScope::SingleDocSentences,
            },
            ..EngineConfig::default()
        }
    }

    pub fn build_engine(&self) -> Result<Engine> {
        let lexicon = match &self.lexicon {
            Some(p) => SkillLexicon::load(p).with_context(|| format!("loading lexicon {}", p.display()))?,
            None => default_lexicon(),
        };
        let mut extractor = RuleExtractor::new(lexicon);
        if let Some(p) = &self.titles {
            extractor = extractor.with_titles(EntityList::load(p)?);
        }
        if let Some(p) = &self.institutions {
            extractor = extractor.with_institutions(EntityList::load(p)?);
        }
        let store = Store::open(&self.data_dir)
            .with_context(|| format!("opening store {}", self.data_dir.display()))?;
        let mut engine = Engine::new(store, Arc::new(extractor)).with_config(self.engine_config());
        if let Some(p) = &self.stopwords {
            engine = engine.with_stopwords(
                Stopwords::load(p).with_context(|| format!("loading stopwords {}", p.display()))?,
            );
        }
        if let Some(p) = &self.vocab {
            engine = engine.with_vocabulary(Vocabulary::load(p)?);
        }
        Ok(engine)
    }
}

/// Tab-separated `rank, id, score, matched skills` rows.
pub fn format_ranking(ranking: &Ranking) -> String {
    let mut out = String::new();
    for (i, e) in ranking.result.entries.iter().enumerate() {
        let _ = writeln!(
            out,
            "{}\t{}\t{:.6}\t{}",
            i + 1,
            e.entity_id,
            e.score,
            e.match_list.join(",")
        );
    }
    out
}

fn warn_all(diagnostics: &[String]) {
    for d in diagnostics {
        eprintln!("warning: {d}");
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn parse_jobs(text: &str) -> Result<Vec<JobPosting>> {
    let mut jobs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let job: JobPosting =
            serde_json::from_str(line).with_context(|| format!("job record on line {}", i + 1))?;
        jobs.push(job);
    }
    Ok(jobs)
}

pub fn run(cli: Cli) -> Result<()> {
    if let Command::Eval { run, qrels } = &cli.command {
        let run = metrics::parse_run(&read_text(run)?)?;
        let qrels = metrics::parse_qrels(&read_text(qrels)?)?;
        println!("metric\tvalue\tqueries");
        for row in metrics::evaluate_run(&run, &qrels)? {
            println!("{}\t{:.6}\t{}", row.metric, row.value, row.queries);
        }
        return Ok(());
    }

    let engine = cli.build_engine()?;
    match &cli.command {
        Command::IngestJobs { file } => {
            let jobs = parse_jobs(&read_text(file)?)?;
            if jobs.is_empty() {
                bail!("{} holds no job records", file.display());
            }
            for id in engine.ingest_jobs(jobs)? {
                println!("{id}");
            }
        }
        Command::IngestResume {
            applicant_id,
            file,
            name,
            email,
        } => {
            let text = read_text(file)?;
            if name.is_some() || email.is_some() {
                engine.store().update_applicant(applicant_id, |a| {
                    if let Some(n) = name {
                        a.name = n.clone();
                    }
                    if let Some(e) = email {
                        a.email = e.clone();
                    }
                })?;
            }
            let profile = engine.ingest_resume(applicant_id, &text)?;
            println!("{}", serde_json::to_string_pretty(&profile.resume_profile)?);
        }
        Command::Apply {
            applicant_id,
            job_id,
        } => match engine.apply(applicant_id, job_id) {
            Ok(rec) => println!("{}", serde_json::to_string(&rec)?),
            Err(EngineError::Store(e @ StoreError::DuplicateApplication { .. })) => {
                eprintln!("warning: {e}; nothing changed");
            }
            Err(e) => return Err(e.into()),
        },
        Command::RankApplicants { job_id } => {
            let ranking = engine.rank_job_applicants(job_id)?;
            warn_all(&ranking.diagnostics);
            print!("{}", format_ranking(&ranking));
        }
        Command::Recommend { applicant_id } => {
            let ranking = engine.recommend(applicant_id)?;
            warn_all(&ranking.diagnostics);
            print!("{}", format_ranking(&ranking));
        }
        Command::Job2skill { job_id } => {
            for s in engine.job2skill(job_id)? {
                println!("{}\t{:.6}\t{:.6}\t{}", s.skill, s.score, s.ratio, s.matched);
            }
        }
        Command::Wordcloud { job_id } => {
            for e in engine.word_cloud(job_id)?.entries {
                println!("{}\t{}", e.token, e.count);
            }
        }
        Command::Tfidf { doc } => {
            let snap = engine.store().snapshot();
            for t in engine.job_terms(&snap, doc)? {
                println!("{}\t{:.6}", t.term, t.score);
            }
        }
        Command::Encode { target, id } => {
            let enc = match target {
                EncodeTarget::Job => engine.encode_job(id)?,
                EncodeTarget::Resume => engine.encode_resume(id)?,
            };
            println!("{}", serde_json::to_string(&enc)?);
        }
        Command::Serve { port, host } => {
            let addr: SocketAddr = format!("{host}:{port}")
                .parse()
                .with_context(|| format!("bad listen address {host}:{port}"))?;
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(async move {
                let (bound, serve) = server::bind(Arc::new(engine), addr).await?;
                eprintln!("listening on http://{bound}");
                tokio::select! {
                    r = serve => r?,
                    _ = tokio::signal::ctrl_c() => {}
                }
                anyhow::Ok(())
            })?;
        }
        Command::Eval { .. } => unreachable!("handled above"),
    }
    Ok(())
}
