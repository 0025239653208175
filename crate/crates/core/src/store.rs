//! File-backed store for jobs, applicants and applications.
//!
//! Each collection lives in one JSON-lines file (`job.jsonl`, `user.jsonl`,
//! `application.jsonl`). A mutation builds a new in-memory [`Snapshot`],
//! rewrites the affected files through a temp file + rename, and only then
//! publishes the snapshot. Readers hold an `Arc<Snapshot>` and never see a
//! half-applied change.

use std::collections::{BTreeMap, HashSet};
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use chrono::NaiveDate;
use indexmap::IndexMap;
use parking_lot::{Mutex, RwLock};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::extract::ResumeProfile;

pub const JOB_FILE: &str = "job.jsonl";
pub const USER_FILE: &str = "user.jsonl";
pub const APPLICATION_FILE: &str = "application.jsonl";

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("invalid {field}: {reason}")]
    InvalidField { field: &'static str, reason: String },
    #[error("{kind} {id:?} not found")]
    NotFound { kind: &'static str, id: String },
    #[error("applicant {applicant_id:?} already applied to job {job_id:?}")]
    DuplicateApplication { job_id: String, applicant_id: String },
    #[error("{file} line {line}: {message}")]
    Corrupt {
        file: String,
        line: usize,
        message: String,
    },
    #[error("storage i/o on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl StoreError {
    fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Self::InvalidField {
            field,
            reason: reason.into(),
        }
    }

    fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

pub type Result<T, E = StoreError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JobType {
    #[default]
    FullTime,
    PartTime,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JobPosting {
    #[serde(default)]
    pub job_id: String,
    #[serde(default)]
    pub title: String,
    #[serde(default)]
    pub company: String,
    #[serde(default)]
    pub location: String,
    #[serde(default)]
    pub job_type: JobType,
    pub description: String,
    #[serde(default)]
    pub salary: String,
    pub deadline: NaiveDate,
    #[serde(default)]
    pub skills: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ApplicantProfile {
    pub applicant_id: String,
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub email: String,
    #[serde(default)]
    pub resume_text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resume_profile: Option<ResumeProfile>,
    #[serde(default)]
    pub apply_list: Vec<String>,
    #[serde(default)]
    pub saved_list: Vec<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ApplicationStatus {
    #[default]
    Applied,
    Interview,
    Offer,
    Rejected,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ApplicationRecord {
    pub job_id: String,
    #[serde(default)]
    pub applicant_ids: Vec<String>,
    #[serde(default)]
    pub status: BTreeMap<String, ApplicationStatus>,
}

/// Ids travel inside URL path segments and comma lists.
pub fn validate_id(field: &'static str, id: &str) -> Result<()> {
    if id.trim().is_empty() {
        return Err(StoreError::invalid(field, "must not be empty"));
    }
    if let Some(c) = id.chars().find(|c| matches!(c, ',' | '/') || c.is_control()) {
        return Err(StoreError::invalid(
            field,
            format!("{id:?} contains forbidden character {c:?}"),
        ));
    }
    Ok(())
}

fn check_unique(field: &'static str, ids: &[String]) -> Result<()> {
    let mut seen = HashSet::new();
    for id in ids {
        if !seen.insert(id) {
            return Err(StoreError::invalid(field, format!("duplicate entry {id:?}")));
        }
    }
    Ok(())
}

impl JobPosting {
    pub fn validate(&self) -> Result<()> {
        validate_id("job_id", &self.job_id)?;
        if self.description.trim().is_empty() {
            return Err(StoreError::invalid("description", "must not be empty"));
        }
        Ok(())
    }
}

impl ApplicantProfile {
    pub fn new(applicant_id: impl Into<String>) -> Self {
        Self {
            applicant_id: applicant_id.into(),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        validate_id("applicant_id", &self.applicant_id)?;
        check_unique("apply_list", &self.apply_list)?;
        check_unique("saved_list", &self.saved_list)?;
        if let Some(y) = self.resume_profile.as_ref().and_then(|p| p.years_experience) {
            if !(y >= 0.0 && y.is_finite()) {
                return Err(StoreError::invalid("years_experience", format!("{y}")));
            }
        }
        Ok(())
    }
}

impl ApplicationRecord {
    fn validate(&self) -> Result<()> {
        validate_id("job_id", &self.job_id)?;
        check_unique("applicant_ids", &self.applicant_ids)?;
        Ok(())
    }
}

/// A reference from one record to an id that no longer resolves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DanglingRef {
    pub owner: String,
    pub field: &'static str,
    pub missing: String,
}

/// Applicants of one job; ids that no longer resolve are split out.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ApplicantList {
    pub ids: Vec<String>,
    pub dangling: Vec<String>,
}

/// Immutable view of the whole store.
#[derive(Debug, Clone, Default)]
pub struct Snapshot {
    jobs: IndexMap<String, JobPosting>,
    applicants: IndexMap<String, ApplicantProfile>,
    applications: IndexMap<String, ApplicationRecord>,
    jobs_generation: u64,
}

impl Snapshot {
    pub fn get_job(&self, job_id: &str) -> Result<&JobPosting> {
        self.jobs.get(job_id).ok_or_else(|| StoreError::NotFound {
            kind: "job",
            id: job_id.to_string(),
        })
    }

    pub fn get_applicant(&self, applicant_id: &str) -> Result<&ApplicantProfile> {
        self.applicants
            .get(applicant_id)
            .ok_or_else(|| StoreError::NotFound {
                kind: "applicant",
                id: applicant_id.to_string(),
            })
    }

    pub fn application(&self, job_id: &str) -> Option<&ApplicationRecord> {
        self.applications.get(job_id)
    }

    pub fn jobs(&self) -> impl Iterator<Item = &JobPosting> {
        self.jobs.values()
    }

    pub fn applicants(&self) -> impl Iterator<Item = &ApplicantProfile> {
        self.applicants.values()
    }

    pub fn applications(&self) -> impl Iterator<Item = &ApplicationRecord> {
        self.applications.values()
    }

    pub fn job_count(&self) -> usize {
        self.jobs.len()
    }

    pub fn applicant_count(&self) -> usize {
        self.applicants.len()
    }

    /// Bumped whenever any job is added, replaced or removed.
    pub fn jobs_generation(&self) -> u64 {
        self.jobs_generation
    }

    /// Applicants of `job_id` in application order.
    pub fn list_applicants_for_job(&self, job_id: &str) -> Result<ApplicantList> {
        self.get_job(job_id)?;
        let mut list = ApplicantList::default();
        if let Some(rec) = self.applications.get(job_id) {
            for id in &rec.applicant_ids {
                if self.applicants.contains_key(id) {
                    list.ids.push(id.clone());
                } else {
                    list.dangling.push(id.clone());
                }
            }
        }
        Ok(list)
    }

    /// Every reference that does not resolve.
    pub fn dangling(&self) -> Vec<DanglingRef> {
        let mut out = Vec::new();
        for a in self.applicants.values() {
            for (field, list) in [("apply_list", &a.apply_list), ("saved_list", &a.saved_list)] {
                for id in list.iter().filter(|id| !self.jobs.contains_key(*id)) {
                    out.push(DanglingRef {
                        owner: a.applicant_id.clone(),
                        field,
                        missing: id.clone(),
                    });
                }
            }
        }
        for rec in self.applications.values() {
            if !self.jobs.contains_key(&rec.job_id) {
                out.push(DanglingRef {
                    owner: rec.job_id.clone(),
                    field: "job_id",
                    missing: rec.job_id.clone(),
                });
            }
            for id in rec
                .applicant_ids
                .iter()
                .filter(|id| !self.applicants.contains_key(*id))
            {
                out.push(DanglingRef {
                    owner: rec.job_id.clone(),
                    field: "applicant_ids",
                    missing: id.clone(),
                });
            }
        }
        out
    }

    /// Smallest `{prefix}{n}` not yet used as a job or applicant id, with `n`
    /// above every numeric suffix already present.
    pub fn next_id(&self, prefix: &str) -> String {
        let max = self
            .jobs
            .keys()
            .chain(self.applicants.keys())
            .filter_map(|id| id.strip_prefix(prefix)?.parse::<u64>().ok())
            .max()
            .unwrap_or(0);
        format!("{prefix}{}", max + 1)
    }
}

/// Where an injected write failure strikes. Test-only hook.
#[doc(hidden)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaultPoint {
    /// Temp files written and synced, nothing renamed.
    BeforeRename,
    /// First collection file renamed, the rest still pending.
    AfterFirstRename,
}

#[derive(Debug, Clone, Copy, Default)]
struct Dirty {
    jobs: bool,
    users: bool,
    applications: bool,
}

/// Single-writer, multi-reader store.
#[derive(Debug)]
pub struct Store {
    dir: Option<PathBuf>,
    current: RwLock<Arc<Snapshot>>,
    writer: Mutex<()>,
    fault: Mutex<Option<FaultPoint>>,
}

impl Store {
    /// Opens (creating if needed) the store under `dir`.
    pub fn open(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir).map_err(|e| StoreError::io(&dir, e))?;
        let mut snap = Snapshot {
            jobs: index_by(read_jsonl::<JobPosting>(&dir.join(JOB_FILE))?, JOB_FILE, |j| {
                j.validate()?;
                Ok(j.job_id.clone())
            })?,
            applicants: index_by(
                read_jsonl::<ApplicantProfile>(&dir.join(USER_FILE))?,
                USER_FILE,
                |a| {
                    a.validate()?;
                    Ok(a.applicant_id.clone())
                },
            )?,
            applications: index_by(
                read_jsonl::<ApplicationRecord>(&dir.join(APPLICATION_FILE))?,
                APPLICATION_FILE,
                |r| {
                    r.validate()?;
                    Ok(r.job_id.clone())
                },
            )?,
            jobs_generation: 0,
        };
        reconcile_apply_lists(&mut snap);
        Ok(Self {
            dir: Some(dir),
            current: RwLock::new(Arc::new(snap)),
            writer: Mutex::new(()),
            fault: Mutex::new(None),
        })
    }

    /// A store that never touches disk.
    pub fn in_memory() -> Self {
        Self {
            dir: None,
            current: RwLock::new(Arc::new(Snapshot::default())),
            writer: Mutex::new(()),
            fault: Mutex::new(None),
        }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn snapshot(&self) -> Arc<Snapshot> {
        self.current.read().clone()
    }

    #[doc(hidden)]
    pub fn inject_fault(&self, point: FaultPoint) {
        *self.fault.lock() = Some(point);
    }

    pub fn get_job(&self, job_id: &str) -> Result<JobPosting> {
        self.snapshot().get_job(job_id).cloned()
    }

    pub fn get_applicant(&self, applicant_id: &str) -> Result<ApplicantProfile> {
        self.snapshot().get_applicant(applicant_id).cloned()
    }

    pub fn list_applicants_for_job(&self, job_id: &str) -> Result<ApplicantList> {
        self.snapshot().list_applicants_for_job(job_id)
    }

    /// Inserts or fully replaces a job.
    pub fn upsert_job(&self, job: JobPosting) -> Result<String> {
        job.validate()?;
        let id = job.job_id.clone();
        self.mutate(|s, d| {
            s.jobs.insert(id.clone(), job);
            s.jobs_generation += 1;
            d.jobs = true;
            Ok(())
        })?;
        Ok(id)
    }

    /// Inserts many jobs in one write.
    pub fn upsert_jobs(&self, jobs: Vec<JobPosting>) -> Result<Vec<String>> {
        for j in &jobs {
            j.validate()?;
        }
        let ids = jobs.iter().map(|j| j.job_id.clone()).collect();
        self.mutate(|s, d| {
            for j in jobs {
                s.jobs.insert(j.job_id.clone(), j);
            }
            s.jobs_generation += 1;
            d.jobs = true;
            Ok(())
        })?;
        Ok(ids)
    }

    /// Removes a job and its application record. Applicant lists that still
    /// name it become dangling.
    pub fn delete_job(&self, job_id: &str) -> Result<()> {
        self.mutate(|s, d| {
            s.get_job(job_id)?;
            s.jobs.shift_remove(job_id);
            s.jobs_generation += 1;
            d.jobs = true;
            if s.applications.shift_remove(job_id).is_some() {
                d.applications = true;
            }
            Ok(())
        })
    }

    pub fn upsert_applicant(&self, profile: ApplicantProfile) -> Result<String> {
        profile.validate()?;
        let id = profile.applicant_id.clone();
        self.mutate(|s, d| {
            s.applicants.insert(id.clone(), profile);
            d.users = true;
            Ok(())
        })?;
        Ok(id)
    }

    /// Updates an applicant in place, creating it first if absent.
    pub fn update_applicant<F>(&self, applicant_id: &str, f: F) -> Result<ApplicantProfile>
    where
        F: FnOnce(&mut ApplicantProfile),
    {
        validate_id("applicant_id", applicant_id)?;
        let mut out = None;
        self.mutate(|s, d| {
            let mut p = s
                .applicants
                .get(applicant_id)
                .cloned()
                .unwrap_or_else(|| ApplicantProfile::new(applicant_id));
            f(&mut p);
            p.applicant_id = applicant_id.to_string();
            p.validate()?;
            s.applicants.insert(applicant_id.to_string(), p.clone());
            d.users = true;
            out = Some(p);
            Ok(())
        })?;
        Ok(out.expect("mutation ran"))
    }

    /// Removes an applicant. Application records keep the id, which is then
    /// reported as dangling.
    pub fn delete_applicant(&self, applicant_id: &str) -> Result<()> {
        self.mutate(|s, d| {
            s.get_applicant(applicant_id)?;
            s.applicants.shift_remove(applicant_id);
            d.users = true;
            Ok(())
        })
    }

    /// Adds `applicant_id` to the job's record with status `applied`.
    ///
    /// Applying twice leaves the state untouched and returns
    /// [`StoreError::DuplicateApplication`].
    pub fn record_application(&self, job_id: &str, applicant_id: &str) -> Result<ApplicationRecord> {
        let mut out = None;
        self.mutate(|s, d| {
            s.get_job(job_id)?;
            s.get_applicant(applicant_id)?;
            let rec = s
                .applications
                .entry(job_id.to_string())
                .or_insert_with(|| ApplicationRecord {
                    job_id: job_id.to_string(),
                    ..Default::default()
                });
            if rec.applicant_ids.iter().any(|a| a == applicant_id) {
                return Err(StoreError::DuplicateApplication {
                    job_id: job_id.to_string(),
                    applicant_id: applicant_id.to_string(),
                });
            }
            rec.applicant_ids.push(applicant_id.to_string());
            rec.status
                .insert(applicant_id.to_string(), ApplicationStatus::Applied);
            out = Some(rec.clone());
            let user = s.applicants.get_mut(applicant_id).expect("checked above");
            if !user.apply_list.iter().any(|j| j == job_id) {
                user.apply_list.push(job_id.to_string());
            }
            d.applications = true;
            d.users = true;
            Ok(())
        })?;
        Ok(out.expect("mutation ran"))
    }

    pub fn set_status(
        &self,
        job_id: &str,
        applicant_id: &str,
        status: ApplicationStatus,
    ) -> Result<()> {
        self.mutate(|s, d| {
            let rec = s
                .applications
                .get_mut(job_id)
                .filter(|r| r.applicant_ids.iter().any(|a| a == applicant_id))
                .ok_or_else(|| StoreError::NotFound {
                    kind: "application",
                    id: format!("{job_id}/{applicant_id}"),
                })?;
            rec.status.insert(applicant_id.to_string(), status);
            d.applications = true;
            Ok(())
        })
    }

    fn mutate<F>(&self, f: F) -> Result<()>
    where
        F: FnOnce(&mut Snapshot, &mut Dirty) -> Result<()>,
    {
        let _guard = self.writer.lock();
        let mut next = Snapshot::clone(&self.snapshot());
        let mut dirty = Dirty::default();
        f(&mut next, &mut dirty)?;
        if let Some(dir) = &self.dir {
            let fault = self.fault.lock().take();
            persist(dir, &next, dirty, fault)?;
        }
        *self.current.write() = Arc::new(next);
        Ok(())
    }
}

fn index_by<T, F>(records: Vec<(usize, T)>, file: &str, key: F) -> Result<IndexMap<String, T>>
where
    F: Fn(&T) -> Result<String>,
{
    let mut map = IndexMap::with_capacity(records.len());
    for (line, rec) in records {
        let corrupt = |message: String| StoreError::Corrupt {
            file: file.to_string(),
            line,
            message,
        };
        let id = key(&rec).map_err(|e| corrupt(e.to_string()))?;
        if map.insert(id.clone(), rec).is_some() {
            return Err(corrupt(format!("duplicate id {id:?}")));
        }
    }
    Ok(map)
}

/// Application records are authoritative for apply lists; a crash between
/// the two file renames leaves the user file one step behind.
fn reconcile_apply_lists(snap: &mut Snapshot) {
    for rec in snap.applications.values() {
        for id in &rec.applicant_ids {
            if let Some(user) = snap.applicants.get_mut(id) {
                if !user.apply_list.contains(&rec.job_id) {
                    user.apply_list.push(rec.job_id.clone());
                }
            }
        }
    }
}

fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<(usize, T)>> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(StoreError::io(path, e)),
    };
    let file = path
        .file_name()
        .map(|f| f.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let rec = serde_json::from_str(line).map_err(|e| StoreError::Corrupt {
            file: file.clone(),
            line: idx + 1,
            message: e.to_string(),
        })?;
        out.push((idx + 1, rec));
    }
    Ok(out)
}

fn write_temp<'a, T, I>(dir: &Path, name: &str, records: I) -> Result<PathBuf>
where
    T: Serialize + 'a,
    I: IntoIterator<Item = &'a T>,
{
    let tmp = dir.join(format!("{name}.tmp"));
    let file = File::create(&tmp).map_err(|e| StoreError::io(&tmp, e))?;
    let mut w = BufWriter::new(file);
    for rec in records {
        serde_json::to_writer(&mut w, rec).map_err(|e| StoreError::io(&tmp, e.into()))?;
        w.write_all(b"\n").map_err(|e| StoreError::io(&tmp, e))?;
    }
    let file = w
        .into_inner()
        .map_err(|e| StoreError::io(&tmp, e.into_error()))?;
    file.sync_all().map_err(|e| StoreError::io(&tmp, e))?;
    Ok(tmp)
}

fn persist(dir: &Path, snap: &Snapshot, dirty: Dirty, fault: Option<FaultPoint>) -> Result<()> {
    // applications first: on reload they repair apply lists
    let mut pending = Vec::new();
    if dirty.applications {
        pending.push((
            write_temp(dir, APPLICATION_FILE, snap.applications.values())?,
            APPLICATION_FILE,
        ));
    }
    if dirty.users {
        pending.push((write_temp(dir, USER_FILE, snap.applicants.values())?, USER_FILE));
    }
    if dirty.jobs {
        pending.push((write_temp(dir, JOB_FILE, snap.jobs.values())?, JOB_FILE));
    }
    let injected = |what: &str| StoreError::Io {
        path: dir.display().to_string(),
        source: std::io::Error::other(format!("injected fault {what}")),
    };
    if fault == Some(FaultPoint::BeforeRename) {
        return Err(injected("before rename"));
    }
    for (i, (tmp, name)) in pending.iter().enumerate() {
        let dest = dir.join(name);
        fs::rename(tmp, &dest).map_err(|e| StoreError::io(&dest, e))?;
        if i == 0 && fault == Some(FaultPoint::AfterFirstRename) {
            return Err(injected("after first rename"));
        }
    }
    // make the renames durable; not every platform can open a directory
    if let Ok(d) = File::open(dir) {
        let _ = d.sync_all();
    }
    Ok(())
}
