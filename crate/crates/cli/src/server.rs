//! HTTP service. The four GET endpoints keep their original path casing:
//! `/JobMatchCV/{job}/{applicants}`, `/CVMATCHJOB/{applicant}/{jobs}`,
//! `/WordCloud/{job}`, `/Job2Skill/{job}`. Id lists are comma-separated.

use std::net::SocketAddr;
use std::sync::Arc;

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use indexmap::IndexMap;
use jobham_core::engine::{EngineError, Ranking};
use jobham_core::stats::TokenCount;
use jobham_core::store::StoreError;
use jobham_core::{Engine, JobPosting, ScoredSkill};
use serde::{Deserialize, Serialize};
use tokio::net::TcpListener;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
}

/// Envelope for every response body.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ApiResponse<T> {
    pub status: Status,
    pub payload: Option<T>,
    #[serde(default)]
    pub diagnostics: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorBody>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchEntry {
    pub rank: usize,
    pub score: f64,
    pub ratio: f64,
    pub match_list: Vec<String>,
}

/// Ranked id → entry, in rank order.
pub type MatchPayload = IndexMap<String, MatchEntry>;

pub fn match_payload(ranking: &Ranking) -> MatchPayload {
    ranking
        .result
        .entries
        .iter()
        .enumerate()
        .map(|(i, e)| {
            (
                e.entity_id.clone(),
                MatchEntry {
                    rank: i + 1,
                    score: e.score,
                    ratio: e.ratio,
                    match_list: e.match_list.clone(),
                },
            )
        })
        .collect()
}

pub struct ApiError {
    status: StatusCode,
    code: &'static str,
    message: String,
}

impl ApiError {
    fn bad_request(message: impl Into<String>) -> Self {
        Self {
            status: StatusCode::BAD_REQUEST,
            code: "bad_request",
            message: message.into(),
        }
    }
}

impl From<EngineError> for ApiError {
    fn from(e: EngineError) -> Self {
        let (status, code) = match &e {
            EngineError::Store(StoreError::NotFound { .. }) => (StatusCode::NOT_FOUND, "not_found"),
            EngineError::Store(StoreError::InvalidField { .. }) | EngineError::BadRequest(_) => {
                (StatusCode::BAD_REQUEST, "bad_request")
            }
            EngineError::Store(StoreError::DuplicateApplication { .. }) => {
                (StatusCode::CONFLICT, "duplicate_application")
            }
            _ => (StatusCode::INTERNAL_SERVER_ERROR, "internal"),
        };
        Self {
            status,
            code,
            message: e.to_string(),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body: ApiResponse<()> = ApiResponse {
            status: Status::Error,
            payload: None,
            diagnostics: Vec::new(),
            error: Some(ErrorBody {
                code: self.code.to_string(),
                message: self.message,
            }),
        };
        (self.status, Json(body)).into_response()
    }
}

type ApiResult<T> = Result<Json<ApiResponse<T>>, ApiError>;

fn ok<T>(payload: T, diagnostics: Vec<String>) -> ApiResult<T> {
    Ok(Json(ApiResponse {
        status: Status::Ok,
        payload: Some(payload),
        diagnostics,
        error: None,
    }))
}

/// Splits a comma-separated id segment; empty lists and empty items are rejected.
pub fn parse_id_list(segment: &str) -> Result<Vec<String>, String> {
    let ids: Vec<String> = segment.split(',').map(|s| s.trim().to_string()).collect();
    if ids.iter().any(String::is_empty) {
        return Err(format!("malformed id list {segment:?}"));
    }
    Ok(ids)
}

type Shared = State<Arc<Engine>>;

async fn job_match_cv(
    State(engine): Shared,
    Path((job_id, applicants)): Path<(String, String)>,
) -> ApiResult<MatchPayload> {
    let ids = parse_id_list(&applicants).map_err(ApiError::bad_request)?;
    let ranking = engine.job_match_cv(&job_id, &ids)?;
    ok(match_payload(&ranking), ranking.diagnostics)
}

async fn cv_match_job(
    State(engine): Shared,
    Path((applicant_id, jobs)): Path<(String, String)>,
) -> ApiResult<MatchPayload> {
    let ids = parse_id_list(&jobs).map_err(ApiError::bad_request)?;
    let ranking = engine.cv_match_job(&applicant_id, &ids)?;
    ok(match_payload(&ranking), ranking.diagnostics)
}

async fn missing_id_list() -> ApiError {
    ApiError::bad_request("id list segment is empty")
}

async fn word_cloud(State(engine): Shared, Path(job_id): Path<String>) -> ApiResult<Vec<TokenCount>> {
    ok(engine.word_cloud(&job_id)?.entries, Vec::new())
}

async fn job2skill(State(engine): Shared, Path(job_id): Path<String>) -> ApiResult<Vec<ScoredSkill>> {
    ok(engine.job2skill(&job_id)?, Vec::new())
}

async fn put_job(
    State(engine): Shared,
    Path(job_id): Path<String>,
    Json(mut job): Json<JobPosting>,
) -> ApiResult<String> {
    if !job.job_id.is_empty() && job.job_id != job_id {
        return Err(ApiError::bad_request(format!(
            "body job_id {:?} does not match path {job_id:?}",
            job.job_id
        )));
    }
    job.job_id = job_id;
    ok(engine.ingest_job(job)?, Vec::new())
}

async fn put_resume(
    State(engine): Shared,
    Path(applicant_id): Path<String>,
    body: String,
) -> ApiResult<jobham_core::ResumeProfile> {
    let profile = engine.ingest_resume(&applicant_id, &body)?;
    ok(profile.resume_profile.unwrap_or_default(), Vec::new())
}

async fn post_apply(
    State(engine): Shared,
    Path((applicant_id, job_id)): Path<(String, String)>,
) -> ApiResult<jobham_core::ApplicationRecord> {
    ok(engine.apply(&applicant_id, &job_id)?, Vec::new())
}

async fn health() -> ApiResult<&'static str> {
    ok("ok", Vec::new())
}

async fn not_found() -> ApiError {
    ApiError {
        status: StatusCode::NOT_FOUND,
        code: "not_found",
        message: "no such endpoint".into(),
    }
}

pub fn router(engine: Arc<Engine>) -> Router {
    Router::new()
        .route("/JobMatchCV/{job_id}/{applicant_ids}", get(job_match_cv))
        .route("/JobMatchCV/{job_id}", get(missing_id_list))
        .route("/JobMatchCV/{job_id}/", get(missing_id_list))
        .route("/CVMATCHJOB/{applicant_id}/{job_ids}", get(cv_match_job))
        .route("/CVMATCHJOB/{applicant_id}", get(missing_id_list))
        .route("/CVMATCHJOB/{applicant_id}/", get(missing_id_list))
        .route("/WordCloud/{job_id}", get(word_cloud))
        .route("/Job2Skill/{job_id}", get(job2skill))
        .route("/jobs/{job_id}", put(put_job))
        .route("/applicants/{applicant_id}/resume", put(put_resume))
        .route("/apply/{applicant_id}/{job_id}", post(post_apply))
        .route("/health", get(health))
        .fallback(not_found)
        .with_state(engine)
}

/// Binds `addr` and returns the bound address with the serving future.
pub async fn bind(
    engine: Arc<Engine>,
    addr: SocketAddr,
) -> std::io::Result<(SocketAddr, impl std::future::Future<Output = std::io::Result<()>>)> {
    let listener = TcpListener::bind(addr).await?;
    let local = listener.local_addr()?;
    let app = router(engine);
    Ok((local, async move { axum::serve(listener, app).await }))
}
