//! JSON HTTP API over [`Service`]. Object positions in requests and
//! responses are one-based.

use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::aggregation::DEFAULT_LEVEL;
use crate::judgment::{Ratio, Relation};
use crate::scale::ComparisonScale;
use crate::service::{Service, ServiceError};
use crate::session::{ConflictReport, NextPair, Outcome, SessionError};
use crate::transitivity::Triad;
use crate::weights::WeightMethod;

/// Error body: `{"error": message}` with a status derived from the cause.
#[derive(Debug)]
pub struct ApiError {
    pub status: StatusCode,
    pub message: String,
}

impl ApiError {
    fn bad_request(message: impl Into<String>) -> Self {
        ApiError { status: StatusCode::BAD_REQUEST, message: message.into() }
    }
}

impl From<ServiceError> for ApiError {
    fn from(e: ServiceError) -> Self {
        let status = match &e {
            ServiceError::StudyNotFound(_) | ServiceError::SessionNotFound(_) => StatusCode::NOT_FOUND,
            ServiceError::NoCompletedSessions => StatusCode::CONFLICT,
            ServiceError::Session(SessionError::WrongState(_) | SessionError::SessionIncomplete) => StatusCode::CONFLICT,
            ServiceError::Session(SessionError::ValueNotInScale(_) | SessionError::IllegalRevisionTarget(_)) => {
                StatusCode::UNPROCESSABLE_ENTITY
            }
            ServiceError::Io(_) | ServiceError::Session(SessionError::CorruptLog(_)) => StatusCode::INTERNAL_SERVER_ERROR,
            _ => StatusCode::BAD_REQUEST,
        };
        ApiError { status, message: e.to_string() }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": self.message }))).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

// Body parsing is done by hand so malformed input maps to 400 rather than
// the 422 reserved for off-scale values and illegal revision targets.
fn parse<T: DeserializeOwned>(body: &Bytes) -> ApiResult<T> {
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request(format!("invalid request body: {e}")))
}

#[derive(Deserialize)]
struct CreateStudy {
    labels: Vec<String>,
    #[serde(default)]
    scale: Option<Value>,
}

/// Accepts the object form (`{"kind": "three_point", "F": 3, "G": 9}`) or the
/// command-line form (`"three:3,9"`, `"saaty9"`).
fn parse_scale(v: Option<Value>) -> ApiResult<ComparisonScale> {
    let bad = |e: String| ApiError::from(ServiceError::BadScale(e));
    match v {
        None | Some(Value::Null) => Ok(ComparisonScale::default()),
        Some(Value::String(s)) => s.parse().map_err(|e: crate::Error| bad(e.to_string())),
        Some(v) => serde_json::from_value(v).map_err(|e| bad(e.to_string())),
    }
}

#[derive(Deserialize)]
struct CreateSession {
    expert: String,
}

#[derive(Deserialize)]
struct Revision {
    i: usize,
    j: usize,
    #[serde(flatten)]
    value: Ratio,
}

#[derive(Deserialize)]
struct AggregateQuery {
    level: Option<f64>,
    method: Option<String>,
}

#[derive(Serialize)]
struct TriadBody {
    m: usize,
    i: usize,
    j: usize,
    r_mj: Relation,
    r_ij: Relation,
    r_mi: Relation,
    required: Option<Relation>,
    text: String,
}

impl From<&Triad> for TriadBody {
    fn from(t: &Triad) -> Self {
        TriadBody {
            m: t.m + 1,
            i: t.i + 1,
            j: t.j + 1,
            r_mj: t.r_mj,
            r_ij: t.r_ij,
            r_mi: t.r_mi,
            required: t.verdict().required,
            text: t.to_string(),
        }
    }
}

fn conflict_body(c: &ConflictReport) -> Value {
    let triads: Vec<TriadBody> = c.triads.iter().map(TriadBody::from).collect();
    let candidates: Vec<[usize; 2]> = c.candidates.0.iter().map(|&(i, j)| [i + 1, j + 1]).collect();
    json!({
        "status": "conflict",
        "pair": [c.pair.0 + 1, c.pair.1 + 1],
        "pending": c.pending,
        "triads": triads,
        "candidates": candidates,
        "admissible": c.admissible,
        "consecutive_rejections": c.consecutive_rejections,
        "needs_attention": c.consecutive_rejections > crate::session::REJECTION_ALERT,
    })
}

fn outcome_body(o: Outcome) -> Value {
    match o {
        Outcome::Accepted { complete } => json!({ "status": "accepted", "complete": complete }),
        Outcome::Conflict(c) => conflict_body(&c),
    }
}

async fn create_study(State(svc): State<Arc<Service>>, body: Bytes) -> ApiResult<(StatusCode, Json<Value>)> {
    let req: CreateStudy = parse(&body)?;
    let scale = parse_scale(req.scale)?;
    let study = svc.create_study(req.labels, scale)?;
    Ok((StatusCode::CREATED, Json(json!({ "study_id": study.id }))))
}

async fn get_study(State(svc): State<Arc<Service>>, Path(id): Path<String>) -> ApiResult<Json<Value>> {
    let s = svc.study(&id)?;
    Ok(Json(json!({ "study_id": s.id, "labels": s.labels, "scale": s.scale, "sessions": s.sessions })))
}

async fn create_session(
    State(svc): State<Arc<Service>>,
    Path(id): Path<String>,
    body: Bytes,
) -> ApiResult<(StatusCode, Json<Value>)> {
    let req: CreateSession = parse(&body)?;
    let sid = svc.create_session(&id, &req.expert)?;
    Ok((StatusCode::CREATED, Json(json!({ "session_id": sid }))))
}

async fn next(State(svc): State<Arc<Service>>, Path(sid): Path<String>) -> ApiResult<Json<Value>> {
    Ok(Json(match svc.next_pair(&sid)? {
        NextPair::Done => json!({ "done": true }),
        NextPair::Pair(p) => json!({
            "i": p.i + 1,
            "j": p.j + 1,
            "label_i": p.label_i,
            "label_j": p.label_j,
            "choices": p.choices,
            "committed": p.committed,
            "total": p.total,
        }),
    }))
}

async fn judgment(State(svc): State<Arc<Service>>, Path(sid): Path<String>, body: Bytes) -> ApiResult<Json<Value>> {
    let v: Ratio = parse(&body)?;
    Ok(Json(outcome_body(svc.submit_judgment(&sid, v)?)))
}

async fn revision(State(svc): State<Arc<Service>>, Path(sid): Path<String>, body: Bytes) -> ApiResult<Json<Value>> {
    let req: Revision = parse(&body)?;
    let pair = match (req.i.checked_sub(1), req.j.checked_sub(1)) {
        (Some(i), Some(j)) => (i, j),
        _ => return Err(ApiError::bad_request("positions are one-based")),
    };
    Ok(Json(outcome_body(svc.submit_revision(&sid, pair, req.value)?)))
}

async fn results(State(svc): State<Arc<Service>>, Path(sid): Path<String>) -> ApiResult<Json<Value>> {
    let r = svc.session_results(&sid)?;
    Ok(Json(serde_json::to_value(r).expect("report serializes")))
}

async fn session_state(State(svc): State<Arc<Service>>, Path(sid): Path<String>) -> ApiResult<Json<Value>> {
    let s = svc.snapshot(&sid)?;
    Ok(Json(json!({
        "session_id": s.id(),
        "study_id": s.study_id(),
        "expert": s.expert(),
        "state": s.state(),
        "committed": s.cursor(),
        "total": s.total_pairs(),
        "pending": s.pending().map(conflict_body),
        "needs_attention": s.needs_attention(),
    })))
}

async fn study_aggregate(
    State(svc): State<Arc<Service>>,
    Path(id): Path<String>,
    Query(q): Query<AggregateQuery>,
) -> ApiResult<Json<Value>> {
    let method: WeightMethod = match q.method {
        Some(m) => m.parse().map_err(|e: crate::Error| ApiError::bad_request(e.to_string()))?,
        None => WeightMethod::Approx,
    };
    let agg = svc.study_aggregate(&id, q.level.unwrap_or(DEFAULT_LEVEL), method)?;
    Ok(Json(json!({
        "k": agg.k,
        "mean_w": agg.mean_w,
        "half_width": agg.half_width,
        "level": agg.level,
        "per_expert_cr": agg.per_expert_cr,
    })))
}

/// The API routes bound to `service`.
pub fn router(service: Arc<Service>) -> Router {
    Router::new()
        .route("/studies", post(create_study))
        .route("/studies/{id}", get(get_study))
        .route("/studies/{id}/sessions", post(create_session))
        .route("/studies/{id}/aggregate", get(study_aggregate))
        .route("/sessions/{sid}", get(session_state))
        .route("/sessions/{sid}/next", get(next))
        .route("/sessions/{sid}/judgments", post(judgment))
        .route("/sessions/{sid}/revisions", post(revision))
        .route("/sessions/{sid}/results", get(results))
        .with_state(service)
}

/// Serves the API on `addr` until Ctrl-C.
pub async fn serve(service: Arc<Service>, addr: std::net::SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(service))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
