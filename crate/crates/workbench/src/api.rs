//! JSON API over a shared session.
//!
//! Reads wait for the session; mutations never queue behind a running stage
//! and get `409 busy` instead. Errors are `{"error": message, "code": code}`.

use std::collections::BTreeMap;
use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use bothunt_core::corpus::{Tweet, UserAccount};
use bothunt_core::Scoreboard;
use serde::{Deserialize, Serialize};
use tokio::sync::RwLock;

use crate::error::WorkbenchError;
use crate::labels::{Label, LabelRecord, Provenance};
use crate::session::{Explanation, Session, Stage, StageReport, StageStatus};

pub type SharedSession = Arc<RwLock<Session>>;

pub struct ApiError(pub WorkbenchError);

impl From<WorkbenchError> for ApiError {
    fn from(e: WorkbenchError) -> Self {
        ApiError(e)
    }
}

impl From<bothunt_core::Error> for ApiError {
    fn from(e: bothunt_core::Error) -> Self {
        ApiError(e.into())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        use bothunt_core::Error as C;
        let status = match &self.0 {
            WorkbenchError::Core(C::UnknownUser(_)) => StatusCode::NOT_FOUND,
            WorkbenchError::Core(C::RepeatGuess(_) | C::ChallengeOver(_)) | WorkbenchError::Busy => StatusCode::CONFLICT,
            WorkbenchError::Io(_) | WorkbenchError::Json(_) => StatusCode::INTERNAL_SERVER_ERROR,
            _ => StatusCode::BAD_REQUEST,
        };
        (status, Json(serde_json::json!({ "error": self.0.to_string(), "code": self.0.code() }))).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

fn busy<E>(_: E) -> ApiError {
    ApiError(WorkbenchError::Busy)
}

pub fn router(session: SharedSession) -> Router {
    Router::new()
        .route("/api/users", get(list_users))
        .route("/api/users/{id}", get(user_detail))
        .route("/api/labels", post(post_label))
        .route("/api/guess", post(post_guess))
        .route("/api/scoreboard", get(get_scoreboard))
        .route("/api/suspects", get(get_suspects))
        .route("/api/pipeline/{stage}", post(run_pipeline))
        .route("/api/session", get(get_session))
        .route("/api/day/advance", post(advance_day))
        .with_state(session)
}

/// Binds `addr` and serves until Ctrl-C.
pub async fn serve(session: Session, addr: &str) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    let app = router(Arc::new(RwLock::new(session)));
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

#[derive(Debug, Deserialize)]
pub struct UserQuery {
    #[serde(default)]
    pub page: usize,
    pub per_page: Option<usize>,
    pub sort: Option<String>,
    pub dir: Option<String>,
    pub label: Option<Label>,
    pub flag: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct UserRow {
    pub user_id: u64,
    pub screen_name: String,
    pub label: Label,
    pub flags: Vec<String>,
    /// Raw feature values aligned with the page's `columns`; `None` if missing.
    pub values: Vec<Option<f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct UserPage {
    pub total: usize,
    pub page: usize,
    pub per_page: usize,
    pub columns: Vec<String>,
    pub rows: Vec<UserRow>,
}

async fn list_users(State(s): State<SharedSession>, Query(q): Query<UserQuery>) -> ApiResult<UserPage> {
    let s = s.read().await;
    let per_page = q.per_page.unwrap_or(50).clamp(1, 1000);
    let descending = match q.dir.as_deref() {
        None | Some("asc") => false,
        Some("desc") => true,
        Some(other) => return Err(WorkbenchError::BadRequest(format!("dir must be asc or desc, got `{other}`")).into()),
    };
    let m = s.matrix();
    let columns: Vec<String> = m.map(|m| m.names.clone()).unwrap_or_default();
    let value = |u: u64, j: usize| -> Option<f64> {
        let m = m?;
        let i = m.row_of(u)?;
        (!m.missing[[i, j]]).then(|| m.raw[[i, j]])
    };

    let labels = s.labels();
    let mut users: Vec<&UserAccount> = s
        .dataset()
        .accounts
        .iter()
        .filter(|a| q.label.is_none_or(|l| labels.label_of(a.user_id) == l))
        .filter(|a| q.flag.as_ref().is_none_or(|f| labels.get(a.user_id).is_some_and(|r| r.flags.contains(f))))
        .collect();
    users.sort_by_key(|a| a.user_id);
    match q.sort.as_deref() {
        None | Some("user_id") => {
            if descending {
                users.reverse();
            }
        }
        Some("screen_name") => {
            users.sort_by(|a, b| {
                let o = a.screen_name.cmp(&b.screen_name);
                (if descending { o.reverse() } else { o }).then(a.user_id.cmp(&b.user_id))
            });
        }
        Some("label") => {
            users.sort_by(|a, b| {
                let o = labels.label_of(a.user_id).cmp(&labels.label_of(b.user_id));
                (if descending { o.reverse() } else { o }).then(a.user_id.cmp(&b.user_id))
            });
        }
        Some(col) => {
            let j = columns.iter().position(|c| c == col).ok_or_else(|| {
                if m.is_none() {
                    WorkbenchError::Dependency { stage: Stage::Features, missing: Stage::Features }
                } else {
                    WorkbenchError::BadRequest(format!("unknown sort column `{col}`"))
                }
            })?;
            // missing values sort last in both directions
            users.sort_by(|a, b| {
                let o = match (value(a.user_id, j), value(b.user_id, j)) {
                    (Some(x), Some(y)) => {
                        let o = x.total_cmp(&y);
                        if descending {
                            o.reverse()
                        } else {
                            o
                        }
                    }
                    (Some(_), None) => std::cmp::Ordering::Less,
                    (None, Some(_)) => std::cmp::Ordering::Greater,
                    (None, None) => std::cmp::Ordering::Equal,
                };
                o.then(a.user_id.cmp(&b.user_id))
            });
        }
    }
    let total = users.len();
    let rows = users
        .into_iter()
        .skip(q.page.saturating_mul(per_page))
        .take(per_page)
        .map(|a| UserRow {
            user_id: a.user_id,
            screen_name: a.screen_name.clone(),
            label: labels.label_of(a.user_id),
            flags: labels.get(a.user_id).map(|r| r.flags.clone()).unwrap_or_default(),
            values: (0..columns.len()).map(|j| value(a.user_id, j)).collect(),
        })
        .collect();
    Ok(Json(UserPage { total, page: q.page, per_page, columns, rows }))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FeatureCell {
    pub name: String,
    pub raw: f64,
    pub z: f64,
    pub missing: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct UserDetail {
    pub account: UserAccount,
    pub label: Option<LabelRecord>,
    pub features: Vec<FeatureCell>,
    pub tweets: Vec<Tweet>,
    /// Follower counts at the weekly network snapshots.
    pub series: Vec<usize>,
    pub explanation: Option<Explanation>,
}

async fn user_detail(State(s): State<SharedSession>, Path(id): Path<u64>) -> ApiResult<UserDetail> {
    let s = s.read().await;
    let account = s.account(id)?.clone();
    let features = match (s.matrix(), s.matrix().and_then(|m| m.row_of(id))) {
        (Some(m), Some(i)) => (0..m.names.len())
            .map(|j| FeatureCell { name: m.names[j].clone(), raw: m.raw[[i, j]], z: m.z[[i, j]], missing: m.missing[[i, j]] })
            .collect(),
        _ => Vec::new(),
    };
    let explanation = if s.matrix().is_some() { Some(s.explain_user(id, 5)?) } else { None };
    Ok(Json(UserDetail {
        account,
        label: s.labels().get(id).cloned(),
        features,
        tweets: s.tweet_sample(id, 10).into_iter().cloned().collect(),
        series: s.series(id).map(<[usize]>::to_vec).unwrap_or_default(),
        explanation,
    }))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct LabelRequest {
    pub user_id: u64,
    pub label: Label,
    #[serde(default)]
    pub flags: Vec<String>,
    pub provenance: Option<Provenance>,
}

async fn post_label(State(s): State<SharedSession>, Json(req): Json<LabelRequest>) -> ApiResult<LabelRecord> {
    let mut s = s.try_write().map_err(busy)?;
    Ok(Json(s.set_label(req.user_id, req.label, req.flags, req.provenance.unwrap_or(Provenance::Analyst))?))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GuessRequest {
    pub user_id: u64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GuessResponse {
    pub correct: bool,
    pub scoreboard: Scoreboard,
}

async fn post_guess(State(s): State<SharedSession>, Json(req): Json<GuessRequest>) -> ApiResult<GuessResponse> {
    let mut s = s.try_write().map_err(busy)?;
    let (outcome, scoreboard) = s.guess(req.user_id)?;
    Ok(Json(GuessResponse { correct: outcome.correct, scoreboard }))
}

async fn get_scoreboard(State(s): State<SharedSession>) -> ApiResult<Scoreboard> {
    Ok(Json(s.read().await.scoreboard()?))
}

#[derive(Debug, Deserialize)]
pub struct SuspectQuery {
    pub limit: Option<usize>,
    /// Leave out users that already carry a bot or human label.
    #[serde(default)]
    pub unlabeled: bool,
}

async fn get_suspects(State(s): State<SharedSession>, Query(q): Query<SuspectQuery>) -> ApiResult<Vec<bothunt_core::detect::Suspect>> {
    let s = s.read().await;
    let excluded = if q.unlabeled { s.labels().decided() } else { Default::default() };
    let mut v = s.suspects(&excluded)?;
    v.truncate(q.limit.unwrap_or(30));
    Ok(Json(v))
}

async fn run_pipeline(State(s): State<SharedSession>, Path(stage): Path<String>) -> ApiResult<StageReport> {
    let stage: Stage = stage.parse()?;
    let mut guard = s.try_write_owned().map_err(busy)?;
    let report = tokio::task::spawn_blocking(move || guard.run_stage(stage))
        .await
        .map_err(|e| WorkbenchError::Io(std::io::Error::other(e)))??;
    Ok(Json(report))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SessionInfo {
    pub users: usize,
    pub tweets: usize,
    pub duration_days: u32,
    pub oracle: bool,
    pub current_day: Option<u32>,
    pub stages: Vec<StageStatus>,
    pub labels: BTreeMap<Label, usize>,
    pub scoreboard: Option<Scoreboard>,
}

async fn get_session(State(s): State<SharedSession>) -> ApiResult<SessionInfo> {
    let s = s.read().await;
    let mut labels = BTreeMap::new();
    for (_, l) in s.labels().current_pairs() {
        *labels.entry(l).or_insert(0) += 1;
    }
    Ok(Json(SessionInfo {
        users: s.dataset().accounts.len(),
        tweets: s.dataset().tweets.len(),
        duration_days: s.dataset().duration_days,
        oracle: s.challenge().is_some(),
        current_day: s.challenge().map(|c| c.current_day()),
        stages: s.status(),
        labels,
        scoreboard: s.scoreboard().ok(),
    }))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DayResponse {
    pub current_day: u32,
    pub scoreboard: Scoreboard,
}

async fn advance_day(State(s): State<SharedSession>) -> ApiResult<DayResponse> {
    let mut s = s.try_write().map_err(busy)?;
    let current_day = s.advance_day()?;
    Ok(Json(DayResponse { current_day, scoreboard: s.scoreboard()? }))
}
