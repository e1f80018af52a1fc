//! HTTP/JSON facade over the planner: reference data, scenario storage,
//! synchronous solves and solution retrieval.
//!
//! | method | path                                   | success |
//! |--------|----------------------------------------|---------|
//! | POST   | `/api/scenarios`                       | 201 `StoredScenario` |
//! | POST   | `/api/scenarios/{id}/solve?model=...`  | 200 `StoredSolution`; 422 for an infeasible min-cost plan |
//! | GET    | `/api/scenarios/{id}`                  | 200 `StoredScenario` |
//! | GET    | `/api/solutions/{id}`                  | 200 `StoredSolution` |
//! | GET    | `/api/reference/{kind}?state=XX`       | 200 rows, sorted by id |
//! | GET    | `/api/health`                          | 200 |
//!
//! Errors are `{code, message, details[]}` with 400 (bad input), 404
//! (unknown id, state or clinic), 409 (solver resource limit) or 422.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use chrono::Utc;
use routeplan_core::api::{ErrorBody, Health, ReferenceKind, ReferenceRows, StoredScenario, StoredSolution};
use routeplan_core::data::ReferenceData;
use routeplan_core::formulation::Model;
use routeplan_core::ip::SolveLimits;
use routeplan_core::model::{build_network, FieldError, ModelError, Scenario};
use routeplan_core::plan::{plan_on, PlanError, PlanStatus};
use serde::{Deserialize, Serialize};
use tokio::sync::{RwLock, Semaphore};

#[derive(Clone, Debug)]
pub struct ServiceConfig {
    pub solve_timeout: Duration,
    pub max_concurrent_solves: usize,
    /// Where to write the in-memory store on shutdown, if anywhere.
    pub snapshot: Option<PathBuf>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        Self {
            solve_timeout: Duration::from_secs(60),
            max_concurrent_solves: std::thread::available_parallelism().map_or(1, |n| n.get()),
            snapshot: None,
        }
    }
}

#[derive(Default, Serialize, Deserialize)]
pub struct Store {
    pub scenarios: HashMap<String, StoredScenario>,
    pub solutions: HashMap<String, StoredSolution>,
}

pub struct AppState {
    data: Arc<ReferenceData>,
    store: RwLock<Store>,
    /// Tokio semaphores hand out permits first-come first-served.
    solve_slots: Semaphore,
    config: ServiceConfig,
}

impl AppState {
    pub fn new(data: ReferenceData, config: ServiceConfig) -> Arc<Self> {
        Arc::new(Self {
            data: Arc::new(data),
            store: RwLock::new(Store::default()),
            solve_slots: Semaphore::new(config.max_concurrent_solves.max(1)),
            config,
        })
    }

    /// Writes the store as JSON to the configured snapshot path.
    pub async fn write_snapshot(&self) -> std::io::Result<()> {
        let Some(path) = &self.config.snapshot else {
            return Ok(());
        };
        let store = self.store.read().await;
        let json = serde_json::to_vec_pretty(&*store).map_err(std::io::Error::other)?;
        std::fs::write(path, json)
    }
}

pub struct ApiError {
    status: StatusCode,
    body: ErrorBody,
}

impl ApiError {
    fn new(status: StatusCode, code: &str, message: impl Into<String>) -> Self {
        Self {
            status,
            body: ErrorBody {
                code: code.into(),
                message: message.into(),
                details: Vec::new(),
                diagnostic: None,
                solution_id: None,
            },
        }
    }

    fn not_found(what: &str, id: &str) -> Self {
        Self::new(StatusCode::NOT_FOUND, "not_found", format!("unknown {what} {id:?}"))
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

impl From<ModelError> for ApiError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::NotFound { kind, ref ids } => {
                let mut err = Self::new(StatusCode::NOT_FOUND, "not_found", e.to_string());
                let field = match kind {
                    "clinic" => "open_clinic_ids",
                    "state" => "state",
                    _ => kind,
                };
                err.body.details = ids.iter().map(|id| FieldError::new(field, format!("unknown {kind} {id}"))).collect();
                err
            }
            ModelError::Validation(details) => {
                let mut err = Self::new(StatusCode::BAD_REQUEST, "validation", "scenario failed validation");
                err.body.details = details;
                err
            }
            ModelError::InvalidArgument(msg) => Self::new(StatusCode::BAD_REQUEST, "invalid_argument", msg),
        }
    }
}

impl From<PlanError> for ApiError {
    fn from(e: PlanError) -> Self {
        match e {
            PlanError::Model(m) => m.into(),
            PlanError::Solver(s) if s.is_resource_limit() => {
                Self::new(StatusCode::CONFLICT, "resource_limit", s.to_string())
            }
            PlanError::Solver(s) => {
                Self::new(StatusCode::INTERNAL_SERVER_ERROR, "solver", s.to_string())
            }
        }
    }
}

type ApiResult<T> = Result<T, ApiError>;

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/api/health", get(health))
        .route("/api/scenarios", post(create_scenario))
        .route("/api/scenarios/{id}", get(get_scenario))
        .route("/api/scenarios/{id}/solve", post(solve_scenario))
        .route("/api/solutions/{id}", get(get_solution))
        .route("/api/reference/{kind}", get(list_reference))
        .with_state(state)
}

async fn health(State(state): State<Arc<AppState>>) -> Json<Health> {
    Json(Health {
        status: "ok".into(),
        counties: state.data.counties.len(),
        clinics: state.data.clinics.len(),
        airports: state.data.airports.len(),
    })
}

async fn create_scenario(State(state): State<Arc<AppState>>, body: Bytes) -> ApiResult<(StatusCode, Json<StoredScenario>)> {
    let scenario: Scenario = serde_json::from_slice(&body)
        .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "bad_request", format!("invalid scenario JSON: {e}")))?;
    // Building the network runs every check that needs reference data.
    build_network(&scenario, &state.data)?;
    let stored = StoredScenario {
        id: uuid::Uuid::new_v4().simple().to_string(),
        scenario,
        created_at: Utc::now(),
    };
    state.store.write().await.scenarios.insert(stored.id.clone(), stored.clone());
    tracing::info!(id = %stored.id, "scenario created");
    Ok((StatusCode::CREATED, Json(stored)))
}

async fn get_scenario(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Json<StoredScenario>> {
    let store = state.store.read().await;
    store
        .scenarios
        .get(&id)
        .cloned()
        .map(Json)
        .ok_or_else(|| ApiError::not_found("scenario", &id))
}

async fn solve_scenario(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Query(query): Query<HashMap<String, String>>,
) -> ApiResult<Response> {
    let model: Model = match query.get("model") {
        None => Model::MaxFlow,
        Some(m) => m
            .parse()
            .map_err(|e: String| ApiError::new(StatusCode::BAD_REQUEST, "bad_request", e))?,
    };
    let stored = state
        .store
        .read()
        .await
        .scenarios
        .get(&id)
        .cloned()
        .ok_or_else(|| ApiError::not_found("scenario", &id))?;

    let _permit = state
        .solve_slots
        .acquire()
        .await
        .map_err(|_| ApiError::new(StatusCode::SERVICE_UNAVAILABLE, "shutting_down", "service is shutting down"))?;
    let data = Arc::clone(&state.data);
    let limits = SolveLimits {
        time_limit: Some(state.config.solve_timeout),
        ..SolveLimits::default()
    };
    let started = Instant::now();
    let scenario = stored.scenario.clone();
    let outcome = tokio::task::spawn_blocking(move || {
        let network = build_network(&scenario, &data)?;
        plan_on(&network, &scenario, model, &limits)
    })
    .await
    .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string()))??;
    let solve_ms = started.elapsed().as_millis() as u64;

    let solution = StoredSolution {
        id: uuid::Uuid::new_v4().simple().to_string(),
        scenario_id: id,
        model,
        status: outcome.status,
        report: outcome.report,
        diagnostic: outcome.diagnostic,
        solved_at: Utc::now(),
        solve_ms,
    };
    state.store.write().await.solutions.insert(solution.id.clone(), solution.clone());
    tracing::info!(id = %solution.id, model = model.as_str(), ms = solve_ms, status = ?solution.status, "solved");

    Ok(match solution.status {
        PlanStatus::Optimal => Json(solution).into_response(),
        PlanStatus::Infeasible => {
            let mut err = ApiError::new(
                StatusCode::UNPROCESSABLE_ENTITY,
                "infeasible",
                solution
                    .diagnostic
                    .as_ref()
                    .map_or_else(|| "no feasible plan".to_string(), |d| d.message.clone()),
            );
            err.body.diagnostic = solution.diagnostic;
            err.body.solution_id = Some(solution.id);
            err.into_response()
        }
    })
}

async fn get_solution(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Json<StoredSolution>> {
    let store = state.store.read().await;
    store
        .solutions
        .get(&id)
        .cloned()
        .map(Json)
        .ok_or_else(|| ApiError::not_found("solution", &id))
}

async fn list_reference(
    State(state): State<Arc<AppState>>,
    Path(kind): Path<String>,
    Query(query): Query<HashMap<String, String>>,
) -> ApiResult<Json<ReferenceRows>> {
    let kind: ReferenceKind = kind.parse().map_err(|e: String| ApiError::new(StatusCode::NOT_FOUND, "not_found", e))?;
    let state_filter = query.get("state").map(String::as_str);
    let keep = |s: &str| state_filter.is_none_or(|f| f == s);
    let data = &state.data;
    let rows = match kind {
        ReferenceKind::States => ReferenceRows::States(data.states()),
        ReferenceKind::Clinics => {
            let mut rows: Vec<_> = data.clinics.iter().filter(|c| keep(&c.state)).cloned().collect();
            rows.sort_by(|a, b| a.id.cmp(&b.id));
            ReferenceRows::Clinics(rows)
        }
        ReferenceKind::Counties => {
            let mut rows: Vec<_> = data.counties.iter().filter(|c| keep(&c.state)).cloned().collect();
            rows.sort_by(|a, b| a.id.cmp(&b.id));
            ReferenceRows::Counties(rows)
        }
        ReferenceKind::Airports => {
            let mut rows: Vec<_> = data.airports.iter().filter(|a| keep(&a.state)).cloned().collect();
            rows.sort_by(|a, b| a.id.cmp(&b.id));
            ReferenceRows::Airports(rows)
        }
    };
    Ok(Json(rows))
}

/// Serves `router` on `listener` until `shutdown` resolves, then writes the
/// snapshot if one is configured.
pub async fn serve(
    listener: tokio::net::TcpListener,
    state: Arc<AppState>,
    shutdown: impl std::future::Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, router(Arc::clone(&state)))
        .with_graceful_shutdown(shutdown)
        .await?;
    state.write_snapshot().await
}
