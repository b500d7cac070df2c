//! HTTP/JSON service: decompositions, openings and live games against the
//! matching engine.
//!
//! Graphs and decompositions are computed once per `n` and shared. Each game
//! session sits behind its own mutex, so moves on one session are serialized
//! while different sessions proceed independently.

use std::collections::HashMap;
use std::io;
use std::sync::{Arc, Mutex, RwLock};

use axum::extract::rejection::{JsonRejection, PathRejection, QueryRejection};
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use chrono::{DateTime, Utc};
use juniper_core::{
    decompose, engine_move, evaluate_position, plan_first_player, plan_second_player, Decomposition,
    EnginePlan, Error, FirstMove, GameResult, GameState, Graph, Label, Player, Ruleset,
    Transcript,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use uuid::Uuid;

pub const DEFAULT_N_LIMIT: u32 = 1000;

#[derive(Clone, Copy, Debug)]
pub struct ServerConfig {
    pub n_limit: u32,
}

impl Default for ServerConfig {
    fn default() -> Self {
        ServerConfig { n_limit: DEFAULT_N_LIMIT }
    }
}

/// Blocks running the service on `host:port`.
pub fn serve(host: &str, port: u16, config: ServerConfig) -> io::Result<()> {
    let _ = tracing_subscriber::fmt()
        .with_writer(io::stderr)
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env()
                .unwrap_or_else(|_| "info".into()),
        )
        .try_init();
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind((host, port)).await?;
        tracing::info!(addr = %listener.local_addr()?, n_limit = config.n_limit, "listening");
        axum::serve(listener, router(config))
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await
    })
}

pub fn router(config: ServerConfig) -> Router {
    let state = Arc::new(AppState {
        config,
        prepared: RwLock::new(HashMap::new()),
        sessions: RwLock::new(HashMap::new()),
    });
    Router::new()
        .route("/api/v1/decomposition/{n}", get(get_decomposition))
        .route("/api/v1/openings/{n}", get(get_openings))
        .route("/api/v1/games", axum::routing::post(create_game))
        .route("/api/v1/games/{id}", get(get_game).delete(delete_game))
        .route("/api/v1/games/{id}/moves", axum::routing::post(post_move))
        .route("/api/v1/games/{id}/hint", get(get_hint))
        .route("/api/v1/games/{id}/transcript", get(get_transcript))
        .with_state(state)
}

type Shared = Arc<AppState>;

struct AppState {
    config: ServerConfig,
    prepared: RwLock<HashMap<u32, Arc<Prepared>>>,
    sessions: RwLock<HashMap<String, Arc<Mutex<Session>>>>,
}

struct Prepared {
    graph: Graph,
    decomposition: Decomposition,
}

impl AppState {
    fn prepared(&self, n: u32) -> Result<Arc<Prepared>, ApiError> {
        if n == 0 || n > self.config.n_limit {
            return Err(ApiError::NotFound(format!(
                "n = {n} is outside 1..={}",
                self.config.n_limit
            )));
        }
        if let Some(p) = self.prepared.read().unwrap().get(&n) {
            return Ok(p.clone());
        }
        // computed outside the lock; a racing duplicate is harmless
        let graph = Graph::divisibility(n)?;
        let decomposition = decompose(&graph);
        let p = Arc::new(Prepared { graph, decomposition });
        Ok(self.prepared.write().unwrap().entry(n).or_insert(p).clone())
    }

    fn session(&self, id: &str) -> Result<Arc<Mutex<Session>>, ApiError> {
        self.sessions
            .read()
            .unwrap()
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::NotFound(format!("no game with id {id}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize, Default)]
#[serde(rename_all = "lowercase")]
enum EngineRole {
    First,
    Second,
    #[default]
    None,
}

impl EngineRole {
    fn player(self) -> Option<Player> {
        match self {
            EngineRole::First => Some(Player::One),
            EngineRole::Second => Some(Player::Two),
            EngineRole::None => None,
        }
    }
}

struct Session {
    id: String,
    prepared: Arc<Prepared>,
    state: GameState,
    engine_role: EngineRole,
    plan: Option<EnginePlan>,
    created_at: DateTime<Utc>,
    updated_at: DateTime<Utc>,
}

impl Session {
    fn engine_to_move(&self) -> bool {
        !self.state.is_over() && self.engine_role.player() == Some(self.state.to_move())
    }

    /// Plays the engine's move. Follows the matching plan when the engine is
    /// on the winning side; otherwise (lost position, or no winning opening
    /// exists) it plays the smallest winning move, else the smallest legal one.
    fn play_engine(&mut self) -> Result<Label, ApiError> {
        let g = &self.prepared.graph;
        let d = &self.prepared.decomposition;
        if self.plan.is_none() {
            match (self.engine_role, self.state.history()) {
                (EngineRole::First, []) => {
                    let constraint = self.state.ruleset().first_move;
                    if let Some(&v) = d.d.iter().find(|&&v| constraint.allows(v)) {
                        self.plan = Some(plan_first_player(g, v)?);
                    }
                }
                (EngineRole::Second, &[v]) if d.class_of(v) != Some(juniper_core::Class::D) => {
                    self.plan = Some(plan_second_player(g, v)?);
                }
                _ => {}
            }
        }
        let k = match &self.plan {
            Some(plan) => engine_move(plan, &self.state)?,
            None => {
                let eval = evaluate_position(g, &self.state)?;
                match eval.winning_moves.first() {
                    Some(&k) => k,
                    None => *self.state.legal_moves().first().ok_or(Error::GameOver)?,
                }
            }
        };
        self.state = self.state.apply_move(k).map_err(|e| {
            Error::BrokenInvariant(format!("engine chose illegal move {k}: {e}"))
        })?;
        Ok(k)
    }

    fn view(&self) -> StateView {
        let s = &self.state;
        StateView {
            id: self.id.clone(),
            n: s.n(),
            constraint: s.ruleset().first_move,
            moves: s.history().to_vec(),
            current: s.current(),
            to_move: (!s.is_over()).then(|| s.to_move()),
            result: s.status().into(),
            legal_moves: s.legal_moves(),
            engine_role: self.engine_role,
            created_at: self.created_at.to_rfc3339(),
            updated_at: self.updated_at.to_rfc3339(),
        }
    }
}

/// Session state as served. `n`, `constraint`, `moves` and `result` form a
/// transcript that replays to the same position.
#[derive(Debug, Serialize)]
struct StateView {
    id: String,
    n: u32,
    constraint: FirstMove,
    moves: Vec<Label>,
    current: Option<Label>,
    to_move: Option<Player>,
    result: GameResult,
    legal_moves: Vec<Label>,
    engine_role: EngineRole,
    created_at: String,
    updated_at: String,
}

#[derive(Debug)]
enum ApiError {
    NotFound(String),
    Conflict(String),
    Unprocessable(String),
    Internal(String),
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        match e {
            Error::BrokenInvariant(_) => ApiError::Internal(e.to_string()),
            Error::IllegalMove(_) | Error::GameOver => ApiError::Conflict(e.to_string()),
            _ => ApiError::Unprocessable(e.to_string()),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, msg) = match self {
            ApiError::NotFound(m) => (StatusCode::NOT_FOUND, m),
            ApiError::Conflict(m) => (StatusCode::CONFLICT, m),
            ApiError::Unprocessable(m) => (StatusCode::UNPROCESSABLE_ENTITY, m),
            ApiError::Internal(m) => {
                tracing::error!("{m}");
                (StatusCode::INTERNAL_SERVER_ERROR, m)
            }
        };
        (status, Json(json!({ "error": msg }))).into_response()
    }
}

type ApiResult<T = Json<Value>> = Result<T, ApiError>;

fn path_n(p: Result<Path<u32>, PathRejection>) -> Result<u32, ApiError> {
    p.map(|Path(n)| n).map_err(|e| ApiError::NotFound(e.body_text()))
}

fn body<T>(b: Result<Json<T>, JsonRejection>) -> Result<T, ApiError> {
    b.map(|Json(t)| t).map_err(|e| ApiError::Unprocessable(e.body_text()))
}

async fn get_decomposition(
    State(app): State<Shared>,
    n: Result<Path<u32>, PathRejection>,
) -> ApiResult<Json<Decomposition>> {
    let p = app.prepared(path_n(n)?)?;
    Ok(Json(p.decomposition.clone()))
}

#[derive(Deserialize)]
struct OpeningsQuery {
    #[serde(default)]
    constraint: FirstMove,
}

async fn get_openings(
    State(app): State<Shared>,
    n: Result<Path<u32>, PathRejection>,
    q: Result<Query<OpeningsQuery>, QueryRejection>,
) -> ApiResult {
    let n = path_n(n)?;
    let Query(q) = q.map_err(|e| ApiError::Unprocessable(e.body_text()))?;
    let p = app.prepared(n)?;
    let winning: Vec<Label> =
        p.decomposition.d.iter().copied().filter(|&v| q.constraint.allows(v)).collect();
    Ok(Json(json!({ "n": n, "constraint": q.constraint, "winning": winning })))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NewGame {
    n: u32,
    #[serde(default)]
    constraint: FirstMove,
    #[serde(default)]
    engine_role: EngineRole,
}

async fn create_game(
    State(app): State<Shared>,
    req: Result<Json<NewGame>, JsonRejection>,
) -> ApiResult<(StatusCode, Json<Value>)> {
    let req = body(req)?;
    let prepared = app.prepared(req.n)?;
    let rules = Ruleset::new(req.n, req.constraint)?;
    let now = Utc::now();
    let mut session = Session {
        id: Uuid::new_v4().to_string(),
        prepared,
        state: GameState::new(rules),
        engine_role: req.engine_role,
        plan: None,
        created_at: now,
        updated_at: now,
    };
    if session.engine_to_move() {
        session.play_engine()?;
    }
    let view = session.view();
    app.sessions
        .write()
        .unwrap()
        .insert(session.id.clone(), Arc::new(Mutex::new(session)));
    Ok((StatusCode::CREATED, Json(json!({ "id": view.id, "state": view }))))
}

async fn get_game(State(app): State<Shared>, Path(id): Path<String>) -> ApiResult<Json<StateView>> {
    let session = app.session(&id)?;
    let view = session.lock().unwrap().view();
    Ok(Json(view))
}

async fn delete_game(State(app): State<Shared>, Path(id): Path<String>) -> ApiResult<StatusCode> {
    match app.sessions.write().unwrap().remove(&id) {
        Some(_) => Ok(StatusCode::NO_CONTENT),
        None => Err(ApiError::NotFound(format!("no game with id {id}"))),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MoveRequest {
    #[serde(rename = "move")]
    k: Label,
}

async fn post_move(
    State(app): State<Shared>,
    Path(id): Path<String>,
    req: Result<Json<MoveRequest>, JsonRejection>,
) -> ApiResult {
    let req = body(req)?;
    let session = app.session(&id)?;
    let mut session = session.lock().unwrap();
    if session.engine_to_move() {
        return Err(ApiError::Conflict("it is the engine's turn".into()));
    }
    session.state = session.state.apply_move(req.k).map_err(Error::from)?;
    let engine_reply = if session.engine_to_move() {
        Some(session.play_engine()?)
    } else {
        None
    };
    session.updated_at = Utc::now();
    Ok(Json(json!({
        "human_move": req.k,
        "engine_move": engine_reply,
        "state": session.view(),
    })))
}

async fn get_hint(State(app): State<Shared>, Path(id): Path<String>) -> ApiResult {
    let session = app.session(&id)?;
    let session = session.lock().unwrap();
    let eval = evaluate_position(&session.prepared.graph, &session.state)?;
    Ok(Json(json!({
        "winning_moves": eval.winning_moves,
        "player_to_move_wins": eval.player_to_move_wins,
        "exact": true,
    })))
}

async fn get_transcript(
    State(app): State<Shared>,
    Path(id): Path<String>,
) -> ApiResult<Json<Transcript>> {
    let session = app.session(&id)?;
    let transcript = session.lock().unwrap().state.to_transcript();
    Ok(Json(transcript))
}

