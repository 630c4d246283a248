//! HTTP and WebSocket front end.
//!
//! Each session has one writer: events take an async FIFO lock, run on the
//! blocking pool and publish the resulting snapshot. Readers only ever see
//! the last published snapshot.

use std::collections::HashMap;
use std::future::Future;
use std::path::{Path, PathBuf};
use std::sync::{Arc, RwLock};

use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::rejection::JsonRejection;
use axum::extract::{Path as UrlPath, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use rinx_core::analytics::Measure;
use rinx_core::trajectory::{parse_pdb, parse_traj_json, select_protein_residues};
use rinx_core::{RinConfig, Trajectory};
use serde::{Deserialize, Serialize};
use tokio::sync::Mutex;
use tower_http::services::ServeDir;
use tracing::{info, warn};

use crate::error::SessionError;
use crate::protocol::{parse_client_message, snapshot, ServerMessage, Snapshot};
use crate::session::{create_session, handle_event, SessionOptions, SessionState, Target, TimingBreakdown, UpdateEvent};

#[derive(Debug, Clone, Default)]
pub struct AppConfig {
    /// Root for server-side trajectory paths; path requests are refused
    /// without it.
    pub data_dir: Option<PathBuf>,
    pub static_dir: Option<PathBuf>,
    /// Where [`run`] writes the last snapshot of every session on shutdown.
    pub snapshot_dir: Option<PathBuf>,
    /// Defaults for sessions that do not send their own options.
    pub options: SessionOptions,
}

pub struct SessionHandle {
    writer: Arc<Mutex<SessionState>>,
    published: RwLock<Arc<Snapshot>>,
}

impl SessionHandle {
    pub fn new(state: SessionState) -> Self {
        let published = RwLock::new(Arc::new(snapshot(&state)));
        Self { writer: Arc::new(Mutex::new(state)), published }
    }

    pub fn snapshot(&self) -> Arc<Snapshot> {
        Arc::clone(&self.published.read().unwrap_or_else(|e| e.into_inner()))
    }

    /// Applies `event` after all earlier events of this session. On error the
    /// state and the published snapshot stay as they were.
    pub async fn apply(self: &Arc<Self>, event: UpdateEvent) -> Result<(Arc<Snapshot>, TimingBreakdown), SessionError> {
        if !event.is_mutating() {
            return Ok((self.snapshot(), TimingBreakdown::default()));
        }
        let mut guard = Arc::clone(&self.writer).lock_owned().await;
        let this = Arc::clone(self);
        tokio::task::spawn_blocking(move || {
            let (next, timing) = handle_event(&guard, &event)?;
            let snap = Arc::new(snapshot(&next));
            *guard = next;
            *this.published.write().unwrap_or_else(|e| e.into_inner()) = Arc::clone(&snap);
            Ok((snap, timing))
        })
        .await
        .map_err(|e| SessionError::Internal(e.to_string()))?
    }
}

#[derive(Default)]
pub struct AppState {
    config: AppConfig,
    sessions: RwLock<HashMap<String, Arc<SessionHandle>>>,
}

impl AppState {
    pub fn new(config: AppConfig) -> Arc<Self> {
        Arc::new(Self { config, sessions: RwLock::default() })
    }

    pub fn config(&self) -> &AppConfig {
        &self.config
    }

    pub fn insert(&self, state: SessionState) -> String {
        let id = uuid::Uuid::new_v4().simple().to_string();
        self.sessions.write().unwrap_or_else(|e| e.into_inner()).insert(id.clone(), Arc::new(SessionHandle::new(state)));
        id
    }

    pub fn session(&self, id: &str) -> Result<Arc<SessionHandle>, SessionError> {
        self.sessions
            .read()
            .unwrap_or_else(|e| e.into_inner())
            .get(id)
            .cloned()
            .ok_or_else(|| SessionError::NotFound(id.to_string()))
    }

    pub fn remove(&self, id: &str) -> bool {
        self.sessions.write().unwrap_or_else(|e| e.into_inner()).remove(id).is_some()
    }

    pub fn session_ids(&self) -> Vec<String> {
        let mut ids: Vec<String> = self.sessions.read().unwrap_or_else(|e| e.into_inner()).keys().cloned().collect();
        ids.sort();
        ids
    }

    /// Writes `<id>.json` with the published snapshot of every session.
    pub fn persist_snapshots(&self, dir: &Path) -> std::io::Result<usize> {
        std::fs::create_dir_all(dir)?;
        let sessions: Vec<(String, Arc<SessionHandle>)> =
            self.sessions.read().unwrap_or_else(|e| e.into_inner()).iter().map(|(k, v)| (k.clone(), Arc::clone(v))).collect();
        for (id, handle) in &sessions {
            let doc = ServerMessage::Snapshot(Box::new((*handle.snapshot()).clone())).to_json();
            std::fs::write(dir.join(format!("{id}.json")), doc)?;
        }
        Ok(sessions.len())
    }
}

fn default_measure() -> Measure {
    Measure::Degree
}

fn yes() -> bool {
    true
}

/// Body of `POST /sessions`. Exactly one of `path`, `trajectory` (the
/// trajectory JSON document) or `pdb` (PDB text) must be given.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateSessionRequest {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trajectory: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pdb: Option<String>,
    #[serde(default)]
    pub config: RinConfig,
    #[serde(default = "default_measure")]
    pub measure: Measure,
    #[serde(default)]
    pub frame: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub options: Option<SessionOptions>,
    /// Keep only standard amino-acid residues (waters, ligands and ions dropped).
    #[serde(default = "yes")]
    pub protein_only: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CreateSessionResponse {
    pub id: String,
    pub n_nodes: usize,
    pub n_edges: usize,
    pub frame_count: usize,
}

enum Source {
    Pdb(Vec<u8>),
    Json(Vec<u8>),
}

fn invalid(e: impl std::fmt::Display) -> SessionError {
    SessionError::InvalidPayload(e.to_string())
}

/// Resolves `relative` inside `root`, refusing anything that escapes it.
pub fn resolve_data_path(root: &Path, relative: &str) -> Result<PathBuf, SessionError> {
    let root = root.canonicalize().map_err(|e| SessionError::Internal(format!("data directory: {e}")))?;
    let path = root.join(relative).canonicalize().map_err(|_| invalid(format!("no such trajectory {relative:?}")))?;
    if !path.starts_with(&root) {
        return Err(invalid(format!("path {relative:?} is outside the data directory")));
    }
    Ok(path)
}

async fn read_source(config: &AppConfig, req: &CreateSessionRequest) -> Result<(Source, String), SessionError> {
    match (&req.path, &req.trajectory, &req.pdb) {
        (Some(path), None, None) => {
            let root = config.data_dir.as_deref().ok_or_else(|| invalid("server-side paths are disabled (no data directory)"))?;
            let full = resolve_data_path(root, path)?;
            let bytes = tokio::fs::read(&full).await.map_err(invalid)?;
            let is_json = full.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
                || bytes.iter().find(|b| !b.is_ascii_whitespace()) == Some(&b'{');
            Ok((if is_json { Source::Json(bytes) } else { Source::Pdb(bytes) }, path.clone()))
        }
        (None, Some(doc), None) => Ok((Source::Json(doc.to_string().into_bytes()), "upload.json".into())),
        (None, None, Some(text)) => Ok((Source::Pdb(text.clone().into_bytes()), "upload.pdb".into())),
        _ => Err(invalid("give exactly one of path, trajectory or pdb")),
    }
}

fn load(source: Source, name: &str, protein_only: bool) -> Result<Trajectory, SessionError> {
    let trajectory = match source {
        Source::Pdb(bytes) => parse_pdb(&bytes),
        Source::Json(bytes) => parse_traj_json(&bytes),
    }
    .map_err(invalid)?
    .with_source_path(name);
    if protein_only {
        select_protein_residues(&trajectory, false).map_err(invalid)
    } else {
        Ok(trajectory)
    }
}

/// Loads the trajectory and builds the session state without registering it.
pub async fn open_session(config: &AppConfig, req: CreateSessionRequest) -> Result<SessionState, SessionError> {
    let (source, name) = read_source(config, &req).await?;
    let options = req.options.unwrap_or(config.options);
    let target = Target { frame: req.frame, config: req.config, measure: req.measure };
    tokio::task::spawn_blocking(move || {
        let trajectory = load(source, &name, req.protein_only)?;
        create_session(Arc::new(trajectory), target, options)
    })
    .await
    .map_err(|e| SessionError::Internal(e.to_string()))?
}

pub struct ApiError(pub SessionError);

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        Self(e)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = match self.0.code() {
            "invalid_payload" | "invalid_message" => StatusCode::BAD_REQUEST,
            "not_found" => StatusCode::NOT_FOUND,
            "computation_failed" => StatusCode::UNPROCESSABLE_ENTITY,
            _ => StatusCode::INTERNAL_SERVER_ERROR,
        };
        let body = ServerMessage::error(&self.0).to_json();
        (status, [(axum::http::header::CONTENT_TYPE, "application/json")], body).into_response()
    }
}

fn json_body<T>(body: Result<Json<T>, JsonRejection>) -> Result<T, ApiError> {
    body.map(|Json(v)| v).map_err(|e| ApiError(SessionError::InvalidMessage(e.body_text())))
}

fn snapshot_response(snap: &Snapshot) -> Response {
    let body = ServerMessage::Snapshot(Box::new(snap.clone())).to_json();
    ([(axum::http::header::CONTENT_TYPE, "application/json")], body).into_response()
}

async fn create(State(app): State<Arc<AppState>>, body: Result<Json<CreateSessionRequest>, JsonRejection>) -> Result<Response, ApiError> {
    let req = json_body(body)?;
    let state = open_session(&app.config, req).await?;
    let response = CreateSessionResponse {
        id: String::new(),
        n_nodes: state.rin().node_count(),
        n_edges: state.rin().edge_count(),
        frame_count: state.trajectory().frame_count(),
    };
    let id = app.insert(state);
    info!(%id, nodes = response.n_nodes, "session created");
    Ok((StatusCode::CREATED, Json(CreateSessionResponse { id, ..response })).into_response())
}

async fn list(State(app): State<Arc<AppState>>) -> Json<Vec<String>> {
    Json(app.session_ids())
}

async fn get_snapshot(State(app): State<Arc<AppState>>, UrlPath(id): UrlPath<String>) -> Result<Response, ApiError> {
    Ok(snapshot_response(&app.session(&id)?.snapshot()))
}

async fn delete(State(app): State<Arc<AppState>>, UrlPath(id): UrlPath<String>) -> Result<StatusCode, ApiError> {
    if app.remove(&id) {
        Ok(StatusCode::NO_CONTENT)
    } else {
        Err(SessionError::NotFound(id).into())
    }
}

async fn post_event(State(app): State<Arc<AppState>>, UrlPath(id): UrlPath<String>, body: String) -> Result<Response, ApiError> {
    let handle = app.session(&id)?;
    let event = parse_client_message(&body)?;
    let (snap, _) = handle.apply(event).await?;
    Ok(snapshot_response(&snap))
}

async fn websocket(State(app): State<Arc<AppState>>, UrlPath(id): UrlPath<String>, ws: WebSocketUpgrade) -> Result<Response, ApiError> {
    let handle = app.session(&id)?;
    Ok(ws.on_upgrade(move |socket| serve_socket(socket, handle)))
}

async fn reply_to(handle: &Arc<SessionHandle>, text: &str) -> ServerMessage {
    let result = match parse_client_message(text) {
        Ok(event) => handle.apply(event).await,
        Err(e) => Err(e),
    };
    match result {
        Ok((snap, _)) => ServerMessage::Snapshot(Box::new((*snap).clone())),
        Err(e) => ServerMessage::error(&e),
    }
}

/// Sends the current snapshot, then answers every text message with a
/// snapshot or an error document.
async fn serve_socket(mut socket: WebSocket, handle: Arc<SessionHandle>) {
    let hello = ServerMessage::Snapshot(Box::new((*handle.snapshot()).clone())).to_json();
    if socket.send(Message::Text(hello.into())).await.is_err() {
        return;
    }
    while let Some(Ok(message)) = socket.recv().await {
        let reply = match message {
            Message::Text(text) => reply_to(&handle, text.as_str()).await,
            Message::Binary(bytes) => match std::str::from_utf8(&bytes) {
                Ok(text) => reply_to(&handle, text).await,
                Err(e) => ServerMessage::error(&SessionError::InvalidMessage(e.to_string())),
            },
            Message::Close(_) => break,
            _ => continue,
        };
        if socket.send(Message::Text(reply.to_json().into())).await.is_err() {
            break;
        }
    }
}

async fn not_found() -> ApiError {
    ApiError(SessionError::NotFound("no such route".into()))
}

pub fn router(app: Arc<AppState>) -> Router {
    let routes = Router::new()
        .route("/health", get(|| async { "ok" }))
        .route("/sessions", post(create).get(list))
        .route("/sessions/{id}", axum::routing::delete(delete))
        .route("/sessions/{id}/snapshot", get(get_snapshot))
        .route("/sessions/{id}/events", post(post_event))
        .route("/sessions/{id}/ws", get(websocket));
    let routes = match &app.config.static_dir {
        Some(dir) => routes.fallback_service(ServeDir::new(dir)),
        None => routes.fallback(not_found),
    };
    routes.with_state(app)
}

/// Serves until `shutdown` resolves, then writes snapshots if configured.
pub async fn run(listener: tokio::net::TcpListener, app: Arc<AppState>, shutdown: impl Future<Output = ()> + Send + 'static) -> std::io::Result<()> {
    axum::serve(listener, router(Arc::clone(&app))).with_graceful_shutdown(shutdown).await?;
    if let Some(dir) = &app.config.snapshot_dir {
        match app.persist_snapshots(dir) {
            Ok(count) => info!(count, dir = %dir.display(), "snapshots written"),
            Err(e) => warn!(error = %e, "writing snapshots failed"),
        }
    }
    Ok(())
}
