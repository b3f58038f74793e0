//! JSON play service.
//!
//! | route                          | effect                                  |
//! |--------------------------------|-----------------------------------------|
//! | `GET /models`                  | bundled models                          |
//! | `POST /sessions`               | start a play, Black moves first         |
//! | `GET /sessions/{id}`           | board, status and White's legal moves   |
//! | `POST /sessions/{id}/moves`    | submit a White move                     |
//! | `GET /sessions/{id}/transcript`| full record of the play                 |
//! | `DELETE /sessions/{id}`        | drop a session                          |

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;
use uuid::Uuid;

use bddl_core::bddl::Side;
use bddl_core::models;
use bddl_core::play::{render_rows, Mode, PlayError, PlyRecord, PlaySession, Status};
use bddl_core::semantics::{Move, Rules};

use crate::source::{CliError, Game};

/// Live sessions beyond this are refused.
pub const MAX_SESSIONS: usize = 1024;

type Shared = Arc<Mutex<PlaySession>>;

#[derive(Default)]
pub struct AppState {
    sessions: Mutex<HashMap<Uuid, Shared>>,
}

pub fn router() -> Router {
    Router::new()
        .route("/models", get(list_models))
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(show_session).delete(drop_session))
        .route("/sessions/{id}/moves", post(submit_move))
        .route("/sessions/{id}/transcript", get(transcript))
        .with_state(Arc::new(AppState::default()))
}

pub struct ApiError(StatusCode, String);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(json!({ "error": self.1 }))).into_response()
    }
}

impl From<PlayError> for ApiError {
    fn from(e: PlayError) -> Self {
        let code = match e {
            PlayError::NotWhitesTurn | PlayError::NotFinished => StatusCode::CONFLICT,
            _ => StatusCode::UNPROCESSABLE_ENTITY,
        };
        ApiError(code, e.to_string())
    }
}

impl From<CliError> for ApiError {
    fn from(e: CliError) -> Self {
        ApiError(StatusCode::BAD_REQUEST, e.to_string())
    }
}

#[derive(Serialize)]
struct ModelInfo {
    name: &'static str,
    width: u32,
    height: u32,
    depth: u32,
}

async fn list_models() -> Json<Vec<ModelInfo>> {
    let list = models::all()
        .into_iter()
        .filter_map(|m| {
            let g = Game::bundled(m.name).ok()?;
            Some(ModelInfo {
                name: m.name,
                width: g.instance.width,
                height: g.instance.height,
                depth: g.instance.depth,
            })
        })
        .collect();
    Json(list)
}

/// Either `model` or both `domain` and `problem` (BDDL text).
#[derive(Deserialize)]
pub struct CreateSession {
    model: Option<String>,
    domain: Option<String>,
    problem: Option<String>,
    depth: Option<u32>,
    #[serde(default)]
    mode: Mode,
}

#[derive(Serialize)]
struct SessionView {
    id: Uuid,
    width: u32,
    height: u32,
    depth: u32,
    ply: u32,
    mode: Mode,
    status: Status,
    /// Row 1 first, `B`/`W`/`.` per cell.
    board: Vec<String>,
    white_actions: Vec<String>,
    legal_white_moves: Vec<Move>,
    history: Vec<PlyRecord>,
}

fn view(id: Uuid, s: &PlaySession) -> SessionView {
    let r = s.rules();
    SessionView {
        id,
        width: r.width(),
        height: r.height(),
        depth: s.depth(),
        ply: s.ply(),
        mode: s.mode(),
        status: s.status(),
        board: render_rows(s.state()),
        white_actions: r.action_names(Side::White).to_vec(),
        legal_white_moves: s.legal_white_moves(),
        history: s.history().to_vec(),
    }
}

/// Oracle work can take a while; keep it off the async workers.
async fn blocking<T: Send + 'static>(f: impl FnOnce() -> T + Send + 'static) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))
}

async fn create_session(
    State(app): State<Arc<AppState>>,
    Json(req): Json<CreateSession>,
) -> Result<(StatusCode, Json<SessionView>), ApiError> {
    let game = match (&req.model, &req.domain, &req.problem) {
        (Some(name), None, None) => Game::bundled(name)?,
        (None, Some(d), Some(p)) => Game::from_text("custom", d, p, ("domain", "problem"))?,
        _ => {
            return Err(ApiError(
                StatusCode::BAD_REQUEST,
                "give either 'model' or both 'domain' and 'problem'".into(),
            ))
        }
    }
    .with_depth(req.depth);
    if req.depth == Some(0) {
        return Err(ApiError(StatusCode::BAD_REQUEST, "depth must be at least 1".into()));
    }
    let rules = Rules::new(&game.domain, &game.instance)
        .map_err(|e| ApiError(StatusCode::BAD_REQUEST, e.to_string()))?;
    if app.sessions.lock().unwrap().len() >= MAX_SESSIONS {
        return Err(ApiError(StatusCode::SERVICE_UNAVAILABLE, "too many sessions".into()));
    }
    let mode = req.mode;
    let session = blocking(move || PlaySession::start(Arc::new(rules), mode)).await??;
    let id = Uuid::new_v4();
    let out = view(id, &session);
    app.sessions.lock().unwrap().insert(id, Arc::new(Mutex::new(session)));
    Ok((StatusCode::CREATED, Json(out)))
}

fn lookup(app: &AppState, id: Uuid) -> Result<Shared, ApiError> {
    app.sessions
        .lock()
        .unwrap()
        .get(&id)
        .cloned()
        .ok_or_else(|| ApiError(StatusCode::NOT_FOUND, format!("no session {id}")))
}

async fn show_session(
    State(app): State<Arc<AppState>>,
    Path(id): Path<Uuid>,
) -> Result<Json<SessionView>, ApiError> {
    let s = lookup(&app, id)?;
    let s = s.lock().unwrap();
    Ok(Json(view(id, &s)))
}

async fn drop_session(State(app): State<Arc<AppState>>, Path(id): Path<Uuid>) -> Result<StatusCode, ApiError> {
    match app.sessions.lock().unwrap().remove(&id) {
        Some(_) => Ok(StatusCode::NO_CONTENT),
        None => Err(ApiError(StatusCode::NOT_FOUND, format!("no session {id}"))),
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
pub enum ActionRef {
    Index(usize),
    Name(String),
}

/// `{"action": "left", "x": 2, "y": 3}`; `action` may be an index and
/// defaults to White's first action. `{"text": "left 2 3"}` also works.
#[derive(Deserialize)]
pub struct MoveRequest {
    action: Option<ActionRef>,
    x: Option<u32>,
    y: Option<u32>,
    text: Option<String>,
}

fn requested_move(s: &PlaySession, req: &MoveRequest) -> Result<Move, ApiError> {
    if let Some(text) = &req.text {
        return Ok(s.parse_move(text)?);
    }
    let (Some(x), Some(y)) = (req.x, req.y) else {
        return Err(ApiError(StatusCode::BAD_REQUEST, "a move needs 'x' and 'y' or 'text'".into()));
    };
    let action = match &req.action {
        None => 0,
        Some(ActionRef::Index(i)) => *i,
        Some(ActionRef::Name(n)) => s
            .rules()
            .action_names(Side::White)
            .iter()
            .position(|a| a == n)
            .ok_or_else(|| ApiError(StatusCode::UNPROCESSABLE_ENTITY, format!("unknown action '{n}'")))?,
    };
    Ok(Move {
        side: Side::White,
        action,
        x,
        y,
    })
}

async fn submit_move(
    State(app): State<Arc<AppState>>,
    Path(id): Path<Uuid>,
    Json(req): Json<MoveRequest>,
) -> Result<Json<SessionView>, ApiError> {
    let shared = lookup(&app, id)?;
    blocking(move || {
        let mut s = shared.lock().unwrap();
        let mv = requested_move(&s, &req)?;
        s.submit_white_move(mv)?;
        Ok(Json(view(id, &s)))
    })
    .await?
}

async fn transcript(State(app): State<Arc<AppState>>, Path(id): Path<Uuid>) -> Result<Response, ApiError> {
    let s = lookup(&app, id)?;
    let t = s.lock().unwrap().transcript();
    Ok(Json(t).into_response())
}

/// Serve until Ctrl-C.
pub async fn serve(addr: &str) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router())
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
