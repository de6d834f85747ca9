//! HTTP service driving the live positioning loop.
//!
//! Endpoints:
//!
//! - `POST /session` → `{id}`
//! - `POST /session/{id}/frame` with `{png}` (base64) → feedback, and the
//!   recognition outcome on the frame that completes a valid run
//! - `POST /recognize` with `{png, thr_value?, thr_op?}` → outcome
//! - `GET /health` → `ok`

use std::collections::HashMap;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use axum::body::Bytes;
use axum::extract::rejection::BytesRejection;
use axum::extract::{DefaultBodyLimit, Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use base64::Engine as _;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use tokio::sync::Semaphore;
use uuid::Uuid;

use payscan::extract::RecognitionOutcome;
use payscan::imgproc::{GrayImage, RectI};
use payscan::io::decode_png;
use payscan::pipeline::{PipelineConfig, Recognizer};
use payscan::screen::{assess_frame, FeedbackTracker, FrameFeedback, ScreenDetection};

pub const BODY_LIMIT: usize = 16 * 1024 * 1024;
pub const SESSION_TTL: Duration = Duration::from_secs(60);

#[derive(Debug)]
struct Session {
    tracker: FeedbackTracker,
    last: Option<ScreenDetection>,
    touched: Instant,
}

type SessionHandle = Arc<tokio::sync::Mutex<Session>>;

pub struct AppState {
    cfg: PipelineConfig,
    recognizer: Arc<Recognizer>,
    sessions: Mutex<HashMap<Uuid, SessionHandle>>,
    workers: Arc<Semaphore>,
    ttl: Duration,
}

impl AppState {
    pub fn new(cfg: PipelineConfig) -> payscan::Result<Self> {
        let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
        Ok(Self {
            recognizer: Arc::new(Recognizer::new(cfg.clone())?),
            cfg,
            sessions: Mutex::new(HashMap::new()),
            workers: Arc::new(Semaphore::new(workers)),
            ttl: SESSION_TTL,
        })
    }

    pub fn with_ttl(mut self, ttl: Duration) -> Self {
        self.ttl = ttl;
        self
    }

    pub fn session_count(&self) -> usize {
        self.sessions.lock().unwrap().len()
    }

    /// Drops sessions idle for longer than the TTL. Sessions busy with a
    /// frame are kept.
    pub fn expire_idle(&self) {
        let now = Instant::now();
        self.sessions.lock().unwrap().retain(|_, s| match s.try_lock() {
            Ok(s) => now.duration_since(s.touched) < self.ttl,
            Err(_) => true,
        });
    }

    /// Runs `f` on the blocking pool, at most one job per CPU.
    async fn blocking<T: Send + 'static>(
        &self,
        f: impl FnOnce(&Recognizer) -> payscan::Result<T> + Send + 'static,
    ) -> Result<T, ApiError> {
        let _permit = self.workers.clone().acquire_owned().await.map_err(ApiError::internal)?;
        let rec = self.recognizer.clone();
        tokio::task::spawn_blocking(move || f(&rec))
            .await
            .map_err(ApiError::internal)?
            .map_err(ApiError::internal)
    }
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        Self {
            status,
            message: message.into(),
        }
    }

    fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, message)
    }

    fn internal(e: impl std::fmt::Display) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(serde_json::json!({ "error": self.message }))).into_response()
    }
}

/// JSON body whose rejections are JSON too; 400 for bad content, 413 over
/// the limit.
fn parse_body<T: DeserializeOwned>(body: Result<Bytes, BytesRejection>) -> Result<T, ApiError> {
    let bytes = body.map_err(|e| ApiError::new(e.status(), e.body_text()))?;
    serde_json::from_slice(&bytes).map_err(|e| ApiError::bad_request(format!("malformed body: {e}")))
}

fn decode_frame(png: &str) -> Result<GrayImage, ApiError> {
    let bytes = base64::engine::general_purpose::STANDARD
        .decode(png.trim())
        .map_err(|e| ApiError::bad_request(format!("png is not base64: {e}")))?;
    decode_png(&bytes).map_err(|e| ApiError::bad_request(format!("png does not decode: {e}")))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameRequest {
    pub png: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecognizeRequest {
    pub png: String,
    pub thr_value: Option<f64>,
    pub thr_op: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SessionCreated {
    pub id: Uuid,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FrameResponse {
    pub status: FrameFeedback,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rect: Option<RectI>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub focus: Option<f64>,
    /// Valid frames in the current run; equals the required count on the
    /// frame that completes it.
    pub consecutive: u32,
    pub ready: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outcome: Option<RecognitionOutcome>,
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/health", get(|| async { "ok" }))
        .route("/session", post(create_session))
        .route("/session/{id}/frame", post(post_frame))
        .route("/recognize", post(recognize))
        .layer(DefaultBodyLimit::max(BODY_LIMIT))
        .with_state(state)
}

async fn create_session(State(state): State<Arc<AppState>>) -> Json<SessionCreated> {
    state.expire_idle();
    let id = Uuid::new_v4();
    let session = Session {
        tracker: FeedbackTracker::default(),
        last: None,
        touched: Instant::now(),
    };
    state
        .sessions
        .lock()
        .unwrap()
        .insert(id, Arc::new(tokio::sync::Mutex::new(session)));
    Json(SessionCreated { id })
}

async fn post_frame(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Result<Bytes, BytesRejection>,
) -> Result<Json<FrameResponse>, ApiError> {
    state.expire_idle();
    let id: Uuid = id
        .parse()
        .map_err(|_| ApiError::new(StatusCode::NOT_FOUND, "unknown session"))?;
    let handle = state
        .sessions
        .lock()
        .unwrap()
        .get(&id)
        .cloned()
        .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, "unknown session"))?;
    // Held for the whole update: one writer per session.
    let mut session = handle.lock().await;
    session.touched = Instant::now();

    let req: FrameRequest = parse_body(body)?;
    let frame = Arc::new(decode_frame(&req.png)?);
    let screen_cfg = state.cfg.screen;
    let f = frame.clone();
    let (det, status) = state
        .blocking(move |rec| {
            let det = rec.detect(&f)?;
            let status = assess_frame(det.as_ref(), f.dimensions(), &screen_cfg);
            Ok((det, status))
        })
        .await?;

    let (tracker, ready) = session.tracker.update(status);
    session.tracker = tracker;
    session.last = det;
    let consecutive = if ready { tracker.required() } else { tracker.consecutive() };

    let outcome = match (ready, det) {
        (true, Some(det)) => Some(state.blocking(move |rec| rec.recognize(&frame, &det)).await?),
        _ => None,
    };
    session.touched = Instant::now();
    Ok(Json(FrameResponse {
        status,
        rect: det.map(|d| d.rect),
        angle: det.map(|d| d.angle),
        focus: det.map(|d| d.focus),
        consecutive,
        ready,
        outcome,
    }))
}

async fn recognize(
    State(state): State<Arc<AppState>>,
    body: Result<Bytes, BytesRejection>,
) -> Result<Json<RecognitionOutcome>, ApiError> {
    let req: RecognizeRequest = parse_body(body)?;
    let frame = decode_frame(&req.png)?;
    let mut cfg = state.cfg.clone();
    if let Some(t) = req.thr_value {
        cfg.extract.value_threshold = t;
    }
    if let Some(t) = req.thr_op {
        cfg.extract.operation_threshold = t;
    }
    cfg.validate().map_err(|e| ApiError::bad_request(e.to_string()))?;
    let custom = cfg != state.cfg;
    let outcome = state
        .blocking(move |rec| {
            let own;
            let rec = if custom {
                own = Recognizer::new(cfg)?;
                &own
            } else {
                rec
            };
            Ok(rec
                .detect_and_recognize(&frame)?
                .map(|(_, o)| o)
                .unwrap_or_else(RecognitionOutcome::empty))
        })
        .await?;
    Ok(Json(outcome))
}

/// Serves on 127.0.0.1 until interrupted.
pub async fn serve(port: u16, cfg: PipelineConfig) -> anyhow::Result<()> {
    let state = Arc::new(AppState::new(cfg)?);
    let reaper = state.clone();
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(Duration::from_secs(10));
        loop {
            tick.tick().await;
            reaper.expire_idle();
        }
    });
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", port)).await?;
    log::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
