//! HTTP service.
//!
//! | route | body | reply |
//! |---|---|---|
//! | `POST /generate_with_speaker_module` | `{"prompt", "speaker_module"}` | `{"output"}` |
//! | `POST /annotate` | transcript JSONL or JSON array | score card |
//! | `POST /analyze_graph` | graph JSON | loops and drift nodes |
//! | `GET /health` | | `{"status": "ok"}` |
//!
//! Errors reply with `{"code", "message", "detail"?}`.

use std::sync::Arc;

use axum::extract::State;
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use tokio::net::TcpListener;

use super::service;
use super::InterfaceError;
use crate::dialogue::LlmClient;

#[derive(Clone)]
pub struct AppState {
    client: Arc<dyn LlmClient>,
}

impl AppState {
    pub fn new(client: Arc<dyn LlmClient>) -> Self {
        AppState { client }
    }
}

impl IntoResponse for InterfaceError {
    fn into_response(self) -> Response {
        let status = if self.is_validation() {
            StatusCode::BAD_REQUEST
        } else {
            match self.code() {
                "LlmUnavailable" => StatusCode::BAD_GATEWAY,
                _ => StatusCode::INTERNAL_SERVER_ERROR,
            }
        };
        (status, Json(self.body())).into_response()
    }
}

fn json_text(body: String) -> Response {
    ([(header::CONTENT_TYPE, "application/json")], body).into_response()
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/generate_with_speaker_module", post(generate))
        .route("/annotate", post(annotate))
        .route("/analyze_graph", post(analyze_graph))
        .route("/health", get(health))
        .with_state(state)
}

async fn generate(State(state): State<AppState>, body: String) -> Result<Response, InterfaceError> {
    let prepared = service::prepare_generate(&body)?;
    let client = state.client.clone();
    let reply = tokio::task::spawn_blocking(move || prepared.run(client.as_ref()))
        .await
        .map_err(|e| InterfaceError::io("generation task", std::io::Error::other(e)))??;
    Ok(Json(reply).into_response())
}

async fn annotate(body: String) -> Result<Response, InterfaceError> {
    Ok(json_text(service::annotate_json(&body)?))
}

async fn analyze_graph(body: String) -> Result<Response, InterfaceError> {
    Ok(json_text(service::analyze_graph_json(&body)?))
}

async fn health() -> Json<serde_json::Value> {
    Json(serde_json::json!({"status": "ok"}))
}

/// Serves until `shutdown` resolves.
pub async fn serve_on(
    listener: TcpListener,
    state: AppState,
    shutdown: impl std::future::Future<Output = ()> + Send + 'static,
) -> Result<(), InterfaceError> {
    let addr = listener
        .local_addr()
        .map_err(|e| InterfaceError::io("listener", e))?;
    axum::serve(listener, router(state))
        .with_graceful_shutdown(shutdown)
        .await
        .map_err(|e| InterfaceError::io(addr.to_string(), e))
}

/// Binds `addr` and serves until Ctrl-C.
pub async fn serve(addr: &str, state: AppState) -> Result<(), InterfaceError> {
    let listener = TcpListener::bind(addr)
        .await
        .map_err(|e| InterfaceError::io(addr, e))?;
    serve_on(listener, state, async {
        let _ = tokio::signal::ctrl_c().await;
    })
    .await
}
