//! HTTP service exposing the replay engine: reconstruction, velocity and
//! category analytics, holder series, synthetic ledgers, a reference
//! self-check, and on-chain fetchers, all over JSON.
//!
//! Numbers wider than 53 bits travel as decimal strings (see the wire
//! types in `microvel-client`). Errors come back as a
//! `{"error":{"kind","message"}}` envelope: `usage` (400) for requests
//! that can't mean anything, `data` (422/404) for well-formed requests
//! the underlying history can't satisfy, `internal` (500) otherwise.

pub mod error;
pub mod registry;
pub mod resolve;
pub mod routes;

pub use error::ApiError;
pub use registry::{AppState, StoredDataset};

use axum::routing::{get, post};
use axum::Router;
use std::net::SocketAddr;
use tokio::net::TcpListener;
use tokio::task::JoinHandle;

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/v1/health", get(routes::health))
        .route("/v1/convert", post(routes::convert))
        .route("/v1/reconstruct", post(routes::reconstruct))
        .route("/v1/velocity", post(routes::velocity))
        .route("/v1/decompose", post(routes::decompose))
        .route("/v1/balances", post(routes::balances))
        .route("/v1/holders", post(routes::holders))
        .route("/v1/wrapped-share", post(routes::wrapped_share))
        .route("/v1/supply", post(routes::supply))
        .route("/v1/generate", post(routes::generate))
        .route("/v1/selfcheck", post(routes::selfcheck))
        .route("/v1/fetch/logs", post(routes::fetch_logs))
        .route("/v1/fetch/state", post(routes::fetch_state))
        .route(
            "/v1/datasets",
            post(routes::create_dataset).get(routes::list_datasets),
        )
        .route(
            "/v1/datasets/:id",
            get(routes::get_dataset).delete(routes::delete_dataset),
        )
        .with_state(state)
}

/// Serves on an already-bound listener until the process exits.
pub async fn serve(listener: TcpListener) -> std::io::Result<()> {
    let addr = listener.local_addr()?;
    tracing::info!(%addr, "listening");
    axum::serve(listener, router(AppState::default())).await
}

/// Binds an ephemeral localhost port and serves in a background task.
/// Used by the CLI (and tests) to run without a standing deployment.
pub async fn spawn_ephemeral() -> std::io::Result<(SocketAddr, JoinHandle<()>)> {
    let listener = TcpListener::bind(("127.0.0.1", 0)).await?;
    let addr = listener.local_addr()?;
    let app = router(AppState::default());
    let handle = tokio::spawn(async move {
        if let Err(e) = axum::serve(listener, app).await {
            tracing::error!(error = %e, "embedded server exited");
        }
    });
    Ok((addr, handle))
}
