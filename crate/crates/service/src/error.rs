//! Error taxonomy at the HTTP boundary.
//!
//! Three kinds, chosen for what the caller should do next: `usage` (fix the
//! request), `data` (fix the inputs), `internal` (file a bug). Every
//! non-2xx response carries the same JSON envelope so clients never have to
//! guess at formats.

use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use microvel_client::wire::{ApiErrorBody, ApiErrorDto};
use microvel_core::{
    AnalyticsError, ConfigError, CsvError, FetchError, LedgerError, ReconstructError, ReplayError,
};

#[derive(Debug)]
pub struct ApiError {
    pub status: StatusCode,
    pub kind: &'static str,
    pub message: String,
}

impl ApiError {
    pub fn usage(message: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            kind: "usage",
            message: message.into(),
        }
    }

    pub fn data(message: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::UNPROCESSABLE_ENTITY,
            kind: "data",
            message: message.into(),
        }
    }

    pub fn not_found(message: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::NOT_FOUND,
            kind: "data",
            message: message.into(),
        }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::INTERNAL_SERVER_ERROR,
            kind: "internal",
            message: message.into(),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = ApiErrorDto {
            error: ApiErrorBody {
                kind: self.kind.to_string(),
                message: self.message,
            },
        };
        (self.status, Json(body)).into_response()
    }
}

impl From<ConfigError> for ApiError {
    fn from(e: ConfigError) -> Self {
        ApiError::usage(e.to_string())
    }
}

impl From<CsvError> for ApiError {
    fn from(e: CsvError) -> Self {
        ApiError::data(e.to_string())
    }
}

impl From<LedgerError> for ApiError {
    fn from(e: LedgerError) -> Self {
        ApiError::data(e.to_string())
    }
}

impl From<ReplayError> for ApiError {
    fn from(e: ReplayError) -> Self {
        ApiError::data(e.to_string())
    }
}

impl From<ReconstructError> for ApiError {
    fn from(e: ReconstructError) -> Self {
        ApiError::data(e.to_string())
    }
}

impl From<AnalyticsError> for ApiError {
    fn from(e: AnalyticsError) -> Self {
        match e {
            // The request asked for smoothing without saying what a day is.
            AnalyticsError::MissingTimeIndex => ApiError::usage(e.to_string()),
            other => ApiError::data(other.to_string()),
        }
    }
}

impl From<FetchError> for ApiError {
    fn from(e: FetchError) -> Self {
        ApiError::data(e.to_string())
    }
}

/// Runs closure-shaped work on the blocking pool and flattens the join.
pub async fn blocking<T: Send + 'static>(
    work: impl FnOnce() -> Result<T, ApiError> + Send + 'static,
) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(work)
        .await
        .map_err(|e| ApiError::internal(format!("worker panicked: {e}")))?
}
