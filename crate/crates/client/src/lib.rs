//! Thin async client for the ledger analytics service.
//!
//! One method per endpoint, all sharing a single JSON POST path. The client
//! owns no analytics logic; it exists so CLIs and tests talk to the service
//! through the same typed surface and error taxonomy.

pub mod wire;

use serde::de::DeserializeOwned;
use serde::Serialize;
use wire::*;

/// How a request failed, from the caller's point of view.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// The request itself was malformed — fix the invocation.
    Usage,
    /// Inputs were readable but unusable (missing file, bad CSV, empty
    /// ledger, unknown dataset…).
    Data,
    /// The service failed internally or the transport broke.
    Internal,
}

impl ErrorKind {
    fn parse(kind: &str) -> ErrorKind {
        match kind {
            "usage" => ErrorKind::Usage,
            "data" => ErrorKind::Data,
            _ => ErrorKind::Internal,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ClientError {
    #[error("transport: {0}")]
    Transport(#[from] reqwest::Error),
    #[error("{message}")]
    Api {
        status: u16,
        kind: ErrorKind,
        message: String,
    },
    #[error("undecodable response: {0}")]
    Decode(String),
}

impl ClientError {
    pub fn kind(&self) -> ErrorKind {
        match self {
            ClientError::Api { kind, .. } => *kind,
            _ => ErrorKind::Internal,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ApiClient {
    base: String,
    http: reqwest::Client,
}

impl ApiClient {
    /// `base` is the service root, e.g. `http://127.0.0.1:8645`.
    pub fn new(base: impl Into<String>) -> Self {
        let mut base = base.into();
        while base.ends_with('/') {
            base.pop();
        }
        ApiClient {
            base,
            http: reqwest::Client::new(),
        }
    }

    pub fn base_url(&self) -> &str {
        &self.base
    }

    async fn decode<T: DeserializeOwned>(
        response: reqwest::Response,
    ) -> Result<T, ClientError> {
        let status = response.status();
        let body = response.text().await?;
        if status.is_success() {
            return serde_json::from_str(&body)
                .map_err(|e| ClientError::Decode(format!("{e} in {body:.200}")));
        }
        let (kind, message) = match serde_json::from_str::<ApiErrorDto>(&body) {
            Ok(envelope) => (
                ErrorKind::parse(&envelope.error.kind),
                envelope.error.message,
            ),
            Err(_) => (
                if status.is_client_error() {
                    ErrorKind::Usage
                } else {
                    ErrorKind::Internal
                },
                format!("HTTP {status}: {body:.200}"),
            ),
        };
        Err(ClientError::Api {
            status: status.as_u16(),
            kind,
            message,
        })
    }

    async fn post<Req: Serialize, Resp: DeserializeOwned>(
        &self,
        path: &str,
        request: &Req,
    ) -> Result<Resp, ClientError> {
        let response = self
            .http
            .post(format!("{}{path}", self.base))
            .json(request)
            .send()
            .await?;
        Self::decode(response).await
    }

    async fn get<Resp: DeserializeOwned>(&self, path: &str) -> Result<Resp, ClientError> {
        let response = self.http.get(format!("{}{path}", self.base)).send().await?;
        Self::decode(response).await
    }

    pub async fn health(&self) -> Result<HealthDto, ClientError> {
        self.get("/v1/health").await
    }

    pub async fn convert(&self, request: &ConvertRequest) -> Result<ConvertResponse, ClientError> {
        self.post("/v1/convert", request).await
    }

    pub async fn reconstruct(
        &self,
        request: &ReconstructRequest,
    ) -> Result<ReconstructResponse, ClientError> {
        self.post("/v1/reconstruct", request).await
    }

    pub async fn velocity(
        &self,
        request: &VelocityRequest,
    ) -> Result<VelocityResponse, ClientError> {
        self.post("/v1/velocity", request).await
    }

    pub async fn decompose(
        &self,
        request: &DecomposeRequest,
    ) -> Result<DecomposeResponse, ClientError> {
        self.post("/v1/decompose", request).await
    }

    pub async fn balances(
        &self,
        request: &BalancesRequest,
    ) -> Result<BalancesResponse, ClientError> {
        self.post("/v1/balances", request).await
    }

    pub async fn holders(&self, request: &HoldersRequest) -> Result<HoldersResponse, ClientError> {
        self.post("/v1/holders", request).await
    }

    pub async fn wrapped_share(
        &self,
        request: &WrappedShareRequest,
    ) -> Result<WrappedShareResponse, ClientError> {
        self.post("/v1/wrapped-share", request).await
    }

    pub async fn supply(&self, request: &SupplyRequest) -> Result<SupplyResponse, ClientError> {
        self.post("/v1/supply", request).await
    }

    pub async fn generate(
        &self,
        request: &GenerateRequest,
    ) -> Result<GenerateResponse, ClientError> {
        self.post("/v1/generate", request).await
    }

    pub async fn selfcheck(
        &self,
        request: &SelfcheckRequest,
    ) -> Result<SelfcheckResponse, ClientError> {
        self.post("/v1/selfcheck", request).await
    }

    pub async fn fetch_logs(
        &self,
        request: &FetchLogsRequest,
    ) -> Result<FetchSummaryDto, ClientError> {
        self.post("/v1/fetch/logs", request).await
    }

    pub async fn fetch_state(
        &self,
        request: &FetchStateRequest,
    ) -> Result<FetchSummaryDto, ClientError> {
        self.post("/v1/fetch/state", request).await
    }

    pub async fn create_dataset(
        &self,
        request: &CreateDatasetRequest,
    ) -> Result<DatasetDto, ClientError> {
        self.post("/v1/datasets", request).await
    }

    pub async fn list_datasets(&self) -> Result<DatasetListResponse, ClientError> {
        self.get("/v1/datasets").await
    }

    pub async fn get_dataset(&self, id: &str) -> Result<DatasetDto, ClientError> {
        self.get(&format!("/v1/datasets/{id}")).await
    }

    pub async fn delete_dataset(&self, id: &str) -> Result<(), ClientError> {
        let response = self
            .http
            .delete(format!("{}/v1/datasets/{id}", self.base))
            .send()
            .await?;
        if response.status().is_success() {
            Ok(())
        } else {
            Self::decode::<serde_json::Value>(response).await.map(|_| ())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_url_is_normalized() {
        assert_eq!(ApiClient::new("http://x:1/").base_url(), "http://x:1");
        assert_eq!(ApiClient::new("http://x:1///").base_url(), "http://x:1");
        assert_eq!(ApiClient::new("http://x:1").base_url(), "http://x:1");
    }

    #[test]
    fn error_kinds_parse_with_internal_fallback() {
        assert_eq!(ErrorKind::parse("usage"), ErrorKind::Usage);
        assert_eq!(ErrorKind::parse("data"), ErrorKind::Data);
        assert_eq!(ErrorKind::parse("internal"), ErrorKind::Internal);
        assert_eq!(ErrorKind::parse("???"), ErrorKind::Internal);
    }

    #[test]
    fn source_dto_shapes_deserialize_distinctly() {
        let path: wire::SourceDto = serde_json::from_str(r#"{"path":"a.csv"}"#).unwrap();
        assert!(matches!(path, wire::SourceDto::Path { .. }));
        let dataset: wire::SourceDto = serde_json::from_str(r#"{"dataset":"d-1"}"#).unwrap();
        assert!(matches!(dataset, wire::SourceDto::Dataset { .. }));
        let inline: wire::SourceDto = serde_json::from_str(
            r#"{"records":[{"block":1,"log_index":0,"from":"0x00","to":"0x01","value":"5"}]}"#,
        )
        .unwrap();
        assert!(matches!(inline, wire::SourceDto::Inline { .. }));
    }

    #[test]
    fn schedule_dto_accepts_list_and_range() {
        let blocks: wire::ScheduleDto = serde_json::from_str("[1,2,3]").unwrap();
        assert!(matches!(blocks, wire::ScheduleDto::Blocks(ref v) if v.len() == 3));
        let range: wire::ScheduleDto =
            serde_json::from_str(r#"{"start":10,"end":20,"stride":5}"#).unwrap();
        assert!(matches!(range, wire::ScheduleDto::Range { stride: 5, .. }));
    }
}
