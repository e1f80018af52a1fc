//! Typed client for the routeplan HTTP service.

use reqwest::StatusCode;
use routeplan_core::api::{ErrorBody, Health, ReferenceKind, ReferenceRows, StoredScenario, StoredSolution};
use routeplan_core::formulation::Model;
use routeplan_core::model::Scenario;
use serde::de::DeserializeOwned;

#[derive(Debug, thiserror::Error)]
pub enum ClientError {
    #[error("{status}: {} ({})", body.message, body.code)]
    Api { status: StatusCode, body: ErrorBody },
    #[error("transport: {0}")]
    Transport(#[from] reqwest::Error),
    #[error("decoding response: {0}")]
    Decode(#[from] serde_json::Error),
}

impl ClientError {
    pub fn status(&self) -> Option<StatusCode> {
        match self {
            Self::Api { status, .. } => Some(*status),
            _ => None,
        }
    }

    pub fn body(&self) -> Option<&ErrorBody> {
        match self {
            Self::Api { body, .. } => Some(body),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Client {
    base: String,
    http: reqwest::Client,
}

impl Client {
    /// `base` is e.g. `http://127.0.0.1:8080`; a trailing slash is ignored.
    pub fn new(base: impl Into<String>) -> Self {
        Self {
            base: base.into().trim_end_matches('/').to_string(),
            http: reqwest::Client::new(),
        }
    }

    pub fn base_url(&self) -> &str {
        &self.base
    }

    fn url(&self, path: &str) -> String {
        format!("{}{path}", self.base)
    }

    async fn decode<T: DeserializeOwned>(resp: reqwest::Response) -> Result<T, ClientError> {
        let status = resp.status();
        let bytes = resp.bytes().await?;
        if status.is_success() {
            return Ok(serde_json::from_slice(&bytes)?);
        }
        let body = serde_json::from_slice(&bytes).unwrap_or_else(|_| ErrorBody {
            code: "http".into(),
            message: String::from_utf8_lossy(&bytes).into_owned(),
            details: Vec::new(),
            diagnostic: None,
            solution_id: None,
        });
        Err(ClientError::Api { status, body })
    }

    pub async fn health(&self) -> Result<Health, ClientError> {
        Self::decode(self.http.get(self.url("/api/health")).send().await?).await
    }

    pub async fn create_scenario(&self, scenario: &Scenario) -> Result<StoredScenario, ClientError> {
        let resp = self.http.post(self.url("/api/scenarios")).json(scenario).send().await?;
        Self::decode(resp).await
    }

    pub async fn get_scenario(&self, id: &str) -> Result<StoredScenario, ClientError> {
        Self::decode(self.http.get(self.url(&format!("/api/scenarios/{id}"))).send().await?).await
    }

    /// An infeasible min-cost solve comes back as `ClientError::Api` with
    /// status 422 and the diagnostic in the body.
    pub async fn solve(&self, scenario_id: &str, model: Model) -> Result<StoredSolution, ClientError> {
        let url = self.url(&format!("/api/scenarios/{scenario_id}/solve?model={}", model.as_str()));
        Self::decode(self.http.post(url).send().await?).await
    }

    pub async fn get_solution(&self, id: &str) -> Result<StoredSolution, ClientError> {
        Self::decode(self.http.get(self.url(&format!("/api/solutions/{id}"))).send().await?).await
    }

    pub async fn reference(&self, kind: ReferenceKind, state: Option<&str>) -> Result<ReferenceRows, ClientError> {
        let name = match kind {
            ReferenceKind::States => "states",
            ReferenceKind::Clinics => "clinics",
            ReferenceKind::Counties => "counties",
            ReferenceKind::Airports => "airports",
        };
        let mut url = self.url(&format!("/api/reference/{name}"));
        if let Some(s) = state {
            url.push_str("?state=");
            url.push_str(s);
        }
        let resp = self.http.get(url).send().await?;
        // Untagged rows cannot tell an empty list apart, so decode by kind.
        let value: serde_json::Value = Self::decode(resp).await?;
        Ok(match kind {
            ReferenceKind::States => ReferenceRows::States(serde_json::from_value(value)?),
            ReferenceKind::Clinics => ReferenceRows::Clinics(serde_json::from_value(value)?),
            ReferenceKind::Counties => ReferenceRows::Counties(serde_json::from_value(value)?),
            ReferenceKind::Airports => ReferenceRows::Airports(serde_json::from_value(value)?),
        })
    }
}
