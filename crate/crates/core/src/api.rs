//! JSON shapes shared by the HTTP service, its client and the CLI.

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::analytics::PlanReport;
use crate::formulation::Model;
use crate::model::{Airport, Clinic, County, FieldError, Scenario};
use crate::plan::{Diagnostic, PlanStatus};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StoredScenario {
    pub id: String,
    pub scenario: Scenario,
    pub created_at: DateTime<Utc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StoredSolution {
    pub id: String,
    pub scenario_id: String,
    pub model: Model,
    pub status: PlanStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<PlanReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<Diagnostic>,
    pub solved_at: DateTime<Utc>,
    pub solve_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
    #[serde(default)]
    pub details: Vec<FieldError>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<Diagnostic>,
    /// Id of the stored infeasible solution, for min-cost 422 responses.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solution_id: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceKind {
    States,
    Clinics,
    Counties,
    Airports,
}

impl std::str::FromStr for ReferenceKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "states" => Ok(Self::States),
            "clinics" => Ok(Self::Clinics),
            "counties" => Ok(Self::Counties),
            "airports" => Ok(Self::Airports),
            other => Err(format!("unknown reference kind {other:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ReferenceRows {
    States(Vec<String>),
    Clinics(Vec<Clinic>),
    Counties(Vec<County>),
    Airports(Vec<Airport>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Health {
    pub status: String,
    pub counties: usize,
    pub clinics: usize,
    pub airports: usize,
}
