//! Domain types for the routing network and the planner's scenario inputs.

mod network;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use network::{build_network, build_network_with, Network, NetworkOptions, OriginCounty};

/// Origin states whose airport pool spans the whole southern region rather
/// than the state alone.
pub const ORIGIN_AIRPORT_REGION: [&str; 14] = [
    "KS", "OK", "TX", "LA", "AR", "MO", "KY", "TN", "MS", "AL", "GA", "FL", "SC", "NC",
];

pub const DEFAULT_AIRCRAFT_CAPACITY: u32 = 4;
pub const DEFAULT_VEHICLE_CAPACITY: u32 = 2;
pub const DEFAULT_RIDE_HAIL_RATE: f64 = 0.40;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct County {
    pub id: String,
    pub state: String,
    pub name: String,
    pub latitude: f64,
    pub longitude: f64,
    /// Women aged 15-44 in low-income counties.
    pub eligible_population: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AirportKind {
    Commercial,
    General,
}

impl AirportKind {
    pub fn as_str(self) -> &'static str {
        match self {
            AirportKind::Commercial => "commercial",
            AirportKind::General => "general",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Origin,
    Destination,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Airport {
    pub id: String,
    pub kind: AirportKind,
    pub state: String,
    pub county_id: String,
    pub latitude: f64,
    pub longitude: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Clinic {
    pub id: String,
    pub name: String,
    pub state: String,
    pub county_id: String,
    pub latitude: f64,
    pub longitude: f64,
    pub capacity_per_day: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    PrivateVehicle,
    RideHail,
    None,
}

impl Mode {
    pub const GROUND: [Mode; 2] = [Mode::PrivateVehicle, Mode::RideHail];

    pub fn short(self) -> &'static str {
        match self {
            Mode::PrivateVehicle => "pv",
            Mode::RideHail => "rh",
            Mode::None => "-",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArcKind {
    AccessGeneral,
    AccessCommercial,
    GaFlight,
    CommercialFlight,
    EgressGeneral,
    EgressCommercial,
    Direct,
}

impl ArcKind {
    pub const ALL: [ArcKind; 7] = [
        ArcKind::AccessGeneral,
        ArcKind::AccessCommercial,
        ArcKind::GaFlight,
        ArcKind::CommercialFlight,
        ArcKind::EgressGeneral,
        ArcKind::EgressCommercial,
        ArcKind::Direct,
    ];

    /// The scenario time limit this arc class is held to.
    pub fn bound(self, limits: &TimeLimits) -> f64 {
        match self {
            ArcKind::AccessGeneral
            | ArcKind::AccessCommercial
            | ArcKind::EgressGeneral
            | ArcKind::EgressCommercial => limits.access_egress_min,
            ArcKind::GaFlight | ArcKind::CommercialFlight => limits.flight_min,
            ArcKind::Direct => limits.direct_min,
        }
    }

    pub fn is_ground(self) -> bool {
        !matches!(self, ArcKind::GaFlight | ArcKind::CommercialFlight)
    }
}

impl fmt::Display for ArcKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ArcKind::AccessGeneral => "access_general",
            ArcKind::AccessCommercial => "access_commercial",
            ArcKind::GaFlight => "ga_flight",
            ArcKind::CommercialFlight => "commercial_flight",
            ArcKind::EgressGeneral => "egress_general",
            ArcKind::EgressCommercial => "egress_commercial",
            ArcKind::Direct => "direct",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub kind: ArcKind,
    pub tail: String,
    pub head: String,
    pub mode: Mode,
    pub travel_time_min: f64,
    /// Average fare; commercial flights only.
    pub fare: Option<f64>,
    /// Daily seats; commercial flights only.
    pub seats: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeLimits {
    pub access_egress_min: f64,
    pub flight_min: f64,
    pub direct_min: f64,
}

fn default_aircraft_capacity() -> u32 {
    DEFAULT_AIRCRAFT_CAPACITY
}
fn default_vehicle_capacity() -> u32 {
    DEFAULT_VEHICLE_CAPACITY
}
fn default_ride_hail_rate() -> f64 {
    DEFAULT_RIDE_HAIL_RATE
}

/// Everything a planner supplies for one day of operations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub origin_state: String,
    pub destination_state: String,
    pub open_clinic_ids: BTreeSet<String>,
    #[serde(default)]
    pub pilots_standby: u32,
    #[serde(default = "default_aircraft_capacity")]
    pub aircraft_capacity: u32,
    #[serde(default = "default_vehicle_capacity")]
    pub vehicle_capacity: u32,
    /// USD per day.
    pub budget: f64,
    pub max_access_egress_min: f64,
    pub max_flight_min: f64,
    pub max_direct_min: f64,
    /// Volunteer drivers per origin county.
    #[serde(default)]
    pub origin_drivers: BTreeMap<String, u32>,
    /// Volunteer drivers per destination county.
    #[serde(default)]
    pub destination_drivers: BTreeMap<String, u32>,
    #[serde(default)]
    pub companions: bool,
    /// USD per minute.
    #[serde(default = "default_ride_hail_rate")]
    pub ride_hail_rate: f64,
    /// Persons/day per origin county; replaces the population-based estimate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub demand_overrides: Option<BTreeMap<String, u32>>,
    /// Persons/day per open clinic; replaces the dataset capacity.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clinic_capacity_overrides: Option<BTreeMap<String, u32>>,
}

impl Scenario {
    pub fn time_limits(&self) -> TimeLimits {
        TimeLimits {
            access_egress_min: self.max_access_egress_min,
            flight_min: self.max_flight_min,
            direct_min: self.max_direct_min,
        }
    }

    /// 1 when every traveler brings a companion, else 0.
    pub fn companion_factor(&self) -> u32 {
        u32::from(self.companions) + 1
    }

    /// The budget row's right-hand side: `B / (y + 1)`.
    pub fn effective_budget(&self) -> f64 {
        self.budget / f64::from(self.companion_factor())
    }

    /// Field-level checks that need no reference data.
    pub fn validate(&self) -> Result<(), ModelError> {
        let mut errors = Vec::new();
        for (field, code) in [
            ("origin_state", &self.origin_state),
            ("destination_state", &self.destination_state),
        ] {
            if code.len() != 2 || !code.chars().all(|c| c.is_ascii_uppercase()) {
                errors.push(FieldError::new(field, format!("expected a 2-letter state code, got {code:?}")));
            }
        }
        if self.origin_state == self.destination_state {
            errors.push(FieldError::new(
                "destination_state",
                "origin and destination states must differ",
            ));
        }
        if !(self.budget.is_finite() && self.budget >= 0.0) {
            errors.push(FieldError::new("budget", "must be a finite amount >= 0"));
        }
        if !(self.ride_hail_rate.is_finite() && self.ride_hail_rate >= 0.0) {
            errors.push(FieldError::new("ride_hail_rate", "must be a finite rate >= 0"));
        }
        for (field, v) in [
            ("max_access_egress_min", self.max_access_egress_min),
            ("max_flight_min", self.max_flight_min),
            ("max_direct_min", self.max_direct_min),
        ] {
            if !(v.is_finite() && v > 0.0) {
                errors.push(FieldError::new(field, "time limit must be > 0 minutes"));
            }
        }
        if errors.is_empty() {
            Ok(())
        } else {
            Err(ModelError::Validation(errors))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldError {
    pub field: String,
    pub message: String,
}

impl FieldError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unknown {kind}: {}", ids.join(", "))]
    NotFound { kind: &'static str, ids: Vec<String> },
    #[error("validation failed: {}", join_fields(.0))]
    Validation(Vec<FieldError>),
}

fn join_fields(errors: &[FieldError]) -> String {
    errors.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; ")
}

/// Daily demand from an eligible population and an annual abortion rate per
/// 1000 women: `population / 365 * rate / 1000`, rounded half-up.
///
/// The rate is applied to the daily population slice; since both are plain
/// scalings the order does not change the result.
pub fn estimate_demand(eligible_population: f64, rate_per_1000: f64) -> Result<u32, ModelError> {
    if !(eligible_population.is_finite() && eligible_population >= 0.0) {
        return Err(ModelError::InvalidArgument(format!(
            "eligible population must be >= 0, got {eligible_population}"
        )));
    }
    if !(rate_per_1000.is_finite() && rate_per_1000 >= 0.0) {
        return Err(ModelError::InvalidArgument(format!(
            "abortion rate must be >= 0, got {rate_per_1000}"
        )));
    }
    // One division keeps exact halves exact (e.g. 36500 * 5 / 365000 = 0.5).
    let daily = eligible_population * rate_per_1000 / 365_000.0;
    Ok((daily + 0.5).floor() as u32)
}

/// Capacity left for travelers when each brings a companion: `floor(raw / (y+1))`.
pub fn effective_capacity(raw: u32, companions: bool) -> u32 {
    raw / (u32::from(companions) + 1)
}
