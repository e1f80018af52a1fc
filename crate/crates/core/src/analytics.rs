//! Planner-facing digests of a solved program: throughput, modal split,
//! spend and unused resources.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::formulation::{spend, FlowKey, Formulation, Spend, VariableCatalog};
use crate::ip::Solution;
use crate::model::{effective_capacity, AirportKind, ArcKind, Network, Scenario};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModalSplit {
    pub commercial: u64,
    pub general_aviation: u64,
    pub direct: u64,
}

impl ModalSplit {
    pub fn total(&self) -> u64 {
        self.commercial + self.general_aviation + self.direct
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegSeats {
    pub origin_airport: String,
    pub dest_airport: String,
    pub seats: u32,
}

/// Unused resources in physical units: a traveler with a companion occupies
/// two seats, and vehicles are whole cars of `w` seats.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResourceReport {
    /// Nominal dollars: `B - (y+1) * spend`.
    #[serde(with = "crate::money")]
    pub budget_unused: f64,
    /// Budget-row slack, in `B / (y+1)` units.
    #[serde(with = "crate::money")]
    pub budget_unused_effective: f64,
    pub ga_seats_unused: u32,
    /// Whole aircraft left on the ground: `floor(ga_seats_unused / z)`.
    pub aircraft_unused: u32,
    pub origin_vehicles_unused: BTreeMap<String, u32>,
    pub destination_vehicles_unused: BTreeMap<String, u32>,
    pub commercial_seats_unused: Vec<LegSeats>,
    pub clinic_capacity_unused: BTreeMap<String, u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanReport {
    pub total_transported: u64,
    pub demand_total: u64,
    pub satisfaction: f64,
    pub modal_split: ModalSplit,
    pub spend: Spend,
    pub excess: ResourceReport,
    pub per_county: BTreeMap<String, u64>,
    pub per_clinic: BTreeMap<String, u64>,
}

fn count(x: i64) -> u64 {
    u64::try_from(x).unwrap_or(0)
}

pub fn modal_distribution(values: &[i64], catalog: &VariableCatalog) -> ModalSplit {
    let mut split = ModalSplit::default();
    for (id, key) in catalog.iter() {
        let x = count(values[id.0]);
        match key {
            FlowKey::Flight {
                kind: AirportKind::Commercial,
                ..
            } => split.commercial += x,
            FlowKey::Flight {
                kind: AirportKind::General,
                ..
            } => split.general_aviation += x,
            FlowKey::Direct { .. } => split.direct += x,
            _ => {}
        }
    }
    split
}

/// Transported over demand; 1 when there is no demand.
pub fn demand_satisfaction(total_transported: u64, network: &Network) -> f64 {
    let demand = network.total_demand();
    if demand == 0 {
        1.0
    } else {
        (total_transported as f64 / demand as f64).clamp(0.0, 1.0)
    }
}

/// Converts row slacks into the excess-resource report.
pub fn resource_slacks(
    sol: &Solution,
    formulation: &Formulation,
    network: &Network,
    scenario: &Scenario,
) -> ResourceReport {
    let ip = &formulation.program;
    let factor = scenario.companion_factor();
    let y = scenario.companions;
    // Persons on a row = rhs - slack (capacity rows are all `<=`).
    let persons = |label: &str| -> u32 {
        match (ip.constraint(label), sol.slack(label)) {
            (Some(row), Some(slack)) => (row.rhs - slack).round().max(0.0) as u32,
            // Row never emitted: nothing can use it.
            _ => 0,
        }
    };
    let vehicles_unused = |drivers: u32, pv_persons: u32| -> u32 {
        let w = scenario.vehicle_capacity.max(1);
        drivers.saturating_sub((pv_persons * factor).div_ceil(w))
    };

    let origin_vehicles_unused = network
        .counties
        .iter()
        .map(|q| {
            let id = &q.county.id;
            let n = scenario.origin_drivers.get(id).copied().unwrap_or(0);
            (id.clone(), vehicles_unused(n, persons(&format!("c2[{id}]"))))
        })
        .collect();
    let destination_vehicles_unused = network
        .dest_counties
        .iter()
        .map(|v| {
            let n = scenario.destination_drivers.get(v).copied().unwrap_or(0);
            (v.clone(), vehicles_unused(n, persons(&format!("c3[{v}]"))))
        })
        .collect();

    let ga_raw = scenario.aircraft_capacity.saturating_mul(scenario.pilots_standby);
    let ga_seats_unused = ga_raw.saturating_sub(persons("c4") * factor);
    let aircraft_unused = ga_seats_unused.checked_div(scenario.aircraft_capacity).unwrap_or(0);

    let commercial_seats_unused = network
        .arcs_of(ArcKind::CommercialFlight)
        .map(|a| {
            let raw = a.seats.unwrap_or(0);
            let used = persons(&format!("c5[{},{}]", a.tail, a.head));
            debug_assert!(used <= effective_capacity(raw, y));
            LegSeats {
                origin_airport: a.tail.clone(),
                dest_airport: a.head.clone(),
                seats: raw.saturating_sub(used * factor),
            }
        })
        .collect();

    let clinic_capacity_unused = network
        .clinics
        .iter()
        .map(|c| {
            let used = persons(&format!("c6[{}]", c.id));
            (c.id.clone(), c.capacity_per_day.saturating_sub(used))
        })
        .collect();

    let spent = spend(&sol.values, &formulation.catalog, network, scenario);
    let effective = (scenario.effective_budget() - spent.total).max(0.0);
    ResourceReport {
        budget_unused: (scenario.budget - f64::from(factor) * spent.total).max(0.0),
        budget_unused_effective: effective,
        ga_seats_unused,
        aircraft_unused,
        origin_vehicles_unused,
        destination_vehicles_unused,
        commercial_seats_unused,
        clinic_capacity_unused,
    }
}

/// Full report for an optimal solution of either model.
pub fn build_report(sol: &Solution, formulation: &Formulation, network: &Network, scenario: &Scenario) -> PlanReport {
    let catalog = &formulation.catalog;
    let mut per_county: BTreeMap<String, u64> =
        network.counties.iter().map(|q| (q.county.id.clone(), 0)).collect();
    let mut per_clinic: BTreeMap<String, u64> = network.clinics.iter().map(|c| (c.id.clone(), 0)).collect();
    for (id, key) in catalog.iter() {
        if let FlowKey::Total { county, clinic } = key {
            let x = count(sol.values[id.0]);
            *per_county.entry(county.clone()).or_default() += x;
            *per_clinic.entry(clinic.clone()).or_default() += x;
        }
    }
    let total_transported = per_clinic.values().sum();
    PlanReport {
        total_transported,
        demand_total: network.total_demand(),
        satisfaction: demand_satisfaction(total_transported, network),
        modal_split: modal_distribution(&sol.values, catalog),
        spend: spend(&sol.values, catalog, network, scenario),
        excess: resource_slacks(sol, formulation, network, scenario),
        per_county,
        per_clinic,
    }
}
