use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::{
    estimate_demand, Airport, AirportKind, Arc, ArcKind, Clinic, County, FieldError, Mode,
    ModelError, Scenario, TimeLimits, ORIGIN_AIRPORT_REGION,
};
use crate::data::{ga_flight_time, ReferenceData};

/// An origin county with its daily demand filled in.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OriginCounty {
    #[serde(flatten)]
    pub county: County,
    pub demand: u32,
}

/// The node sets and surviving arcs for one scenario.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Network {
    pub origin_state: String,
    pub destination_state: String,
    /// Q
    pub counties: Vec<OriginCounty>,
    /// M
    pub origin_commercial: Vec<Airport>,
    /// G
    pub origin_general: Vec<Airport>,
    /// R
    pub dest_commercial: Vec<Airport>,
    /// P
    pub dest_general: Vec<Airport>,
    /// C: open clinics only, capacities after scenario overrides.
    pub clinics: Vec<Clinic>,
    /// V: counties containing a destination airport.
    pub dest_counties: Vec<String>,
    pub arcs: Vec<Arc>,
    pub time_limits: TimeLimits,
    /// False when arcs over their time bound were kept (see [`NetworkOptions`]).
    pub time_limits_applied: bool,
    /// Candidate arcs dropped for lack of a travel-time record, by arc kind.
    pub coverage_warnings: Vec<String>,
}

#[derive(Clone, Copy, Debug)]
pub struct NetworkOptions {
    /// Delete arcs whose travel time exceeds their class bound. Disabling
    /// this keeps every candidate arc so the bounds can be imposed as
    /// explicit rows instead.
    pub apply_time_limits: bool,
}

impl Default for NetworkOptions {
    fn default() -> Self {
        Self {
            apply_time_limits: true,
        }
    }
}

pub fn build_network(scenario: &Scenario, data: &ReferenceData) -> Result<Network, ModelError> {
    build_network_with(scenario, data, NetworkOptions::default())
}

pub fn build_network_with(
    scenario: &Scenario,
    data: &ReferenceData,
    options: NetworkOptions,
) -> Result<Network, ModelError> {
    scenario.validate()?;

    let known_states = data.states();
    let missing_states: Vec<String> = [&scenario.origin_state, &scenario.destination_state]
        .into_iter()
        .filter(|s| !known_states.contains(s))
        .cloned()
        .collect();
    if !missing_states.is_empty() {
        return Err(ModelError::NotFound {
            kind: "state",
            ids: missing_states,
        });
    }

    let unknown_clinics: Vec<String> = scenario
        .open_clinic_ids
        .iter()
        .filter(|id| data.clinic(id).is_none())
        .cloned()
        .collect();
    if !unknown_clinics.is_empty() {
        return Err(ModelError::NotFound {
            kind: "clinic",
            ids: unknown_clinics,
        });
    }

    let mut errors = Vec::new();
    let county_state: HashMap<&str, &str> = data
        .counties
        .iter()
        .map(|c| (c.id.as_str(), c.state.as_str()))
        .collect();
    for id in &scenario.open_clinic_ids {
        let clinic = data.clinic(id).expect("checked above");
        if clinic.state != scenario.destination_state {
            errors.push(FieldError::new(
                "open_clinic_ids",
                format!("clinic {id} is in {}, not {}", clinic.state, scenario.destination_state),
            ));
        }
    }
    let check_counties = |field: &str, keys: &mut dyn Iterator<Item = &String>, state: &str, errors: &mut Vec<FieldError>| {
        for id in keys {
            match county_state.get(id.as_str()) {
                Some(s) if *s == state => {}
                Some(s) => errors.push(FieldError::new(field, format!("county {id} is in {s}, not {state}"))),
                None => errors.push(FieldError::new(field, format!("unknown county {id}"))),
            }
        }
    };
    check_counties("origin_drivers", &mut scenario.origin_drivers.keys(), &scenario.origin_state, &mut errors);
    check_counties(
        "destination_drivers",
        &mut scenario.destination_drivers.keys(),
        &scenario.destination_state,
        &mut errors,
    );
    if let Some(overrides) = &scenario.demand_overrides {
        check_counties("demand_overrides", &mut overrides.keys(), &scenario.origin_state, &mut errors);
    }
    if let Some(overrides) = &scenario.clinic_capacity_overrides {
        for id in overrides.keys() {
            if !scenario.open_clinic_ids.contains(id) {
                errors.push(FieldError::new(
                    "clinic_capacity_overrides",
                    format!("clinic {id} is not among the open clinics"),
                ));
            }
        }
    }
    if !errors.is_empty() {
        return Err(ModelError::Validation(errors));
    }

    // Q with demand.
    let mut origin: Vec<&County> = data
        .counties
        .iter()
        .filter(|c| c.state == scenario.origin_state)
        .collect();
    origin.sort_by(|a, b| a.id.cmp(&b.id));
    let overrides = scenario.demand_overrides.clone().unwrap_or_default();
    let rate = data.state_rate(&scenario.origin_state);
    let mut counties = Vec::with_capacity(origin.len());
    for c in origin {
        let demand = match (overrides.get(&c.id), rate) {
            (Some(&d), _) => d,
            (None, Some(rate)) => estimate_demand(c.eligible_population as f64, rate)?,
            (None, None) => {
                return Err(ModelError::NotFound {
                    kind: "state abortion rate",
                    ids: vec![scenario.origin_state.clone()],
                })
            }
        };
        counties.push(OriginCounty {
            county: c.clone(),
            demand,
        });
    }

    // Airport sets. Destination airports come from the destination state;
    // origin airports from the regional pool, never overlapping the former.
    let in_region = ORIGIN_AIRPORT_REGION.contains(&scenario.origin_state.as_str());
    let origin_pool = |a: &&Airport| {
        a.state != scenario.destination_state
            && if in_region {
                ORIGIN_AIRPORT_REGION.contains(&a.state.as_str())
            } else {
                a.state == scenario.origin_state
            }
    };
    let mut sorted_airports: Vec<&Airport> = data.airports.iter().collect();
    sorted_airports.sort_by(|a, b| a.id.cmp(&b.id));
    let pick = |kind: AirportKind, origin_side: bool| -> Vec<Airport> {
        sorted_airports
            .iter()
            .filter(|a| a.kind == kind)
            .filter(|a| {
                if origin_side {
                    origin_pool(a)
                } else {
                    a.state == scenario.destination_state
                }
            })
            .map(|a| (*a).clone())
            .collect()
    };
    let origin_commercial = pick(AirportKind::Commercial, true);
    let origin_general = pick(AirportKind::General, true);
    let dest_commercial = pick(AirportKind::Commercial, false);
    let dest_general = pick(AirportKind::General, false);

    let dest_counties: Vec<String> = dest_commercial
        .iter()
        .chain(&dest_general)
        .map(|a| a.county_id.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();

    let capacity_overrides = scenario.clinic_capacity_overrides.clone().unwrap_or_default();
    let clinics: Vec<Clinic> = scenario
        .open_clinic_ids
        .iter()
        .map(|id| {
            let mut c = data.clinic(id).expect("checked above").clone();
            if let Some(&cap) = capacity_overrides.get(id) {
                c.capacity_per_day = cap;
            }
            c
        })
        .collect();

    // Candidate arcs, in a fixed order.
    let limits = scenario.time_limits();
    let surface = data.surface_index();
    let flights = data.flight_index();
    let mut arcs = Vec::new();
    let mut missing: BTreeMap<ArcKind, usize> = BTreeMap::new();
    let keep = |arc: Arc, arcs: &mut Vec<Arc>| {
        if !options.apply_time_limits || arc.travel_time_min <= arc.kind.bound(&limits) {
            arcs.push(arc);
        }
    };
    let mut ground = |kind: ArcKind, tail: &str, head: &str, arcs: &mut Vec<Arc>| {
        for mode in Mode::GROUND {
            match surface.get(&(tail, head, mode)) {
                Some(&t) => keep(
                    Arc {
                        kind,
                        tail: tail.to_string(),
                        head: head.to_string(),
                        mode,
                        travel_time_min: t,
                        fare: None,
                        seats: None,
                    },
                    arcs,
                ),
                None => *missing.entry(kind).or_default() += 1,
            }
        }
    };

    for q in &counties {
        for g in &origin_general {
            ground(ArcKind::AccessGeneral, &q.county.id, &g.id, &mut arcs);
        }
        for m in &origin_commercial {
            ground(ArcKind::AccessCommercial, &q.county.id, &m.id, &mut arcs);
        }
    }
    for p in &dest_general {
        for c in &clinics {
            ground(ArcKind::EgressGeneral, &p.id, &c.id, &mut arcs);
        }
    }
    for r in &dest_commercial {
        for c in &clinics {
            ground(ArcKind::EgressCommercial, &r.id, &c.id, &mut arcs);
        }
    }
    for q in &counties {
        for c in &clinics {
            ground(ArcKind::Direct, &q.county.id, &c.id, &mut arcs);
        }
    }
    for g in &origin_general {
        for p in &dest_general {
            keep(
                Arc {
                    kind: ArcKind::GaFlight,
                    tail: g.id.clone(),
                    head: p.id.clone(),
                    mode: Mode::None,
                    travel_time_min: f64::from(ga_flight_time(g, p)),
                    fare: None,
                    seats: None,
                },
                &mut arcs,
            );
        }
    }
    for m in &origin_commercial {
        for r in &dest_commercial {
            match flights.get(&(m.id.as_str(), r.id.as_str())) {
                Some(leg) => keep(
                    Arc {
                        kind: ArcKind::CommercialFlight,
                        tail: m.id.clone(),
                        head: r.id.clone(),
                        mode: Mode::None,
                        travel_time_min: leg.avg_time_min,
                        fare: Some(leg.avg_fare),
                        seats: Some(leg.seats),
                    },
                    &mut arcs,
                ),
                None => *missing.entry(ArcKind::CommercialFlight).or_default() += 1,
            }
        }
    }
    arcs.sort_by(|a, b| {
        (a.kind, &a.tail, &a.head, a.mode).cmp(&(b.kind, &b.tail, &b.head, b.mode))
    });

    let coverage_warnings: Vec<String> = missing
        .into_iter()
        .map(|(kind, n)| format!("{kind}: {n} candidate arc(s) have no travel-time record"))
        .collect();
    for w in &coverage_warnings {
        tracing::debug!("{w}");
    }

    Ok(Network {
        origin_state: scenario.origin_state.clone(),
        destination_state: scenario.destination_state.clone(),
        counties,
        origin_commercial,
        origin_general,
        dest_commercial,
        dest_general,
        clinics,
        dest_counties,
        arcs,
        time_limits: limits,
        time_limits_applied: options.apply_time_limits,
        coverage_warnings,
    })
}

impl Network {
    pub fn arcs_of(&self, kind: ArcKind) -> impl Iterator<Item = &Arc> {
        self.arcs.iter().filter(move |a| a.kind == kind)
    }

    /// Destination airport id -> county it sits in (b_{r,v}, b_{p,v}).
    pub fn dest_airport_county(&self, airport_id: &str) -> Option<&str> {
        self.dest_commercial
            .iter()
            .chain(&self.dest_general)
            .find(|a| a.id == airport_id)
            .map(|a| a.county_id.as_str())
    }

    pub fn total_demand(&self) -> u64 {
        self.counties.iter().map(|c| u64::from(c.demand)).sum()
    }

    /// Arcs whose travel time exceeds their class bound. Always empty when
    /// time limits were applied at build time.
    pub fn over_limit_arcs(&self) -> impl Iterator<Item = &Arc> {
        self.arcs
            .iter()
            .filter(move |a| a.travel_time_min > a.kind.bound(&self.time_limits))
    }
}
