//! Exhaustive path enumeration for small networks, independent of the LP
//! machinery.
//!
//! Every integer flow in the routing network decomposes into whole-person
//! paths (the graph is layered, so there are no cycles). Each person follows
//! one of: a direct drive; access -> GA flight -> egress; or access ->
//! commercial leg -> egress. The enumeration walks persons county by county,
//! choosing a multiset of paths, and keeps for each reachable resource-usage
//! vector the cheapest way to reach it. Paths with the same usage vector are
//! interchangeable, so only the cheapest one per footprint is kept.
//!
//! Time limits are enforced here directly from arc times, so the oracle also
//! serves unpruned networks.

use std::collections::HashMap;

use crate::formulation::Model;
use crate::model::{effective_capacity, ArcKind, Mode, Network, Scenario};

/// Refuse instances whose state table would exceed this many entries.
pub const ORACLE_STATE_LIMIT: usize = 5_000_000;

#[derive(Clone, Debug, PartialEq)]
pub enum OracleOutcome {
    /// Maximum persons moved, or minimum spend (effective dollars).
    Optimal(f64),
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("oracle state table exceeded {0} entries")]
pub struct OracleTooLarge(pub usize);

struct Resources {
    names: Vec<String>,
    caps: Vec<u32>,
}

impl Resources {
    fn index(&mut self, name: String, cap: u32) -> usize {
        if let Some(i) = self.names.iter().position(|n| *n == name) {
            return i;
        }
        self.names.push(name);
        self.caps.push(cap);
        self.names.len() - 1
    }
}

#[derive(Clone, Debug)]
struct PathClass {
    usage: Vec<(usize, u32)>,
    cost: f64,
}

fn within(t: f64, kind: ArcKind, network: &Network) -> bool {
    t <= kind.bound(&network.time_limits)
}

pub fn enumerate_optimum(
    network: &Network,
    scenario: &Scenario,
    model: Model,
) -> Result<OracleOutcome, OracleTooLarge> {
    let y = scenario.companions;
    let o = scenario.ride_hail_rate;
    let rh = |mode: Mode, t: f64| if mode == Mode::RideHail { o * t } else { 0.0 };
    let mut res = Resources {
        names: Vec::new(),
        caps: Vec::new(),
    };
    let ga_cap = effective_capacity(scenario.aircraft_capacity.saturating_mul(scenario.pilots_standby), y);
    let pool = |drivers: &std::collections::BTreeMap<String, u32>, county: &str| {
        effective_capacity(
            scenario
                .vehicle_capacity
                .saturating_mul(drivers.get(county).copied().unwrap_or(0)),
            y,
        )
    };

    // Paths per county, with usage given by resource index.
    let mut per_county: Vec<Vec<PathClass>> = Vec::new();
    for q in &network.counties {
        let qid = &q.county.id;
        let mut classes: HashMap<Vec<(usize, u32)>, f64> = HashMap::new();
        let mut add = |mut usage: Vec<(usize, u32)>, cost: f64| {
            usage.sort();
            // merge duplicate resources
            let mut merged: Vec<(usize, u32)> = Vec::new();
            for (r, n) in usage {
                match merged.last_mut() {
                    Some(last) if last.0 == r => last.1 += n,
                    _ => merged.push((r, n)),
                }
            }
            let entry = classes.entry(merged).or_insert(f64::INFINITY);
            if cost < *entry {
                *entry = cost;
            }
        };
        for c in &network.clinics {
            let clinic = res.index(format!("clinic:{}", c.id), c.capacity_per_day);
            for a in network.arcs_of(ArcKind::Direct) {
                if a.tail == *qid && a.head == c.id && within(a.travel_time_min, a.kind, network) {
                    let mut usage = vec![(clinic, 1)];
                    if a.mode == Mode::PrivateVehicle {
                        usage.push((res.index(format!("pv:{qid}"), pool(&scenario.origin_drivers, qid)), 1));
                    }
                    add(usage, rh(a.mode, a.travel_time_min));
                }
            }
            for (access_kind, flight_kind, egress_kind) in [
                (ArcKind::AccessGeneral, ArcKind::GaFlight, ArcKind::EgressGeneral),
                (ArcKind::AccessCommercial, ArcKind::CommercialFlight, ArcKind::EgressCommercial),
            ] {
                for acc in network.arcs_of(access_kind) {
                    if acc.tail != *qid || !within(acc.travel_time_min, acc.kind, network) {
                        continue;
                    }
                    for fly in network.arcs_of(flight_kind) {
                        if fly.tail != acc.head || !within(fly.travel_time_min, fly.kind, network) {
                            continue;
                        }
                        for egr in network.arcs_of(egress_kind) {
                            if egr.tail != fly.head || egr.head != c.id || !within(egr.travel_time_min, egr.kind, network) {
                                continue;
                            }
                            let mut usage = vec![(clinic, 1)];
                            if acc.mode == Mode::PrivateVehicle {
                                usage.push((res.index(format!("pv:{qid}"), pool(&scenario.origin_drivers, qid)), 1));
                            }
                            if egr.mode == Mode::PrivateVehicle {
                                let v = network.dest_airport_county(&egr.tail).unwrap_or_default().to_string();
                                let cap = pool(&scenario.destination_drivers, &v);
                                usage.push((res.index(format!("pv:{v}"), cap), 1));
                            }
                            let mut cost = rh(acc.mode, acc.travel_time_min) + rh(egr.mode, egr.travel_time_min);
                            if flight_kind == ArcKind::GaFlight {
                                usage.push((res.index("ga".into(), ga_cap), 1));
                            } else {
                                let seats = effective_capacity(fly.seats.unwrap_or(0), y);
                                usage.push((res.index(format!("leg:{}>{}", fly.tail, fly.head), seats), 1));
                                cost += fly.fare.unwrap_or(0.0);
                            }
                            add(usage, cost);
                        }
                    }
                }
            }
        }
        per_county.push(classes.into_iter().map(|(usage, cost)| PathClass { usage, cost }).collect::<Vec<_>>());
    }

    // A resource that every possible traveler together cannot exhaust never
    // binds; drop it from the state. Paths through an empty resource can
    // never be used.
    let mut reach = vec![0u32; res.caps.len()];
    for (q, classes) in network.counties.iter().zip(&per_county) {
        for r in 0..res.caps.len() {
            if classes.iter().any(|c| c.usage.iter().any(|&(i, _)| i == r)) {
                reach[r] += q.demand;
            }
        }
    }
    let mut slot = vec![None; res.caps.len()];
    let mut caps = Vec::new();
    for r in 0..res.caps.len() {
        if reach[r] > res.caps[r] {
            slot[r] = Some(caps.len());
            caps.push(res.caps[r]);
        }
    }
    let per_county: Vec<Vec<PathClass>> = per_county
        .into_iter()
        .map(|classes| {
            let mut merged: HashMap<Vec<(usize, u32)>, f64> = HashMap::new();
            for c in classes {
                if c.usage.iter().any(|&(r, n)| n > res.caps[r]) {
                    continue;
                }
                let usage: Vec<(usize, u32)> = c.usage.iter().filter_map(|&(r, n)| slot[r].map(|s| (s, n))).collect();
                let e = merged.entry(usage).or_insert(f64::INFINITY);
                if c.cost < *e {
                    *e = c.cost;
                }
            }
            let mut list: Vec<PathClass> = merged.into_iter().map(|(usage, cost)| PathClass { usage, cost }).collect();
            list.sort_by(|a, b| a.usage.cmp(&b.usage).then(a.cost.total_cmp(&b.cost)));
            list
        })
        .collect();

    // States: usage vector -> (persons moved, min cost). The key includes
    // the count so max-flow can trade persons against spend.
    let budget = scenario.effective_budget();
    let budget_ok = |cost: f64| model == Model::MinCost || crate::ip::satisfies(cost, crate::ip::Relation::Le, budget);
    type Key = (Vec<u8>, u32);
    let mut states: HashMap<Key, f64> = HashMap::new();
    states.insert((vec![0u8; caps.len()], 0), 0.0);

    for (qi, q) in network.counties.iter().enumerate() {
        // Persons moved from this county are tracked separately in `local`.
        let mut local: HashMap<(Vec<u8>, u32, u32), f64> = states
            .into_iter()
            .map(|((u, n), c)| ((u, n, 0), c))
            .collect();
        for class in &per_county[qi] {
            let mut frontier: Vec<((Vec<u8>, u32, u32), f64)> = local.iter().map(|(k, v)| (k.clone(), *v)).collect();
            while !frontier.is_empty() {
                let mut next = Vec::new();
                for ((usage, total, here), cost) in frontier {
                    if here >= q.demand {
                        continue;
                    }
                    let mut u = usage.clone();
                    let fits = class.usage.iter().all(|&(r, n)| {
                        let v = u32::from(u[r]) + n;
                        u[r] = v as u8;
                        v <= caps[r]
                    });
                    let c = cost + class.cost;
                    if !fits || !budget_ok(c) {
                        continue;
                    }
                    let key = (u, total + 1, here + 1);
                    match local.get(&key) {
                        Some(&old) if old <= c => {}
                        _ => {
                            local.insert(key.clone(), c);
                            next.push((key, c));
                        }
                    }
                }
                if local.len() > ORACLE_STATE_LIMIT {
                    return Err(OracleTooLarge(ORACLE_STATE_LIMIT));
                }
                frontier = next;
            }
        }
        states = HashMap::new();
        for ((u, total, here), c) in local {
            if model == Model::MinCost && here != q.demand {
                continue;
            }
            let e = states.entry((u, total)).or_insert(f64::INFINITY);
            if c < *e {
                *e = c;
            }
        }
    }

    Ok(match model {
        Model::MaxFlow => OracleOutcome::Optimal(states.keys().map(|k| k.1).max().map_or(0.0, f64::from)),
        Model::MinCost => match states.values().copied().min_by(f64::total_cmp) {
            Some(c) => OracleOutcome::Optimal(c),
            None => OracleOutcome::Infeasible,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{generate_fixture, random_scenario, FixtureShape};
    use crate::model::build_network;

    #[test]
    fn tiny_fixture_is_fast() {
        let shape = FixtureShape {
            counties: 2,
            clinics: 1,
            ..FixtureShape::tiny()
        };
        let data = generate_fixture(5, &shape);
        let scenario = random_scenario(5, &data);
        let network = build_network(&scenario, &data).unwrap();
        let start = std::time::Instant::now();
        enumerate_optimum(&network, &scenario, Model::MaxFlow).unwrap();
        enumerate_optimum(&network, &scenario, Model::MinCost).unwrap();
        assert!(start.elapsed().as_secs_f64() < 1.0);
    }

    #[test]
    fn zero_demand_min_cost_is_free() {
        let data = generate_fixture(1, &FixtureShape::tiny());
        let mut scenario = random_scenario(1, &data);
        scenario.demand_overrides = Some(data.counties.iter().filter(|c| c.state == "XO").map(|c| (c.id.clone(), 0)).collect());
        let network = build_network(&scenario, &data).unwrap();
        assert_eq!(enumerate_optimum(&network, &scenario, Model::MinCost).unwrap(), OracleOutcome::Optimal(0.0));
        assert_eq!(enumerate_optimum(&network, &scenario, Model::MaxFlow).unwrap(), OracleOutcome::Optimal(0.0));
    }
}
