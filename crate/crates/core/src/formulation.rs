//! Translation of a [`Network`] and [`Scenario`] into the maximum-flow and
//! minimum-cost integer programs.
//!
//! Row labels:
//!
//! | label          | meaning                                                   |
//! |----------------|-----------------------------------------------------------|
//! | `c1[q]`        | outflow of county q vs. its demand (`<=`, or `=` for min cost) |
//! | `c2[q]`        | private-vehicle outflow of q vs. its driver pool          |
//! | `c3[v]`        | private-vehicle egress from airports in county v          |
//! | `c4`           | general-aviation seats                                    |
//! | `c5[m,r]`      | commercial seats on leg m -> r                            |
//! | `c6[c]`        | clinic capacity                                           |
//! | `c7`           | daily budget (max flow only)                              |
//! | `f1[q,m]`..`f4[q,p]` | flow balance at origin / destination airports       |
//! | `f5[q,c]`      | arrivals at c from q equal the aggregate `tot[q,c]`       |
//! | `t[<var>]`     | explicit time bound rows, only for unpruned networks      |
//!
//! Pool and seat capacities are divided by `y + 1` (floored) when travelers
//! bring companions; the budget is divided exactly.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::ip::{IntegerProgram, LinearConstraint, Relation, Sense, VarId};
use crate::model::{
    effective_capacity, AirportKind, Arc, ArcKind, FieldError, Mode, ModelError, Network, Scenario,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    MaxFlow,
    MinCost,
}

impl Model {
    pub fn as_str(self) -> &'static str {
        match self {
            Model::MaxFlow => "max_flow",
            Model::MinCost => "min_cost",
        }
    }
}

impl std::str::FromStr for Model {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "max_flow" | "max-flow" => Ok(Model::MaxFlow),
            "min_cost" | "min-cost" => Ok(Model::MinCost),
            other => Err(format!("unknown model {other:?} (expected max_flow or min_cost)")),
        }
    }
}

/// Typed identity of one decision variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FlowKey {
    /// x_{q,g,j} / x_{q,m,j}
    Access {
        county: String,
        airport: String,
        kind: AirportKind,
        mode: Mode,
    },
    /// x_{q,g,p} / x_{q,m,r}
    Flight {
        county: String,
        from: String,
        to: String,
        kind: AirportKind,
    },
    /// x_{q,p,c,j} / x_{q,r,c,j}
    Egress {
        county: String,
        airport: String,
        kind: AirportKind,
        clinic: String,
        mode: Mode,
    },
    /// x_{q,c,j}
    Direct {
        county: String,
        clinic: String,
        mode: Mode,
    },
    /// x_{q,c}
    Total { county: String, clinic: String },
}

impl FlowKey {
    pub fn county(&self) -> &str {
        match self {
            FlowKey::Access { county, .. }
            | FlowKey::Flight { county, .. }
            | FlowKey::Egress { county, .. }
            | FlowKey::Direct { county, .. }
            | FlowKey::Total { county, .. } => county,
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            FlowKey::Access { mode, .. } | FlowKey::Egress { mode, .. } | FlowKey::Direct { mode, .. } => *mode,
            FlowKey::Flight { .. } | FlowKey::Total { .. } => Mode::None,
        }
    }

    fn name(&self) -> String {
        match self {
            FlowKey::Access { county, airport, mode, .. } => format!("acc[{county},{airport},{}]", mode.short()),
            FlowKey::Flight { county, from, to, .. } => format!("fly[{county},{from},{to}]"),
            FlowKey::Egress {
                county,
                airport,
                clinic,
                mode,
                ..
            } => format!("egr[{county},{airport},{clinic},{}]", mode.short()),
            FlowKey::Direct { county, clinic, mode } => format!("dir[{county},{clinic},{}]", mode.short()),
            FlowKey::Total { county, clinic } => format!("tot[{county},{clinic}]"),
        }
    }
}

/// Bidirectional map between program variables and flow keys.
#[derive(Clone, Debug, Default)]
pub struct VariableCatalog {
    keys: Vec<FlowKey>,
    /// Index into `Network::arcs` for arc variables; `None` for aggregates.
    arcs: Vec<Option<usize>>,
    index: HashMap<FlowKey, VarId>,
}

impl VariableCatalog {
    fn push(&mut self, key: FlowKey, arc: Option<usize>, id: VarId) {
        debug_assert_eq!(id.0, self.keys.len());
        self.index.insert(key.clone(), id);
        self.keys.push(key);
        self.arcs.push(arc);
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn key(&self, id: VarId) -> &FlowKey {
        &self.keys[id.0]
    }

    pub fn id(&self, key: &FlowKey) -> Option<VarId> {
        self.index.get(key).copied()
    }

    pub fn arc<'n>(&self, id: VarId, network: &'n Network) -> Option<&'n Arc> {
        self.arcs[id.0].map(|i| &network.arcs[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, &FlowKey)> {
        self.keys.iter().enumerate().map(|(i, k)| (VarId(i), k))
    }
}

/// A built program together with its catalog.
#[derive(Clone, Debug)]
pub struct Formulation {
    pub model: Model,
    pub program: IntegerProgram,
    pub catalog: VariableCatalog,
}

pub fn build_max_flow(network: &Network, scenario: &Scenario) -> Result<Formulation, ModelError> {
    build(network, scenario, Model::MaxFlow)
}

pub fn build_min_cost(network: &Network, scenario: &Scenario) -> Result<Formulation, ModelError> {
    build(network, scenario, Model::MinCost)
}

pub fn build_model(network: &Network, scenario: &Scenario, model: Model) -> Result<Formulation, ModelError> {
    build(network, scenario, model)
}

fn check_match(network: &Network, scenario: &Scenario) -> Result<(), ModelError> {
    let mut errors = Vec::new();
    if network.origin_state != scenario.origin_state || network.destination_state != scenario.destination_state {
        errors.push(FieldError::new("network", "network was built for different states"));
    }
    if network.time_limits != scenario.time_limits() {
        errors.push(FieldError::new("network", "network was built with different time limits"));
    }
    let clinics: Vec<&String> = network.clinics.iter().map(|c| &c.id).collect();
    if !clinics.iter().copied().eq(scenario.open_clinic_ids.iter()) {
        errors.push(FieldError::new("network", "network was built for a different clinic set"));
    }
    if errors.is_empty() {
        Ok(())
    } else {
        Err(ModelError::Validation(errors))
    }
}

/// Cost of moving one person over the arc: fare for commercial legs,
/// `o * minutes` for ride hail, zero otherwise.
pub fn unit_cost(arc: &Arc, ride_hail_rate: f64) -> f64 {
    match (arc.kind, arc.mode) {
        (ArcKind::CommercialFlight, _) => arc.fare.unwrap_or(0.0),
        (_, Mode::RideHail) => ride_hail_rate * arc.travel_time_min,
        _ => 0.0,
    }
}

fn airport_kind(kind: ArcKind) -> AirportKind {
    match kind {
        ArcKind::AccessGeneral | ArcKind::GaFlight | ArcKind::EgressGeneral => AirportKind::General,
        _ => AirportKind::Commercial,
    }
}

fn build(network: &Network, scenario: &Scenario, model: Model) -> Result<Formulation, ModelError> {
    check_match(network, scenario)?;
    let y = scenario.companions;
    let sense = match model {
        Model::MaxFlow => Sense::Maximize,
        Model::MinCost => Sense::Minimize,
    };
    let mut ip = IntegerProgram::new(sense);
    let mut catalog = VariableCatalog::default();

    // Variables: arc variables per county in arc order, then aggregates.
    let mut by_county: Vec<Vec<VarId>> = vec![Vec::new(); network.counties.len()];
    for (qi, q) in network.counties.iter().enumerate() {
        let qid = &q.county.id;
        let upper = Some(i64::from(q.demand));
        for (ai, arc) in network.arcs.iter().enumerate() {
            let key = match arc.kind {
                ArcKind::AccessGeneral | ArcKind::AccessCommercial if &arc.tail == qid => FlowKey::Access {
                    county: qid.clone(),
                    airport: arc.head.clone(),
                    kind: airport_kind(arc.kind),
                    mode: arc.mode,
                },
                ArcKind::Direct if &arc.tail == qid => FlowKey::Direct {
                    county: qid.clone(),
                    clinic: arc.head.clone(),
                    mode: arc.mode,
                },
                ArcKind::GaFlight | ArcKind::CommercialFlight => FlowKey::Flight {
                    county: qid.clone(),
                    from: arc.tail.clone(),
                    to: arc.head.clone(),
                    kind: airport_kind(arc.kind),
                },
                ArcKind::EgressGeneral | ArcKind::EgressCommercial => FlowKey::Egress {
                    county: qid.clone(),
                    airport: arc.tail.clone(),
                    kind: airport_kind(arc.kind),
                    clinic: arc.head.clone(),
                    mode: arc.mode,
                },
                _ => continue,
            };
            let id = ip.add_variable(key.name(), 0, upper);
            catalog.push(key, Some(ai), id);
            by_county[qi].push(id);
        }
        for c in &network.clinics {
            let key = FlowKey::Total {
                county: qid.clone(),
                clinic: c.id.clone(),
            };
            let id = ip.add_variable(key.name(), 0, upper);
            catalog.push(key, None, id);
            by_county[qi].push(id);
        }
    }

    let arc_of = |id: VarId| catalog.arc(id, network);
    let add = |ip: &mut IntegerProgram, label: String, terms: Vec<(VarId, f64)>, rel: Relation, rhs: f64| {
        if !terms.is_empty() {
            ip.add_constraint(LinearConstraint::new(label, terms, rel, rhs));
        }
    };

    for (qi, q) in network.counties.iter().enumerate() {
        let vars = &by_county[qi];
        let outflow: Vec<(VarId, f64)> = vars
            .iter()
            .filter(|&&v| matches!(catalog.key(v), FlowKey::Access { .. } | FlowKey::Direct { .. }))
            .map(|&v| (v, 1.0))
            .collect();
        let pv_outflow: Vec<(VarId, f64)> = outflow
            .iter()
            .filter(|&&(v, _)| catalog.key(v).mode() == Mode::PrivateVehicle)
            .copied()
            .collect();
        let rel = match model {
            Model::MaxFlow => Relation::Le,
            Model::MinCost => Relation::Eq,
        };
        let qid = &q.county.id;
        if outflow.is_empty() && model == Model::MinCost && q.demand > 0 {
            // No way out of q at all: keep the row so infeasibility is explicit.
            let total = vars.iter().map(|&v| (v, 0.0)).collect::<Vec<_>>();
            ip.add_constraint(LinearConstraint::new(format!("c1[{qid}]"), total, rel, f64::from(q.demand)));
        } else {
            add(&mut ip, format!("c1[{qid}]"), outflow, rel, f64::from(q.demand));
        }
        let drivers = scenario.origin_drivers.get(qid).copied().unwrap_or(0);
        let cap = effective_capacity(scenario.vehicle_capacity.saturating_mul(drivers), y);
        add(&mut ip, format!("c2[{qid}]"), pv_outflow, Relation::Le, f64::from(cap));
    }

    for v in &network.dest_counties {
        let terms: Vec<(VarId, f64)> = catalog
            .iter()
            .filter(|(_, k)| match k {
                FlowKey::Egress { airport, mode, .. } => {
                    *mode == Mode::PrivateVehicle && network.dest_airport_county(airport) == Some(v.as_str())
                }
                _ => false,
            })
            .map(|(id, _)| (id, 1.0))
            .collect();
        let drivers = scenario.destination_drivers.get(v).copied().unwrap_or(0);
        let cap = effective_capacity(scenario.vehicle_capacity.saturating_mul(drivers), y);
        add(&mut ip, format!("c3[{v}]"), terms, Relation::Le, f64::from(cap));
    }

    let ga_terms: Vec<(VarId, f64)> = catalog
        .iter()
        .filter(|(_, k)| matches!(k, FlowKey::Flight { kind: AirportKind::General, .. }))
        .map(|(id, _)| (id, 1.0))
        .collect();
    let ga_cap = effective_capacity(scenario.aircraft_capacity.saturating_mul(scenario.pilots_standby), y);
    add(&mut ip, "c4".to_string(), ga_terms, Relation::Le, f64::from(ga_cap));

    for arc in network.arcs_of(ArcKind::CommercialFlight) {
        let terms: Vec<(VarId, f64)> = catalog
            .iter()
            .filter(|(_, k)| matches!(k, FlowKey::Flight { from, to, kind: AirportKind::Commercial, .. } if *from == arc.tail && *to == arc.head))
            .map(|(id, _)| (id, 1.0))
            .collect();
        let cap = effective_capacity(arc.seats.unwrap_or(0), y);
        add(&mut ip, format!("c5[{},{}]", arc.tail, arc.head), terms, Relation::Le, f64::from(cap));
    }

    for c in &network.clinics {
        let terms: Vec<(VarId, f64)> = catalog
            .iter()
            .filter(|(_, k)| matches!(k, FlowKey::Total { clinic, .. } if *clinic == c.id))
            .map(|(id, _)| (id, 1.0))
            .collect();
        add(&mut ip, format!("c6[{}]", c.id), terms, Relation::Le, f64::from(c.capacity_per_day));
    }

    let cost_terms: Vec<(VarId, f64)> = catalog
        .iter()
        .filter_map(|(id, _)| {
            let cost = arc_of(id).map_or(0.0, |a| unit_cost(a, scenario.ride_hail_rate));
            (cost != 0.0).then_some((id, cost))
        })
        .collect();
    if model == Model::MaxFlow {
        add(&mut ip, "c7".to_string(), cost_terms.clone(), Relation::Le, scenario.effective_budget());
    }

    // Flow balance.
    for q in &network.counties {
        let qid = q.county.id.as_str();
        let in_county = |k: &FlowKey| k.county() == qid;
        let balance = |label: String, inflow: &dyn Fn(&FlowKey) -> bool, outflow: &dyn Fn(&FlowKey) -> bool| {
            let terms: Vec<(VarId, f64)> = catalog
                .iter()
                .filter(|(_, k)| in_county(k))
                .filter_map(|(id, k)| {
                    if inflow(k) {
                        Some((id, 1.0))
                    } else if outflow(k) {
                        Some((id, -1.0))
                    } else {
                        None
                    }
                })
                .collect();
            (label, terms)
        };
        let mut rows = Vec::new();
        for (airports, kind, tag) in [
            (&network.origin_commercial, AirportKind::Commercial, "f1"),
            (&network.origin_general, AirportKind::General, "f2"),
        ] {
            for a in airports {
                rows.push(balance(
                    format!("{tag}[{qid},{}]", a.id),
                    &|k| matches!(k, FlowKey::Access { airport, kind: kk, .. } if *airport == a.id && *kk == kind),
                    &|k| matches!(k, FlowKey::Flight { from, kind: kk, .. } if *from == a.id && *kk == kind),
                ));
            }
        }
        for (airports, kind, tag) in [
            (&network.dest_commercial, AirportKind::Commercial, "f3"),
            (&network.dest_general, AirportKind::General, "f4"),
        ] {
            for a in airports {
                rows.push(balance(
                    format!("{tag}[{qid},{}]", a.id),
                    &|k| matches!(k, FlowKey::Flight { to, kind: kk, .. } if *to == a.id && *kk == kind),
                    &|k| matches!(k, FlowKey::Egress { airport, kind: kk, .. } if *airport == a.id && *kk == kind),
                ));
            }
        }
        for c in &network.clinics {
            rows.push(balance(
                format!("f5[{qid},{}]", c.id),
                &|k| matches!(k, FlowKey::Egress { clinic, .. } | FlowKey::Direct { clinic, .. } if *clinic == c.id),
                &|k| matches!(k, FlowKey::Total { clinic, .. } if *clinic == c.id),
            ));
        }
        for (label, terms) in rows {
            add(&mut ip, label, terms, Relation::Eq, 0.0);
        }
    }

    // Literal time rows x * (t - bound) <= 0 when the network kept long arcs.
    if !network.time_limits_applied {
        for (id, _) in catalog.iter() {
            if let Some(arc) = arc_of(id) {
                let excess = arc.travel_time_min - arc.kind.bound(&network.time_limits);
                if excess != 0.0 {
                    let label = format!("t[{}]", ip.variable(id).name);
                    add(&mut ip, label, vec![(id, excess)], Relation::Le, 0.0);
                }
            }
        }
    }

    match model {
        Model::MaxFlow => {
            let totals: Vec<(VarId, f64)> = catalog
                .iter()
                .filter(|(_, k)| matches!(k, FlowKey::Total { .. }))
                .map(|(id, _)| (id, 1.0))
                .collect();
            ip.set_objective(totals);
        }
        Model::MinCost => ip.set_objective(cost_terms),
    }

    Ok(Formulation {
        model,
        program: ip,
        catalog,
    })
}

/// Money spent by a plan, in model (effective) dollars.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Spend {
    #[serde(with = "crate::money")]
    pub fares: f64,
    #[serde(with = "crate::money")]
    pub ride_hail: f64,
    #[serde(with = "crate::money")]
    pub total: f64,
}

/// Fares plus ride-hail spend of a solved plan; equals the left-hand side of
/// the budget row.
pub fn spend(values: &[i64], catalog: &VariableCatalog, network: &Network, scenario: &Scenario) -> Spend {
    let mut out = Spend::default();
    for (id, _) in catalog.iter() {
        let x = values[id.0];
        if x == 0 {
            continue;
        }
        if let Some(arc) = catalog.arc(id, network) {
            let cost = x as f64 * unit_cost(arc, scenario.ride_hail_rate);
            match arc.kind {
                ArcKind::CommercialFlight => out.fares += cost,
                _ => out.ride_hail += cost,
            }
        }
    }
    out.total = out.fares + out.ride_hail;
    out
}

/// Sums solved values per flow-key group; handy for reports and tests.
pub fn totals_by<K: Ord>(
    values: &[i64],
    catalog: &VariableCatalog,
    mut group: impl FnMut(&FlowKey) -> Option<K>,
) -> BTreeMap<K, i64> {
    let mut out = BTreeMap::new();
    for (id, key) in catalog.iter() {
        if let Some(k) = group(key) {
            *out.entry(k).or_insert(0) += values[id.0];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ip::{brute_force_solve, solve, validate_solution, SolveStatus};
    use crate::model::{Clinic, County, OriginCounty, TimeLimits};

    /// One county, one clinic, direct PV and RH arcs of 60 minutes.
    fn tiny(demand: u32, capacity: u32) -> (Network, Scenario) {
        let limits = TimeLimits {
            access_egress_min: 120.0,
            flight_min: 180.0,
            direct_min: 300.0,
        };
        let arc = |mode| Arc {
            kind: ArcKind::Direct,
            tail: "Q".into(),
            head: "C".into(),
            mode,
            travel_time_min: 60.0,
            fare: None,
            seats: None,
        };
        let network = Network {
            origin_state: "XO".into(),
            destination_state: "XD".into(),
            counties: vec![OriginCounty {
                county: County {
                    id: "Q".into(),
                    state: "XO".into(),
                    name: "Q".into(),
                    latitude: 0.0,
                    longitude: 0.0,
                    eligible_population: 0,
                },
                demand,
            }],
            origin_commercial: vec![],
            origin_general: vec![],
            dest_commercial: vec![],
            dest_general: vec![],
            clinics: vec![Clinic {
                id: "C".into(),
                name: "C".into(),
                state: "XD".into(),
                county_id: "V".into(),
                latitude: 0.0,
                longitude: 0.0,
                capacity_per_day: capacity,
            }],
            dest_counties: vec![],
            arcs: vec![arc(Mode::PrivateVehicle), arc(Mode::RideHail)],
            time_limits: limits,
            time_limits_applied: true,
            coverage_warnings: vec![],
        };
        let scenario = Scenario {
            origin_state: "XO".into(),
            destination_state: "XD".into(),
            open_clinic_ids: ["C".to_string()].into(),
            pilots_standby: 0,
            aircraft_capacity: 4,
            vehicle_capacity: 2,
            budget: 30.0,
            max_access_egress_min: 120.0,
            max_flight_min: 180.0,
            max_direct_min: 300.0,
            origin_drivers: [("Q".to_string(), 1)].into(),
            destination_drivers: BTreeMap::new(),
            companions: false,
            ride_hail_rate: 0.40,
            demand_overrides: None,
            clinic_capacity_overrides: None,
        };
        (network, scenario)
    }

    fn both(f: &Formulation) -> (f64, f64) {
        let bb = solve(&f.program).unwrap();
        let bf = brute_force_solve(&f.program).unwrap();
        assert!(validate_solution(&f.program, &bb).is_empty());
        (bb.objective, bf.objective)
    }

    #[test]
    fn max_flow_examples() {
        let (net, mut s) = tiny(3, 5);
        let f = build_max_flow(&net, &s).unwrap();
        assert_eq!(both(&f), (3.0, 3.0));
        let sol = solve(&f.program).unwrap();
        let spent = spend(&sol.values, &f.catalog, &net, &s);
        assert!((spent.total - 24.0).abs() < 1e-9);
        assert!((spent.total - f.program.constraint("c7").unwrap().lhs(&sol.values)).abs() < 1e-9);

        s.budget = 20.0;
        let f = build_max_flow(&net, &s).unwrap();
        assert_eq!(both(&f), (2.0, 2.0));

        s.budget = 30.0;
        s.companions = true;
        let f = build_max_flow(&net, &s).unwrap();
        assert_eq!(both(&f), (1.0, 1.0));
    }

    #[test]
    fn min_cost_examples() {
        let (net, s) = tiny(3, 5);
        let f = build_min_cost(&net, &s).unwrap();
        assert!(f.program.constraint("c7").is_none());
        let (bb, bf) = both(&f);
        assert!((bb - 24.0).abs() < 1e-9 && (bf - 24.0).abs() < 1e-9);

        let (net, s) = tiny(2, 5);
        let f = build_min_cost(&net, &s).unwrap();
        assert_eq!(solve(&f.program).unwrap().objective, 0.0);

        let (net, s) = tiny(3, 2);
        let f = build_min_cost(&net, &s).unwrap();
        assert_eq!(solve(&f.program).unwrap().status, SolveStatus::Infeasible);
        assert_eq!(brute_force_solve(&f.program).unwrap().status, SolveStatus::Infeasible);
    }

    #[test]
    fn spend_of_all_free_plan_is_zero() {
        let (net, s) = tiny(2, 5);
        let f = build_max_flow(&net, &s).unwrap();
        let pv = f
            .catalog
            .id(&FlowKey::Direct {
                county: "Q".into(),
                clinic: "C".into(),
                mode: Mode::PrivateVehicle,
            })
            .unwrap();
        let mut values = vec![0; f.catalog.len()];
        values[pv.0] = 2;
        assert_eq!(spend(&values, &f.catalog, &net, &s), Spend::default());
    }

    #[test]
    fn one_ride_hail_rider_costs_24() {
        let (net, s) = tiny(1, 5);
        let f = build_max_flow(&net, &s).unwrap();
        let rh = f
            .catalog
            .id(&FlowKey::Direct {
                county: "Q".into(),
                clinic: "C".into(),
                mode: Mode::RideHail,
            })
            .unwrap();
        let mut values = vec![0; f.catalog.len()];
        values[rh.0] = 1;
        let s = spend(&values, &f.catalog, &net, &s);
        assert_eq!(format!("{:.2} {:.2} {:.2}", s.fares, s.ride_hail, s.total), "0.00 24.00 24.00");
    }

    #[test]
    fn mismatched_scenario_is_rejected() {
        let (net, mut s) = tiny(1, 5);
        s.max_direct_min = 200.0;
        assert!(matches!(build_max_flow(&net, &s), Err(ModelError::Validation(_))));
    }

    #[test]
    fn aggregates_exist_for_every_pair() {
        let (mut net, s) = tiny(2, 5);
        net.arcs.clear();
        let f = build_max_flow(&net, &s).unwrap();
        assert_eq!(f.catalog.len(), 1);
        assert!(matches!(f.catalog.key(VarId(0)), FlowKey::Total { .. }));
        assert_eq!(solve(&f.program).unwrap().objective, 0.0);
    }
}
