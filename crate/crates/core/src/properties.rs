//! Executable model properties. Each check solves one or more related
//! programs and returns `Err` with a description when the property fails.
//! Used by the test suites and the acceptance run.

use crate::analytics::modal_distribution;
use crate::data::ReferenceData;
use crate::formulation::{spend, Formulation, Model};
use crate::ip::{validate_solution, Relation, Solution, SolveLimits, SolveStatus};
use crate::model::{build_network, build_network_with, Network, NetworkOptions, Scenario};
use crate::oracle::{enumerate_optimum, OracleOutcome};
use crate::plan::solve_network;

/// Absolute tolerance for comparing money amounts and objectives.
pub const TOLERANCE: f64 = 1e-6;

pub type Check = Result<(), String>;

fn solved(network: &Network, scenario: &Scenario, model: Model) -> Result<(Formulation, Solution), String> {
    solve_network(network, scenario, model, &SolveLimits::default()).map_err(|e| format!("{model:?}: {e}"))
}

fn objective(network: &Network, scenario: &Scenario, model: Model) -> Result<Option<f64>, String> {
    let (_, sol) = solved(network, scenario, model)?;
    Ok(sol.is_optimal().then_some(sol.objective))
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOLERANCE
}

/// Branch-and-bound agrees with the exhaustive path enumeration.
pub fn oracle_equivalence(network: &Network, scenario: &Scenario, model: Model) -> Check {
    let (_, sol) = solved(network, scenario, model)?;
    let oracle = enumerate_optimum(network, scenario, model).map_err(|e| e.to_string())?;
    match (sol.status, oracle) {
        (SolveStatus::Optimal, OracleOutcome::Optimal(v)) if close(sol.objective, v) => Ok(()),
        (SolveStatus::Infeasible, OracleOutcome::Infeasible) => Ok(()),
        (status, oracle) => Err(format!(
            "{model:?}: branch-and-bound {status:?} {} vs enumeration {oracle:?}",
            sol.objective
        )),
    }
}

/// Flow balance exact, capacities respected, spend equals the budget row,
/// modal split sums to the objective.
pub fn solution_invariants(network: &Network, scenario: &Scenario, formulation: &Formulation, sol: &Solution) -> Check {
    if !sol.is_optimal() {
        return Ok(());
    }
    let ip = &formulation.program;
    let violations = validate_solution(ip, sol);
    if !violations.is_empty() {
        return Err(format!("{} violated rows, first {:?}", violations.len(), violations[0]));
    }
    for row in &ip.constraints {
        let lhs = row.lhs(&sol.values);
        let tag = row.label.split('[').next().unwrap_or("");
        match tag {
            "f1" | "f2" | "f3" | "f4" | "f5" if lhs != 0.0 => {
                return Err(format!("{} unbalanced: {lhs}", row.label));
            }
            "c1" | "c2" | "c3" | "c4" | "c5" | "c6" => {
                let ok = match row.relation {
                    Relation::Le => lhs <= row.rhs,
                    Relation::Eq => lhs == row.rhs,
                    Relation::Ge => lhs >= row.rhs,
                };
                if !ok {
                    return Err(format!("{}: {lhs} {} {}", row.label, row.relation, row.rhs));
                }
            }
            _ => {}
        }
    }
    let spent = spend(&sol.values, &formulation.catalog, network, scenario);
    if let Some(c7) = ip.constraint("c7") {
        let lhs = c7.lhs(&sol.values);
        if (spent.total - lhs).abs() > TOLERANCE {
            return Err(format!("spend {} != c7 lhs {lhs}", spent.total));
        }
    } else if formulation.model == Model::MaxFlow && spent.total.abs() > TOLERANCE {
        return Err(format!("no budget row but spend {}", spent.total));
    }
    if formulation.model == Model::MinCost && !close(spent.total, sol.objective) {
        return Err(format!("spend {} != min-cost objective {}", spent.total, sol.objective));
    }
    let split = modal_distribution(&sol.values, &formulation.catalog);
    let arrivals: i64 = formulation
        .catalog
        .iter()
        .filter(|(_, k)| matches!(k, crate::formulation::FlowKey::Total { .. }))
        .map(|(id, _)| sol.values[id.0])
        .sum();
    if split.total() as i64 != arrivals {
        return Err(format!("modal split {split:?} sums to {} not {arrivals}", split.total()));
    }
    if formulation.model == Model::MaxFlow && !close(arrivals as f64, sol.objective) {
        return Err(format!("arrivals {arrivals} != objective {}", sol.objective));
    }
    Ok(())
}

/// Invariants for both models of one scenario.
pub fn invariants(network: &Network, scenario: &Scenario) -> Check {
    for model in [Model::MaxFlow, Model::MinCost] {
        let (f, sol) = solved(network, scenario, model)?;
        solution_invariants(network, scenario, &f, &sol).map_err(|e| format!("{model:?}: {e}"))?;
    }
    Ok(())
}

/// Re-solving with the budget reduced by its nominal slack keeps the optimum.
pub fn budget_slack_resolve(network: &Network, scenario: &Scenario) -> Check {
    let (f, sol) = solved(network, scenario, Model::MaxFlow)?;
    if !sol.is_optimal() {
        return Err(format!("max flow not optimal: {:?}", sol.status));
    }
    let slack = match f.program.constraint("c7") {
        Some(_) => sol.slack("c7").unwrap_or(0.0),
        None => scenario.effective_budget(),
    };
    let mut tight = scenario.clone();
    tight.budget = (scenario.budget - slack * f64::from(scenario.companion_factor())).max(0.0);
    let again = objective(network, &tight, Model::MaxFlow)?;
    match again {
        Some(v) if close(v, sol.objective) => Ok(()),
        other => Err(format!(
            "budget {} -> {}: objective {} -> {other:?}",
            scenario.budget, tight.budget, sol.objective
        )),
    }
}

/// `y = true` on raw capacities equals `y = false` on pre-halved ones.
///
/// The halved scenario uses unit vehicle and aircraft capacities so the
/// pooled capacities can be floored exactly: `n' = floor(w n / 2)`,
/// `u' = floor(z u / 2)`, `f' = floor(f / 2)`, `B' = B / 2`.
pub fn companion_equivalence(data: &ReferenceData, scenario: &Scenario) -> Check {
    let mut with = scenario.clone();
    with.companions = true;
    let mut halved = scenario.clone();
    halved.companions = false;
    halved.vehicle_capacity = 1;
    halved.aircraft_capacity = 1;
    halved.pilots_standby = scenario.aircraft_capacity * scenario.pilots_standby / 2;
    halved.budget = scenario.budget / 2.0;
    for pool in [&mut halved.origin_drivers, &mut halved.destination_drivers] {
        for n in pool.values_mut() {
            *n = scenario.vehicle_capacity * *n / 2;
        }
    }
    let mut halved_data = data.clone();
    for leg in &mut halved_data.flights {
        leg.seats /= 2;
    }
    for model in [Model::MaxFlow, Model::MinCost] {
        let a = objective(&build_network(&with, data).map_err(|e| e.to_string())?, &with, model)?;
        let b = objective(&build_network(&halved, &halved_data).map_err(|e| e.to_string())?, &halved, model)?;
        let same = match (a, b) {
            (Some(a), Some(b)) => close(a, b),
            (None, None) => true,
            _ => false,
        };
        if !same {
            return Err(format!("{model:?}: companions {a:?} vs halved {b:?}"));
        }
    }
    Ok(())
}

/// Pruned network equals the unpruned one with explicit time rows.
pub fn pruning_equivalence(data: &ReferenceData, scenario: &Scenario) -> Check {
    let pruned = build_network(scenario, data).map_err(|e| e.to_string())?;
    let full = build_network_with(
        scenario,
        data,
        NetworkOptions {
            apply_time_limits: false,
        },
    )
    .map_err(|e| e.to_string())?;
    for model in [Model::MaxFlow, Model::MinCost] {
        let a = objective(&pruned, scenario, model)?;
        let b = objective(&full, scenario, model)?;
        let same = match (a, b) {
            (Some(a), Some(b)) => close(a, b),
            (None, None) => true,
            _ => false,
        };
        if !same {
            return Err(format!(
                "{model:?}: pruned {a:?} vs explicit rows {b:?} ({} extra arcs)",
                full.arcs.len() - pruned.arcs.len()
            ));
        }
    }
    Ok(())
}

/// One capacity or demand parameter, increased.
#[derive(Clone, Debug, PartialEq)]
pub enum Perturbation {
    Budget(f64),
    Pilots(u32),
    OriginDrivers(String, u32),
    DestinationDrivers(String, u32),
    Seats(String, String, u32),
    ClinicCapacity(String, u32),
    Demand(String, u32),
}

/// Applies `p` to a copy of the inputs.
pub fn perturb(
    data: &ReferenceData,
    scenario: &Scenario,
    network: &Network,
    p: &Perturbation,
) -> (ReferenceData, Scenario) {
    let mut data = data.clone();
    let mut s = scenario.clone();
    match p {
        Perturbation::Budget(d) => s.budget += d,
        Perturbation::Pilots(d) => s.pilots_standby += d,
        Perturbation::OriginDrivers(q, d) => *s.origin_drivers.entry(q.clone()).or_default() += d,
        Perturbation::DestinationDrivers(v, d) => *s.destination_drivers.entry(v.clone()).or_default() += d,
        Perturbation::Seats(m, r, d) => {
            for leg in &mut data.flights {
                if leg.origin_airport == *m && leg.dest_airport == *r {
                    leg.seats += d;
                }
            }
        }
        Perturbation::ClinicCapacity(c, d) => {
            let base = network.clinics.iter().find(|k| k.id == *c).map_or(0, |k| k.capacity_per_day);
            s.clinic_capacity_overrides
                .get_or_insert_with(Default::default)
                .insert(c.clone(), base + d);
        }
        Perturbation::Demand(q, d) => {
            let overrides = s.demand_overrides.get_or_insert_with(|| {
                network
                    .counties
                    .iter()
                    .map(|c| (c.county.id.clone(), c.demand))
                    .collect()
            });
            *overrides.entry(q.clone()).or_default() += d;
        }
    }
    (data, s)
}

/// Max flow never decreases when `p` is applied.
pub fn monotonicity(data: &ReferenceData, scenario: &Scenario, p: &Perturbation) -> Check {
    let network = build_network(scenario, data).map_err(|e| e.to_string())?;
    let base = objective(&network, scenario, Model::MaxFlow)?.ok_or("base max flow not optimal")?;
    let (data2, s2) = perturb(data, scenario, &network, p);
    let net2 = build_network(&s2, &data2).map_err(|e| e.to_string())?;
    let after = objective(&net2, &s2, Model::MaxFlow)?.ok_or("perturbed max flow not optimal")?;
    if after + TOLERANCE < base {
        Err(format!("{p:?}: max flow fell from {base} to {after}"))
    } else {
        Ok(())
    }
}

/// Max flow with the budget row dropped: everything the network can move.
pub fn unbudgeted_max_flow(network: &Network, scenario: &Scenario) -> Result<f64, String> {
    let mut f = crate::formulation::build_max_flow(network, scenario).map_err(|e| e.to_string())?;
    f.program.constraints.retain(|c| c.label != "c7");
    let sol = crate::ip::solve(&f.program).map_err(|e| e.to_string())?;
    Ok(sol.objective)
}

/// How min cost relates to max flow on one scenario.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConsistencyFacts {
    pub demand: f64,
    pub max_flow: f64,
    pub unbudgeted_max_flow: f64,
    pub min_cost: Option<f64>,
}

impl ConsistencyFacts {
    /// The budget alone keeps max flow below demand.
    pub fn budget_binds(&self) -> bool {
        self.max_flow + TOLERANCE < self.demand && close(self.unbudgeted_max_flow, self.demand)
    }
}

pub fn consistency_facts(network: &Network, scenario: &Scenario) -> Result<ConsistencyFacts, String> {
    Ok(ConsistencyFacts {
        demand: network.total_demand() as f64,
        max_flow: objective(network, scenario, Model::MaxFlow)?.ok_or("max flow not optimal")?,
        unbudgeted_max_flow: unbudgeted_max_flow(network, scenario)?,
        min_cost: objective(network, scenario, Model::MinCost)?,
    })
}

/// Min cost and max flow agree about demand:
///
/// - min cost is infeasible iff the network without its budget row cannot
///   move all demand;
/// - when max flow (under the budget) saturates demand, min cost fits within
///   the effective budget;
/// - when it does not but min cost is feasible, min cost exceeds the
///   effective budget (the budget is what stops max flow).
pub fn consistency(network: &Network, scenario: &Scenario) -> Check {
    let f = consistency_facts(network, scenario)?;
    let budget = scenario.effective_budget();
    let saturated = close(f.max_flow, f.demand);
    let movable = close(f.unbudgeted_max_flow, f.demand);
    match f.min_cost {
        None if movable => Err(format!("min cost infeasible although {} of {} can move", f.unbudgeted_max_flow, f.demand)),
        Some(c) if !movable => Err(format!("min cost {c} feasible although only {} of {} can move", f.unbudgeted_max_flow, f.demand)),
        Some(c) if saturated && c > budget + TOLERANCE => Err(format!("min cost {c} exceeds effective budget {budget}")),
        Some(c) if !saturated && c <= budget + TOLERANCE => Err(format!(
            "min cost {c} within budget {budget} but max flow {} < demand {}",
            f.max_flow, f.demand
        )),
        _ => Ok(()),
    }
}
