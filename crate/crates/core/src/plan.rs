//! Scenario -> network -> program -> solution -> report.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analytics::{build_report, PlanReport};
use crate::data::ReferenceData;
use crate::formulation::{build_model, Formulation, Model};
use crate::ip::{solve_with, Solution, SolveLimits, SolveStatus, SolverError};
use crate::model::{build_network, ModelError, Network, Scenario};

#[derive(Debug, Error)]
pub enum PlanError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// Why a min-cost plan does not exist: the most that can be moved.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    /// Max flow under the scenario's budget.
    pub max_flow: u64,
    /// Max flow with the budget row dropped.
    pub max_flow_without_budget: u64,
    pub demand_total: u64,
    /// Row reported by the root relaxation, when one was identified.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub infeasible_constraint: Option<String>,
    pub message: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanStatus {
    Optimal,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanOutcome {
    pub model: Model,
    pub status: PlanStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<PlanReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<Diagnostic>,
}

/// Builds and solves one model on an already built network.
pub fn solve_network(
    network: &Network,
    scenario: &Scenario,
    model: Model,
    limits: &SolveLimits,
) -> Result<(Formulation, Solution), PlanError> {
    let formulation = build_model(network, scenario, model)?;
    let solution = solve_with(&formulation.program, limits)?;
    Ok((formulation, solution))
}

pub fn plan(
    data: &ReferenceData,
    scenario: &Scenario,
    model: Model,
    limits: &SolveLimits,
) -> Result<PlanOutcome, PlanError> {
    let network = build_network(scenario, data)?;
    plan_on(&network, scenario, model, limits)
}

pub fn plan_on(
    network: &Network,
    scenario: &Scenario,
    model: Model,
    limits: &SolveLimits,
) -> Result<PlanOutcome, PlanError> {
    let (formulation, solution) = solve_network(network, scenario, model, limits)?;
    match solution.status {
        SolveStatus::Optimal => Ok(PlanOutcome {
            model,
            status: PlanStatus::Optimal,
            report: Some(build_report(&solution, &formulation, network, scenario)),
            diagnostic: None,
        }),
        // Both programs are bounded (every variable has a finite upper
        // bound), so anything else is infeasibility.
        SolveStatus::Infeasible | SolveStatus::Unbounded => {
            let (max_flow, max_flow_without_budget) = match model {
                Model::MaxFlow => (0, 0),
                Model::MinCost => {
                    let (mut f, mf) = solve_network(network, scenario, Model::MaxFlow, limits)?;
                    f.program.constraints.retain(|c| c.label != "c7");
                    let free = solve_with(&f.program, limits)?;
                    (persons(mf.objective), persons(free.objective))
                }
            };
            let demand_total = network.total_demand();
            Ok(PlanOutcome {
                model,
                status: PlanStatus::Infeasible,
                report: None,
                diagnostic: Some(Diagnostic {
                    max_flow,
                    max_flow_without_budget,
                    demand_total,
                    infeasible_constraint: solution.infeasible_hint.clone(),
                    message: format!(
                        "demand of {demand_total} cannot be met in full: at most {max_flow_without_budget} can be \
                         transported ({max_flow} within the budget)"
                    ),
                }),
            })
        }
    }
}

fn persons(objective: f64) -> u64 {
    objective.round().max(0.0) as u64
}
