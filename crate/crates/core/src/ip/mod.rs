//! Bounded pure-integer linear programs and an exact solver for them.
//!
//! [`solve`] runs best-first branch-and-bound over LP relaxations computed by
//! a dense bounded-variable simplex ([`simplex`]). [`brute_force_solve`]
//! enumerates every integer point inside the variable bounds and serves as a
//! verification oracle for small instances.

mod branch;
mod brute;
mod lp_format;
pub(crate) mod simplex;

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use branch::{solve, solve_with, SolveLimits};
pub use brute::{brute_force_solve, BRUTE_FORCE_LIMIT};
pub use lp_format::to_lp_string;

/// Absolute tolerance used for numeric comparisons inside the simplex.
pub const PIVOT_TOLERANCE: f64 = 1e-9;
/// A relaxed value within this distance of an integer is considered integral.
pub const INTEGRALITY_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VarId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub lower: i64,
    /// `None` means unbounded above.
    pub upper: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearConstraint {
    pub label: String,
    pub coefficients: Vec<(VarId, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

impl LinearConstraint {
    pub fn new(
        label: impl Into<String>,
        coefficients: impl IntoIterator<Item = (VarId, f64)>,
        relation: Relation,
        rhs: f64,
    ) -> Self {
        Self {
            label: label.into(),
            coefficients: coefficients.into_iter().collect(),
            relation,
            rhs,
        }
    }

    pub fn lhs(&self, values: &[i64]) -> f64 {
        self.coefficients
            .iter()
            .map(|&(v, a)| a * values[v.0] as f64)
            .sum()
    }

    /// Signed slack: `rhs - lhs` for `<=`, `lhs - rhs` for `>=`, `rhs - lhs`
    /// for `=` (zero when satisfied).
    pub fn slack(&self, lhs: f64) -> f64 {
        match self.relation {
            Relation::Le | Relation::Eq => self.rhs - lhs,
            Relation::Ge => lhs - self.rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Objective {
    pub coefficients: Vec<(VarId, f64)>,
    pub sense: Sense,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegerProgram {
    pub variables: Vec<Variable>,
    pub constraints: Vec<LinearConstraint>,
    pub objective: Objective,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("malformed integer program: {0}")]
    Malformed(String),
    #[error("brute-force search space of {size} assignments exceeds the limit of {limit}")]
    SearchSpaceTooLarge { size: u128, limit: u128 },
    #[error("brute-force enumeration requires finite upper bounds (variable {0} is unbounded)")]
    UnboundedDomain(String),
    #[error("branch-and-bound node limit of {0} reached")]
    NodeLimit(usize),
    #[error("solve exceeded the wall-clock limit of {0:?}")]
    TimeLimit(Duration),
    #[error("simplex iteration limit reached")]
    IterationLimit,
}

impl SolverError {
    /// True for errors caused by configured solve budgets rather than input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            SolverError::NodeLimit(_) | SolverError::TimeLimit(_) | SolverError::IterationLimit
        )
    }
}

impl IntegerProgram {
    pub fn new(sense: Sense) -> Self {
        Self {
            variables: Vec::new(),
            constraints: Vec::new(),
            objective: Objective {
                coefficients: Vec::new(),
                sense,
            },
        }
    }

    pub fn add_variable(&mut self, name: impl Into<String>, lower: i64, upper: Option<i64>) -> VarId {
        self.variables.push(Variable {
            name: name.into(),
            lower,
            upper,
        });
        VarId(self.variables.len() - 1)
    }

    pub fn add_constraint(&mut self, constraint: LinearConstraint) {
        self.constraints.push(constraint);
    }

    pub fn set_objective(&mut self, coefficients: impl IntoIterator<Item = (VarId, f64)>) {
        self.objective.coefficients = coefficients.into_iter().collect();
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn variable(&self, id: VarId) -> &Variable {
        &self.variables[id.0]
    }

    pub fn constraint(&self, label: &str) -> Option<&LinearConstraint> {
        self.constraints.iter().find(|c| c.label == label)
    }

    pub fn objective_value(&self, values: &[i64]) -> f64 {
        self.objective
            .coefficients
            .iter()
            .map(|&(v, c)| c * values[v.0] as f64)
            .sum()
    }

    /// Checks the structural invariants: coefficients reference declared
    /// variables, bounds are ordered, labels are unique, data is finite.
    pub fn validate(&self) -> Result<(), SolverError> {
        let n = self.variables.len();
        for v in &self.variables {
            if v.lower < 0 {
                return Err(SolverError::Malformed(format!(
                    "variable {} has negative lower bound {}",
                    v.name, v.lower
                )));
            }
            if let Some(u) = v.upper {
                if u < v.lower {
                    return Err(SolverError::Malformed(format!(
                        "variable {} has upper bound {} below lower bound {}",
                        v.name, u, v.lower
                    )));
                }
            }
        }
        let mut labels = HashSet::new();
        for c in &self.constraints {
            if !labels.insert(c.label.as_str()) {
                return Err(SolverError::Malformed(format!("duplicate constraint label {}", c.label)));
            }
            if !c.rhs.is_finite() {
                return Err(SolverError::Malformed(format!("constraint {} has non-finite rhs", c.label)));
            }
            for &(v, a) in &c.coefficients {
                if v.0 >= n {
                    return Err(SolverError::Malformed(format!(
                        "constraint {} references undeclared variable #{}",
                        c.label, v.0
                    )));
                }
                if !a.is_finite() {
                    return Err(SolverError::Malformed(format!(
                        "constraint {} has a non-finite coefficient",
                        c.label
                    )));
                }
            }
        }
        for &(v, a) in &self.objective.coefficients {
            if v.0 >= n || !a.is_finite() {
                return Err(SolverError::Malformed(format!(
                    "objective references undeclared variable #{} or non-finite coefficient",
                    v.0
                )));
            }
        }
        Ok(())
    }

    /// Constraint rows with at least one nonzero coefficient. Empty rows are
    /// the only presolve reduction the solver performs.
    pub(crate) fn nonempty_rows(&self) -> Vec<usize> {
        self.constraints
            .iter()
            .enumerate()
            .filter(|(_, c)| c.coefficients.iter().any(|&(_, a)| a != 0.0))
            .map(|(i, _)| i)
            .collect()
    }

    /// Builds an optimal [`Solution`] record (values, objective, slacks) for an
    /// integral assignment.
    pub(crate) fn optimal_solution(&self, values: Vec<i64>) -> Solution {
        let objective = self.objective_value(&values);
        let slacks = self
            .constraints
            .iter()
            .map(|c| (c.label.clone(), c.slack(c.lhs(&values))))
            .collect();
        Solution {
            status: SolveStatus::Optimal,
            values,
            objective,
            slacks,
            infeasible_hint: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub status: SolveStatus,
    /// One entry per variable; empty unless `status` is optimal.
    pub values: Vec<i64>,
    pub objective: f64,
    pub slacks: BTreeMap<String, f64>,
    /// Label of a constraint the root relaxation could not satisfy, when known.
    pub infeasible_hint: Option<String>,
}

impl Solution {
    pub(crate) fn without_values(status: SolveStatus, hint: Option<String>) -> Self {
        Self {
            status,
            values: Vec::new(),
            objective: 0.0, // meaningless unless optimal
            slacks: BTreeMap::new(),
            infeasible_hint: hint,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }

    pub fn value(&self, id: VarId) -> i64 {
        self.values[id.0]
    }

    pub fn slack(&self, label: &str) -> Option<f64> {
        self.slacks.get(label).copied()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    /// Constraint label, or `bound[<var>]` for bound violations.
    pub label: String,
    pub lhs: f64,
    pub relation: Relation,
    pub rhs: f64,
}

/// Lists every constraint or bound the solution's values violate. Values are
/// integers by construction, so integrality cannot fail.
pub fn validate_solution(ip: &IntegerProgram, sol: &Solution) -> Vec<Violation> {
    let mut out = Vec::new();
    if sol.values.len() != ip.num_vars() {
        out.push(Violation {
            label: "values".into(),
            lhs: sol.values.len() as f64,
            relation: Relation::Eq,
            rhs: ip.num_vars() as f64,
        });
        return out;
    }
    for (v, &x) in ip.variables.iter().zip(&sol.values) {
        if x < v.lower {
            out.push(Violation {
                label: format!("bound[{}]", v.name),
                lhs: x as f64,
                relation: Relation::Ge,
                rhs: v.lower as f64,
            });
        }
        if let Some(u) = v.upper {
            if x > u {
                out.push(Violation {
                    label: format!("bound[{}]", v.name),
                    lhs: x as f64,
                    relation: Relation::Le,
                    rhs: u as f64,
                });
            }
        }
    }
    for c in &ip.constraints {
        let lhs = c.lhs(&sol.values);
        if !satisfies(lhs, c.relation, c.rhs) {
            out.push(Violation {
                label: c.label.clone(),
                lhs,
                relation: c.relation,
                rhs: c.rhs,
            });
        }
    }
    out
}

/// Feasibility test with a tolerance scaled to the row magnitude; only the
/// fractional money rows ever need it.
pub(crate) fn satisfies(lhs: f64, relation: Relation, rhs: f64) -> bool {
    let tol = PIVOT_TOLERANCE * rhs.abs().max(1.0);
    match relation {
        Relation::Le => lhs <= rhs + tol,
        Relation::Ge => lhs >= rhs - tol,
        Relation::Eq => (lhs - rhs).abs() <= tol,
    }
}
