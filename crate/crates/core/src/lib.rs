//! Routing planner core: reference data, the multimodal network, the
//! max-flow and min-cost integer programs, an exact solver and reports.

pub mod analytics;
pub mod api;
pub mod data;
pub mod formulation;
pub mod ip;
pub mod model;
pub mod money;
pub mod oracle;
pub mod plan;
pub mod properties;

pub use analytics::{build_report, PlanReport};
pub use data::{load_datasets, ReferenceData};
pub use formulation::{build_max_flow, build_min_cost, Model};
pub use model::{build_network, Network, Scenario};
pub use plan::{plan, PlanError, PlanOutcome, PlanStatus};
