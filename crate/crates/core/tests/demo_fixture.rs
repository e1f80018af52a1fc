use std::path::PathBuf;
use std::time::{Duration, Instant};

use routeplan_core::data::{demo_fixture, demo_scenario, load_datasets, write_demo_fixture, DEMO_FIXTURE_NAME};
use routeplan_core::formulation::Model;
use routeplan_core::ip::SolveLimits;
use routeplan_core::model::build_network;
use routeplan_core::oracle::{enumerate_optimum, OracleOutcome};
use routeplan_core::plan::{plan, PlanStatus};

fn committed() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(DEMO_FIXTURE_NAME)
}

#[test]
fn network_scopes_to_illinois() {
    let network = build_network(&demo_scenario(), &demo_fixture()).unwrap();
    assert!(network.dest_commercial.iter().chain(&network.dest_general).all(|a| a.state == "IL"));
    assert!(network.origin_commercial.iter().chain(&network.origin_general).all(|a| a.state == "MO"));
    assert_eq!(network.dest_counties, ["17031", "17043"]);
    assert_eq!(network.clinics.len(), 4);
    assert!(network.coverage_warnings.is_empty());
    assert_eq!(network.over_limit_arcs().count(), 0);
}

#[test]
fn max_flow_regression() {
    let start = Instant::now();
    let out = plan(&demo_fixture(), &demo_scenario(), Model::MaxFlow, &SolveLimits::default()).unwrap();
    assert!(start.elapsed() < Duration::from_secs(5));
    let report = out.report.unwrap();
    assert_eq!(report.total_transported, 8);
    assert_eq!(report.satisfaction, 1.0);
    assert_eq!((report.modal_split.commercial, report.modal_split.general_aviation, report.modal_split.direct), (4, 4, 0));
    assert_eq!(report.excess.ga_seats_unused, 0);
    assert!(report.spend.total <= 1500.0);
}

#[test]
fn oracle_fixes_the_demo_values() {
    let (data, scenario) = (demo_fixture(), demo_scenario());
    let network = build_network(&scenario, &data).unwrap();
    assert_eq!(enumerate_optimum(&network, &scenario, Model::MaxFlow).unwrap(), OracleOutcome::Optimal(8.0));
    let OracleOutcome::Optimal(cost) = enumerate_optimum(&network, &scenario, Model::MinCost).unwrap() else {
        panic!("min cost infeasible")
    };
    let out = plan(&data, &scenario, Model::MinCost, &SolveLimits::default()).unwrap();
    let report = out.report.unwrap();
    assert!((report.spend.total - cost).abs() < 1e-6);
    assert!(report.spend.total > 0.0 && report.spend.total <= scenario.budget);
}

#[test]
fn min_cost_uses_two_cook_county_cars() {
    // Four commercial arrivals egress for free in Cook County volunteer cars:
    // two full cars out of ten.
    let out = plan(&demo_fixture(), &demo_scenario(), Model::MinCost, &SolveLimits::default()).unwrap();
    let excess = out.report.unwrap().excess;
    assert_eq!(excess.destination_vehicles_unused["17031"], 8);
}

#[test]
fn closing_every_clinic_makes_min_cost_infeasible() {
    let mut scenario = demo_scenario();
    scenario.clinic_capacity_overrides = Some(scenario.open_clinic_ids.iter().map(|c| (c.clone(), 0)).collect());
    let out = plan(&demo_fixture(), &scenario, Model::MinCost, &SolveLimits::default()).unwrap();
    assert_eq!(out.status, PlanStatus::Infeasible);
    let diag = out.diagnostic.unwrap();
    assert_eq!((diag.max_flow, diag.max_flow_without_budget, diag.demand_total), (0, 0, 8));
}

#[test]
fn committed_copy_matches_generator() {
    let dir = tempfile::tempdir().unwrap();
    write_demo_fixture(dir.path()).unwrap();
    let mut names: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    for name in names {
        let fresh = std::fs::read(dir.path().join(&name)).unwrap();
        let kept = std::fs::read(committed().join(&name))
            .unwrap_or_else(|e| panic!("{}: {e}", committed().join(&name).display()));
        assert!(fresh == kept, "{name:?} differs from the generator output");
    }
    assert_eq!(load_datasets(committed()).unwrap(), demo_fixture());
}
