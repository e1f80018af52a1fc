//! Model-level properties on seeded synthetic instances.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use routeplan_core::data::{generate_fixture, random_scenario, FixtureShape, ReferenceData};
use routeplan_core::formulation::Model;
use routeplan_core::model::{build_network, Network, Scenario};
use routeplan_core::properties::{self, Perturbation};

fn instance(seed: u64) -> (ReferenceData, Scenario, Network) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = generate_fixture(seed, &FixtureShape::random(&mut rng));
    let scenario = random_scenario(seed, &data);
    let network = build_network(&scenario, &data).unwrap();
    (data, scenario, network)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn oracle_agrees(seed in 1_000u64..1_000_000) {
        let (_, s, n) = instance(seed);
        for model in [Model::MaxFlow, Model::MinCost] {
            properties::oracle_equivalence(&n, &s, model).map_err(TestCaseError::fail)?;
        }
    }

    #[test]
    fn solved_plans_hold_invariants(seed in 1_000u64..1_000_000) {
        let (_, s, n) = instance(seed);
        properties::invariants(&n, &s).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn budget_slack_resolve(seed in 1_000u64..1_000_000) {
        let (_, s, n) = instance(seed);
        properties::budget_slack_resolve(&n, &s).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn companion_halving(seed in 1_000u64..1_000_000) {
        let (d, s, _) = instance(seed);
        properties::companion_equivalence(&d, &s).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn pruning_matches_time_rows(seed in 1_000u64..1_000_000) {
        let (d, s, _) = instance(seed);
        properties::pruning_equivalence(&d, &s).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn min_cost_consistent_with_max_flow(seed in 1_000u64..1_000_000) {
        let (_, s, n) = instance(seed);
        properties::consistency(&n, &s).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn max_flow_monotone(seed in 1_000u64..1_000_000, bump in 1u32..3) {
        let (d, s, n) = instance(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = n.counties[rng.gen_range(0..n.counties.len())].county.id.clone();
        let c = n.clinics[rng.gen_range(0..n.clinics.len())].id.clone();
        let mut all = vec![
            Perturbation::Budget(f64::from(bump) * 25.0),
            Perturbation::Pilots(bump),
            Perturbation::OriginDrivers(q.clone(), bump),
            Perturbation::ClinicCapacity(c, bump),
            Perturbation::Demand(q, bump),
        ];
        if let Some(v) = n.dest_counties.first() {
            all.push(Perturbation::DestinationDrivers(v.clone(), bump));
        }
        if let Some(leg) = d.flights.first() {
            all.push(Perturbation::Seats(leg.origin_airport.clone(), leg.dest_airport.clone(), bump));
        }
        for p in &all {
            properties::monotonicity(&d, &s, p).map_err(TestCaseError::fail)?;
        }
    }
}
