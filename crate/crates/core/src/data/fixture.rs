//! Deterministic synthetic datasets: seeded tiny instances for property tests
//! and the curated Missouri -> Illinois demo.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{haversine_miles, write_datasets, DataError, FlightLeg, ReferenceData, StateRate, SurfaceTime};
use crate::model::{Airport, AirportKind, Clinic, County, Mode, Scenario};

pub const DEMO_FIXTURE_NAME: &str = "missouri-illinois-demo";
pub const DEMO_SCENARIO_FILE: &str = "scenario.json";

/// States used by generated fixtures. Neither is in the regional airport
/// pool, so origin airports come from the origin state only.
pub const FIXTURE_ORIGIN_STATE: &str = "XO";
pub const FIXTURE_DESTINATION_STATE: &str = "XD";

/// Population that yields exactly one person/day at the fixture rate of 10.
const PERSON_POPULATION: u64 = 36_500;
const FIXTURE_RATE: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FixtureShape {
    pub counties: usize,
    pub origin_commercial: usize,
    pub origin_general: usize,
    pub dest_commercial: usize,
    pub dest_general: usize,
    pub clinics: usize,
    /// Upper bound for demand, seats and clinic capacities.
    pub max_capacity: u32,
}

impl FixtureShape {
    /// The largest shape the exhaustive oracle is exercised on.
    pub fn tiny() -> Self {
        Self {
            counties: 3,
            origin_commercial: 2,
            origin_general: 2,
            dest_commercial: 2,
            dest_general: 2,
            clinics: 2,
            max_capacity: 4,
        }
    }

    /// A random shape no larger than [`FixtureShape::tiny`].
    pub fn random(rng: &mut impl Rng) -> Self {
        Self {
            counties: rng.gen_range(1..=3),
            origin_commercial: rng.gen_range(0..=2),
            origin_general: rng.gen_range(0..=2),
            dest_commercial: rng.gen_range(0..=2),
            dest_general: rng.gen_range(0..=2),
            clinics: rng.gen_range(1..=2),
            max_capacity: 4,
        }
    }
}

fn cents(rng: &mut impl Rng, lo: u32, hi: u32) -> f64 {
    f64::from(rng.gen_range(lo * 100..=hi * 100)) / 100.0
}

fn coord(rng: &mut impl Rng, lat: f64, lon: f64) -> (f64, f64) {
    // Four decimals, as in the published airport tables.
    let lat = ((lat + rng.gen_range(0.0..1.0)) * 1e4).round() / 1e4;
    let lon = ((lon + rng.gen_range(0.0..1.0)) * 1e4).round() / 1e4;
    (lat, lon)
}

/// Ground time drawn around a class bound; now and then exactly on it.
fn ground_time(rng: &mut impl Rng, lo: u32, hi: u32, on_bound: u32) -> f64 {
    if rng.gen_bool(0.1) {
        f64::from(on_bound)
    } else {
        f64::from(rng.gen_range(lo..=hi))
    }
}

/// A seeded synthetic dataset with origin state `XO` and destination `XD`.
pub fn generate_fixture(seed: u64, shape: &FixtureShape) -> ReferenceData {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cap = shape.max_capacity;
    let mut data = ReferenceData::default();

    for i in 1..=shape.counties {
        let (lat, lon) = coord(&mut rng, 36.0, -92.0);
        let persons = u64::from(rng.gen_range(0..=cap.min(3)));
        data.counties.push(County {
            id: format!("Q{i}"),
            state: FIXTURE_ORIGIN_STATE.into(),
            name: format!("Origin {i}"),
            latitude: lat,
            longitude: lon,
            eligible_population: persons * PERSON_POPULATION,
        });
    }
    let dest_counties = ["V1", "V2"];
    for (i, id) in dest_counties.iter().enumerate() {
        let (lat, lon) = coord(&mut rng, 38.0, -90.0);
        data.counties.push(County {
            id: id.to_string(),
            state: FIXTURE_DESTINATION_STATE.into(),
            name: format!("Destination {}", i + 1),
            latitude: lat,
            longitude: lon,
            eligible_population: 0,
        });
    }

    let mut airports = |prefix: &str, n: usize, kind, origin: bool, rng: &mut ChaCha8Rng| {
        for i in 1..=n {
            let (lat, lon) = if origin {
                coord(rng, 36.0, -92.0)
            } else {
                coord(rng, 37.5, -90.5)
            };
            let county_id = if origin {
                format!("Q{}", rng.gen_range(1..=shape.counties))
            } else {
                dest_counties[rng.gen_range(0..2)].to_string()
            };
            data.airports.push(Airport {
                id: format!("{prefix}{i}"),
                kind,
                state: if origin { FIXTURE_ORIGIN_STATE } else { FIXTURE_DESTINATION_STATE }.into(),
                county_id,
                latitude: lat,
                longitude: lon,
            });
        }
    };
    airports("M", shape.origin_commercial, AirportKind::Commercial, true, &mut rng);
    airports("G", shape.origin_general, AirportKind::General, true, &mut rng);
    airports("R", shape.dest_commercial, AirportKind::Commercial, false, &mut rng);
    airports("P", shape.dest_general, AirportKind::General, false, &mut rng);

    for i in 1..=shape.clinics {
        let (lat, lon) = coord(&mut rng, 38.0, -90.0);
        data.clinics.push(Clinic {
            id: format!("K{i}"),
            name: format!("Clinic {i}"),
            state: FIXTURE_DESTINATION_STATE.into(),
            county_id: dest_counties[rng.gen_range(0..2)].to_string(),
            latitude: lat,
            longitude: lon,
            capacity_per_day: rng.gen_range(0..=cap),
        });
    }

    let ids = |kind: AirportKind, state: &str, data: &ReferenceData| -> Vec<String> {
        data.airports
            .iter()
            .filter(|a| a.kind == kind && a.state == state)
            .map(|a| a.id.clone())
            .collect()
    };
    let (m, g) = (
        ids(AirportKind::Commercial, FIXTURE_ORIGIN_STATE, &data),
        ids(AirportKind::General, FIXTURE_ORIGIN_STATE, &data),
    );
    let (r, p) = (
        ids(AirportKind::Commercial, FIXTURE_DESTINATION_STATE, &data),
        ids(AirportKind::General, FIXTURE_DESTINATION_STATE, &data),
    );
    let q: Vec<String> = (1..=shape.counties).map(|i| format!("Q{i}")).collect();
    let k: Vec<String> = (1..=shape.clinics).map(|i| format!("K{i}")).collect();

    for mi in &m {
        for ri in &r {
            if rng.gen_bool(0.75) {
                data.flights.push(FlightLeg {
                    origin_airport: mi.clone(),
                    dest_airport: ri.clone(),
                    seats: rng.gen_range(0..=cap),
                    avg_fare: cents(&mut rng, 40, 300),
                    avg_time_min: f64::from(rng.gen_range(60..=200)),
                });
            }
        }
    }

    let mut surface = |tail: &str, head: &str, lo: u32, hi: u32, bound: u32, rng: &mut ChaCha8Rng| {
        for mode in Mode::GROUND {
            if rng.gen_bool(0.8) {
                data.surface_times.push(SurfaceTime {
                    tail_node: tail.into(),
                    head_node: head.into(),
                    mode,
                    time_min: ground_time(rng, lo, hi, bound),
                });
            }
        }
    };
    for qi in &q {
        for a in m.iter().chain(&g) {
            surface(qi, a, 15, 150, 120, &mut rng);
        }
        for c in &k {
            surface(qi, c, 120, 400, 300, &mut rng);
        }
    }
    for a in r.iter().chain(&p) {
        for c in &k {
            surface(a, c, 15, 150, 120, &mut rng);
        }
    }

    data.state_rates.push(StateRate {
        state: FIXTURE_ORIGIN_STATE.into(),
        abortions_per_1000_women: FIXTURE_RATE,
    });
    data
}

/// A seeded scenario over a dataset from [`generate_fixture`]. Every clinic
/// is open; all pooled capacities stay at or below 4 persons.
pub fn random_scenario(seed: u64, data: &ReferenceData) -> Scenario {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_5eed);
    let in_state = |state: &str| -> Vec<String> {
        data.counties
            .iter()
            .filter(|c| c.state == state)
            .map(|c| c.id.clone())
            .collect()
    };
    let vehicle_capacity = rng.gen_range(1..=2);
    let per_vehicle_max = 4 / vehicle_capacity;
    let origin_drivers: BTreeMap<String, u32> = in_state(FIXTURE_ORIGIN_STATE)
        .into_iter()
        .map(|id| (id, rng.gen_range(0..=per_vehicle_max)))
        .collect();
    let destination_drivers: BTreeMap<String, u32> = in_state(FIXTURE_DESTINATION_STATE)
        .into_iter()
        .map(|id| (id, rng.gen_range(0..=per_vehicle_max)))
        .collect();
    let aircraft_capacity = rng.gen_range(1..=4);
    Scenario {
        origin_state: FIXTURE_ORIGIN_STATE.into(),
        destination_state: FIXTURE_DESTINATION_STATE.into(),
        open_clinic_ids: data
            .clinics
            .iter()
            .filter(|c| c.state == FIXTURE_DESTINATION_STATE)
            .map(|c| c.id.clone())
            .collect::<BTreeSet<_>>(),
        pilots_standby: rng.gen_range(0..=4 / aircraft_capacity),
        aircraft_capacity,
        vehicle_capacity,
        budget: cents(&mut rng, 0, 400),
        max_access_egress_min: [90.0, 120.0][rng.gen_range(0..2)],
        max_flight_min: [45.0, 90.0, 180.0][rng.gen_range(0..3)],
        max_direct_min: [240.0, 300.0][rng.gen_range(0..2)],
        origin_drivers,
        destination_drivers,
        companions: rng.gen_bool(0.3),
        ride_hail_rate: crate::model::DEFAULT_RIDE_HAIL_RATE,
        demand_overrides: None,
        clinic_capacity_overrides: None,
    }
}

// ---- the curated demo -------------------------------------------------------

const MO_COUNTIES: [(&str, &str, f64, f64, u64); 7] = [
    ("29051", "Cole", 38.5050, -92.2810, 0),
    ("29071", "Franklin", 38.4110, -91.0750, 73_000),
    ("29099", "Jefferson", 38.2610, -90.5380, 73_000),
    ("29113", "Lincoln", 39.0580, -90.9600, 73_000),
    ("29165", "Platte", 39.3810, -94.7730, 0),
    ("29183", "St. Charles", 38.7820, -90.6800, 73_000),
    ("29189", "St. Louis", 38.6400, -90.4440, 0),
];
const IL_COUNTIES: [(&str, &str, f64, f64); 3] = [
    ("17031", "Cook", 41.8400, -87.8170),
    ("17043", "DuPage", 41.8520, -88.0860),
    ("17163", "St. Clair", 38.4700, -89.9300),
];
const DEMO_AIRPORTS: [(&str, AirportKind, &str, &str, f64, f64); 7] = [
    ("DPA", AirportKind::General, "IL", "17043", 41.9078, -88.2486),
    ("JEF", AirportKind::General, "MO", "29051", 38.5912, -92.1561),
    ("MCI", AirportKind::Commercial, "MO", "29165", 39.2976, -94.7139),
    ("MDW", AirportKind::Commercial, "IL", "17031", 41.7868, -87.7522),
    ("ORD", AirportKind::Commercial, "IL", "17031", 41.9742, -87.9073),
    ("STL", AirportKind::Commercial, "MO", "29189", 38.7487, -90.3700),
    ("SUS", AirportKind::General, "MO", "29189", 38.6621, -90.6520),
];
const DEMO_CLINICS: [(&str, &str, &str, f64, f64, u32); 5] = [
    ("IL-CHI-01", "Near North Health Center", "17031", 41.8960, -87.6300, 5),
    ("IL-CHI-02", "Lakeview Women's Clinic", "17031", 41.9400, -87.6550, 5),
    ("IL-CHI-03", "South Side Family Clinic", "17031", 41.7500, -87.6900, 5),
    ("IL-CHI-04", "North Shore Reproductive Care", "17031", 42.0300, -87.7400, 5),
    ("IL-FVH-01", "Fairview Heights Clinic", "17163", 38.5920, -89.9900, 6),
];
const DEMO_FLIGHTS: [(&str, &str, u32, f64, f64); 4] = [
    ("MCI", "MDW", 2, 196.30, 90.0),
    ("MCI", "ORD", 3, 231.60, 95.0),
    ("STL", "MDW", 2, 248.15, 70.0),
    ("STL", "ORD", 2, 212.40, 75.0),
];

/// Road minutes from straight-line distance: 1.2 circuity at 55 mph.
fn road_minutes(a: (f64, f64), b: (f64, f64)) -> f64 {
    let miles = haversine_miles(a.0, a.1, b.0, b.1) * 1.2;
    (miles / 55.0 * 60.0).round().max(1.0)
}

/// The Missouri -> Illinois demo dataset.
///
/// Four St. Louis-area counties each need two trips. Only STL and SUS are
/// within two hours of them; STL has four seats to Chicago and one volunteer
/// aircraft (four seats) can fly SUS -> DPA, while every direct drive takes
/// more than five hours. The optimum therefore moves all eight travelers,
/// four by each mode, and fills the aircraft.
pub fn demo_fixture() -> ReferenceData {
    let mut data = ReferenceData::default();
    for (id, name, lat, lon, pop) in MO_COUNTIES {
        data.counties.push(County {
            id: id.into(),
            state: "MO".into(),
            name: name.into(),
            latitude: lat,
            longitude: lon,
            eligible_population: pop,
        });
    }
    for (id, name, lat, lon) in IL_COUNTIES {
        data.counties.push(County {
            id: id.into(),
            state: "IL".into(),
            name: name.into(),
            latitude: lat,
            longitude: lon,
            eligible_population: 0,
        });
    }
    for (id, kind, state, county, lat, lon) in DEMO_AIRPORTS {
        data.airports.push(Airport {
            id: id.into(),
            kind,
            state: state.into(),
            county_id: county.into(),
            latitude: lat,
            longitude: lon,
        });
    }
    for (id, name, county, lat, lon, cap) in DEMO_CLINICS {
        data.clinics.push(Clinic {
            id: id.into(),
            name: name.into(),
            state: "IL".into(),
            county_id: county.into(),
            latitude: lat,
            longitude: lon,
            capacity_per_day: cap,
        });
    }
    for (from, to, seats, fare, time) in DEMO_FLIGHTS {
        data.flights.push(FlightLeg {
            origin_airport: from.into(),
            dest_airport: to.into(),
            seats,
            avg_fare: fare,
            avg_time_min: time,
        });
    }

    let at = |lat: f64, lon: f64| (lat, lon);
    let mo_airports: Vec<_> = DEMO_AIRPORTS.iter().filter(|a| a.2 == "MO").collect();
    let il_airports: Vec<_> = DEMO_AIRPORTS.iter().filter(|a| a.2 == "IL").collect();
    let mut push = |tail: &str, head: &str, minutes: f64| {
        for mode in Mode::GROUND {
            data.surface_times.push(SurfaceTime {
                tail_node: tail.into(),
                head_node: head.into(),
                mode,
                time_min: minutes,
            });
        }
    };
    for (q, _, qlat, qlon, _) in MO_COUNTIES {
        for a in &mo_airports {
            push(q, a.0, road_minutes(at(qlat, qlon), at(a.4, a.5)));
        }
        for c in DEMO_CLINICS {
            push(q, c.0, road_minutes(at(qlat, qlon), at(c.3, c.4)));
        }
    }
    for a in &il_airports {
        for c in DEMO_CLINICS {
            push(a.0, c.0, road_minutes(at(a.4, a.5), at(c.3, c.4)));
        }
    }

    data.state_rates = vec![
        StateRate {
            state: "IL".into(),
            abortions_per_1000_women: 25.7,
        },
        StateRate {
            state: "MO".into(),
            abortions_per_1000_women: 10.0,
        },
    ];
    data
}

/// Planner inputs for the demo: three volunteer drivers per Missouri county,
/// ten in Cook County, one pilot on standby, $1500 and 2h / 3h / 5h limits.
pub fn demo_scenario() -> Scenario {
    Scenario {
        origin_state: "MO".into(),
        destination_state: "IL".into(),
        open_clinic_ids: ["IL-CHI-01", "IL-CHI-02", "IL-CHI-03", "IL-CHI-04"]
            .into_iter()
            .map(String::from)
            .collect(),
        pilots_standby: 1,
        aircraft_capacity: crate::model::DEFAULT_AIRCRAFT_CAPACITY,
        vehicle_capacity: crate::model::DEFAULT_VEHICLE_CAPACITY,
        budget: 1500.0,
        max_access_egress_min: 120.0,
        max_flight_min: 180.0,
        max_direct_min: 300.0,
        origin_drivers: MO_COUNTIES.iter().map(|c| (c.0.to_string(), 3)).collect(),
        destination_drivers: [("17031".to_string(), 10)].into(),
        companions: false,
        ride_hail_rate: crate::model::DEFAULT_RIDE_HAIL_RATE,
        demand_overrides: None,
        clinic_capacity_overrides: None,
    }
}

/// Writes the demo CSVs plus `scenario.json` into `dir`.
pub fn write_demo_fixture(dir: impl AsRef<Path>) -> Result<(), DataError> {
    let dir = dir.as_ref();
    write_datasets(dir, &demo_fixture())?;
    let path = dir.join(DEMO_SCENARIO_FILE);
    let mut json = serde_json::to_string_pretty(&demo_scenario()).expect("scenario serializes");
    json.push('\n');
    std::fs::write(&path, json).map_err(|source| DataError::Io { path, source })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::load_datasets;

    fn read_dir(dir: &Path) -> Vec<(String, Vec<u8>)> {
        let mut files: Vec<_> = std::fs::read_dir(dir)
            .unwrap()
            .map(|e| {
                let e = e.unwrap();
                (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
            })
            .collect();
        files.sort();
        files
    }

    #[test]
    fn same_seed_same_bytes() {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        write_datasets(a.path(), &generate_fixture(42, &FixtureShape::tiny())).unwrap();
        write_datasets(b.path(), &generate_fixture(42, &FixtureShape::tiny())).unwrap();
        assert_eq!(read_dir(a.path()), read_dir(b.path()));
        assert_ne!(generate_fixture(42, &FixtureShape::tiny()), generate_fixture(43, &FixtureShape::tiny()));
    }

    #[test]
    fn generated_fixtures_load_cleanly_and_roundtrip() {
        let mut shape_rng = ChaCha8Rng::seed_from_u64(7);
        for seed in 0..25 {
            let shape = FixtureShape::random(&mut shape_rng);
            let data = generate_fixture(seed, &shape);
            let dir = tempfile::tempdir().unwrap();
            write_datasets(dir.path(), &data).unwrap();
            let loaded = load_datasets(dir.path()).unwrap();
            assert_eq!(loaded, data, "seed {seed}");
            assert!(loaded.warnings().is_empty(), "seed {seed}: {:?}", loaded.warnings());
            random_scenario(seed, &data).validate().unwrap();
        }
    }

    #[test]
    fn demo_loads_with_no_warnings() {
        let dir = tempfile::tempdir().unwrap();
        write_demo_fixture(dir.path()).unwrap();
        let loaded = load_datasets(dir.path()).unwrap();
        assert_eq!(loaded, demo_fixture());
        assert!(loaded.warnings().is_empty(), "{:?}", loaded.warnings());
        let scenario: Scenario =
            serde_json::from_slice(&std::fs::read(dir.path().join(DEMO_SCENARIO_FILE)).unwrap()).unwrap();
        assert_eq!(scenario, demo_scenario());
    }

    #[test]
    fn demo_geometry_matches_its_story() {
        let data = demo_fixture();
        let t = |a: &str, b: &str| {
            data.surface_times
                .iter()
                .find(|s| s.tail_node == a && s.head_node == b)
                .unwrap()
                .time_min
        };
        for q in ["29071", "29099", "29113", "29183"] {
            assert!(t(q, "STL") <= 120.0 && t(q, "SUS") <= 120.0, "{q}");
            assert!(t(q, "MCI") > 120.0, "{q}");
            for c in ["IL-CHI-01", "IL-CHI-02", "IL-CHI-03", "IL-CHI-04"] {
                assert!(t(q, c) > 300.0, "{q} -> {c}");
            }
        }
    }
}
