//! File-backed reference data: counties, airports, clinics, flight legs,
//! surface travel times and state abortion rates.
//!
//! All files are UTF-8 CSV with a header row. Errors carry `file:line` of the
//! offending record (line 1 is the header).

mod fixture;
mod geo;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Airport, AirportKind, Clinic, County, Mode};

pub use fixture::{
    demo_fixture, demo_scenario, generate_fixture, random_scenario, write_demo_fixture,
    FixtureShape, DEMO_FIXTURE_NAME, DEMO_SCENARIO_FILE, FIXTURE_DESTINATION_STATE, FIXTURE_ORIGIN_STATE,
};
pub use geo::{ga_flight_time, haversine_miles, EARTH_RADIUS_MILES, GA_SPEED_MPH};

pub const COUNTIES_FILE: &str = "counties.csv";
pub const AIRPORTS_FILE: &str = "airports.csv";
pub const CLINICS_FILE: &str = "clinics.csv";
pub const FLIGHTS_FILE: &str = "flights.csv";
pub const SURFACE_TIMES_FILE: &str = "surface_times.csv";
pub const STATE_RATES_FILE: &str = "state_rates.csv";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlightLeg {
    pub origin_airport: String,
    pub dest_airport: String,
    pub seats: u32,
    pub avg_fare: f64,
    pub avg_time_min: f64,
}

/// Directional ground travel time between two node keys.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceTime {
    pub tail_node: String,
    pub head_node: String,
    pub mode: Mode,
    pub time_min: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateRate {
    pub state: String,
    pub abortions_per_1000_women: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ReferenceData {
    pub counties: Vec<County>,
    pub airports: Vec<Airport>,
    pub clinics: Vec<Clinic>,
    pub flights: Vec<FlightLeg>,
    pub surface_times: Vec<SurfaceTime>,
    pub state_rates: Vec<StateRate>,
}

#[derive(Debug, Error)]
pub enum DataError {
    #[error("{}: missing file", .0.display())]
    MissingFile(PathBuf),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}:{line}: {message}")]
    Invalid {
        file: String,
        line: u64,
        message: String,
    },
    #[error("{file}:{line}: unknown {kind} {key:?}")]
    DanglingKey {
        file: String,
        line: u64,
        kind: &'static str,
        key: String,
    },
}

impl DataError {
    fn invalid(file: &str, line: u64, message: impl Into<String>) -> Self {
        DataError::Invalid {
            file: file.to_string(),
            line,
            message: message.into(),
        }
    }
}

// Raw CSV rows. Quantities are read signed so negative values can be reported
// with their location instead of as generic parse failures.

#[derive(Debug, Deserialize, Serialize)]
struct CountyRow {
    id: String,
    state: String,
    name: String,
    lat: f64,
    lon: f64,
    eligible_population: i64,
}

#[derive(Debug, Deserialize, Serialize)]
struct AirportRow {
    id: String,
    kind: String,
    state: String,
    county_id: String,
    lat: f64,
    lon: f64,
}

#[derive(Debug, Deserialize, Serialize)]
struct ClinicRow {
    id: String,
    name: String,
    state: String,
    county_id: String,
    lat: f64,
    lon: f64,
    capacity_per_day: i64,
}

#[derive(Debug, Deserialize, Serialize)]
struct FlightRow {
    origin_airport: String,
    dest_airport: String,
    seats: i64,
    avg_fare: f64,
    avg_time_min: f64,
}

#[derive(Debug, Deserialize, Serialize)]
struct SurfaceRow {
    tail_node: String,
    head_node: String,
    mode: String,
    time_min: f64,
}

#[derive(Debug, Deserialize, Serialize)]
struct RateRow {
    state: String,
    abortions_per_1000_women: f64,
}

const COUNTY_COLUMNS: &[&str] = &["id", "state", "name", "lat", "lon", "eligible_population"];
const AIRPORT_COLUMNS: &[&str] = &["id", "kind", "state", "county_id", "lat", "lon"];
const CLINIC_COLUMNS: &[&str] = &["id", "name", "state", "county_id", "lat", "lon", "capacity_per_day"];
const FLIGHT_COLUMNS: &[&str] = &["origin_airport", "dest_airport", "seats", "avg_fare", "avg_time_min"];
const SURFACE_COLUMNS: &[&str] = &["tail_node", "head_node", "mode", "time_min"];
const RATE_COLUMNS: &[&str] = &["state", "abortions_per_1000_women"];

fn read_rows<T: DeserializeOwned>(
    root: &Path,
    file: &str,
    columns: &[&str],
) -> Result<Vec<(u64, T)>, DataError> {
    let path = root.join(file);
    if !path.is_file() {
        return Err(DataError::MissingFile(path));
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(&path)
        .map_err(|e| DataError::invalid(file, 1, e.to_string()))?;
    let headers = reader
        .headers()
        .map_err(|e| DataError::invalid(file, 1, e.to_string()))?
        .clone();
    for h in headers.iter() {
        if !columns.contains(&h) {
            return Err(DataError::invalid(file, 1, format!("unknown column {h:?}")));
        }
    }
    for c in columns {
        if !headers.iter().any(|h| h == *c) {
            return Err(DataError::invalid(file, 1, format!("missing column {c:?}")));
        }
    }
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            DataError::invalid(file, line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let row: T = record
            .deserialize(Some(&headers))
            .map_err(|e| DataError::invalid(file, line, e.to_string()))?;
        out.push((line, row));
    }
    Ok(out)
}

fn non_negative(file: &str, line: u64, field: &str, v: f64) -> Result<(), DataError> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(DataError::invalid(file, line, format!("{field} must be >= 0, got {v}")))
    }
}

fn positive(file: &str, line: u64, field: &str, v: f64) -> Result<(), DataError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(DataError::invalid(file, line, format!("{field} must be > 0, got {v}")))
    }
}

fn unique<'a>(
    seen: &mut HashSet<&'a str>,
    file: &str,
    line: u64,
    id: &'a str,
) -> Result<(), DataError> {
    if seen.insert(id) {
        Ok(())
    } else {
        Err(DataError::invalid(file, line, format!("duplicate id {id:?}")))
    }
}

/// Loads and cross-validates all six reference files under `root`.
pub fn load_datasets(root: impl AsRef<Path>) -> Result<ReferenceData, DataError> {
    let root = root.as_ref();

    let county_rows: Vec<(u64, CountyRow)> = read_rows(root, COUNTIES_FILE, COUNTY_COLUMNS)?;
    let airport_rows: Vec<(u64, AirportRow)> = read_rows(root, AIRPORTS_FILE, AIRPORT_COLUMNS)?;
    let clinic_rows: Vec<(u64, ClinicRow)> = read_rows(root, CLINICS_FILE, CLINIC_COLUMNS)?;
    let flight_rows: Vec<(u64, FlightRow)> = read_rows(root, FLIGHTS_FILE, FLIGHT_COLUMNS)?;
    let surface_rows: Vec<(u64, SurfaceRow)> = read_rows(root, SURFACE_TIMES_FILE, SURFACE_COLUMNS)?;
    let rate_rows: Vec<(u64, RateRow)> = read_rows(root, STATE_RATES_FILE, RATE_COLUMNS)?;

    // Node keys are shared by surface_times, so they must be unique across
    // counties, airports and clinics.
    let mut node_ids: HashSet<&str> = HashSet::new();

    let mut counties = Vec::with_capacity(county_rows.len());
    for (line, r) in &county_rows {
        unique(&mut node_ids, COUNTIES_FILE, *line, &r.id)?;
        if r.eligible_population < 0 {
            return Err(DataError::invalid(
                COUNTIES_FILE,
                *line,
                format!("eligible_population must be >= 0, got {}", r.eligible_population),
            ));
        }
        counties.push(County {
            id: r.id.clone(),
            state: r.state.clone(),
            name: r.name.clone(),
            latitude: r.lat,
            longitude: r.lon,
            eligible_population: r.eligible_population as u64,
        });
    }
    let county_ids: HashSet<&str> = county_rows.iter().map(|(_, r)| r.id.as_str()).collect();

    let mut airports = Vec::with_capacity(airport_rows.len());
    for (line, r) in &airport_rows {
        unique(&mut node_ids, AIRPORTS_FILE, *line, &r.id)?;
        let kind = match r.kind.as_str() {
            "commercial" => AirportKind::Commercial,
            "general" => AirportKind::General,
            other => {
                return Err(DataError::invalid(
                    AIRPORTS_FILE,
                    *line,
                    format!("kind must be commercial or general, got {other:?}"),
                ))
            }
        };
        if !county_ids.contains(r.county_id.as_str()) {
            return Err(DataError::DanglingKey {
                file: AIRPORTS_FILE.into(),
                line: *line,
                kind: "county_id",
                key: r.county_id.clone(),
            });
        }
        airports.push(Airport {
            id: r.id.clone(),
            kind,
            state: r.state.clone(),
            county_id: r.county_id.clone(),
            latitude: r.lat,
            longitude: r.lon,
        });
    }
    let airport_ids: HashSet<&str> = airport_rows.iter().map(|(_, r)| r.id.as_str()).collect();

    let mut clinics = Vec::with_capacity(clinic_rows.len());
    for (line, r) in &clinic_rows {
        unique(&mut node_ids, CLINICS_FILE, *line, &r.id)?;
        if r.capacity_per_day < 0 {
            return Err(DataError::invalid(
                CLINICS_FILE,
                *line,
                format!("capacity_per_day must be >= 0, got {}", r.capacity_per_day),
            ));
        }
        if !county_ids.contains(r.county_id.as_str()) {
            return Err(DataError::DanglingKey {
                file: CLINICS_FILE.into(),
                line: *line,
                kind: "county_id",
                key: r.county_id.clone(),
            });
        }
        clinics.push(Clinic {
            id: r.id.clone(),
            name: r.name.clone(),
            state: r.state.clone(),
            county_id: r.county_id.clone(),
            latitude: r.lat,
            longitude: r.lon,
            capacity_per_day: r.capacity_per_day as u32,
        });
    }

    let mut flights = Vec::with_capacity(flight_rows.len());
    let mut legs: HashSet<(&str, &str)> = HashSet::new();
    for (line, r) in &flight_rows {
        for key in [&r.origin_airport, &r.dest_airport] {
            if !airport_ids.contains(key.as_str()) {
                return Err(DataError::DanglingKey {
                    file: FLIGHTS_FILE.into(),
                    line: *line,
                    kind: "airport",
                    key: key.clone(),
                });
            }
        }
        if !legs.insert((&r.origin_airport, &r.dest_airport)) {
            return Err(DataError::invalid(
                FLIGHTS_FILE,
                *line,
                format!("duplicate leg {} -> {}", r.origin_airport, r.dest_airport),
            ));
        }
        if r.seats < 0 {
            return Err(DataError::invalid(
                FLIGHTS_FILE,
                *line,
                format!("seats must be >= 0, got {}", r.seats),
            ));
        }
        non_negative(FLIGHTS_FILE, *line, "avg_fare", r.avg_fare)?;
        positive(FLIGHTS_FILE, *line, "avg_time_min", r.avg_time_min)?;
        flights.push(FlightLeg {
            origin_airport: r.origin_airport.clone(),
            dest_airport: r.dest_airport.clone(),
            seats: r.seats as u32,
            avg_fare: r.avg_fare,
            avg_time_min: r.avg_time_min,
        });
    }

    let mut surface_times = Vec::with_capacity(surface_rows.len());
    let mut surface_keys: HashSet<(&str, &str, &str)> = HashSet::new();
    for (line, r) in &surface_rows {
        for key in [&r.tail_node, &r.head_node] {
            if !node_ids.contains(key.as_str()) {
                return Err(DataError::DanglingKey {
                    file: SURFACE_TIMES_FILE.into(),
                    line: *line,
                    kind: "node",
                    key: key.clone(),
                });
            }
        }
        let mode = match r.mode.as_str() {
            "private_vehicle" => Mode::PrivateVehicle,
            "ride_hail" => Mode::RideHail,
            other => {
                return Err(DataError::invalid(
                    SURFACE_TIMES_FILE,
                    *line,
                    format!("mode must be private_vehicle or ride_hail, got {other:?}"),
                ))
            }
        };
        if !surface_keys.insert((&r.tail_node, &r.head_node, &r.mode)) {
            return Err(DataError::invalid(
                SURFACE_TIMES_FILE,
                *line,
                format!("duplicate record {} -> {} ({})", r.tail_node, r.head_node, r.mode),
            ));
        }
        positive(SURFACE_TIMES_FILE, *line, "time_min", r.time_min)?;
        surface_times.push(SurfaceTime {
            tail_node: r.tail_node.clone(),
            head_node: r.head_node.clone(),
            mode,
            time_min: r.time_min,
        });
    }

    let mut state_rates = Vec::with_capacity(rate_rows.len());
    let mut states: HashSet<&str> = HashSet::new();
    for (line, r) in &rate_rows {
        if !states.insert(&r.state) {
            return Err(DataError::invalid(
                STATE_RATES_FILE,
                *line,
                format!("duplicate state {:?}", r.state),
            ));
        }
        non_negative(STATE_RATES_FILE, *line, "abortions_per_1000_women", r.abortions_per_1000_women)?;
        state_rates.push(StateRate {
            state: r.state.clone(),
            abortions_per_1000_women: r.abortions_per_1000_women,
        });
    }

    Ok(ReferenceData {
        counties,
        airports,
        clinics,
        flights,
        surface_times,
        state_rates,
    })
}

fn write_rows<T: Serialize>(
    root: &Path,
    file: &str,
    columns: &[&str],
    rows: impl IntoIterator<Item = T>,
) -> Result<(), DataError> {
    let path = root.join(file);
    let io_err = |e: csv::Error| DataError::Io {
        path: path.clone(),
        source: std::io::Error::other(e),
    };
    // Header written by hand so empty tables still carry it.
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(&path)
        .map_err(io_err)?;
    w.write_record(columns).map_err(io_err)?;
    for row in rows {
        w.serialize(row).map_err(io_err)?;
    }
    w.flush().map_err(|source| DataError::Io {
        path: path.clone(),
        source,
    })
}

/// Writes `data` as the six CSV files under `root`, creating the directory.
/// Output is byte-for-byte deterministic for equal inputs.
pub fn write_datasets(root: impl AsRef<Path>, data: &ReferenceData) -> Result<(), DataError> {
    let root = root.as_ref();
    fs::create_dir_all(root).map_err(|source| DataError::Io {
        path: root.to_path_buf(),
        source,
    })?;
    write_rows(
        root,
        COUNTIES_FILE,
        COUNTY_COLUMNS,
        data.counties.iter().map(|c| CountyRow {
            id: c.id.clone(),
            state: c.state.clone(),
            name: c.name.clone(),
            lat: c.latitude,
            lon: c.longitude,
            eligible_population: c.eligible_population as i64,
        }),
    )?;
    write_rows(
        root,
        AIRPORTS_FILE,
        AIRPORT_COLUMNS,
        data.airports.iter().map(|a| AirportRow {
            id: a.id.clone(),
            kind: a.kind.as_str().to_string(),
            state: a.state.clone(),
            county_id: a.county_id.clone(),
            lat: a.latitude,
            lon: a.longitude,
        }),
    )?;
    write_rows(
        root,
        CLINICS_FILE,
        CLINIC_COLUMNS,
        data.clinics.iter().map(|c| ClinicRow {
            id: c.id.clone(),
            name: c.name.clone(),
            state: c.state.clone(),
            county_id: c.county_id.clone(),
            lat: c.latitude,
            lon: c.longitude,
            capacity_per_day: i64::from(c.capacity_per_day),
        }),
    )?;
    write_rows(
        root,
        FLIGHTS_FILE,
        FLIGHT_COLUMNS,
        data.flights.iter().map(|f| FlightRow {
            origin_airport: f.origin_airport.clone(),
            dest_airport: f.dest_airport.clone(),
            seats: i64::from(f.seats),
            avg_fare: f.avg_fare,
            avg_time_min: f.avg_time_min,
        }),
    )?;
    write_rows(
        root,
        SURFACE_TIMES_FILE,
        SURFACE_COLUMNS,
        data.surface_times.iter().map(|s| SurfaceRow {
            tail_node: s.tail_node.clone(),
            head_node: s.head_node.clone(),
            mode: match s.mode {
                Mode::PrivateVehicle => "private_vehicle",
                Mode::RideHail => "ride_hail",
                Mode::None => "none",
            }
            .to_string(),
            time_min: s.time_min,
        }),
    )?;
    write_rows(
        root,
        STATE_RATES_FILE,
        RATE_COLUMNS,
        data.state_rates.iter().map(|r| RateRow {
            state: r.state.clone(),
            abortions_per_1000_women: r.abortions_per_1000_women,
        }),
    )
}

impl ReferenceData {
    pub fn county(&self, id: &str) -> Option<&County> {
        self.counties.iter().find(|c| c.id == id)
    }

    pub fn clinic(&self, id: &str) -> Option<&Clinic> {
        self.clinics.iter().find(|c| c.id == id)
    }

    pub fn airport(&self, id: &str) -> Option<&Airport> {
        self.airports.iter().find(|a| a.id == id)
    }

    pub fn state_rate(&self, state: &str) -> Option<f64> {
        self.state_rates
            .iter()
            .find(|r| r.state == state)
            .map(|r| r.abortions_per_1000_women)
    }

    /// Every state code that appears anywhere in the data, sorted.
    pub fn states(&self) -> Vec<String> {
        let mut set: Vec<String> = self
            .counties
            .iter()
            .map(|c| c.state.clone())
            .chain(self.airports.iter().map(|a| a.state.clone()))
            .chain(self.clinics.iter().map(|c| c.state.clone()))
            .chain(self.state_rates.iter().map(|r| r.state.clone()))
            .collect();
        set.sort();
        set.dedup();
        set
    }

    pub fn surface_index(&self) -> HashMap<(&str, &str, Mode), f64> {
        self.surface_times
            .iter()
            .map(|s| ((s.tail_node.as_str(), s.head_node.as_str(), s.mode), s.time_min))
            .collect()
    }

    pub fn flight_index(&self) -> HashMap<(&str, &str), &FlightLeg> {
        self.flights
            .iter()
            .map(|f| ((f.origin_airport.as_str(), f.dest_airport.as_str()), f))
            .collect()
    }

    /// Non-fatal data-quality findings: states with eligible population but
    /// no abortion rate, and distinct airports sharing coordinates.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut populated: BTreeMap<&str, u64> = BTreeMap::new();
        for c in &self.counties {
            *populated.entry(c.state.as_str()).or_default() += c.eligible_population;
        }
        for (state, pop) in populated {
            if pop > 0 && self.state_rate(state).is_none() {
                out.push(format!("state {state} has eligible population but no abortion rate"));
            }
        }
        for (i, a) in self.airports.iter().enumerate() {
            for b in &self.airports[i + 1..] {
                if a.latitude == b.latitude && a.longitude == b.longitude {
                    out.push(format!("airports {} and {} share coordinates", a.id, b.id));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, file: &str, body: &str) {
        fs::write(dir.join(file), body).unwrap();
    }

    fn minimal(dir: &Path) {
        write(dir, COUNTIES_FILE, "id,state,name,lat,lon,eligible_population\nQ1,XO,One,38.0,-92.0,73000\nV1,XD,Hub,41.8,-87.7,0\n");
        write(dir, AIRPORTS_FILE, "id,kind,state,county_id,lat,lon\nR1,commercial,XD,V1,41.9,-87.9\n");
        write(dir, CLINICS_FILE, "id,name,state,county_id,lat,lon,capacity_per_day\nC1,\"Clinic, One\",XD,V1,41.8,-87.6,5\n");
        write(dir, FLIGHTS_FILE, "origin_airport,dest_airport,seats,avg_fare,avg_time_min\n");
        write(dir, SURFACE_TIMES_FILE, "tail_node,head_node,mode,time_min\nQ1,C1,private_vehicle,300\n");
        write(dir, STATE_RATES_FILE, "state,abortions_per_1000_women\nXO,10\n");
    }

    #[test]
    fn loads_minimal_bundle() {
        let dir = tempfile::tempdir().unwrap();
        minimal(dir.path());
        let data = load_datasets(dir.path()).unwrap();
        assert_eq!(data.counties.len(), 2);
        assert_eq!(data.clinics[0].name, "Clinic, One");
        assert!(data.warnings().is_empty());
    }

    #[test]
    fn negative_seats_name_the_line() {
        let dir = tempfile::tempdir().unwrap();
        minimal(dir.path());
        write(
            dir.path(),
            AIRPORTS_FILE,
            "id,kind,state,county_id,lat,lon\nR1,commercial,XD,V1,41.9,-87.9\nM1,commercial,XO,Q1,38.7,-90.4\n",
        );
        write(
            dir.path(),
            FLIGHTS_FILE,
            "origin_airport,dest_airport,seats,avg_fare,avg_time_min\nM1,R1,-1,200,75\n",
        );
        let err = load_datasets(dir.path()).unwrap_err();
        assert_eq!(err.to_string(), "flights.csv:2: seats must be >= 0, got -1");
    }

    #[test]
    fn clinic_with_unknown_county_is_dangling() {
        let dir = tempfile::tempdir().unwrap();
        minimal(dir.path());
        write(
            dir.path(),
            CLINICS_FILE,
            "id,name,state,county_id,lat,lon,capacity_per_day\nC1,One,XD,V1,41.8,-87.6,5\nC2,Two,XD,NOPE,41.8,-87.6,5\n",
        );
        match load_datasets(dir.path()).unwrap_err() {
            DataError::DanglingKey { file, line, key, .. } => {
                assert_eq!((file.as_str(), line, key.as_str()), ("clinics.csv", 3, "NOPE"));
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn unknown_column_and_missing_file() {
        let dir = tempfile::tempdir().unwrap();
        minimal(dir.path());
        write(dir.path(), STATE_RATES_FILE, "state,abortions_per_1000_women,extra\nXO,10,1\n");
        assert!(load_datasets(dir.path())
            .unwrap_err()
            .to_string()
            .contains("state_rates.csv:1: unknown column \"extra\""));
        fs::remove_file(dir.path().join(FLIGHTS_FILE)).unwrap();
        assert!(matches!(load_datasets(dir.path()), Err(DataError::MissingFile(_))));
    }

    #[test]
    fn bad_mode_and_missing_rate_warning() {
        let dir = tempfile::tempdir().unwrap();
        minimal(dir.path());
        write(dir.path(), STATE_RATES_FILE, "state,abortions_per_1000_women\n");
        let data = load_datasets(dir.path()).unwrap();
        assert_eq!(data.warnings(), vec!["state XO has eligible population but no abortion rate"]);
        write(dir.path(), SURFACE_TIMES_FILE, "tail_node,head_node,mode,time_min\nQ1,C1,bus,300\n");
        assert!(load_datasets(dir.path()).unwrap_err().to_string().starts_with("surface_times.csv:2:"));
    }
}
