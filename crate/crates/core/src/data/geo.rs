use crate::model::Airport;

pub const EARTH_RADIUS_MILES: f64 = 3958.8;
/// Cruise speed assumed for volunteer general-aviation aircraft.
pub const GA_SPEED_MPH: f64 = 130.0;

/// Great-circle distance in statute miles.
pub fn haversine_miles(lat1: f64, lon1: f64, lat2: f64, lon2: f64) -> f64 {
    let (p1, p2) = (lat1.to_radians(), lat2.to_radians());
    let dp = p2 - p1;
    let dl = (lon2 - lon1).to_radians();
    let a = (dp / 2.0).sin().powi(2) + p1.cos() * p2.cos() * (dl / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_MILES * a.sqrt().min(1.0).asin()
}

/// General-aviation flight time in whole minutes (half-up).
pub fn ga_flight_time(origin: &Airport, dest: &Airport) -> u32 {
    // Order the endpoints so the result is bit-for-bit symmetric.
    let (a, b) = if (origin.latitude, origin.longitude) <= (dest.latitude, dest.longitude) {
        (origin, dest)
    } else {
        (dest, origin)
    };
    if origin.id != dest.id && a.latitude == b.latitude && a.longitude == b.longitude {
        tracing::warn!(origin = %origin.id, dest = %dest.id, "distinct airports share coordinates");
    }
    let miles = haversine_miles(a.latitude, a.longitude, b.latitude, b.longitude);
    (miles / GA_SPEED_MPH * 60.0 + 0.5).floor() as u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::AirportKind;
    use proptest::prelude::*;

    fn at(id: &str, lat: f64, lon: f64) -> Airport {
        Airport {
            id: id.into(),
            kind: AirportKind::General,
            state: "XX".into(),
            county_id: "c".into(),
            latitude: lat,
            longitude: lon,
        }
    }

    #[test]
    fn same_point_is_zero() {
        let a = at("A", 38.6, -90.2);
        assert_eq!(ga_flight_time(&a, &a), 0);
    }

    #[test]
    fn meridian_distances() {
        // On a meridian the great-circle arc is R * dlat.
        let dlat = |miles: f64| (miles / EARTH_RADIUS_MILES).to_degrees();
        let a = at("A", 35.0, -90.0);
        assert_eq!(ga_flight_time(&a, &at("B", 35.0 + dlat(130.0), -90.0)), 60);
        assert_eq!(ga_flight_time(&a, &at("C", 35.0 + dlat(65.0), -90.0)), 30);
    }

    proptest! {
        #[test]
        fn symmetric(lat1 in -60.0f64..60.0, lon1 in -120.0f64..-70.0, lat2 in -60.0f64..60.0, lon2 in -120.0f64..-70.0) {
            let a = at("A", lat1, lon1);
            let b = at("B", lat2, lon2);
            prop_assert_eq!(ga_flight_time(&a, &b), ga_flight_time(&b, &a));
        }
    }
}
