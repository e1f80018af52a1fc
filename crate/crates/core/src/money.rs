//! Dollar amounts on the wire: decimal strings with two fraction digits.

use serde::{Deserialize, Deserializer, Serializer};

/// Rounds to whole cents, half away from zero, and normalises `-0.00`.
pub fn format(amount: f64) -> String {
    let cents = (amount * 100.0).round();
    let cents = if cents == 0.0 { 0.0 } else { cents };
    format!("{:.2}", cents / 100.0)
}

pub fn serialize<S: Serializer>(amount: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format(*amount))
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    let s = String::deserialize(d)?;
    s.parse::<f64>().map_err(serde::de::Error::custom)
}

#[cfg(test)]
mod tests {
    use super::format;

    #[test]
    fn two_digits() {
        assert_eq!(format(24.0), "24.00");
        assert_eq!(format(398.054), "398.05");
        assert_eq!(format(0.125), "0.13");
        assert_eq!(format(-0.001), "0.00");
    }
}
