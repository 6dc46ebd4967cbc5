//! Serde helpers that keep arbitrary-precision values readable in JSON:
//! big integers as decimal strings, rationals as `"p/q"`.

use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub mod biguint_text {
    use super::*;

    pub fn serialize<S: Serializer>(value: &BigUint, ser: S) -> Result<S::Ok, S::Error> {
        value.to_string().serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BigUint, D::Error> {
        let text = String::deserialize(de)?;
        BigUint::from_str(&text).map_err(serde::de::Error::custom)
    }
}

pub mod biguint_vec_text {
    use super::*;

    pub fn serialize<S: Serializer>(values: &[BigUint], ser: S) -> Result<S::Ok, S::Error> {
        let texts: Vec<String> = values.iter().map(|v| v.to_string()).collect();
        texts.serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<BigUint>, D::Error> {
        let texts = Vec::<String>::deserialize(de)?;
        texts
            .iter()
            .map(|t| BigUint::from_str(t).map_err(serde::de::Error::custom))
            .collect()
    }
}

pub mod rational_text {
    use super::*;

    pub fn serialize<S: Serializer>(value: &BigRational, ser: S) -> Result<S::Ok, S::Error> {
        format!("{}/{}", value.numer(), value.denom()).serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BigRational, D::Error> {
        let text = String::deserialize(de)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// Parses `"p/q"` or a bare integer `"p"`.
pub fn parse_rational(text: &str) -> Result<BigRational, String> {
    let mut parts = text.splitn(2, '/');
    let numer = parts
        .next()
        .filter(|s| !s.is_empty())
        .ok_or_else(|| format!("empty rational `{text}`"))?;
    let numer = num_bigint::BigInt::from_str(numer.trim())
        .map_err(|e| format!("bad numerator in `{text}`: {e}"))?;
    let denom = match parts.next() {
        Some(d) => num_bigint::BigInt::from_str(d.trim())
            .map_err(|e| format!("bad denominator in `{text}`: {e}"))?,
        None => num_bigint::BigInt::from(1),
    };
    if denom == num_bigint::BigInt::from(0) {
        return Err(format!("zero denominator in `{text}`"));
    }
    Ok(BigRational::new(numer, denom))
}

/// `p/q` in lowest terms, the inverse of [`parse_rational`].
pub fn rational_string(value: &BigRational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}
