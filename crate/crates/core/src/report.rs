//! Serialized forms of computed values.
//!
//! Exact integers are emitted as JSON integers, exact non-integral rationals
//! as normalized `"p/q"` strings and floats as JSON numbers.

use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::Rational;

#[derive(Debug, Clone, PartialEq)]
pub enum ReportValue {
    Int(i128),
    Rational(String),
    Float(f64),
}

impl ReportValue {
    pub fn as_f64(&self) -> f64 {
        match self {
            ReportValue::Int(v) => *v as f64,
            ReportValue::Rational(s) => s
                .split_once('/')
                .and_then(|(n, d)| Some(n.parse::<f64>().ok()? / d.parse::<f64>().ok()?))
                .unwrap_or(f64::NAN),
            ReportValue::Float(v) => *v,
        }
    }

    /// Parses an exact value back; floats yield `None`.
    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            ReportValue::Int(v) => Some(Rational::from_integer(*v)),
            ReportValue::Rational(s) => {
                let (n, d) = s.split_once('/').unwrap_or((s, "1"));
                let n: i128 = n.parse().ok()?;
                let d: i128 = d.parse().ok()?;
                (d != 0).then(|| Rational::new(n, d))
            }
            ReportValue::Float(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, ReportValue::Float(_))
    }
}

impl fmt::Display for ReportValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReportValue::Int(v) => write!(f, "{v}"),
            ReportValue::Rational(s) => f.write_str(s),
            ReportValue::Float(v) => write!(f, "{v}"),
        }
    }
}

impl Serialize for ReportValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            ReportValue::Int(v) => serializer.serialize_i128(*v),
            ReportValue::Rational(s) => serializer.serialize_str(s),
            ReportValue::Float(v) => serializer.serialize_f64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for ReportValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ValueVisitor;

        impl Visitor<'_> for ValueVisitor {
            type Value = ReportValue;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer, a float or a \"p/q\" string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<ReportValue, E> {
                Ok(ReportValue::Int(v.into()))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<ReportValue, E> {
                Ok(ReportValue::Int(v.into()))
            }

            fn visit_i128<E: de::Error>(self, v: i128) -> Result<ReportValue, E> {
                Ok(ReportValue::Int(v))
            }

            fn visit_u128<E: de::Error>(self, v: u128) -> Result<ReportValue, E> {
                i128::try_from(v)
                    .map(ReportValue::Int)
                    .map_err(|_| E::custom("integer out of range"))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<ReportValue, E> {
                Ok(ReportValue::Float(v))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<ReportValue, E> {
                if let Ok(i) = v.parse::<i128>() {
                    return Ok(ReportValue::Int(i));
                }
                let value = ReportValue::Rational(v.to_string());
                value
                    .as_rational()
                    .ok_or_else(|| E::custom(format!("malformed rational {v:?}")))?;
                Ok(value)
            }
        }

        deserializer.deserialize_any(ValueVisitor)
    }
}

/// Serde adapter writing exact values as strings (`"8"`, `"7/4"`) and
/// floats as numbers.
pub mod exact_string {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::ReportValue;

    pub fn serialize<S: Serializer>(v: &ReportValue, s: S) -> Result<S::Ok, S::Error> {
        match v {
            ReportValue::Int(i) => s.serialize_str(&i.to_string()),
            ReportValue::Rational(r) => s.serialize_str(r),
            ReportValue::Float(f) => s.serialize_f64(*f),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<ReportValue, D::Error> {
        ReportValue::deserialize(d)
    }
}
