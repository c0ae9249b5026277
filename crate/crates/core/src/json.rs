//! JSON helpers. Integers are written as JSON numbers when they fit in an
//! `i64` and as decimal strings otherwise, so documents stay lossless.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An arbitrary-precision integer with a lossless JSON encoding.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = JsonInt;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a decimal integer string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<JsonInt, E> {
                Ok(JsonInt(v.into()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<JsonInt, E> {
                Ok(JsonInt(v.into()))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<JsonInt, E> {
                Err(E::custom(format!("{v} is not an integer")))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<JsonInt, E> {
                BigInt::from_str(v.trim())
                    .map(JsonInt)
                    .map_err(|_| E::custom(format!("{v:?} is not an integer")))
            }
        }
        d.deserialize_any(V)
    }
}

/// A rational written as `"p/q"`, or as a plain integer when `q = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonRational(pub BigRational);

impl Serialize for JsonRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_integer() {
            JsonInt(self.0.to_integer()).serialize(s)
        } else {
            s.serialize_str(&format!("{}/{}", self.0.numer(), self.0.denom()))
        }
    }
}

impl<'de> Deserialize<'de> for JsonRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        let text = match &v {
            serde_json::Value::Number(n) => n.to_string(),
            serde_json::Value::String(s) => s.clone(),
            _ => return Err(de::Error::custom("expected a rational")),
        };
        BigRational::from_str(text.trim())
            .map(JsonRational)
            .map_err(|_| de::Error::custom(format!("{text:?} is not a rational")))
    }
}

pub fn ints(v: &[BigInt]) -> Vec<JsonInt> {
    v.iter().cloned().map(JsonInt).collect()
}

pub fn unints(v: &[JsonInt]) -> Vec<BigInt> {
    v.iter().map(|x| x.0.clone()).collect()
}

pub fn rationals(v: &[BigRational]) -> Vec<JsonRational> {
    v.iter().cloned().map(JsonRational).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_values_become_strings() {
        let big: BigInt = BigInt::from(i64::MAX) * 4;
        let s = serde_json::to_string(&vec![JsonInt(3.into()), JsonInt(big.clone())]).unwrap();
        assert_eq!(s, format!("[3,\"{big}\"]"));
        let back: Vec<JsonInt> = serde_json::from_str(&s).unwrap();
        assert_eq!(back[1].0, big);
        assert!(serde_json::from_str::<JsonInt>("1.5").is_err());
    }

    #[test]
    fn rationals_roundtrip() {
        let r = JsonRational(BigRational::new((-3).into(), 6.into()));
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, "\"-1/2\"");
        assert_eq!(serde_json::from_str::<JsonRational>(&s).unwrap(), r);
        assert_eq!(
            serde_json::to_string(&JsonRational(BigRational::from_integer(4.into()))).unwrap(),
            "4"
        );
    }
}
