//! Serde helpers for exact numbers in JSON.
//!
//! Integers are written as JSON numbers when they fit in an `i64` and as
//! decimal strings otherwise; both forms are accepted on input. Rationals are
//! written as `"p/q"` strings (or plain integers when `q = 1`).

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

#[derive(Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Small(i64),
    Big(u64),
    Text(String),
}

pub fn int_to_value(v: &BigInt) -> serde_json::Value {
    match v.to_i64() {
        Some(small) => serde_json::Value::from(small),
        None => serde_json::Value::from(v.to_string()),
    }
}

pub fn rat_to_string(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).ok()?;
            let d = BigInt::from_str(d.trim()).ok()?;
            if d == BigInt::from(0) {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => BigInt::from_str(s).ok().map(BigRational::from_integer),
    }
}

pub mod bigint {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        int_to_value(v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        match IntRepr::deserialize(d)? {
            IntRepr::Small(v) => Ok(v.into()),
            IntRepr::Big(v) => Ok(v.into()),
            IntRepr::Text(t) => BigInt::from_str(t.trim()).map_err(de::Error::custom),
        }
    }
}

pub mod bigint_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(int_to_value).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<IntRepr>::deserialize(d)?
            .into_iter()
            .map(|r| match r {
                IntRepr::Small(v) => Ok(v.into()),
                IntRepr::Big(v) => Ok(v.into()),
                IntRepr::Text(t) => BigInt::from_str(t.trim()).map_err(de::Error::custom),
            })
            .collect()
    }
}

pub mod bigint_cube {
    use super::*;

    #[derive(Serialize, Deserialize)]
    struct Row(#[serde(with = "super::bigint_vec")] Vec<BigInt>);

    pub fn serialize<S: Serializer>(v: &[Vec<Vec<BigInt>>], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|plane| plane.iter().map(|r| Row(r.clone())).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Vec<BigInt>>>, D::Error> {
        let planes = Vec::<Vec<Row>>::deserialize(d)?;
        Ok(planes
            .into_iter()
            .map(|p| p.into_iter().map(|r| r.0).collect())
            .collect())
    }
}

pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rat_to_string(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).ok_or_else(|| de::Error::custom(format!("invalid rational {text:?}")))
    }
}
