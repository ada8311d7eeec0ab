//! Serde adapter for `BigUint`: a JSON number while it fits `u64`, a decimal
//! string beyond that.

use num_bigint::BigUint;
use serde::{Deserialize, Deserializer, Serializer};

pub fn serialize<S: Serializer>(value: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    match u64::try_from(value) {
        Ok(small) => s.serialize_u64(small),
        Err(_) => s.serialize_str(&value.to_string()),
    }
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Small(u64),
        Text(String),
    }
    match Repr::deserialize(d)? {
        Repr::Small(v) => Ok(BigUint::from(v)),
        Repr::Text(t) => t.parse().map_err(serde::de::Error::custom),
    }
}

pub mod opt {
    use num_bigint::BigUint;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(value: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
        match value {
            Some(v) => super::serialize(v, s),
            None => s.serialize_none(),
        }
    }
}

pub mod ratio {
    use num_bigint::BigUint;
    use num_rational::Ratio;
    use serde::Serializer;

    /// `"numer/denom"`, or just the numerator for integers.
    pub fn serialize<S: Serializer>(value: &Ratio<BigUint>, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&value.to_string())
    }
}
