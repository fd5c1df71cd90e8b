//! JSON forms for complex values: `{"re": .., "im": ..}`.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CJson {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for CJson {
    fn from(c: Complex64) -> Self {
        CJson { re: c.re, im: c.im }
    }
}

impl From<CJson> for Complex64 {
    fn from(c: CJson) -> Self {
        Complex64::new(c.re, c.im)
    }
}

pub mod complex {
    use super::*;
    pub fn serialize<S: Serializer>(c: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        CJson::from(*c).serialize(s)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        CJson::deserialize(d).map(Into::into)
    }
}

pub mod complex_vec {
    use super::*;
    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|c| CJson::from(*c)).collect::<Vec<_>>().serialize(s)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        Ok(Vec::<CJson>::deserialize(d)?.into_iter().map(Into::into).collect())
    }
}

pub mod complex_rows {
    use super::*;
    pub fn serialize<S: Serializer>(v: &[Vec<Complex64>], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|r| r.iter().map(|c| CJson::from(*c)).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Complex64>>, D::Error> {
        Ok(Vec::<Vec<CJson>>::deserialize(d)?
            .into_iter()
            .map(|r| r.into_iter().map(Into::into).collect())
            .collect())
    }
}
