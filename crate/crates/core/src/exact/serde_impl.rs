//! JSON forms: a Gaussian rational is `{"re": "p/q", "im": "r/s"}`; a bare
//! string such as `"p/q"` or `"1/2-3i"` is accepted on input.

use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use super::bivariate::BivariatePoly;
use super::gaussian::GaussianRational;
use super::poly::DensityPoly;
use super::rational::{format_rational, parse_rational};

/// Serializes a rational as its `"p/q"` string.
pub fn serialize_rational<S: Serializer>(
    r: &num_rational::BigRational,
    s: S,
) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("GaussianRational", 2)?;
        st.serialize_field("re", &format_rational(&self.re))?;
        st.serialize_field("im", &format_rational(&self.im))?;
        st.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GaussianRepr {
    Real(String),
    Parts {
        re: String,
        #[serde(default = "zero_literal")]
        im: String,
    },
}

fn zero_literal() -> String {
    "0".into()
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let (re, im) = match GaussianRepr::deserialize(deserializer)? {
            GaussianRepr::Real(text) => {
                return GaussianRational::parse(&text).map_err(de::Error::custom)
            }
            GaussianRepr::Parts { re, im } => (re, im),
        };
        let re = parse_rational(&re).map_err(de::Error::custom)?;
        let im = parse_rational(&im).map_err(de::Error::custom)?;
        Ok(GaussianRational::new(re, im))
    }
}

impl Serialize for DensityPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.coeffs().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DensityPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Vec::<GaussianRational>::deserialize(deserializer).map(DensityPoly::new)
    }
}

impl Serialize for BivariatePoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.rows().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BivariatePoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Vec::<Vec<GaussianRational>>::deserialize(deserializer).map(BivariatePoly::new)
    }
}
