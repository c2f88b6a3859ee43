//! Exact rationals and their wire form.
//!
//! Every comparison in this crate goes through [`Rational`]; on the wire a
//! rational is a lowest-terms string such as `"3/2"` or `"-4"`.

use std::collections::BTreeMap;

use num_rational::Ratio;
use serde::{de, Deserialize, Deserializer, Serializer};

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// Parses `"p/q"` or `"p"`. The result is reduced.
pub fn parse(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidRational(s.to_string());
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let num: i64 = num.parse().map_err(|_| bad())?;
    let den: i64 = den.parse().map_err(|_| bad())?;
    if den == 0 {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

pub fn format(q: &Rational) -> String {
    // Ratio keeps itself reduced with a positive denominator.
    q.to_string()
}

pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format(q))
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
    let raw = RawRational::deserialize(d)?;
    raw.into_rational().map_err(de::Error::custom)
}

/// Accepts either a string or a bare JSON integer.
#[derive(Deserialize)]
#[serde(untagged)]
enum RawRational {
    Int(i64),
    Str(String),
}

impl RawRational {
    fn into_rational(self) -> Result<Rational> {
        match self {
            RawRational::Int(n) => Ok(int(n)),
            RawRational::Str(s) => parse(&s),
        }
    }
}

pub mod map {
    use super::*;
    use serde::ser::SerializeMap;

    pub fn serialize<S: Serializer>(
        m: &BTreeMap<u32, Rational>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let mut out = s.serialize_map(Some(m.len()))?;
        for (k, v) in m {
            out.serialize_entry(&k.to_string(), &format(v))?;
        }
        out.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<BTreeMap<u32, Rational>, D::Error> {
        let raw = BTreeMap::<u32, RawRational>::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| v.into_rational().map(|q| (k, q)))
            .collect::<Result<_>>()
            .map_err(de::Error::custom)
    }
}

pub mod opt {
    use super::*;

    pub fn serialize<S: Serializer>(
        q: &Option<Rational>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_some(&format(q)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Rational>, D::Error> {
        Option::<RawRational>::deserialize(d)?
            .map(RawRational::into_rational)
            .transpose()
            .map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse("1/2").unwrap(), Rational::new(1, 2));
        assert_eq!(parse("4/8").unwrap(), Rational::new(1, 2));
        assert_eq!(parse(" -3 ").unwrap(), int(-3));
        assert_eq!(parse("3/-6").unwrap(), Rational::new(-1, 2));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn format_lowest_terms() {
        assert_eq!(format(&Rational::new(6, 4)), "3/2");
        assert_eq!(format(&Rational::new(-8, 4)), "-2");
        assert_eq!(format(&Rational::new(2, -4)), "-1/2");
    }
}
