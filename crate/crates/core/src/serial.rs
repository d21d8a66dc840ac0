//! JSON encodings shared by the cache and the CLI.
//!
//! Rationals are written as strings in `num/den` form (the denominator is
//! omitted when it is 1), so nothing is lost to floating point. Coefficient
//! tables are JSON objects keyed by the decimal index.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::laurent::{LaurentPoly, Var};
use crate::qexp::QExpansion;
use crate::{Error, Rational, Result};

/// Version tag written into every serialised table.
pub const FORMAT_VERSION: u32 = 1;

pub fn rat_to_string(x: &Rational) -> String {
    x.to_string()
}

pub fn parse_rat(s: &str) -> Result<Rational> {
    Rational::from_str(s.trim()).map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))
}

/// Dense coefficients to an index-keyed table of rational strings.
pub fn to_table(coeffs: &[Rational]) -> BTreeMap<u64, String> {
    coeffs.iter().enumerate().map(|(n, c)| (n as u64, rat_to_string(c))).collect()
}

/// Inverse of [`to_table`]; missing indices up to `order` read as zero.
pub fn from_table(table: &BTreeMap<u64, String>, order: usize) -> Result<Vec<Rational>> {
    let mut out = vec![Rational::from_integer(0.into()); order + 1];
    for (&n, s) in table {
        let n = n as usize;
        if n > order {
            return Err(Error::Parse(format!("index {n} beyond order {order}")));
        }
        out[n] = parse_rat(s)?;
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
struct QTable {
    order: usize,
    coeffs: BTreeMap<u64, String>,
}

/// `serde(with = ...)` adapter writing a [`QExpansion`] as `{order, coeffs: {n: a(n)}}`.
pub mod qexp_as_table {
    use super::*;

    pub fn serialize<S: Serializer>(q: &QExpansion, s: S) -> std::result::Result<S::Ok, S::Error> {
        QTable { order: q.order(), coeffs: to_table(q.coeffs()) }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<QExpansion, D::Error> {
        let t = QTable::deserialize(d)?;
        let coeffs = from_table(&t.coeffs, t.order).map_err(D::Error::custom)?;
        Ok(QExpansion::new(coeffs))
    }
}

impl Serialize for QExpansion {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        qexp_as_table::serialize(self, s)
    }
}

impl<'de> Deserialize<'de> for QExpansion {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        qexp_as_table::deserialize(d)
    }
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    vars: Vec<String>,
    terms: BTreeMap<String, String>,
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let vars = self.variables();
        let terms = self
            .restricted_terms(&vars)
            .into_iter()
            .map(|(exps, c)| {
                let key = exps.iter().map(i32::to_string).collect::<Vec<_>>().join(",");
                (key, rat_to_string(&c))
            })
            .collect();
        PolyRepr { vars: vars.iter().map(|v| v.name().to_string()).collect(), terms }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PolyRepr::deserialize(d)?;
        let vars = repr
            .vars
            .iter()
            .map(|n| Var::from_name(n).ok_or_else(|| D::Error::custom(format!("unknown variable {n}"))))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let mut terms = Vec::with_capacity(repr.terms.len());
        for (key, c) in &repr.terms {
            let exps = if key.is_empty() {
                Vec::new()
            } else {
                key.split(',')
                    .map(|e| e.parse::<i32>().map_err(D::Error::custom))
                    .collect::<std::result::Result<Vec<_>, _>>()?
            };
            terms.push((exps, parse_rat(c).map_err(D::Error::custom)?));
        }
        LaurentPoly::from_restricted_terms(&vars, &terms).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rational_strings() {
        let x = Rational::new((-3).into(), 4.into());
        assert_eq!(rat_to_string(&x), "-3/4");
        assert_eq!(parse_rat("-3/4").unwrap(), x);
        assert_eq!(parse_rat("7").unwrap(), Rational::from_integer(7.into()));
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn poly_json_shape() {
        let p = &LaurentPoly::monomial(3, &[(Var::Q, -1), (Var::X, 2)]) + &LaurentPoly::one();
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"{"vars":["q","X"],"terms":{"-1,2":"3","0,0":"1"}}"#);
        let back: LaurentPoly = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }

    proptest! {
        #[test]
        fn qexp_json_round_trip(v in proptest::collection::vec((-50i64..50, 1i64..9), 1..20)) {
            let q = QExpansion::new(v.iter().map(|&(a, b)| Rational::new(a.into(), b.into())).collect());
            let json = serde_json::to_string(&q).unwrap();
            let back: QExpansion = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(back, q);
        }

        #[test]
        fn poly_json_round_trip(terms in proptest::collection::vec((-3i32..4, -3i32..4, -20i64..20), 0..8)) {
            let mut p = LaurentPoly::zero();
            for (a, b, c) in terms {
                p += &LaurentPoly::monomial(c, &[(Var::Alpha, a), (Var::T, b)]);
            }
            let back: LaurentPoly = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
            prop_assert_eq!(back, p);
        }
    }
}
