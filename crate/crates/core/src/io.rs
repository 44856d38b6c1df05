//! JSON forms of series, module elements, measures and field elements.
//!
//! Scalars are strings in the [`PadicScalar::to_text`] format; plain integers and
//! fractions are accepted on input and read at the header precision `M`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::crys::ModuleElement;
use crate::error::{Error, Result};
use crate::ops::UnitMeasure;
use crate::padic::cyclo::CycloElement;
use crate::padic::scalar::PadicScalar;
use crate::series::rigid::{RigidSeries, Tail};

pub fn scalar_text(c: &PadicScalar) -> String {
    if c.is_zero() && c.precision() >= i64::MAX / 16 {
        "0".into()
    } else {
        c.to_text()
    }
}

fn parse_list(p: u32, xs: &[String], m: i64, what: &str) -> Result<Vec<PadicScalar>> {
    xs.iter()
        .enumerate()
        .map(|(i, s)| PadicScalar::parse_with_default(p, s, m).map_err(|e| Error::Parse(format!("{what}[{i}]: {e}"))))
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TailJson {
    pub val: i64,
    pub growth: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeriesJson {
    pub p: u32,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m: i64,
    pub coeffs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<TailJson>,
}

/// An input series with fewer than `N` coefficients and no tail is an exact polynomial.
pub fn series_from_json(s: &SeriesJson) -> Result<RigidSeries> {
    if s.coeffs.len() > s.n {
        return Err(Error::Parse(format!("{} coefficients exceed N = {}", s.coeffs.len(), s.n)));
    }
    let c = parse_list(s.p, &s.coeffs, s.m, "coeffs")?;
    Ok(match &s.tail {
        Some(t) => RigidSeries::truncated(s.p, c, Tail::new(t.val, t.growth)),
        None => RigidSeries::exact(s.p, c),
    })
}

pub fn series_to_json(f: &RigidSeries, m: i64) -> SeriesJson {
    SeriesJson {
        p: f.p(),
        n: f.order().unwrap_or(f.coeffs().len()),
        m,
        coeffs: f.coeffs().iter().map(scalar_text).collect(),
        tail: f.tail().map(|t| TailJson { val: t.val, growth: t.growth }),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ElementJson {
    pub p: u32,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m: i64,
    #[serde(default)]
    pub twist: i64,
    pub components: Vec<Vec<String>>,
}

pub fn element_from_json(e: &ElementJson) -> Result<ModuleElement> {
    if e.components.is_empty() {
        return Err(Error::Parse("components: empty".into()));
    }
    let comps = e
        .components
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if c.len() > e.n {
                return Err(Error::Parse(format!("components[{i}]: {} coefficients exceed N = {}", c.len(), e.n)));
            }
            Ok(RigidSeries::exact(e.p, parse_list(e.p, c, e.m, &format!("components[{i}]"))?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ModuleElement::new(e.twist, comps))
}

pub fn element_to_json(y: &ModuleElement, m: i64) -> Value {
    json!({
        "twist": y.twist,
        "components": y.comps.iter().map(|c| series_to_json(c, m)).collect::<Vec<_>>(),
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MeasureJson {
    pub p: u32,
    pub level: u32,
    #[serde(default = "default_m", rename = "M")]
    pub m: i64,
    pub entries: BTreeMap<String, String>,
}

fn default_m() -> i64 {
    24
}

pub fn measure_from_json(j: &MeasureJson) -> Result<UnitMeasure> {
    let mut mu = UnitMeasure::zero(j.p, j.level);
    for (a, s) in &j.entries {
        let a: u64 = a.parse().map_err(|_| Error::Parse(format!("entries: bad class '{a}'")))?;
        if a.is_multiple_of(j.p as u64) {
            return Err(Error::Parse(format!("entries: {a} is not a unit mod {}", j.p)));
        }
        let m = PadicScalar::parse_with_default(j.p, s, j.m).map_err(|e| Error::Parse(format!("entries[{a}]: {e}")))?;
        mu.add_mass(a, &m);
    }
    Ok(mu)
}

pub fn measure_to_json(mu: &UnitMeasure, m: i64) -> MeasureJson {
    MeasureJson {
        p: mu.p,
        level: mu.level,
        m,
        entries: mu.entries.iter().map(|(a, c)| (a.to_string(), scalar_text(c))).collect(),
    }
}

/// Coordinates in the basis `1, pi_n, ..., pi_n^{d-1}` of `F_n`.
pub fn cyclo_to_json(x: &CycloElement) -> Value {
    json!({
        "level": x.level(),
        "basis": "pi_n",
        "coeffs": x.coeffs().iter().map(scalar_text).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_round_trip() {
        let text = r#"{"p": 5, "N": 8, "M": 10, "coeffs": ["1", "-2", "1/3", "5^2 * (1) + O(5^6)"]}"#;
        let s: SeriesJson = serde_json::from_str(text).unwrap();
        let f = series_from_json(&s).unwrap();
        assert!(f.is_exact());
        let back = series_from_json(&series_to_json(&f, 10)).unwrap();
        assert_eq!(back.coeffs().len(), 4);
        for (a, b) in f.coeffs().iter().zip(back.coeffs()) {
            assert!(a.eq_at(b));
        }
    }

    #[test]
    fn measure_rejects_non_units() {
        let j = MeasureJson { p: 3, level: 2, m: 10, entries: [("3".to_string(), "1".to_string())].into() };
        assert!(matches!(measure_from_json(&j), Err(Error::Parse(_))));
    }

    #[test]
    fn bad_scalar_names_the_field() {
        let e = ElementJson { p: 3, n: 4, m: 10, twist: 0, components: vec![vec!["1".into(), "x".into()]] };
        let err = element_from_json(&e).unwrap_err().to_string();
        assert!(err.contains("components[0][1]"), "{err}");
    }
}
