//! Identity reports and agreement measured in p-adic digits.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::padic::cyclo::CycloElement;
use crate::padic::scalar::PadicScalar;
use crate::series::rigid::RigidSeries;
use crate::series::tseries::TSeries;

/// Cap for reported digit counts; anything above is "exact at working precision".
pub const EXACT: i64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub identity: String,
    pub params: Map<String, Value>,
    pub precision_floor: i64,
    /// Worst agreement over all cases, in digits (relative to the reference value when it is nonzero).
    pub max_discrepancy_valuation: i64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Report {
    pub fn new(identity: &str, params: Map<String, Value>, floor: i64, digits: i64) -> Self {
        let digits = digits.min(EXACT);
        Report {
            identity: identity.to_string(),
            params,
            precision_floor: floor,
            max_discrepancy_valuation: digits,
            pass: digits >= floor,
            note: None,
        }
    }

    /// A report whose pass/fail is decided by a structural check alongside the digit count.
    pub fn with_check(mut self, ok: bool, why: &str) -> Self {
        if !ok {
            self.pass = false;
            self.note = Some(why.to_string());
        }
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    /// `identity: PASS (digits >= floor)` on one line.
    pub fn summary_line(&self) -> String {
        let status = if self.pass { "PASS" } else { "FAIL" };
        let digits = if self.max_discrepancy_valuation >= EXACT {
            "exact".to_string()
        } else {
            self.max_discrepancy_valuation.to_string()
        };
        let mut s = format!("{}: {status} (digits {digits}, floor {})", self.identity, self.precision_floor);
        if let Some(n) = &self.note {
            s.push_str(&format!(" [{n}]"));
        }
        s
    }
}

/// Build a params map from `(key, value)` pairs.
pub fn params(pairs: &[(&str, Value)]) -> Map<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn relative(disc: i64, refv: Option<i64>) -> i64 {
    match refv {
        Some(v) => disc.saturating_sub(v),
        None => disc,
    }
}

pub fn digits_scalars(got: &[PadicScalar], want: &[PadicScalar]) -> i64 {
    let disc = got.iter().zip(want).map(|(a, b)| a.discrepancy(b)).min().unwrap_or(EXACT);
    let refv = want.iter().filter(|w| !w.is_zero()).map(|w| w.valuation()).min();
    relative(disc, refv)
}

pub fn digits_elems(got: &[CycloElement], want: &[CycloElement]) -> i64 {
    let disc = got.iter().zip(want).map(|(a, b)| a.discrepancy(b)).min().unwrap_or(EXACT);
    let refv = want.iter().filter(|w| !w.is_zero()).map(|w| w.min_valuation()).min();
    relative(disc, refv)
}

/// Agreement of two coordinate vectors of `t`-expansions over their common length.
pub fn digits_tseries(got: &[TSeries], want: &[TSeries]) -> i64 {
    let mut disc = EXACT;
    let mut refv: Option<i64> = None;
    for (a, b) in got.iter().zip(want) {
        for k in 0..a.len().min(b.len()) {
            disc = disc.min(a.coeff(k).discrepancy(b.coeff(k)));
            if !b.coeff(k).is_zero() {
                let v = b.coeff(k).min_valuation();
                refv = Some(refv.map_or(v, |r| r.min(v)));
            }
        }
    }
    relative(disc, refv)
}

/// Agreement of the first `n` coefficients.
pub fn digits_series(got: &RigidSeries, want: &RigidSeries, n: usize) -> i64 {
    let mut g = Vec::new();
    let mut w = Vec::new();
    for k in 0..n {
        if let (Some(a), Some(b)) = (got.coeff(k), want.coeff(k)) {
            g.push(a);
            w.push(b);
        }
    }
    digits_scalars(&g, &w)
}

/// Digits to which a list of scalars is known to vanish.
pub fn digits_zero(xs: &[PadicScalar]) -> i64 {
    xs.iter().map(|x| if x.is_zero() { x.precision() } else { x.valuation() }).min().unwrap_or(EXACT)
}

/// Agreement of two coordinate vectors of series over their first `n` coefficients.
pub fn digits_series_vec(got: &[RigidSeries], want: &[RigidSeries], n: usize) -> i64 {
    let mut g = Vec::new();
    let mut w = Vec::new();
    for (a, b) in got.iter().zip(want) {
        for k in 0..n {
            if let (Some(x), Some(y)) = (a.coeff(k), b.coeff(k)) {
                g.push(x);
                w.push(y);
            }
        }
    }
    digits_scalars(&g, &w)
}
