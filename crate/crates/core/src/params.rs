use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::scalar::is_odd_prime;

/// Prime, truncation order, target digits and guard digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub p: u32,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m: i64,
    #[serde(rename = "G")]
    pub g: i64,
}

impl Params {
    pub fn new(p: u32, n: usize, m: i64, g: i64) -> Result<Self> {
        if !is_odd_prime(p) {
            return Err(Error::Domain(format!("p = {p} is not an odd prime")));
        }
        if n == 0 || m <= 0 || g < 0 {
            return Err(Error::Domain("N, M must be positive and G non-negative".into()));
        }
        Ok(Params { p, n, m, g })
    }

    pub fn standard(p: u32) -> Self {
        Params::new(p, 64, 24, 16).expect("standard parameters")
    }

    /// Working absolute precision `M + G`.
    pub fn work(&self) -> i64 {
        self.m + self.g
    }

    pub fn with_order(&self, n: usize) -> Self {
        Params { n, ..*self }
    }
}
