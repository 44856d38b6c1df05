//! The acceptance suites: each one runs an identity over seeded random inputs and
//! returns one [`Report`] per configuration.

mod algebra;
mod crys;
mod maps;
pub mod random;
mod wach;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::Params;
use crate::report::Report;

pub const SUITES: [&str; 10] =
    ["psi-phi", "exo", "trace", "exact-seq", "recip", "twist", "inclu-nabla", "mellin", "adjoint", "wach"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub primes: Vec<u32>,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m: i64,
    #[serde(rename = "G")]
    pub g: i64,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { primes: vec![3, 5], n: 64, m: 24, g: 16, seed: 0 }
    }
}

impl SuiteConfig {
    pub fn params(&self, p: u32) -> Result<Params> {
        Params::new(p, self.n, self.m, self.g)
    }

    pub fn work(&self) -> i64 {
        self.m + self.g
    }

    /// Seed for one suite and prime, independent of scheduling.
    pub fn seed_for(&self, suite: &str, p: u32) -> u64 {
        let tag = suite.bytes().fold(0xcbf29ce484222325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100000001b3));
        tag ^ self.seed.wrapping_mul(0x9e3779b97f4a7c15) ^ ((p as u64) << 32)
    }
}

pub fn is_suite(name: &str) -> bool {
    SUITES.contains(&name)
}

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<Vec<Report>> {
    for &p in &cfg.primes {
        cfg.params(p)?;
    }
    let per_prime = |f: fn(&SuiteConfig, u32) -> Result<Vec<Report>>| -> Result<Vec<Report>> {
        let parts: Vec<Result<Vec<Report>>> = cfg.primes.par_iter().map(|&p| f(cfg, p)).collect();
        let mut out = Vec::new();
        for r in parts {
            out.extend(r?);
        }
        Ok(out)
    };
    match name {
        "psi-phi" => per_prime(algebra::psi_phi),
        "exo" => per_prime(algebra::pole_expansion),
        "mellin" => per_prime(algebra::mellin),
        "trace" => per_prime(crys::trace),
        "exact-seq" => per_prime(crys::exact_sequence),
        "recip" => per_prime(maps::recip),
        "twist" => per_prime(maps::twist),
        "inclu-nabla" => per_prime(maps::inclusion),
        "adjoint" => per_prime(maps::adjoint),
        "wach" => per_prime(wach::kernel_containment),
        _ => Err(Error::Domain(format!("unknown suite {name:?}"))),
    }
}

/// Run several suites in parallel; results keep the order of `names`.
pub fn run_suites(names: &[String], cfg: &SuiteConfig) -> Result<Vec<(String, Vec<Report>)>> {
    if let Some(bad) = names.iter().find(|n| !is_suite(n)) {
        return Err(Error::Domain(format!("unknown suite {bad:?}")));
    }
    let out: Vec<Result<Vec<Report>>> = names.par_iter().map(|n| run_suite(n, cfg)).collect();
    names.iter().cloned().zip(out).map(|(n, r)| r.map(|r| (n, r))).collect()
}

/// Reciprocity identities under the alternative sign convention, for every prime.
pub fn sign_audit(cfg: &SuiteConfig) -> Result<Vec<(String, bool)>> {
    let parts: Vec<Result<Vec<(String, bool)>>> = cfg.primes.par_iter().map(|&p| maps::sign_audit(cfg, p)).collect();
    let mut out = Vec::new();
    for r in parts {
        out.extend(r?);
    }
    Ok(out)
}
