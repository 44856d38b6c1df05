use num_bigint::BigInt;
use serde_json::json;

use crate::error::Result;
use crate::ops::{convolve, frobenius, measure_of, psi, psi_by_eta_sum, q_series, series_of, PointMeasure, UnitMeasure};
use crate::padic::scalar::PadicScalar;
use crate::report::{digits_scalars, digits_series, params, Report, EXACT};
use crate::series::rigid::RigidSeries;
use crate::suites::random::{self, rng};
use crate::suites::SuiteConfig;
use crate::wach::{psi_pole_expansion, IntLaurent};

const PSI_PHI_CASES: usize = 100;

pub fn psi_phi(cfg: &SuiteConfig, p: u32) -> Result<Vec<Report>> {
    let mut r = rng(cfg.seed_for("psi-phi", p));
    let prec = cfg.work();
    let mut digits = EXACT;
    for _ in 0..PSI_PHI_CASES {
        let f = random::integral_poly(&mut r, p, cfg.n, cfg.m, prec);
        digits = digits.min(digits_series(&psi(&frobenius(&f)), &f, cfg.n));
    }
    let ps = params(&[("p", json!(p)), ("N", json!(cfg.n)), ("M", json!(cfg.m)), ("cases", json!(PSI_PHI_CASES)), ("seed", json!(cfg.seed))]);
    Ok(vec![Report::new("psi o phi = id", ps, 20, digits)])
}

pub fn pole_expansion(cfg: &SuiteConfig, p: u32) -> Result<Vec<Report>> {
    let prec = cfg.work();
    let mut out = Vec::new();
    for m in 1..=4usize {
        let (lead, qm) = psi_pole_expansion(p, m, prec)?;
        let want = PadicScalar::one(p, prec).shift(m as i64 - 1);
        // oracle: the eta sum applied to q^m, since pi^{-m} = phi(pi^{-m}) q^m
        let mut qpow = RigidSeries::constant(&PadicScalar::one(p, prec));
        for _ in 0..m {
            qpow = &qpow * &q_series(p, prec);
        }
        let eta = psi_by_eta_sum(&qpow, prec)?;
        let eta_q = RigidSeries::exact(p, eta.coeffs().iter().skip(1).cloned().collect());
        let len = eta.coeffs().len().max(qm.coeffs().len());
        let digits = digits_scalars(std::slice::from_ref(&lead), &[want]).min(digits_series(&qm, &eta_q, len));
        let mut rep = Report::new(
            "psi(pi^-m) pi^m = p^(m-1) + pi Q_m",
            params(&[("p", json!(p)), ("m", json!(m)), ("M", json!(cfg.m))]),
            20,
            digits,
        );
        if m == 1 {
            let exact = IntLaurent::monomial(p, -1).psi() == IntLaurent::monomial(p, -1)
                && qm.coeffs().iter().all(|c| c.is_zero());
            rep = rep.with_check(exact, "psi(1/pi) != 1/pi exactly");
        }
        // the integer route gives the leading term exactly
        let exact = IntLaurent::monomial(p, -(m as i64)).psi().mul_pi_pow(m as i64);
        let lead_exact = exact.coeff(0) == BigInt::from(p).pow(m as u32 - 1);
        out.push(rep.with_check(lead_exact, "integer route leading term differs from p^(m-1)"));
    }
    Ok(out)
}

const MELLIN_LEVEL: u32 = 3;
const MELLIN_CASES: usize = 10;
const MELLIN_DIGITS: i64 = 10;

fn random_measure(r: &mut rand_chacha::ChaCha8Rng, p: u32, level: u32, prec: i64) -> UnitMeasure {
    let q = (p as u64).pow(level);
    let mut mu = UnitMeasure::zero(p, level);
    for a in (1..q).filter(|a| a % p as u64 != 0) {
        mu.add_mass(a, &random::integral(r, p, MELLIN_DIGITS, prec));
    }
    mu
}

/// Derivatives `(d^k f)(0)`, the moments `int x^k`.
fn moments(f: &RigidSeries, k: usize) -> Vec<PadicScalar> {
    let mut d = f.clone();
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        out.push(d.coeff(0).unwrap_or_else(|| PadicScalar::zero(f.p(), 0)));
        d = d.nabla();
    }
    out
}

pub fn mellin(cfg: &SuiteConfig, p: u32) -> Result<Vec<Report>> {
    let mut r = rng(cfg.seed_for("mellin", p));
    let prec = cfg.work();
    let level = MELLIN_LEVEL;
    let base = |name: &str| params(&[("p", json!(p)), ("level", json!(level)), ("cases", json!(MELLIN_CASES)), ("check", json!(name))]);

    let mut round = EXACT;
    for _ in 0..MELLIN_CASES {
        let mu = random_measure(&mut r, p, level, prec);
        round = round.min(measure_of(&series_of(&mu), level)?.discrepancy(&mu));
    }

    // Mel(f * g) = Mel(f) Mel(g): the level-3 convolution against exact point
    // convolution, and multiplicativity of the moments of the product series
    let n = 24;
    let mut mult = EXACT;
    for _ in 0..MELLIN_CASES {
        let f = random::psi_zero(&mut r, p, 4, 4 * p as u64, prec);
        let g = random::psi_zero(&mut r, p, 4, 4 * p as u64, prec);
        let (pf, pg) = (PointMeasure::from_series(&f, prec)?, PointMeasure::from_series(&g, prec)?);
        let conv = convolve(&measure_of(&f, level)?, &measure_of(&g, level)?)?;
        let point = pf.convolve(&pg);
        mult = mult.min(conv.discrepancy(&point.project(level)?));
        let k = 5;
        let prod: Vec<PadicScalar> = moments(&f, k).iter().zip(moments(&g, k)).map(|(a, b)| a * &b).collect();
        mult = mult.min(digits_scalars(&moments(&point.to_series(n)?, k), &prod));
    }

    // iota o d = d^{-1} o iota, read as d(iota(d f)) = iota(f); [-1] o d = -d o [-1]
    let mut inv = EXACT;
    let mut neg = EXACT;
    for _ in 0..MELLIN_CASES {
        let f = random::psi_zero(&mut r, p, 4, 4 * p as u64, prec);
        let df = f.nabla();
        let (m, dm) = (PointMeasure::from_series(&f, prec)?, PointMeasure::from_series(&df, prec)?);
        let lhs = dm.iota()?.to_series(n)?.nabla();
        inv = inv.min(digits_series(&lhs, &m.iota()?.to_series(n)?, n - 1));
        let lhs = dm.minus_one().to_series(n)?;
        let rhs = m.minus_one().to_series(n)?.nabla().scale(&PadicScalar::from_i64(p, -1, prec));
        neg = neg.min(digits_series(&lhs, &rhs, n - 1));
    }
    Ok(vec![
        Report::new("measure_of o series_of = id", base("round-trip"), MELLIN_DIGITS, round),
        Report::new("Mel(f * g) = Mel(f) Mel(g)", base("convolution"), MELLIN_DIGITS, mult),
        Report::new("iota o d = d^-1 o iota", base("iota"), MELLIN_DIGITS, inv),
        Report::new("[-1] o d = -d o [-1]", base("minus-one"), MELLIN_DIGITS, neg),
    ])
}
