use crate::error::{Error, Result};
use crate::ops::{nabla0_over_gamma, psi};
use crate::padic::scalar::{ilog, PadicScalar};
use crate::report::digits_zero;
use crate::series::rigid::RigidSeries;

/// `h = (phi^n(pi) / t) g` with `g = nabla_0 / (gamma_n - 1) (f)`.
#[derive(Clone, Debug)]
pub struct InclusionProbe {
    pub level: u32,
    pub g: RigidSeries,
    pub h: RigidSeries,
}

pub fn inclusion_probe(f: &RigidSeries, level: u32, n: usize, prec: i64) -> Result<InclusionProbe> {
    if level == 0 {
        return Err(Error::Domain("the inclusion needs n >= 1".into()));
    }
    let p = f.p();
    let g = nabla0_over_gamma(level, f, n, prec)?;
    let q = (p as u64).pow(level);
    let phin = &RigidSeries::one_plus_pi_pow(p, q, prec) - &RigidSeries::constant(&PadicScalar::one(p, prec));
    let h = (&phin * &g).truncate(n).divide_by_t(1)?;
    Ok(InclusionProbe { level, g, h })
}

impl InclusionProbe {
    /// First `k` with `v(h_k) < -(n + 2) - 2 log_p k`, the decay a pole at some `zeta_{p^m} - 1` would force.
    pub fn growth_violation(&self) -> Option<usize> {
        let p = self.h.p();
        let floor = |k: usize| -(self.level as i64 + 2) - 2 * ilog(p, k.max(1) as u64) as i64;
        self.h
            .coeffs()
            .iter()
            .enumerate()
            .find(|(k, c)| !c.is_zero() && c.precision() > floor(*k) && c.valuation() < floor(*k))
            .map(|(k, _)| k)
    }

    /// Number of coefficients of `h` known well enough for the growth test to see a pole.
    pub fn judged(&self) -> usize {
        let p = self.h.p();
        let floor = |k: usize| -(self.level as i64 + 2) - 2 * ilog(p, k.max(1) as u64) as i64;
        self.h.coeffs().iter().enumerate().take_while(|(k, c)| c.precision() > floor(*k)).count()
    }

    /// Digits to which `psi(h)` vanishes, over the coefficients `psi` certifies to at least `floor` places.
    ///
    /// Since `t h = phi^n(pi) g` and `psi(t x) = p^{-1} t psi(x)`, this is read off
    /// `psi(phi^n(pi) g)`, which avoids the precision lost dividing by `t`.
    pub fn psi_digits(&self, floor: i64) -> (i64, usize) {
        let p = self.g.p();
        let prec = self.g.coeffs().first().map_or(0, |c| c.precision());
        let q = (p as u64).pow(self.level);
        let phin = &RigidSeries::one_plus_pi_pow(p, q, prec) - &RigidSeries::constant(&PadicScalar::one(p, prec));
        let n = self.g.order().unwrap_or(self.g.coeffs().len());
        let ps = psi(&(&phin * &self.g).truncate(n));
        let known: Vec<PadicScalar> = ps.coeffs().iter().take_while(|c| c.precision() >= floor).cloned().collect();
        (digits_zero(&known), known.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const W: i64 = 40;

    #[test]
    fn psi_zero_input_gives_a_psi_zero_power_series() {
        let p = 3;
        let f = &RigidSeries::one_plus_pi_pow(p, 1, W) - &RigidSeries::one_plus_pi_pow(p, 5, W).scale(&PadicScalar::from_i64(p, 2, W));
        for level in 1..3 {
            let probe = inclusion_probe(&f, level, 96, W).unwrap();
            assert_eq!(probe.growth_violation(), None, "level {level}");
            let (d, k) = probe.psi_digits(10);
            assert!(k >= 1 && d >= 10, "level {level}: {d} over {k}");
        }
    }

    #[test]
    fn constants_leave_a_pole() {
        let p = 3;
        let f = RigidSeries::constant(&PadicScalar::one(p, W));
        let probe = inclusion_probe(&f, 1, 96, W).unwrap();
        assert!(probe.growth_violation().is_some());
    }
}
