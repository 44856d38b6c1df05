use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::padic::scalar::PadicScalar;
use crate::series::rigid::RigidSeries;

/// `pi^(-pole) * series`.
#[derive(Clone, Debug, PartialEq)]
pub struct RigidLaurent {
    pole: usize,
    series: RigidSeries,
}

impl RigidLaurent {
    pub fn new(pole: usize, series: RigidSeries) -> Self {
        RigidLaurent { pole, series }
    }

    pub fn from_series(series: RigidSeries) -> Self {
        RigidLaurent { pole: 0, series }
    }

    /// `pi^(-m)`.
    pub fn pi_inv_pow(p: u32, m: usize, prec: i64) -> Self {
        RigidLaurent { pole: m, series: RigidSeries::constant(&PadicScalar::one(p, prec)) }
    }

    pub fn p(&self) -> u32 {
        self.series.p()
    }

    pub fn pole(&self) -> usize {
        self.pole
    }

    pub fn series(&self) -> &RigidSeries {
        &self.series
    }

    /// Coefficient of `pi^k`.
    pub fn coeff(&self, k: i64) -> Option<PadicScalar> {
        let idx = k + self.pole as i64;
        if idx < 0 {
            return Some(PadicScalar::zero(self.p(), i64::MAX / 8));
        }
        self.series.coeff(idx as usize)
    }

    /// Truncation order in `pi` (exponent of the first unknown coefficient).
    pub fn order(&self) -> Option<i64> {
        self.series.order().map(|n| n as i64 - self.pole as i64)
    }

    /// Same element written with pole order `pole >= self.pole`.
    pub fn with_pole(&self, pole: usize) -> Self {
        assert!(pole >= self.pole);
        RigidLaurent { pole, series: self.series.mul_pi_pow(pole - self.pole) }
    }

    /// Lower the pole order as far as the leading coefficients vanish.
    pub fn normalize(&self) -> Self {
        let mut k = 0;
        while k < self.pole && self.series.coeffs().get(k).is_some_and(|c| c.is_zero()) {
            k += 1;
        }
        RigidLaurent { pole: self.pole - k, series: self.series.div_pi_pow(k).expect("leading zeros") }
    }

    pub fn to_series(&self) -> Result<RigidSeries> {
        let n = self.normalize();
        if n.pole > 0 {
            return Err(Error::Domain(format!("Laurent series has a pole of order {}", n.pole)));
        }
        Ok(n.series)
    }

    pub fn scale(&self, c: &PadicScalar) -> Self {
        RigidLaurent { pole: self.pole, series: self.series.scale(c) }
    }

    pub fn shift(&self, k: i64) -> Self {
        RigidLaurent { pole: self.pole, series: self.series.shift(k) }
    }

    pub fn with_cap(&self, cap: i64) -> Self {
        RigidLaurent { pole: self.pole, series: self.series.with_cap(cap) }
    }

    /// Coefficients from `pi^(-pole)` up to the truncation order (or the last nonzero one).
    pub fn coeff_range(&self) -> (i64, Vec<PadicScalar>) {
        (-(self.pole as i64), self.series.coeffs().to_vec())
    }
}

impl<'a> Add<&'a RigidLaurent> for &'a RigidLaurent {
    type Output = RigidLaurent;
    fn add(self, rhs: &RigidLaurent) -> RigidLaurent {
        let pole = self.pole.max(rhs.pole);
        RigidLaurent { pole, series: &self.with_pole(pole).series + &rhs.with_pole(pole).series }
    }
}

impl<'a> Sub<&'a RigidLaurent> for &'a RigidLaurent {
    type Output = RigidLaurent;
    fn sub(self, rhs: &RigidLaurent) -> RigidLaurent {
        let pole = self.pole.max(rhs.pole);
        RigidLaurent { pole, series: &self.with_pole(pole).series - &rhs.with_pole(pole).series }
    }
}

impl Neg for &RigidLaurent {
    type Output = RigidLaurent;
    fn neg(self) -> RigidLaurent {
        RigidLaurent { pole: self.pole, series: -&self.series }
    }
}

impl<'a> Mul<&'a RigidLaurent> for &'a RigidLaurent {
    type Output = RigidLaurent;
    fn mul(self, rhs: &RigidLaurent) -> RigidLaurent {
        RigidLaurent { pole: self.pole + rhs.pole, series: &self.series * &rhs.series }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pole_bookkeeping() {
        let p = 3;
        let a = RigidLaurent::pi_inv_pow(p, 2, 20);
        let b = RigidLaurent::from_series(RigidSeries::from_i64s(p, &[0, 0, 1], 20));
        let prod = (&a * &b).to_series().unwrap();
        assert!(prod.coeffs()[0].eq_at(&PadicScalar::one(p, 20)));
        assert!((&a + &b).to_series().is_err());
        assert_eq!((&a + &b).coeff(-2).unwrap(), PadicScalar::one(p, 20));
    }
}
