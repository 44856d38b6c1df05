//! Measures on `Z_p^*` and `psi = 0` series.
//!
//! The series of a measure `mu` is `sum_a mu(a) (1 + pi)^a`. At level `n` a
//! measure is recorded by its masses on the classes of `(Z/p^n)^*`; a
//! [`PointMeasure`] is a finite combination of Dirac masses, on which
//! convolution, `iota`, `[-1]` and the twists `Tw_j` are exact.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::padic::scalar::PadicScalar;
use crate::series::rigid::RigidSeries;

#[derive(Clone, Debug, PartialEq)]
pub struct UnitMeasure {
    pub p: u32,
    pub level: u32,
    pub entries: BTreeMap<u64, PadicScalar>,
}

impl UnitMeasure {
    pub fn zero(p: u32, level: u32) -> Self {
        UnitMeasure { p, level, entries: BTreeMap::new() }
    }

    pub fn modulus(&self) -> u64 {
        (self.p as u64).pow(self.level)
    }

    pub fn get(&self, a: u64) -> Option<&PadicScalar> {
        self.entries.get(&(a % self.modulus()))
    }

    pub fn add_mass(&mut self, a: u64, m: &PadicScalar) {
        let a = a % self.modulus();
        assert!(!a.is_multiple_of(self.p as u64), "mass on a non-unit");
        let v = match self.entries.get(&a) {
            Some(old) => old + m,
            None => m.clone(),
        };
        self.entries.insert(a, v);
    }

    /// Push forward to level `n - 1` (sum over the fibres).
    pub fn push_forward(&self) -> Result<UnitMeasure> {
        if self.level <= 1 {
            return Err(Error::Domain("cannot push forward below level 1".into()));
        }
        let mut out = UnitMeasure::zero(self.p, self.level - 1);
        for (a, m) in &self.entries {
            out.add_mass(*a, m);
        }
        Ok(out)
    }

    /// Smallest valuation of `self - other` over all classes.
    pub fn discrepancy(&self, other: &UnitMeasure) -> i64 {
        assert_eq!(self.level, other.level, "level mismatch");
        let keys: std::collections::BTreeSet<u64> = self.entries.keys().chain(other.entries.keys()).copied().collect();
        let z = PadicScalar::zero(self.p, i64::MAX / 8);
        keys.into_iter()
            .map(|a| {
                let x = self.entries.get(&a).unwrap_or(&z);
                let y = other.entries.get(&a).unwrap_or(&z);
                (x - y).valuation()
            })
            .min()
            .unwrap_or(i64::MAX / 8)
    }

    pub fn precision(&self) -> i64 {
        self.entries.values().map(|m| m.precision()).min().unwrap_or(i64::MAX / 8)
    }

    pub fn scale(&self, c: &PadicScalar) -> UnitMeasure {
        let entries = self.entries.iter().map(|(a, m)| (*a, m * c)).collect();
        UnitMeasure { p: self.p, level: self.level, entries }
    }

    pub fn add(&self, other: &UnitMeasure) -> Result<UnitMeasure> {
        if self.level != other.level || self.p != other.p {
            return Err(Error::Domain(format!("level mismatch: {} vs {}", self.level, other.level)));
        }
        let mut out = self.clone();
        for (a, m) in &other.entries {
            out.add_mass(*a, m);
        }
        Ok(out)
    }

    /// `a -> a^{-1}`.
    pub fn iota(&self) -> UnitMeasure {
        let q = self.modulus();
        let mut out = UnitMeasure::zero(self.p, self.level);
        for (a, m) in &self.entries {
            out.add_mass(inverse_mod(*a, q), m);
        }
        out
    }

    /// `a -> -a`.
    pub fn minus_one(&self) -> UnitMeasure {
        let q = self.modulus();
        let mut out = UnitMeasure::zero(self.p, self.level);
        for (a, m) in &self.entries {
            out.add_mass(q - a, m);
        }
        out
    }
}

pub fn inverse_mod(a: u64, q: u64) -> u64 {
    let (mut r0, mut r1) = (q as i128, a as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (s0, s1) = (s1, s0 - k * s1);
    }
    assert_eq!(r0, 1, "{a} is not invertible mod {q}");
    s0.rem_euclid(q as i128) as u64
}

/// The level-`n` measure of a `psi = 0` polynomial `sum b_i (1 + pi)^i`: `mu(a) = sum_{i = a mod p^n} b_i`.
pub fn measure_of(f: &RigidSeries, level: u32) -> Result<UnitMeasure> {
    if level == 0 {
        return Err(Error::Domain("measure level must be at least 1".into()));
    }
    if !f.is_exact() {
        return Err(Error::Domain("measure_of needs an exact polynomial".into()));
    }
    let p = f.p();
    let x = f.to_xbasis()?;
    let mut mu = UnitMeasure::zero(p, level);
    for (i, b) in x.iter().enumerate() {
        if b.is_zero() {
            continue;
        }
        if (i as u64).is_multiple_of(p as u64) {
            return Err(Error::Internal(format!(
                "mass {b} at the non-unit exponent {i}: the series does not satisfy psi = 0"
            )));
        }
        mu.add_mass(i as u64, b);
    }
    Ok(mu)
}

/// `sum_a mu(a) (1 + pi)^a` over representatives `0 < a < p^n`.
pub fn series_of(mu: &UnitMeasure) -> RigidSeries {
    let q = mu.modulus() as usize;
    let mut x = vec![PadicScalar::zero(mu.p, i64::MAX / 8); q];
    for (a, m) in &mu.entries {
        x[*a as usize] = m.clone();
    }
    RigidSeries::from_xbasis(mu.p, x)
}

/// `(mu * nu)(c) = sum_{ab = c} mu(a) nu(b)` on `(Z/p^n)^*`.
pub fn convolve(mu: &UnitMeasure, nu: &UnitMeasure) -> Result<UnitMeasure> {
    if mu.level != nu.level || mu.p != nu.p {
        return Err(Error::Domain(format!("level mismatch: {} vs {}", mu.level, nu.level)));
    }
    let q = mu.modulus();
    let mut out = UnitMeasure::zero(mu.p, mu.level);
    for (a, x) in &mu.entries {
        for (b, y) in &nu.entries {
            out.add_mass(((*a as u128 * *b as u128) % q as u128) as u64, &(x * y));
        }
    }
    Ok(out)
}

/// Finite sum of Dirac masses at points of `Z_p^*`.
#[derive(Clone, Debug, PartialEq)]
pub struct PointMeasure {
    pub p: u32,
    pub atoms: Vec<(PadicScalar, PadicScalar)>,
}

impl PointMeasure {
    /// Dirac masses at the exponents of a `psi = 0` polynomial.
    pub fn from_series(f: &RigidSeries, prec: i64) -> Result<Self> {
        let p = f.p();
        let x = f.to_xbasis()?;
        let mut atoms = Vec::new();
        for (i, b) in x.into_iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            if (i as u64).is_multiple_of(p as u64) {
                return Err(Error::Domain(format!("exponent {i} is not a unit: psi(f) != 0")));
            }
            atoms.push((PadicScalar::from_i64(p, i as i64, prec), b));
        }
        Ok(PointMeasure { p, atoms })
    }

    /// `sum m (1 + pi)^x` to order `n`.
    pub fn to_series(&self, n: usize) -> Result<RigidSeries> {
        let mut acc = RigidSeries::truncated(
            self.p,
            vec![PadicScalar::zero(self.p, i64::MAX / 8); n],
            crate::series::rigid::Tail::new(i64::MAX / 8, 0),
        );
        for (x, m) in &self.atoms {
            acc = &acc + &RigidSeries::binomial(x, n)?.scale(m);
        }
        Ok(acc)
    }

    /// Masses collected on the classes of `(Z/p^n)^*`.
    pub fn project(&self, level: u32) -> Result<UnitMeasure> {
        let q = (self.p as u64).pow(level);
        let mut out = UnitMeasure::zero(self.p, level);
        for (x, m) in &self.atoms {
            let r = x.residue_u128(level)? as u64 % q;
            out.add_mass(r, m);
        }
        Ok(out)
    }

    pub fn convolve(&self, other: &PointMeasure) -> PointMeasure {
        let mut atoms = Vec::new();
        for (x, m) in &self.atoms {
            for (y, n) in &other.atoms {
                atoms.push((x * y, m * n));
            }
        }
        PointMeasure { p: self.p, atoms }
    }

    pub fn iota(&self) -> Result<PointMeasure> {
        let atoms = self.atoms.iter().map(|(x, m)| Ok((x.inv()?, m.clone()))).collect::<Result<_>>()?;
        Ok(PointMeasure { p: self.p, atoms })
    }

    pub fn minus_one(&self) -> PointMeasure {
        PointMeasure { p: self.p, atoms: self.atoms.iter().map(|(x, m)| (-x, m.clone())).collect() }
    }

    /// `Tw_j`: multiply the density by `x^j`; on series it is `d^j`, `d = (1 + pi) d/dpi`.
    pub fn twist(&self, j: i64) -> Result<PointMeasure> {
        let atoms = self.atoms.iter().map(|(x, m)| Ok((x.clone(), m * &x.pow(j)?))).collect::<Result<_>>()?;
        Ok(PointMeasure { p: self.p, atoms })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::cyclo::CycloField;

    const W: i64 = 40;

    /// `p^{-n} sum_{zeta^{p^n} = 1} zeta^{-a} f(zeta - 1)`, grouped by the exact order of `zeta`.
    fn character_sum(f: &RigidSeries, level: u32, a: u64) -> PadicScalar {
        let p = f.p();
        let mut acc = PadicScalar::zero(p, W);
        for k in 0..=level {
            let field = CycloField::get(p, k, W);
            let q = field.conductor();
            let zinv = field.zeta_pow(q - a % q);
            let v = &zinv * &f.eval_at(&field);
            acc = &acc + &v.trace(0).coeffs()[0];
        }
        acc.shift(-(level as i64))
    }

    #[test]
    fn dirac_masses() {
        let p = 3;
        let one_plus = RigidSeries::from_i64s(p, &[1, 1], W);
        let mu = measure_of(&one_plus, 3).unwrap();
        assert_eq!(mu.entries.len(), 1);
        assert!(mu.get(1).unwrap().eq_at(&PadicScalar::one(p, W)));
        let f = RigidSeries::one_plus_pi_pow(p, 5, W);
        let mu = measure_of(&f, 2).unwrap();
        assert!(mu.get(5).unwrap().eq_at(&PadicScalar::one(p, W)));
        let one = RigidSeries::constant(&PadicScalar::one(p, W));
        assert!(measure_of(&one, 2).is_err());
    }

    #[test]
    fn measure_matches_character_sums() {
        let p = 3;
        let f = RigidSeries::from_xbasis(
            p,
            [0, 2, 5, 0, 1, 7, 0, 3, 1, 0, 4].iter().map(|&c| PadicScalar::from_i64(p, c, W)).collect(),
        );
        let mu = measure_of(&f, 2).unwrap();
        for a in [1u64, 2, 4, 5, 7, 8] {
            let want = character_sum(&f, 2, a);
            let got = mu.get(a).cloned().unwrap_or_else(|| PadicScalar::zero(p, W));
            assert!(got.eq_at(&want), "a={a}");
        }
    }

    #[test]
    fn convolution_identity_and_commutativity() {
        let p = 5;
        let delta = measure_of(&RigidSeries::from_i64s(p, &[1, 1], W), 2).unwrap();
        let f = RigidSeries::one_plus_pi_pow(p, 7, W);
        let mu = measure_of(&f, 2).unwrap();
        assert!(convolve(&delta, &mu).unwrap().discrepancy(&mu) >= W);
        let nu = measure_of(&(&f + &RigidSeries::one_plus_pi_pow(p, 3, W)), 2).unwrap();
        let a = convolve(&mu, &nu).unwrap();
        let b = convolve(&nu, &mu).unwrap();
        assert!(a.discrepancy(&b) >= W);
    }

    #[test]
    fn amice_refinement() {
        let p = 3;
        let f = RigidSeries::from_xbasis(p, (0..30).map(|i| PadicScalar::from_i64(p, if i % 3 == 0 { 0 } else { i * i + 1 }, W)).collect());
        let m3 = measure_of(&f, 3).unwrap();
        let m2 = measure_of(&f, 2).unwrap();
        assert!(m3.push_forward().unwrap().discrepancy(&m2) >= W);
    }
}
