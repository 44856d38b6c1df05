//! Power series over `Q_p` in the variable `pi`, truncated `pi`-adically.
//!
//! A series is either an exact polynomial or a list of `N` known coefficients
//! with a [`Tail`] bound on everything from `pi^N` on.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::padic::cyclo::{CycloElement, CycloField};
use crate::padic::poly::{mul, mul_trunc, taylor_shift};
use crate::padic::scalar::{ilog, PadicScalar};

/// Valuation envelope: coefficient `m` has valuation at least `val - growth * floor(log_p m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Tail {
    pub val: i64,
    pub growth: u32,
}

impl Tail {
    pub fn new(val: i64, growth: u32) -> Self {
        Tail { val, growth }
    }

    pub fn bound_at(&self, p: u32, m: usize) -> i64 {
        self.val - self.growth as i64 * ilog(p, m as u64) as i64
    }

    fn join(a: Tail, b: Tail) -> Tail {
        Tail { val: a.val.min(b.val), growth: a.growth.max(b.growth) }
    }
}

/// `min_{m >= start} (h(m) - g * floor(log_p m))` for nondecreasing `h`.
pub fn envelope_min(p: u32, start: usize, g: u32, h: impl Fn(u64) -> i64) -> i64 {
    let start = start.max(1) as u64;
    let mut e = ilog(p, start);
    let mut best = i64::MAX;
    loop {
        let Some(pe) = (p as u64).checked_pow(e).filter(|&x| x < 1 << 60) else { break };
        let m = pe.max(start);
        best = best.min(h(m).saturating_sub(g as i64 * e as i64));
        if g == 0 {
            break;
        }
        e += 1;
    }
    best
}

#[derive(Clone, Debug, PartialEq)]
pub struct RigidSeries {
    p: u32,
    coeffs: Vec<PadicScalar>,
    tail: Option<Tail>,
}

fn exact_zero(p: u32) -> PadicScalar {
    PadicScalar::zero(p, i64::MAX / 8)
}

impl RigidSeries {
    pub fn exact(p: u32, coeffs: Vec<PadicScalar>) -> Self {
        RigidSeries { p, coeffs, tail: None }
    }

    pub fn truncated(p: u32, coeffs: Vec<PadicScalar>, tail: Tail) -> Self {
        RigidSeries { p, coeffs, tail: Some(tail) }
    }

    pub fn from_i64s(p: u32, coeffs: &[i64], prec: i64) -> Self {
        Self::exact(p, coeffs.iter().map(|&c| PadicScalar::from_i64(p, c, prec)).collect())
    }

    pub fn zero(p: u32) -> Self {
        Self::exact(p, Vec::new())
    }

    pub fn constant(c: &PadicScalar) -> Self {
        Self::exact(c.p(), vec![c.clone()])
    }

    pub fn pi(p: u32, prec: i64) -> Self {
        Self::from_i64s(p, &[0, 1], prec)
    }

    pub fn pi_pow(p: u32, k: usize, prec: i64) -> Self {
        let mut c = vec![PadicScalar::zero(p, prec); k + 1];
        c[k] = PadicScalar::one(p, prec);
        Self::exact(p, c)
    }

    /// `(1 + pi)^k` for `k >= 0`, exactly.
    pub fn one_plus_pi_pow(p: u32, k: u64, prec: i64) -> Self {
        let mut x = vec![PadicScalar::zero(p, prec); k as usize + 1];
        x[k as usize] = PadicScalar::one(p, prec);
        Self::from_xbasis(p, x)
    }

    /// `(1 + pi)^a = sum binom(a, k) pi^k` to order `n` for `a` in `Z_p`.
    ///
    /// `a = a' mod p^A` gives `binom(a, k) = binom(a', k) mod p^(A - floor(log_p k))`.
    pub fn binomial(a: &PadicScalar, n: usize) -> Result<Self> {
        if a.valuation() < 0 {
            return Err(Error::Domain("binomial exponent must be in Z_p".into()));
        }
        let p = a.p();
        let prec = a.precision();
        let ar = BigInt::from(a.residue()?);
        let mut c = Vec::with_capacity(n);
        let mut cur = BigInt::one();
        for k in 0..n {
            c.push(PadicScalar::from_bigint(p, &cur, prec - ilog(p, k as u64) as i64));
            cur = cur * (&ar - BigInt::from(k)) / BigInt::from(k + 1);
        }
        Ok(Self::truncated(p, c, Tail::new(0, 0)))
    }

    /// `t = log(1 + pi)` to order `n`.
    pub fn log_one_plus_pi(p: u32, n: usize, prec: i64) -> Self {
        let mut c = vec![PadicScalar::zero(p, prec)];
        for k in 1..n {
            let s = if k % 2 == 1 { 1 } else { -1 };
            c.push(PadicScalar::from_ratio(p, s, k as i64, prec).unwrap());
        }
        Self::truncated(p, c, Tail::new(0, 1))
    }

    /// Polynomial given in the basis `(1 + pi)^i`.
    pub fn from_xbasis(p: u32, mut x: Vec<PadicScalar>) -> Self {
        taylor_shift(&mut x, false);
        Self::exact(p, x)
    }

    /// Coordinates of an exact polynomial in the basis `(1 + pi)^i`.
    pub fn to_xbasis(&self) -> Result<Vec<PadicScalar>> {
        if self.tail.is_some() {
            return Err(Error::Domain("basis change needs an exact polynomial".into()));
        }
        let mut x = self.coeffs.clone();
        taylor_shift(&mut x, true);
        Ok(x)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[PadicScalar] {
        &self.coeffs
    }

    pub fn tail(&self) -> Option<Tail> {
        self.tail
    }

    pub fn is_exact(&self) -> bool {
        self.tail.is_none()
    }

    /// Truncation order, `None` for exact polynomials.
    pub fn order(&self) -> Option<usize> {
        self.tail.map(|_| self.coeffs.len())
    }

    /// Coefficient of `pi^k`; `None` past the truncation order.
    pub fn coeff(&self, k: usize) -> Option<PadicScalar> {
        match self.coeffs.get(k) {
            Some(c) => Some(c.clone()),
            None if self.tail.is_none() => Some(exact_zero(self.p)),
            None => None,
        }
    }

    /// Smallest absolute precision among the known coefficients.
    pub fn precision(&self) -> i64 {
        self.coeffs.iter().map(|c| c.precision()).min().unwrap_or(i64::MAX / 8)
    }

    pub fn min_valuation(&self) -> i64 {
        let known = self.coeffs.iter().map(|c| c.valuation()).min().unwrap_or(i64::MAX / 8);
        match self.tail {
            Some(t) => known.min(t.val),
            None => known,
        }
    }

    /// `(V, g)` with every coefficient of valuation at least `V - g floor(log_p m)`.
    pub fn envelope(&self) -> Tail {
        let g = self.tail.map_or(0, |t| t.growth);
        let known = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(m, c)| c.valuation() + g as i64 * ilog(self.p, m as u64) as i64)
            .min()
            .unwrap_or(i64::MAX / 8);
        let val = match self.tail {
            Some(t) => known.min(t.val),
            None => known,
        };
        Tail::new(val, g)
    }

    pub fn with_cap(&self, cap: i64) -> Self {
        RigidSeries {
            p: self.p,
            coeffs: self.coeffs.iter().map(|c| c.with_cap(cap)).collect(),
            tail: self.tail,
        }
    }

    /// Drop trailing coefficients of an exact polynomial that are zero at precision.
    pub fn trim(mut self) -> Self {
        if self.tail.is_none() {
            while self.coeffs.last().is_some_and(|c| c.is_zero()) {
                self.coeffs.pop();
            }
        }
        self
    }

    /// Keep coefficients below `n`; the rest goes into the tail bound.
    pub fn truncate(&self, n: usize) -> Self {
        if self.tail.is_none() && self.coeffs.len() <= n {
            return self.clone();
        }
        if let Some(order) = self.order() {
            if order <= n {
                return self.clone();
            }
        }
        let g = self.tail.map_or(0, |t| t.growth);
        let mut val = self.tail.map_or(i64::MAX / 8, |t| t.val);
        for (m, c) in self.coeffs.iter().enumerate().skip(n) {
            val = val.min(c.valuation() + g as i64 * ilog(self.p, m as u64) as i64);
        }
        RigidSeries { p: self.p, coeffs: self.coeffs[..n].to_vec(), tail: Some(Tail::new(val, g)) }
    }

    fn common_order(&self, other: &Self) -> Option<usize> {
        match (self.order(), other.order()) {
            (None, None) => None,
            (Some(a), None) | (None, Some(a)) => Some(a),
            (Some(a), Some(b)) => Some(a.min(b)),
        }
    }

    fn add_impl(&self, other: &Self, negate: bool) -> Self {
        assert_eq!(self.p, other.p, "mixed primes");
        let order = self.common_order(other);
        let (a, b) = match order {
            Some(n) => (self.truncate(n), other.truncate(n)),
            None => (self.clone(), other.clone()),
        };
        let len = a.coeffs.len().max(b.coeffs.len());
        let z = exact_zero(self.p);
        let coeffs = (0..len)
            .map(|k| {
                let x = a.coeffs.get(k).unwrap_or(&z);
                let y = b.coeffs.get(k).unwrap_or(&z);
                if negate {
                    x - y
                } else {
                    x + y
                }
            })
            .collect();
        let tail = match (a.tail, b.tail) {
            (Some(s), Some(t)) => Some(Tail::join(s, t)),
            (s, t) => s.or(t),
        };
        RigidSeries { p: self.p, coeffs, tail }
    }

    pub fn scale(&self, c: &PadicScalar) -> Self {
        RigidSeries {
            p: self.p,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
            tail: self.tail.map(|t| Tail::new(t.val + c.valuation(), t.growth)),
        }
    }

    /// Multiply by `p^k`.
    pub fn shift(&self, k: i64) -> Self {
        RigidSeries {
            p: self.p,
            coeffs: self.coeffs.iter().map(|x| x.shift(k)).collect(),
            tail: self.tail.map(|t| Tail::new(t.val + k, t.growth)),
        }
    }

    /// Multiply by `pi^k`.
    pub fn mul_pi_pow(&self, k: usize) -> Self {
        let mut coeffs = vec![exact_zero(self.p); k];
        coeffs.extend(self.coeffs.iter().cloned());
        RigidSeries { p: self.p, coeffs, tail: self.tail }
    }

    /// Divide by `pi^k`; the low coefficients must vanish at working precision.
    pub fn div_pi_pow(&self, k: usize) -> Result<Self> {
        for (i, c) in self.coeffs.iter().take(k).enumerate() {
            if !c.is_zero() {
                return Err(Error::Domain(format!("coefficient of pi^{i} is {c}, not divisible by pi^{k}")));
            }
        }
        if self.coeffs.len() < k && self.tail.is_some() {
            return Err(Error::PrecisionExhausted("division by pi past the truncation order".into()));
        }
        let coeffs = self.coeffs.iter().skip(k).cloned().collect();
        Ok(RigidSeries { p: self.p, coeffs, tail: self.tail })
    }

    /// `d/dpi`.
    pub fn derivative(&self) -> Self {
        let p = self.p;
        let prec = self.precision().max(0) + 64;
        let coeffs: Vec<PadicScalar> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(m, c)| c * &PadicScalar::from_i64(p, m as i64, prec))
            .collect();
        RigidSeries { p, coeffs, tail: self.tail.map(|t| Tail::new(t.val - t.growth as i64, t.growth)) }
    }

    /// `(1 + pi) d/dpi`.
    pub fn nabla(&self) -> Self {
        let d = self.derivative();
        let shifted = d.mul_pi_pow(1);
        match d.order() {
            Some(n) => (&d + &shifted).truncate(n),
            None => &d + &shifted,
        }
    }

    /// `int_0^pi f`.
    pub fn integrate(&self) -> Result<Self> {
        let p = self.p;
        let mut coeffs = vec![exact_zero(p)];
        for (m, c) in self.coeffs.iter().enumerate() {
            let d = PadicScalar::from_i64(p, m as i64 + 1, c.precision().max(0) + 64);
            coeffs.push(c.checked_div(&d)?);
        }
        Ok(RigidSeries { p, coeffs, tail: self.tail.map(|t| Tail::new(t.val, t.growth + 1)) })
    }

    /// `f(pi_n)`; tails cap the precision of every coordinate.
    pub fn eval_at(&self, field: &Arc<CycloField>) -> CycloElement {
        let x = field.from_poly(&self.coeffs);
        match self.tail {
            None => x,
            Some(t) => {
                let d = field.degree() as i64;
                if field.level() == 0 {
                    return x;
                }
                let cap = t.val.saturating_add(envelope_min(self.p, self.coeffs.len(), t.growth, |m| m as i64 / d));
                x.with_cap(cap)
            }
        }
    }

    /// Exact polynomial composition `f(g)`, both exact.
    pub fn compose_exact(&self, g: &Self) -> Result<Self> {
        if !self.is_exact() || !g.is_exact() {
            return Err(Error::Domain("compose_exact needs exact polynomials".into()));
        }
        let mut acc: Vec<PadicScalar> = Vec::new();
        let prec = self.precision().min(g.precision());
        for c in self.coeffs.iter().rev() {
            acc = mul(&acc, &g.coeffs, prec);
            if acc.is_empty() {
                acc.push(c.clone());
            } else {
                acc[0] = &acc[0] + c;
            }
        }
        Ok(Self::exact(self.p, acc))
    }

    /// The `psi = 0` solution of `(1 + pi) g' = f`: `(1 + pi)^i -> (1 + pi)^i / i`.
    pub fn antiderive(&self) -> Result<Self> {
        let p = self.p;
        let x = self.to_xbasis()?;
        let mut y = Vec::with_capacity(x.len());
        for (i, b) in x.into_iter().enumerate() {
            if (i as u64).is_multiple_of(p as u64) {
                if !b.is_zero() {
                    return Err(Error::Domain(format!("antiderive: psi(f) != 0 (mass {b} at exponent {i})")));
                }
                y.push(b);
                continue;
            }
            let d = PadicScalar::from_i64(p, i as i64, b.precision().max(0) + 64);
            y.push(b.checked_div(&d)?);
        }
        Ok(Self::from_xbasis(p, y))
    }

    /// `1 / f` to order `n` for `f` with unit constant term.
    pub fn inverse(&self, n: usize) -> Result<Self> {
        let p = self.p;
        let n = self.order().map_or(n, |o| o.min(n));
        let c0 = self.coeff(0).ok_or_else(|| Error::PrecisionExhausted("inverse of an empty series".into()))?;
        if c0.valuation() != 0 {
            return Err(Error::Domain("inverse needs a unit constant term".into()));
        }
        let inv0 = c0.inv()?;
        let mut out: Vec<PadicScalar> = Vec::with_capacity(n);
        for k in 0..n {
            if k == 0 {
                out.push(inv0.clone());
                continue;
            }
            let mut s = PadicScalar::zero(p, i64::MAX / 8);
            for (j, b) in out.iter().enumerate() {
                if let Some(a) = self.coeffs.get(k - j) {
                    s = &s + &(a * b);
                }
            }
            out.push(-&(&s * &inv0));
        }
        let g = self.tail.map_or(0, |t| t.growth) + 1;
        let val = out
            .iter()
            .enumerate()
            .map(|(m, c)| c.valuation() + g as i64 * ilog(p, m as u64) as i64)
            .min()
            .unwrap_or(0)
            .min(self.tail.map_or(0, |t| t.val))
            - 1;
        Ok(Self::truncated(p, out, Tail::new(val, g)))
    }

    /// `f / t^k`, checking the divisibility one factor of `t` at a time.
    pub fn divide_by_t(&self, k: usize) -> Result<Self> {
        let p = self.p;
        let n = self.order().unwrap_or(self.coeffs.len() + 1);
        let prec = self.precision().clamp(1, 1 << 20);
        let t_over_pi = Self::log_one_plus_pi(p, n + 1, prec + 16).div_pi_pow(1)?;
        let u = t_over_pi.inverse(n)?;
        let mut g = self.clone();
        for step in 0..k {
            g = g.div_pi_pow(1).map_err(|e| match e {
                Error::Domain(m) => Error::Domain(format!("not divisible by t^{}: {m}", step + 1)),
                other => other,
            })?;
            let m = g.order().map_or(u.coeffs.len(), |o| o.min(u.coeffs.len()));
            g = (&g * &u).truncate(m);
        }
        Ok(g)
    }
}

impl<'a> Add<&'a RigidSeries> for &'a RigidSeries {
    type Output = RigidSeries;
    fn add(self, rhs: &RigidSeries) -> RigidSeries {
        self.add_impl(rhs, false)
    }
}

impl<'a> Sub<&'a RigidSeries> for &'a RigidSeries {
    type Output = RigidSeries;
    fn sub(self, rhs: &RigidSeries) -> RigidSeries {
        self.add_impl(rhs, true)
    }
}

impl Neg for &RigidSeries {
    type Output = RigidSeries;
    fn neg(self) -> RigidSeries {
        RigidSeries { p: self.p, coeffs: self.coeffs.iter().map(|c| -c).collect(), tail: self.tail }
    }
}

impl<'a> Mul<&'a RigidSeries> for &'a RigidSeries {
    type Output = RigidSeries;
    fn mul(self, rhs: &RigidSeries) -> RigidSeries {
        assert_eq!(self.p, rhs.p, "mixed primes");
        let prec = self.precision().min(rhs.precision()).max(0) + 64;
        match self.common_order(rhs) {
            None => RigidSeries::exact(self.p, mul(&self.coeffs, &rhs.coeffs, prec)),
            Some(n) => {
                let mut c = mul_trunc(&self.coeffs, &rhs.coeffs, n, prec);
                c.resize(n, exact_zero(self.p));
                let (a, b) = (self.envelope(), rhs.envelope());
                let tail = Tail::new(a.val.saturating_add(b.val), a.growth + b.growth);
                RigidSeries::truncated(self.p, c, tail)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const W: i64 = 30;

    #[test]
    fn xbasis_roundtrip() {
        let f = RigidSeries::from_i64s(3, &[1, -2, 5, 7], W);
        let x = f.to_xbasis().unwrap();
        let g = RigidSeries::from_xbasis(3, x);
        assert_eq!(f, g);
    }

    #[test]
    fn truncation_tail_covers_dropped_terms() {
        let f = RigidSeries::from_i64s(5, &[1, 2, 25, 50, 5], W);
        let t = f.truncate(2);
        assert_eq!(t.tail(), Some(Tail::new(1, 0)));
        assert_eq!(t.order(), Some(2));
    }

    #[test]
    fn nabla_of_one_plus_pi_power() {
        // (1 + pi) d/dpi (1 + pi)^k = k (1 + pi)^k
        let p = 5;
        let f = RigidSeries::one_plus_pi_pow(p, 7, W);
        let lhs = f.nabla();
        let rhs = f.scale(&PadicScalar::from_i64(p, 7, W));
        assert!((&lhs - &rhs).coeffs().iter().all(|c| c.is_zero()));
    }

    #[test]
    fn log_derivative_is_geometric() {
        // d/dpi log(1 + pi) = 1/(1 + pi)
        let p = 3;
        let t = RigidSeries::log_one_plus_pi(p, 20, W);
        let d = t.derivative();
        let one_plus = RigidSeries::from_i64s(p, &[1, 1], W);
        let prod = &d * &one_plus;
        assert!(prod.coeffs()[0].eq_at(&PadicScalar::one(p, W)));
        assert!(prod.coeffs()[1..].iter().all(|c| c.is_zero()));
    }

    #[test]
    fn envelope_of_log() {
        let t = RigidSeries::log_one_plus_pi(3, 30, W);
        assert_eq!(t.envelope(), Tail::new(0, 1));
    }

    #[test]
    fn evaluation_matches_field_arithmetic() {
        let p = 3;
        let f = RigidSeries::one_plus_pi_pow(p, 4, W);
        let field = CycloField::get(p, 1, W);
        let z4 = field.zeta().pow(4);
        assert!(f.eval_at(&field).eq_at(&z4));
    }

    #[test]
    fn binomial_series_is_multiplicative() {
        let p = 5;
        let a = PadicScalar::from_ratio(p, 1, 3, W).unwrap();
        let fa = RigidSeries::binomial(&a, 20).unwrap();
        let fa3 = &(&fa * &fa) * &fa;
        let one_plus = RigidSeries::from_i64s(p, &[1, 1], W);
        let diff = &fa3 - &one_plus;
        assert!(diff.coeffs().iter().all(|c| c.is_zero()));
    }

    #[test]
    fn antiderive_inverts_nabla() {
        let p = 5;
        let f = RigidSeries::one_plus_pi_pow(p, 7, W);
        let g = f.antiderive().unwrap();
        let want = f.scale(&PadicScalar::from_ratio(p, 1, 7, W).unwrap());
        assert!((&g - &want).coeffs().iter().all(|c| c.is_zero()));
        assert!(RigidSeries::constant(&PadicScalar::one(p, W)).antiderive().is_err());
    }

    #[test]
    fn t_over_t_is_one() {
        let p = 3;
        let t = RigidSeries::log_one_plus_pi(p, 30, W);
        let q = t.divide_by_t(1).unwrap();
        assert!(q.coeffs()[0].eq_at(&PadicScalar::one(p, W)));
        assert!(q.coeffs()[1..12].iter().all(|c| c.is_zero()), "{:?}", &q.coeffs()[1..4]);
        assert!(RigidSeries::from_i64s(p, &[1, 1], W).divide_by_t(1).is_err());
    }
}
