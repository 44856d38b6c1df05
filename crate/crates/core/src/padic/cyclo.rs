//! The fields `F_n = Q_p(mu_{p^n})` in the basis `1, pi_n, ..., pi_n^{D-1}`,
//! `pi_n = zeta_{p^n} - 1`, `D = (p - 1) p^(n - 1)`.
//!
//! Elements are reduced modulo the Eisenstein polynomial `Phi_{p^n}(1 + x)`.
//! Trace, Galois action and the maps between levels go through the basis
//! `1, zeta, ..., zeta^{D-1}`, where they are combinatorial.

use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::padic::linalg::Matrix;
use crate::padic::poly::taylor_shift;
use crate::padic::scalar::{val_u64, PadicScalar};

#[derive(Debug)]
pub struct CycloField {
    p: u32,
    level: u32,
    degree: usize,
    prec: i64,
    /// Low coefficients of the monic Eisenstein polynomial.
    eis: Vec<PadicScalar>,
}

type FieldCache = Mutex<HashMap<(u32, u32, i64), Arc<CycloField>>>;

fn cache() -> &'static FieldCache {
    static CACHE: OnceLock<FieldCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

pub fn level_degree(p: u32, n: u32) -> usize {
    if n == 0 {
        1
    } else {
        (p as usize - 1) * (p as usize).pow(n - 1)
    }
}

impl CycloField {
    /// The field of level `n`, with integer constants kept to precision `prec`.
    pub fn get(p: u32, level: u32, prec: i64) -> Arc<CycloField> {
        let key = (p, level, prec);
        if let Some(f) = cache().lock().unwrap().get(&key) {
            return f.clone();
        }
        let degree = level_degree(p, level);
        let mut phi = vec![PadicScalar::zero(p, prec); degree + 1];
        if level == 0 {
            phi[0] = PadicScalar::from_i64(p, -1, prec);
            phi[1] = PadicScalar::one(p, prec);
        } else {
            let step = (p as usize).pow(level - 1);
            for l in 0..p as usize {
                phi[l * step] = PadicScalar::one(p, prec);
            }
        }
        taylor_shift(&mut phi, false);
        phi.truncate(degree);
        let f = Arc::new(CycloField { p, level, degree, prec, eis: phi });
        cache().lock().unwrap().insert(key, f.clone());
        f
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// `p^level`.
    pub fn conductor(&self) -> u64 {
        (self.p as u64).pow(self.level)
    }

    pub fn zero(self: &Arc<Self>) -> CycloElement {
        CycloElement { field: self.clone(), coeffs: vec![PadicScalar::zero(self.p, self.prec); self.degree] }
    }

    pub fn from_scalar(self: &Arc<Self>, c: &PadicScalar) -> CycloElement {
        let mut z = self.zero();
        z.coeffs[0] = c.clone();
        z
    }

    pub fn one(self: &Arc<Self>) -> CycloElement {
        self.from_scalar(&PadicScalar::one(self.p, self.prec))
    }

    /// `pi_n`; zero at level 0.
    pub fn pi(self: &Arc<Self>) -> CycloElement {
        self.from_poly(&[PadicScalar::zero(self.p, self.prec), PadicScalar::one(self.p, self.prec)])
    }

    pub fn zeta(self: &Arc<Self>) -> CycloElement {
        self.zeta_pow(1)
    }

    pub fn zeta_pow(self: &Arc<Self>, e: u64) -> CycloElement {
        self.from_xterms([(e, PadicScalar::one(self.p, self.prec))])
    }

    /// `f(pi_n)` for a polynomial `f` given by its coefficients.
    pub fn from_poly(self: &Arc<Self>, coeffs: &[PadicScalar]) -> CycloElement {
        let mut r: Vec<PadicScalar> = coeffs.to_vec();
        self.reduce(&mut r);
        r.resize(self.degree, PadicScalar::zero(self.p, self.prec));
        CycloElement { field: self.clone(), coeffs: r }
    }

    fn reduce(&self, r: &mut Vec<PadicScalar>) {
        let d = self.degree;
        while r.len() > d {
            let c = r.pop().unwrap();
            let k = r.len();
            if c.is_zero() && c.precision() >= self.prec {
                continue;
            }
            for (i, e) in self.eis.iter().enumerate() {
                let idx = k - d + i;
                r[idx] = &r[idx] - &(&c * e);
            }
        }
    }

    /// `sum b_e zeta^e`.
    pub fn from_xterms(self: &Arc<Self>, terms: impl IntoIterator<Item = (u64, PadicScalar)>) -> CycloElement {
        let q = self.conductor();
        let mut x = vec![PadicScalar::zero(self.p, self.prec); q as usize];
        for (e, c) in terms {
            let i = (e % q) as usize;
            x[i] = &x[i] + &c;
        }
        self.from_xbasis(x)
    }

    /// Element with coordinates `x` in `1, zeta, ..., zeta^{p^n - 1}` (not reduced).
    fn from_xbasis(self: &Arc<Self>, mut x: Vec<PadicScalar>) -> CycloElement {
        let d = self.degree;
        if self.level >= 1 {
            let step = (self.p as usize).pow(self.level - 1);
            // zeta^D = -(1 + zeta^step + ... + zeta^{(p-2) step})
            for e in (d..x.len()).rev() {
                let c = x[e].clone();
                for l in 0..self.p as usize - 1 {
                    let idx = e - d + l * step;
                    x[idx] = &x[idx] - &c;
                }
            }
        } else {
            let mut s = PadicScalar::zero(self.p, self.prec);
            for c in &x {
                s = &s + c;
            }
            x = vec![s];
        }
        x.truncate(d);
        x.resize(d, PadicScalar::zero(self.p, self.prec));
        taylor_shift(&mut x, false);
        CycloElement { field: self.clone(), coeffs: x }
    }
}

#[derive(Clone, Debug)]
pub struct CycloElement {
    field: Arc<CycloField>,
    coeffs: Vec<PadicScalar>,
}

impl PartialEq for CycloElement {
    fn eq(&self, other: &Self) -> bool {
        self.level() == other.level() && self.coeffs == other.coeffs
    }
}

impl CycloElement {
    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn level(&self) -> u32 {
        self.field.level
    }

    pub fn p(&self) -> u32 {
        self.field.p
    }

    pub fn coeffs(&self) -> &[PadicScalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Minimal absolute precision of the coordinates.
    pub fn precision(&self) -> i64 {
        self.coeffs.iter().map(|c| c.precision()).min().unwrap()
    }

    /// Minimal valuation of the coordinates.
    pub fn min_valuation(&self) -> i64 {
        self.coeffs.iter().map(|c| c.valuation()).min().unwrap()
    }

    /// Valuation in units of `v(pi_n) = 1/D`.
    pub fn pi_valuation(&self) -> i64 {
        let d = self.field.degree as i64;
        self.coeffs.iter().enumerate().map(|(i, c)| c.valuation() * d + i as i64).min().unwrap()
    }

    pub fn with_cap(&self, cap: i64) -> Self {
        CycloElement { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| c.with_cap(cap)).collect() }
    }

    pub fn scale(&self, c: &PadicScalar) -> Self {
        CycloElement { field: self.field.clone(), coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn shift(&self, k: i64) -> Self {
        CycloElement { field: self.field.clone(), coeffs: self.coeffs.iter().map(|x| x.shift(k)).collect() }
    }

    /// Valuation of the coordinatewise difference.
    pub fn discrepancy(&self, other: &Self) -> i64 {
        assert_eq!(self.level(), other.level(), "levels differ");
        (self - other).min_valuation()
    }

    pub fn eq_at(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }

    /// Coordinates in `1, zeta, ..., zeta^{D-1}`.
    pub fn to_xbasis(&self) -> Vec<PadicScalar> {
        let mut x = self.coeffs.clone();
        taylor_shift(&mut x, true);
        x
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut acc = self.field.one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn inv(&self) -> Result<Self> {
        let d = self.field.degree;
        let p = self.p();
        // columns: self * pi^j
        let mut cols = Vec::with_capacity(d);
        let mut cur = self.clone();
        let pi = self.field.pi();
        for j in 0..d {
            if j > 0 {
                cur = &cur * &pi;
            }
            cols.push(cur.coeffs.clone());
        }
        let mut m = Matrix::zeros(p, d, d, 0);
        for (j, col) in cols.iter().enumerate() {
            for (i, c) in col.iter().enumerate() {
                m.set(i, j, c.clone());
            }
        }
        let mut rhs = vec![PadicScalar::zero(p, self.field.prec); d];
        rhs[0] = PadicScalar::one(p, self.field.prec);
        let x = m.solve(&rhs).map_err(|_| Error::PrecisionExhausted("inverting a cyclotomic element".into()))?;
        if m.rank() < d {
            return Err(Error::PrecisionExhausted("cyclotomic element is zero at working precision".into()));
        }
        Ok(CycloElement { field: self.field.clone(), coeffs: x })
    }

    /// `sigma_a`, with `zeta -> zeta^a` for `a` prime to `p`.
    pub fn galois(&self, a: u64) -> Self {
        assert!(!a.is_multiple_of(self.p() as u64), "galois element must be a unit");
        let q = self.field.conductor();
        let x = self.to_xbasis();
        let a = a % q;
        self.field.from_xterms(x.into_iter().enumerate().map(|(e, c)| ((e as u64 * a) % q, c)))
    }

    /// Image under `F_n -> F_m`, `m >= n`.
    pub fn embed(&self, m: u32) -> Self {
        let n = self.level();
        assert!(m >= n);
        if m == n {
            return self.clone();
        }
        let target = CycloField::get(self.p(), m, self.field.prec);
        if n == 0 {
            return target.from_scalar(&self.coeffs[0]);
        }
        let l = (self.p() as u64).pow(m - n);
        let x = self.to_xbasis();
        target.from_xterms(x.into_iter().enumerate().map(|(e, c)| (e as u64 * l, c)))
    }

    /// The element as a member of `F_n`, `n <= level`; fails if it is not in `F_n`.
    pub fn restrict(&self, n: u32) -> Result<Self> {
        let m = self.level();
        assert!(n <= m);
        if n == m {
            return Ok(self.clone());
        }
        let target = CycloField::get(self.p(), n, self.field.prec);
        let l = (self.p() as usize).pow(m - n);
        let mut coords = Vec::new();
        for (e, c) in self.to_xbasis().into_iter().enumerate() {
            if e % l == 0 {
                coords.push(((e / l) as u64, c));
            } else if !c.is_zero() {
                return Err(Error::Domain(format!("element is not in level {n} (zeta^{e} coordinate is {c})")));
            }
        }
        Ok(target.from_xterms(coords))
    }

    /// `Tr_{F_m/F_n}`, `n <= level`.
    pub fn trace(&self, n: u32) -> Self {
        let m = self.level();
        assert!(n <= m);
        if n == m {
            return self.clone();
        }
        let p = self.p();
        let target = CycloField::get(p, n, self.field.prec);
        let x = self.to_xbasis();
        if n == 0 {
            // Ramanujan sums c_{p^m}(e) for e < D_m
            let mut s = PadicScalar::zero(p, self.field.prec);
            for (e, c) in x.iter().enumerate() {
                let weight = if e == 0 {
                    (p as i64 - 1) * (p as i64).pow(m - 1)
                } else if val_u64(p, e as u64) == m - 1 {
                    -(p as i64).pow(m - 1)
                } else {
                    continue;
                };
                s = &s + &(c * &PadicScalar::from_i64(p, weight, self.field.prec));
            }
            return target.from_scalar(&s);
        }
        let l = (p as usize).pow(m - n);
        let scale = (m - n) as i64;
        target.from_xterms(
            x.into_iter().enumerate().filter(|(e, _)| e % l == 0).map(|(e, c)| ((e / l) as u64, c.shift(scale))),
        )
    }

    /// `Tr_{F_m/F_n}` as a sum of Galois conjugates.
    pub fn trace_by_conjugates(&self, n: u32) -> Result<Self> {
        let m = self.level();
        let p = self.p() as u64;
        let q = p.pow(m);
        let qn = p.pow(n);
        let mut acc = self.field.zero();
        for a in 1..q {
            if a % p != 0 && (a - 1) % qn == 0 {
                acc = &acc + &self.galois(a);
            }
        }
        acc.restrict(n)
    }
}

impl<'a> Add<&'a CycloElement> for &'a CycloElement {
    type Output = CycloElement;
    fn add(self, rhs: &CycloElement) -> CycloElement {
        assert_eq!(self.level(), rhs.level(), "levels differ");
        CycloElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a CycloElement> for &'a CycloElement {
    type Output = CycloElement;
    fn sub(self, rhs: &CycloElement) -> CycloElement {
        assert_eq!(self.level(), rhs.level(), "levels differ");
        CycloElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &CycloElement {
    type Output = CycloElement;
    fn neg(self) -> CycloElement {
        CycloElement { field: self.field.clone(), coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
}

impl<'a> Mul<&'a CycloElement> for &'a CycloElement {
    type Output = CycloElement;
    fn mul(self, rhs: &CycloElement) -> CycloElement {
        assert_eq!(self.level(), rhs.level(), "levels differ");
        let prod = crate::padic::poly::mul(&self.coeffs, &rhs.coeffs, self.field.prec.max(self.precision()));
        self.field.from_poly(&prod)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const W: i64 = 30;

    fn sc(p: u32, n: i64) -> PadicScalar {
        PadicScalar::from_i64(p, n, W)
    }

    #[test]
    fn zeta_has_order_p_pow_n() {
        for p in [3u32, 5] {
            for n in 1..=3 {
                let f = CycloField::get(p, n, W);
                let z = f.zeta();
                let q = (p as u64).pow(n);
                assert!(z.pow(q).eq_at(&f.one()));
                assert!(!z.pow(q / p as u64).eq_at(&f.one()));
            }
        }
    }

    #[test]
    fn pi_valuation_is_one_over_degree() {
        let f = CycloField::get(3, 2, W);
        assert_eq!(f.pi().pi_valuation(), 1);
        assert_eq!(f.from_scalar(&sc(3, 3)).pi_valuation(), 6);
        // p = unit * pi^D
        let d = f.degree() as u64;
        let q = f.pi().pow(d);
        assert_eq!(q.pi_valuation(), 6);
    }

    #[test]
    fn trace_formula_matches_conjugates() {
        for p in [3u32, 5] {
            for m in 1..=2u32 {
                let f = CycloField::get(p, m, W);
                let x = f.from_poly(&[sc(p, 2), sc(p, -1), sc(p, 7), sc(p, 1), sc(p, 3)]);
                for n in 0..m {
                    let a = x.trace(n);
                    let b = x.trace_by_conjugates(n).unwrap();
                    assert!(a.eq_at(&b), "p={p} m={m} n={n}");
                }
            }
        }
    }

    #[test]
    fn trace_of_one_is_degree() {
        let f = CycloField::get(5, 2, W);
        let t = f.one().trace(0);
        assert!(t.coeffs()[0].eq_at(&sc(5, 20)));
        let t1 = f.zeta().trace(1);
        assert!(t1.is_zero());
    }

    #[test]
    fn embed_restrict_roundtrip() {
        let p = 3;
        let f = CycloField::get(p, 1, W);
        let x = f.from_poly(&[sc(p, 4), sc(p, -2)]);
        let y = x.embed(3);
        assert_eq!(y.level(), 3);
        assert!(y.restrict(1).unwrap().eq_at(&x));
        // zeta_9 is not in F_1
        assert!(CycloField::get(p, 2, W).zeta().restrict(1).is_err());
        // pi_1 = (1 + pi_2)^3 - 1 in F_2
        let f2 = CycloField::get(p, 2, W);
        let lhs = f.pi().embed(2);
        let rhs = &f2.zeta().pow(3) - &f2.one();
        assert!(lhs.eq_at(&rhs));
    }

    #[test]
    fn galois_is_multiplicative() {
        let p = 5;
        let f = CycloField::get(p, 2, W);
        let x = f.from_poly(&[sc(p, 1), sc(p, 3), sc(p, 2)]);
        let y = f.from_poly(&[sc(p, -4), sc(p, 0), sc(p, 9), sc(p, 1)]);
        let lhs = (&x * &y).galois(7);
        let rhs = &x.galois(7) * &y.galois(7);
        assert!(lhs.eq_at(&rhs));
        assert!(x.galois(7).galois(18).eq_at(&x.galois(7 * 18 % 25)));
    }

    #[test]
    fn inverse_of_pi() {
        let p = 3;
        let f = CycloField::get(p, 2, W);
        let pi = f.pi();
        let inv = pi.inv().unwrap();
        let one = &pi * &inv;
        assert!(one.eq_at(&f.one().with_cap(one.precision())));
    }
}
