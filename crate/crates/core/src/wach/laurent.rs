use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::ops::psi::psi_rows;

/// A Laurent polynomial over `Z`: `coeffs[i]` multiplies `pi^{low + i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntLaurent {
    pub p: u32,
    pub low: i64,
    pub coeffs: Vec<BigInt>,
}

impl IntLaurent {
    pub fn zero(p: u32) -> Self {
        IntLaurent { p, low: 0, coeffs: Vec::new() }
    }

    pub fn monomial(p: u32, k: i64) -> Self {
        IntLaurent { p, low: k, coeffs: vec![BigInt::one()] }
    }

    pub fn from_coeffs(p: u32, low: i64, coeffs: Vec<BigInt>) -> Self {
        IntLaurent { p, low, coeffs }.normalize()
    }

    /// `q = phi(pi) / pi = sum_{i < p} C(p, i + 1) pi^i`.
    pub fn q(p: u32) -> Self {
        let mut c = Vec::with_capacity(p as usize);
        let mut b = BigInt::one();
        for i in 0..p as u64 {
            b = b * BigInt::from(p as u64 - i) / BigInt::from(i + 1);
            c.push(b.clone());
        }
        IntLaurent { p, low: 0, coeffs: c }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn normalize(mut self) -> Self {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == self.coeffs.len() {
            return IntLaurent::zero(self.p);
        }
        self.coeffs.drain(..lead);
        self.low += lead as i64;
        self
    }

    pub fn coeff(&self, k: i64) -> BigInt {
        if k < self.low {
            return BigInt::zero();
        }
        self.coeffs.get((k - self.low) as usize).cloned().unwrap_or_default()
    }

    /// Exponent of the lowest nonzero term.
    pub fn order(&self) -> Option<i64> {
        self.coeffs.iter().position(|c| !c.is_zero()).map(|i| self.low + i as i64)
    }

    pub fn high(&self) -> i64 {
        self.low + self.coeffs.len() as i64
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() {
            return other.clone();
        }
        if other.coeffs.is_empty() {
            return self.clone();
        }
        let low = self.low.min(other.low);
        let high = self.high().max(other.high());
        let c = (low..high).map(|k| self.coeff(k) + other.coeff(k)).collect();
        IntLaurent::from_coeffs(self.p, low, c)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        IntLaurent::from_coeffs(self.p, self.low, self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul_pi_pow(&self, k: i64) -> Self {
        IntLaurent { low: self.low + k, ..self.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return IntLaurent::zero(self.p);
        }
        let mut c = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        IntLaurent::from_coeffs(self.p, self.low + other.low, c)
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(IntLaurent::monomial(self.p, 0), |acc, _| acc.mul(self))
    }

    /// `psi`, exactly: `psi(pi^{-c} g) = pi^{-c} psi(q^c g)` and `psi(pi^k)` from the binomial rows.
    pub fn psi(&self) -> Self {
        let p = self.p;
        if self.coeffs.is_empty() {
            return self.clone();
        }
        let c = (-self.low).max(0);
        let g = self.mul_pi_pow(c).mul(&IntLaurent::q(p).pow(c as usize));
        if g.coeffs.is_empty() {
            return IntLaurent::zero(p);
        }
        let rows = psi_rows(p, g.high() as usize);
        let mut out = vec![BigInt::zero(); (g.high() as usize - 1) / p as usize + 1];
        for (i, a) in g.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (k, r) in rows[g.low as usize + i].iter().enumerate() {
                out[k] += a * r;
            }
        }
        IntLaurent::from_coeffs(p, -c, out)
    }

    /// Whether every coefficient below `pi^k` is divisible by `p`: membership
    /// in `p D + pi^k A^+` for the Laurent polynomials at hand.
    pub fn in_p_plus_pi_pow(&self, k: i64) -> bool {
        let p = BigInt::from(self.p);
        (self.low..k.min(self.high())).all(|e| self.coeff(e).is_multiple_of(&p))
    }

    /// Residues mod `q` of the coefficients of `pi^lo .. pi^{hi-1}`.
    pub fn residues(&self, lo: i64, hi: i64, q: u128) -> Vec<u128> {
        let qb = BigInt::from(q);
        (lo..hi)
            .map(|e| {
                let r = self.coeff(e).mod_floor(&qb);
                u128::try_from(r.abs()).expect("reduced residue")
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::{psi, psi_laurent};
    use crate::series::laurent::RigidLaurent;
    use crate::series::rigid::RigidSeries;
    use crate::PadicScalar;

    #[test]
    fn agrees_with_the_series_route() {
        let p = 3;
        let w = 30;
        let f = IntLaurent::from_coeffs(p, 0, [4, -1, 7, 0, 2, 9, -3].iter().map(|&x| BigInt::from(x)).collect());
        let s = RigidSeries::exact(p, f.coeffs.iter().map(|c| PadicScalar::from_bigint(p, c, w)).collect());
        let a = f.psi();
        let b = psi(&s);
        for k in 0..3 {
            assert!(PadicScalar::from_bigint(p, &a.coeff(k), w).eq_at(&b.coeff(k as usize).unwrap()));
        }
        let l = IntLaurent::monomial(p, -2).psi();
        let r = psi_laurent(&RigidLaurent::pi_inv_pow(p, 2, w), 8).unwrap();
        for k in -2..2 {
            assert!(PadicScalar::from_bigint(p, &l.coeff(k), w).eq_at(&r.coeff(k).unwrap()), "k={k}");
        }
    }

    #[test]
    fn psi_of_one_over_pi() {
        for p in [3, 5, 7] {
            assert_eq!(IntLaurent::monomial(p, -1).psi(), IntLaurent::monomial(p, -1));
        }
    }
}
