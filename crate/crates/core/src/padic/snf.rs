//! Smith normal form over `Z / p^M`, entries as `u128` residues.

use crate::error::{Error, Result};

/// `p^M` must leave room for one product of residues.
pub fn modulus(p: u32, m: u32) -> Result<u128> {
    let q = (p as u128).checked_pow(m).ok_or_else(|| Error::Domain(format!("{p}^{m} overflows")))?;
    if q >= 1 << 63 {
        return Err(Error::Domain(format!("{p}^{m} is too large for residue arithmetic")));
    }
    Ok(q)
}

fn val(p: u32, m: u32, x: u128) -> u32 {
    if x == 0 {
        return m;
    }
    let mut v = 0;
    let mut x = x;
    while x.is_multiple_of(p as u128) {
        x /= p as u128;
        v += 1;
    }
    v
}

fn inv_unit(u: u128, q: u128) -> u128 {
    let (mut a, mut b) = (u as i128, q as i128);
    let (mut x0, mut x1) = (1i128, 0i128);
    while b != 0 {
        let t = a / b;
        (a, b) = (b, a - t * b);
        (x0, x1) = (x1, x0 - t * x1);
    }
    x0.rem_euclid(q as i128) as u128
}

/// Result of diagonalizing `A` as `U A V = diag(p^{v_i})`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub p: u32,
    pub m: u32,
    /// Valuations of the elementary divisors, `m` meaning zero mod `p^m`.
    pub divisors: Vec<u32>,
    /// Columns of `V`.
    pub v: Vec<Vec<u128>>,
}

impl Smith {
    pub fn new(a: &[Vec<u128>], p: u32, m: u32) -> Result<Self> {
        let q = modulus(p, m)?;
        let rows = a.len();
        let cols = a.first().map_or(0, |r| r.len());
        let mut a: Vec<Vec<u128>> = a.iter().map(|r| r.iter().map(|x| x % q).collect()).collect();
        // v[j] is column j of V
        let mut v: Vec<Vec<u128>> = (0..cols).map(|j| (0..cols).map(|i| u128::from(i == j)).collect()).collect();
        let mut divisors = Vec::new();
        for t in 0..rows.min(cols) {
            let mut best: Option<(u32, usize, usize)> = None;
            for (i, row) in a.iter().enumerate().skip(t) {
                for (j, &x) in row.iter().enumerate().skip(t) {
                    let vx = val(p, m, x);
                    if vx < m && best.is_none_or(|b| vx < b.0) {
                        best = Some((vx, i, j));
                    }
                }
            }
            let Some((vp, i, j)) = best else { break };
            a.swap(t, i);
            for row in a.iter_mut() {
                row.swap(t, j);
            }
            v.swap(t, j);
            let pv = (p as u128).pow(vp);
            let unit = inv_unit(a[t][t] / pv, q);
            for x in a[t].iter_mut() {
                *x = *x * unit % q;
            }
            for i in t + 1..rows {
                let c = a[i][t] / pv;
                if c == 0 {
                    continue;
                }
                for k in t..cols {
                    let s = c * a[t][k] % q;
                    a[i][k] = (a[i][k] + q - s) % q;
                }
            }
            for k in t + 1..cols {
                let c = a[t][k] / pv;
                if c == 0 {
                    continue;
                }
                for row in a.iter_mut() {
                    let s = c * row[t] % q;
                    row[k] = (row[k] + q - s) % q;
                }
                let (lo, hi) = v.split_at_mut(k);
                for (x, y) in hi[0].iter_mut().zip(&lo[t]) {
                    *x = (*x + q - c * y % q) % q;
                }
            }
            divisors.push(vp);
        }
        divisors.resize(cols, m);
        Ok(Smith { p, m, divisors, v })
    }

    /// Generators of `{x : A x = 0 mod p^M}`: `p^{M - v_i}` times column `i` of `V`.
    pub fn kernel(&self) -> Vec<Vec<u128>> {
        let q = (self.p as u128).pow(self.m);
        self.divisors
            .iter()
            .zip(&self.v)
            .filter(|(d, _)| **d > 0)
            .map(|(d, col)| {
                let s = (self.p as u128).pow(self.m - d);
                col.iter().map(|x| x * s % q).collect()
            })
            .collect()
    }

    /// Number of generators that are not torsion.
    pub fn free_rank(&self) -> usize {
        self.divisors.iter().filter(|&&d| d == self.m).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn apply(a: &[Vec<u128>], x: &[u128], q: u128) -> Vec<u128> {
        a.iter().map(|r| r.iter().zip(x).map(|(a, b)| a * b % q).sum::<u128>() % q).collect()
    }

    #[test]
    fn kernel_is_annihilated() {
        let (p, m) = (3, 6);
        let q = modulus(p, m).unwrap();
        let a = vec![vec![3, 6, 9, 1], vec![9, 18, 27, 3], vec![0, 2, 5, 7]];
        let s = Smith::new(&a, p, m).unwrap();
        assert_eq!(s.free_rank(), 2);
        for k in s.kernel() {
            assert!(apply(&a, &k, q).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn torsion_divisor() {
        let (p, m) = (5, 4);
        let s = Smith::new(&[vec![25, 0], vec![0, 1]], p, m).unwrap();
        assert_eq!(s.divisors, vec![0, 2]);
        assert_eq!(s.kernel(), vec![vec![25, 0]]);
    }
}
