//! Dense matrices over `Q_p` with valuation pivoting.

use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::padic::scalar::PadicScalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<PadicScalar>,
}

impl Matrix {
    pub fn zeros(p: u32, rows: usize, cols: usize, prec: i64) -> Self {
        Matrix { rows, cols, data: vec![PadicScalar::zero(p, prec); rows * cols] }
    }

    pub fn identity(p: u32, d: usize, prec: i64) -> Self {
        let mut m = Self::zeros(p, d, d, prec);
        for i in 0..d {
            m.data[i * d + i] = PadicScalar::one(p, prec);
        }
        m
    }

    pub fn scalar(d: usize, c: &PadicScalar) -> Self {
        let mut m = Self::zeros(c.p(), d, d, c.precision().max(c.valuation()));
        for i in 0..d {
            m.data[i * d + i] = c.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<PadicScalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Domain("ragged matrix".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn p(&self) -> u32 {
        self.data[0].p()
    }

    pub fn get(&self, i: usize, j: usize) -> &PadicScalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: PadicScalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<PadicScalar> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn scale(&self, c: &PadicScalar) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    /// Multiply every entry by `p^k`.
    pub fn shift(&self, k: i64) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x.shift(k)).collect() }
    }

    pub fn with_cap(&self, cap: i64) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x.with_cap(cap)).collect() }
    }

    pub fn apply(&self, v: &[PadicScalar]) -> Vec<PadicScalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = PadicScalar::zero(self.p(), i64::MAX / 4);
                for j in 0..self.cols {
                    acc = &acc + &(self.get(i, j) * &v[j]);
                }
                acc
            })
            .collect()
    }

    /// Smallest valuation among entries.
    pub fn min_valuation(&self) -> i64 {
        self.data.iter().map(|x| x.valuation()).min().unwrap_or(i64::MAX / 4)
    }

    pub fn pow(&self, e: u64) -> Self {
        let prec = self.data.iter().map(|x| x.precision()).max().unwrap_or(1);
        let mut acc = Matrix::identity(self.p(), self.rows, prec);
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

    /// Row echelon form of `[self | rhs]`; returns `(reduced, rhs, pivot columns)`.
    fn eliminate(&self, rhs: &Matrix) -> (Matrix, Matrix, Vec<(usize, usize)>) {
        let mut a = self.clone();
        let mut b = rhs.clone();
        let mut pivots = Vec::new();
        let mut used_rows = vec![false; a.rows];
        let mut used_cols = vec![false; a.cols];
        loop {
            // most precise pivot: smallest valuation among remaining nonzero entries
            let mut best: Option<(usize, usize, i64)> = None;
            for i in (0..a.rows).filter(|&i| !used_rows[i]) {
                for j in (0..a.cols).filter(|&j| !used_cols[j]) {
                    let x = a.get(i, j);
                    if !x.is_zero() && best.is_none_or(|(_, _, v)| x.valuation() < v) {
                        best = Some((i, j, x.valuation()));
                    }
                }
            }
            let Some((pi, pj, _)) = best else { break };
            used_rows[pi] = true;
            used_cols[pj] = true;
            let inv = a.get(pi, pj).inv().expect("nonzero pivot");
            for j in 0..a.cols {
                let v = a.get(pi, j) * &inv;
                a.set(pi, j, v);
            }
            for j in 0..b.cols {
                let v = b.get(pi, j) * &inv;
                b.set(pi, j, v);
            }
            for i in 0..a.rows {
                if i == pi {
                    continue;
                }
                let f = a.get(i, pj).clone();
                if f.is_zero() {
                    let v = a.get(i, pj).clone();
                    a.set(i, pj, PadicScalar::zero(v.p(), v.precision()));
                    continue;
                }
                for j in 0..a.cols {
                    let v = a.get(i, j) - &(&f * a.get(pi, j));
                    a.set(i, j, v);
                }
                for j in 0..b.cols {
                    let v = b.get(i, j) - &(&f * b.get(pi, j));
                    b.set(i, j, v);
                }
            }
            pivots.push((pi, pj));
        }
        (a, b, pivots)
    }

    pub fn rank(&self) -> usize {
        let rhs = Matrix::zeros(self.p(), self.rows, 0, 0);
        self.eliminate(&rhs).2.len()
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::Domain("inverse of non-square matrix".into()));
        }
        let prec = self.data.iter().map(|x| x.precision()).min().unwrap_or(0);
        let id = Matrix::identity(self.p(), self.rows, prec.max(1) * 2 + 64);
        let (_, b, pivots) = self.eliminate(&id);
        if pivots.len() < self.rows {
            return Err(Error::SingularFrobenius);
        }
        let mut out = Matrix::zeros(self.p(), self.rows, self.cols, 0);
        for &(pi, pj) in &pivots {
            for k in 0..self.cols {
                out.set(pj, k, b.get(pi, k).clone());
            }
        }
        Ok(out)
    }

    /// Solve `self * x = b`; errors when the system is inconsistent at working precision.
    pub fn solve(&self, b: &[PadicScalar]) -> Result<Vec<PadicScalar>> {
        let rhs = Matrix { rows: b.len(), cols: 1, data: b.to_vec() };
        let (_, r, pivots) = self.eliminate(&rhs);
        let pivot_rows: Vec<usize> = pivots.iter().map(|x| x.0).collect();
        for i in 0..self.rows {
            if !pivot_rows.contains(&i) && !r.get(i, 0).is_zero() {
                return Err(Error::Domain("inconsistent linear system".into()));
            }
        }
        let p = self.p();
        let prec = b.iter().map(|x| x.precision()).min().unwrap_or(0);
        let mut x = vec![PadicScalar::zero(p, prec); self.cols];
        for &(pi, pj) in &pivots {
            x[pj] = r.get(pi, 0).clone();
        }
        Ok(x)
    }

    /// Basis of `{x : self * x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<PadicScalar>> {
        let p = self.p();
        let rhs = Matrix::zeros(p, self.rows, 0, 0);
        let (a, _, pivots) = self.eliminate(&rhs);
        let prec = self.data.iter().map(|x| x.precision()).min().unwrap_or(0);
        let pivot_cols: Vec<usize> = pivots.iter().map(|x| x.1).collect();
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|j| !pivot_cols.contains(j)) {
            let mut v = vec![PadicScalar::zero(p, prec); self.cols];
            v[free] = PadicScalar::one(p, prec);
            for &(pi, pj) in &pivots {
                v[pj] = -a.get(pi, free);
            }
            out.push(v);
        }
        out
    }

    /// Basis of `{w : w^T * self = 0}`.
    pub fn left_kernel(&self) -> Vec<Vec<PadicScalar>> {
        self.transpose().kernel()
    }
}

impl<'a> Mul<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows);
        let p = self.p();
        let mut out = Matrix::zeros(p, self.rows, rhs.cols, i64::MAX / 4);
        for i in 0..self.rows {
            for k in 0..rhs.cols {
                let mut acc = PadicScalar::zero(p, i64::MAX / 4);
                for j in 0..self.cols {
                    acc = &acc + &(self.get(i, j) * rhs.get(j, k));
                }
                out.set(i, k, acc);
            }
        }
        out
    }
}

impl<'a> Add<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl<'a> Sub<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}
