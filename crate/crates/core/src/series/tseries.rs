use std::ops::{Add, Sub};
use std::sync::Arc;

use crate::padic::cyclo::{CycloElement, CycloField};
use crate::padic::scalar::PadicScalar;

/// `sum_k c_k t^k` with `c_k` in `F_n`, known modulo `t^len`.
#[derive(Clone, Debug)]
pub struct TSeries {
    field: Arc<CycloField>,
    coeffs: Vec<CycloElement>,
}

impl PartialEq for TSeries {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl TSeries {
    pub fn new(field: Arc<CycloField>, coeffs: Vec<CycloElement>) -> Self {
        assert!(coeffs.iter().all(|c| c.level() == field.level()));
        TSeries { field, coeffs }
    }

    pub fn zero(field: &Arc<CycloField>, len: usize) -> Self {
        TSeries { field: field.clone(), coeffs: vec![field.zero(); len] }
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn level(&self) -> u32 {
        self.field.level()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[CycloElement] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &CycloElement {
        &self.coeffs[k]
    }

    pub fn scale(&self, c: &PadicScalar) -> Self {
        TSeries { field: self.field.clone(), coeffs: self.coeffs.iter().map(|x| x.scale(c)).collect() }
    }

    pub fn mul_elem(&self, c: &CycloElement) -> Self {
        TSeries { field: self.field.clone(), coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Product truncated to the shorter length.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.len().min(other.len());
        let mut out = vec![self.field.zero(); n];
        for i in 0..n {
            for j in 0..n - i {
                out[i + j] = &out[i + j] + &(&self.coeffs[i] * &other.coeffs[j]);
            }
        }
        TSeries { field: self.field.clone(), coeffs: out }
    }

    pub fn truncate(&self, n: usize) -> Self {
        TSeries { field: self.field.clone(), coeffs: self.coeffs.iter().take(n).cloned().collect() }
    }

    /// Image of every coefficient in `F_m`, `m >= level`.
    pub fn embed(&self, m: u32) -> Self {
        if m == self.level() {
            return self.clone();
        }
        let coeffs: Vec<CycloElement> = self.coeffs.iter().map(|c| c.embed(m)).collect();
        let field = CycloField::get(self.field.p(), m, self.field.prec());
        TSeries { field, coeffs }
    }

    /// `nabla_i = t d/dt - i`: `c_k t^k -> (k - i) c_k t^k`.
    pub fn nabla(&self, i: i64) -> Self {
        let p = self.field.p();
        let prec = self.field.prec();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.scale(&PadicScalar::from_i64(p, k as i64 - i, prec + 64)))
            .collect();
        TSeries { field: self.field.clone(), coeffs }
    }

    /// `nabla_0 / (gamma_n - 1)` on `F_n[[t]]`, where `gamma_n` fixes `F_n` and sends `t` to `chi t`:
    /// `t^k -> k / (chi^k - 1) t^k` for `k >= 1` and `1 -> 1 / log_p(chi)`.
    pub fn nabla0_over_gamma(&self, chi: &PadicScalar) -> crate::Result<Self> {
        let p = self.field.p();
        let prec = self.field.prec();
        let log_chi = chi.log()?;
        let mut coeffs = Vec::with_capacity(self.len());
        let mut chik = PadicScalar::one(p, prec + 64);
        for (k, c) in self.coeffs.iter().enumerate() {
            if k == 0 {
                coeffs.push(c.scale(&log_chi.inv()?));
            } else {
                chik = &chik * chi;
                let factor = PadicScalar::from_i64(p, k as i64, prec + 64).checked_div(&(&chik - &PadicScalar::one(p, prec + 64)))?;
                coeffs.push(c.scale(&factor));
            }
        }
        Ok(TSeries { field: self.field.clone(), coeffs })
    }

    /// Multiply by `t^j`; negative `j` drops the lowest coefficients, which must vanish.
    pub fn mul_t_pow(&self, j: i64) -> crate::Result<Self> {
        if j >= 0 {
            let mut coeffs = vec![self.field.zero(); j as usize];
            coeffs.extend(self.coeffs.iter().cloned());
            return Ok(TSeries { field: self.field.clone(), coeffs });
        }
        let k = (-j) as usize;
        if let Some((i, c)) = self.coeffs.iter().take(k).enumerate().find(|(_, c)| !c.is_zero()) {
            return Err(crate::Error::Domain(format!("t^{i} coefficient {c:?} is nonzero: not divisible by t^{k}")));
        }
        Ok(TSeries { field: self.field.clone(), coeffs: self.coeffs.iter().skip(k).cloned().collect() })
    }

    /// Inverse when the constant term is invertible.
    pub fn inv(&self) -> crate::Result<Self> {
        let n = self.len();
        let c0inv = self.coeffs[0].inv()?;
        let mut out: Vec<CycloElement> = vec![c0inv.clone()];
        for k in 1..n {
            let mut s = self.field.zero();
            for j in 1..=k {
                s = &s + &(&self.coeffs[j] * &out[k - j]);
            }
            out.push(-&(&s * &c0inv));
        }
        Ok(TSeries { field: self.field.clone(), coeffs: out })
    }
}

impl<'a> Add<&'a TSeries> for &'a TSeries {
    type Output = TSeries;
    fn add(self, rhs: &TSeries) -> TSeries {
        let n = self.len().min(rhs.len());
        TSeries { field: self.field.clone(), coeffs: (0..n).map(|k| &self.coeffs[k] + &rhs.coeffs[k]).collect() }
    }
}

impl<'a> Sub<&'a TSeries> for &'a TSeries {
    type Output = TSeries;
    fn sub(self, rhs: &TSeries) -> TSeries {
        let n = self.len().min(rhs.len());
        TSeries { field: self.field.clone(), coeffs: (0..n).map(|k| &self.coeffs[k] - &rhs.coeffs[k]).collect() }
    }
}
