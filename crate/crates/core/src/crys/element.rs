use crate::crys::rep::CrysRep;
use crate::error::{Error, Result};
use crate::ops::{frobenius, psi};
use crate::padic::linalg::Matrix;
use crate::padic::scalar::PadicScalar;
use crate::series::rigid::RigidSeries;

/// `sum_i y_i (x) d_i` in `B+_rig (x) D_cris(V)`, tagged by the twist of `V`.
///
/// With tag `j` the element is read as `sum_i y_i (x) d_i (x) t^{-j} e_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleElement {
    pub twist: i64,
    pub comps: Vec<RigidSeries>,
}

impl ModuleElement {
    pub fn new(twist: i64, comps: Vec<RigidSeries>) -> Self {
        assert!(!comps.is_empty(), "module element needs at least one component");
        ModuleElement { twist, comps }
    }

    /// `f (x) d_i` for the `i`-th basis vector.
    pub fn basis_multiple(rep: &CrysRep, i: usize, f: &RigidSeries) -> Self {
        let comps = (0..rep.dim())
            .map(|k| if k == i { f.clone() } else { RigidSeries::zero(f.p()) })
            .collect();
        ModuleElement { twist: rep.twist, comps }
    }

    pub fn zero(rep: &CrysRep) -> Self {
        ModuleElement { twist: rep.twist, comps: vec![RigidSeries::zero(rep.p); rep.dim()] }
    }

    pub fn p(&self) -> u32 {
        self.comps[0].p()
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn check_rep(&self, rep: &CrysRep) -> Result<()> {
        if rep.dim() != self.dim() {
            return Err(Error::Domain(format!("element of rank {} on a rank-{} module", self.dim(), rep.dim())));
        }
        if rep.twist != self.twist {
            return Err(Error::Domain(format!("twist tag {} does not match the module tag {}", self.twist, rep.twist)));
        }
        Ok(())
    }

    pub fn retag(&self, twist: i64) -> Self {
        ModuleElement { twist, comps: self.comps.clone() }
    }

    pub fn map(&self, f: impl Fn(&RigidSeries) -> RigidSeries) -> Self {
        ModuleElement { twist: self.twist, comps: self.comps.iter().map(f).collect() }
    }

    pub fn try_map(&self, f: impl Fn(&RigidSeries) -> Result<RigidSeries>) -> Result<Self> {
        Ok(ModuleElement { twist: self.twist, comps: self.comps.iter().map(f).collect::<Result<_>>()? })
    }

    pub fn truncate(&self, n: usize) -> Self {
        self.map(|c| c.truncate(n))
    }

    /// `M y` on coordinate vectors.
    pub fn apply_matrix(&self, m: &Matrix) -> Self {
        assert_eq!(m.cols, self.dim());
        let p = self.p();
        let comps = (0..m.rows)
            .map(|i| {
                let mut acc = RigidSeries::zero(p);
                for (j, y) in self.comps.iter().enumerate() {
                    let c = m.get(i, j);
                    if !c.is_zero() {
                        acc = &acc + &y.scale(c);
                    }
                }
                acc
            })
            .collect();
        ModuleElement { twist: self.twist, comps }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.binary(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.binary(other, |a, b| a - b)
    }

    fn binary(&self, other: &Self, op: impl Fn(&RigidSeries, &RigidSeries) -> RigidSeries) -> Result<Self> {
        if self.twist != other.twist {
            return Err(Error::Domain(format!("mixed twist tags {} and {}", self.twist, other.twist)));
        }
        if self.dim() != other.dim() {
            return Err(Error::Domain("rank mismatch".into()));
        }
        Ok(ModuleElement { twist: self.twist, comps: self.comps.iter().zip(&other.comps).map(|(a, b)| op(a, b)).collect() })
    }

    pub fn scale(&self, c: &PadicScalar) -> Self {
        self.map(|y| y.scale(c))
    }

    /// Componentwise `d = (1 + pi) d/dpi`.
    pub fn derive(&self) -> Self {
        self.map(|y| y.nabla())
    }

    /// Componentwise `d^{-1}` on `psi = 0` polynomials.
    pub fn antiderive(&self) -> Result<Self> {
        self.try_map(|y| y.antiderive())
    }

    /// `(d^k y)(0)` as a coordinate vector.
    pub fn derivative_at_zero(&self, k: usize) -> Vec<PadicScalar> {
        self.comps
            .iter()
            .map(|y| {
                let mut d = y.clone();
                for _ in 0..k {
                    d = d.nabla();
                }
                d.coeff(0).unwrap_or_else(|| PadicScalar::zero(y.p(), 0))
            })
            .collect()
    }

    /// Smallest valuation of the difference over the first `n` coefficients of every component.
    pub fn discrepancy(&self, other: &Self, n: usize) -> i64 {
        let mut best = i64::MAX / 8;
        for (a, b) in self.comps.iter().zip(&other.comps) {
            for k in 0..n {
                if let (Some(x), Some(y)) = (a.coeff(k), b.coeff(k)) {
                    best = best.min(x.discrepancy(&y));
                }
            }
        }
        best
    }
}

/// `phi (x) phi`: `y -> P phi(y)`.
pub fn apply_phi(rep: &CrysRep, y: &ModuleElement) -> Result<ModuleElement> {
    y.check_rep(rep)?;
    Ok(y.map(frobenius).apply_matrix(&rep.frobenius))
}

/// `psi (x) phi^{-1}`: `y -> P^{-1} psi(y)`.
pub fn apply_psi(rep: &CrysRep, y: &ModuleElement) -> Result<ModuleElement> {
    y.check_rep(rep)?;
    Ok(y.map(psi).apply_matrix(&rep.frobenius_inverse()))
}

/// `(1 - phi) y`.
pub fn one_minus_phi(rep: &CrysRep, y: &ModuleElement) -> Result<ModuleElement> {
    let py = apply_phi(rep, y)?;
    let n = y.comps.iter().filter_map(|c| c.order()).min();
    let out = y.sub(&py)?;
    Ok(match n {
        Some(n) => out.truncate(n),
        None => out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const W: i64 = 40;

    #[test]
    fn phi_on_cyclotomic_constant() {
        let p = 3;
        let v = CrysRep::cyclotomic(p, 1, W).unwrap();
        let one = RigidSeries::constant(&PadicScalar::one(p, W));
        let y = ModuleElement::basis_multiple(&v, 0, &one);
        let py = apply_phi(&v, &y).unwrap();
        assert!(py.comps[0].coeffs()[0].eq_at(&PadicScalar::one(p, W).shift(-1)));
    }

    #[test]
    fn psi_inverts_phi_on_rank_two() {
        let p = 5;
        let v = CrysRep::diagonal(p, &[0, 1], W).unwrap();
        let y = ModuleElement::new(0, vec![RigidSeries::from_i64s(p, &[1, 2, 3], W), RigidSeries::from_i64s(p, &[0, 7, 0, 1], W)]);
        let back = apply_psi(&v, &apply_phi(&v, &y).unwrap()).unwrap();
        assert!(back.discrepancy(&y, 4) >= W - 2);
    }

    #[test]
    fn mixed_tags_rejected() {
        let p = 3;
        let a = ModuleElement::new(0, vec![RigidSeries::pi(p, W)]);
        assert!(a.add(&a.retag(1)).is_err());
        let v = CrysRep::cyclotomic(p, 0, W).unwrap().twist_rep(1);
        assert!(apply_phi(&v, &a).is_err());
    }
}
