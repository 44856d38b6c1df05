use crate::crys::{CrysRep, ModuleElement, PsiOneElement};
use crate::error::{Error, Result};
use crate::maps::twist::twist_pair;
use crate::ops::{convolve, measure_of, UnitMeasure};
use crate::padic::linalg::Matrix;
use crate::padic::scalar::PadicScalar;
use crate::report::digits_scalars;

/// `V`, `W = V^*(1)` and the matrix `B` of `[ , ]_V` on their bases.
#[derive(Clone, Debug)]
pub struct DualPair {
    pub v: CrysRep,
    pub w: CrysRep,
    pub b: Matrix,
}

impl DualPair {
    /// Checks `P_V^T B P_W = p^{-1} B`.
    pub fn new(v: CrysRep, w: CrysRep, b: Matrix) -> Result<Self> {
        if v.p != w.p || v.dim() != w.dim() || b.rows != v.dim() || b.cols != w.dim() {
            return Err(Error::Domain("dual pair shapes do not match".into()));
        }
        let lhs = &(&v.frobenius.transpose() * &b) * &w.frobenius;
        let rhs = b.shift(-1);
        let ok = lhs.data.iter().zip(&rhs.data).all(|(x, y)| x.eq_at(y));
        if !ok {
            return Err(Error::Domain("P_V^T B P_W != p^{-1} B: not a dual pair".into()));
        }
        Ok(DualPair { v, w, b })
    }

    /// `V = diag(p^{-j_i})` with `W = diag(p^{j_i - 1})` and `B = I`.
    pub fn diagonal(p: u32, twists: &[i64], prec: i64) -> Result<Self> {
        let v = CrysRep::diagonal(p, twists, prec)?;
        let dual: Vec<i64> = twists.iter().map(|j| 1 - j).collect();
        let w = CrysRep::diagonal(p, &dual, prec)?;
        Self::new(v, w, Matrix::identity(p, twists.len(), prec))
    }

    /// `W = V^*(1)` on the dual basis: `P_W = p^{-1} (P_V^T)^{-1}` and `B = I`.
    pub fn canonical(v: &CrysRep) -> Result<Self> {
        let pw = v.frobenius.transpose().inverse()?.shift(-1);
        let w = CrysRep::new(&format!("{}^*(1)", v.name()), v.p, pw, (1 - v.weights.1, 1 - v.weights.0))?;
        let prec = v.frobenius.data.iter().map(|x| x.precision()).min().unwrap_or(0);
        Self::new(v.clone(), w, Matrix::identity(v.p, v.dim(), prec))
    }

    /// The pair `(V(j), W(-j))` with the same `B`.
    pub fn twist(&self, j: i64) -> Result<Self> {
        Self::new(self.v.twist_rep(j), self.w.twist_rep(-j), self.b.clone())
    }

    /// `[u, v] = u^T B v`.
    pub fn bracket(&self, u: &[PadicScalar], v: &[PadicScalar]) -> PadicScalar {
        let bv = self.b.apply(v);
        let p = self.v.p;
        u.iter().zip(&bv).fold(PadicScalar::zero(p, i64::MAX / 8), |acc, (a, b)| &acc + &(a * b))
    }

    /// `[sum f_i (x) d_i, sum g_k (x) d'_k] = sum B_ik (f_i * g_k)` as a level-`n` measure.
    pub fn pairing(&self, x1: &ModuleElement, x2: &ModuleElement, level: u32) -> Result<UnitMeasure> {
        x1.check_rep(&self.v)?;
        x2.check_rep(&self.w)?;
        let p = self.v.p;
        let m1 = x1.comps.iter().map(|c| measure_of(c, level)).collect::<Result<Vec<_>>>()?;
        let m2 = x2.comps.iter().map(|c| measure_of(c, level)).collect::<Result<Vec<_>>>()?;
        let mut out = UnitMeasure::zero(p, level);
        for (i, a) in m1.iter().enumerate() {
            for (k, b) in m2.iter().enumerate() {
                let c = self.b.get(i, k);
                if c.is_zero() {
                    continue;
                }
                out = out.add(&convolve(a, b)?.scale(c))?;
            }
        }
        Ok(out)
    }
}

/// `(I - M) v`.
fn one_minus(m: &Matrix, v: &[PadicScalar], prec: i64) -> Vec<PadicScalar> {
    let id = Matrix::identity(m.p(), m.rows, prec);
    (&id - m).apply(v)
}

fn at_zero(e: &ModuleElement) -> Vec<PadicScalar> {
    e.derivative_at_zero(0)
}

/// The evaluation-level ingredients of the reciprocity law for the twisted pair `(V(j), W(-j))`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReciprocityChecks {
    /// `(d^{-j} x_1)(0) = (1 - phi)(d^{-j} y_1)(0)`.
    pub first: i64,
    /// The mirror identity for `y_2` with `d^j`.
    pub second: i64,
    /// `[(1 - p^{-1} phi^{-1}) u, v] = [u, (1 - phi) v]`.
    pub adjoint: i64,
}

impl ReciprocityChecks {
    pub fn digits(&self) -> i64 {
        self.first.min(self.second).min(self.adjoint)
    }
}

pub fn check_reciprocity_evaluation(pair: &DualPair, y1: &PsiOneElement, y2: &PsiOneElement, j: i64) -> Result<ReciprocityChecks> {
    let prec = y1.prec;
    let t = pair.twist(j)?;
    let a = twist_pair(y1, j)?.twisted;
    let b = twist_pair(y2, -j)?.twisted;
    let first = digits_scalars(&at_zero(&a.f), &one_minus(&t.v.frobenius, &at_zero(&a.y), prec));
    let second = digits_scalars(&at_zero(&b.f), &one_minus(&t.w.frobenius, &at_zero(&b.y), prec));
    let u = at_zero(&a.y);
    let v = at_zero(&b.y);
    let left = one_minus(&t.v.frobenius_inverse().shift(-1), &u, prec);
    let lhs = t.bracket(&left, &v);
    let rhs = t.bracket(&u, &one_minus(&t.w.frobenius, &v, prec));
    let adjoint = digits_scalars(&[lhs], &[rhs]);
    Ok(ReciprocityChecks { first, second, adjoint })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rigid::RigidSeries;

    const W: i64 = 30;

    #[test]
    fn canonical_dual_of_a_diagonal_rep() {
        let v = CrysRep::diagonal(3, &[0, 2], W).unwrap();
        let pair = DualPair::canonical(&v).unwrap();
        let want = DualPair::diagonal(3, &[0, 2], W).unwrap();
        assert!(pair.w.frobenius.data.iter().zip(&want.w.frobenius.data).all(|(a, b)| a.eq_at(b)));
        assert_eq!(pair.w.weights, (-1, 1));
    }

    #[test]
    fn dual_pair_condition() {
        let p = 5;
        assert!(DualPair::diagonal(p, &[0, 1], W).is_ok());
        let v = CrysRep::cyclotomic(p, 0, W).unwrap();
        assert!(DualPair::new(v.clone(), v, Matrix::identity(p, 1, W)).is_err());
    }

    #[test]
    fn pairing_of_characters_is_a_dirac_mass() {
        let p = 3;
        let pair = DualPair::diagonal(p, &[0], W).unwrap();
        let x1 = ModuleElement::new(0, vec![RigidSeries::one_plus_pi_pow(p, 1, W)]);
        for a in [2u64, 4, 5] {
            let x2 = ModuleElement::new(0, vec![RigidSeries::one_plus_pi_pow(p, a, W)]);
            let mu = pair.pairing(&x1, &x2, 2).unwrap();
            assert_eq!(mu.entries.len(), 1);
            assert!(mu.get(a).unwrap().eq_at(&PadicScalar::one(p, W)));
            let swapped = pair.pairing(&x2, &x1, 2).unwrap();
            assert!(mu.discrepancy(&swapped) >= W);
        }
    }

    #[test]
    fn constants_satisfy_adjointness() {
        let p = 5;
        let pair = DualPair::diagonal(p, &[0, 1], W).unwrap();
        for j in 0..3 {
            let t = pair.twist(j).unwrap();
            let u = vec![PadicScalar::from_i64(p, 3, W), PadicScalar::from_i64(p, -2, W)];
            let v = vec![PadicScalar::from_i64(p, 7, W), PadicScalar::from_i64(p, 11, W)];
            let lhs = t.bracket(&one_minus(&t.v.frobenius_inverse().shift(-1), &u, W), &v);
            let rhs = t.bracket(&u, &one_minus(&t.w.frobenius, &v, W));
            assert!(lhs.eq_at(&rhs));
        }
    }
}
