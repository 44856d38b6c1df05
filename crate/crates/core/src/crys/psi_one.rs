use crate::crys::element::ModuleElement;
use crate::crys::rep::CrysRep;
use crate::crys::solver::{solve_one_minus_phi, Solution};
use crate::error::{Error, Result};
use crate::ops::phi_inverse_n;
use crate::padic::cyclo::{CycloElement, CycloField};
use crate::padic::linalg::Matrix;
use crate::series::tseries::TSeries;

/// A `psi = 1` element `Y = nabla_{h-1} ... nabla_0 (y)` with `(1 - phi) y = f`, `f` an exact polynomial.
///
/// Localizations are computed from `phi^{-n}(y) = phi^{-n}(f) + P phi^{-(n-1)}(y)`,
/// which only needs `y` near `pi = 0`, so they do not lose precision in the
/// ramified tower.
#[derive(Clone, Debug)]
pub struct PsiOneElement {
    pub rep: CrysRep,
    pub f: ModuleElement,
    pub y: ModuleElement,
    /// Number of `nabla_i` applied on top of `y`.
    pub nablas: usize,
    pub h: usize,
    pub prec: i64,
}

fn mat_apply_t(m: &Matrix, v: &[TSeries]) -> Vec<TSeries> {
    (0..m.rows)
        .map(|i| {
            let mut acc = TSeries::zero(v[0].field(), v[0].len());
            for (j, x) in v.iter().enumerate() {
                acc = &acc + &x.scale(m.get(i, j));
            }
            acc
        })
        .collect()
}

pub fn mat_apply_elem(m: &Matrix, v: &[CycloElement]) -> Vec<CycloElement> {
    (0..m.rows)
        .map(|i| {
            let mut acc = v[0].field().zero();
            for (j, x) in v.iter().enumerate() {
                acc = &acc + &x.scale(m.get(i, j));
            }
            acc
        })
        .collect()
}

impl PsiOneElement {
    /// Solve `(1 - phi) y = f` to order `n`.
    pub fn solve(rep: &CrysRep, f: &ModuleElement, h: usize, n: usize, prec: i64) -> Result<(Self, Solution)> {
        if f.comps.iter().any(|c| !c.is_exact()) {
            return Err(Error::Domain("the forcing term must be an exact polynomial".into()));
        }
        let sol = solve_one_minus_phi(rep, f, h, n, prec)?;
        let e = PsiOneElement { rep: rep.clone(), f: f.clone(), y: sol.y.clone(), nablas: 0, h, prec };
        Ok((e, sol))
    }

    pub fn p(&self) -> u32 {
        self.rep.p
    }

    pub fn order(&self) -> usize {
        self.y.comps.iter().filter_map(|c| c.order()).min().unwrap_or(usize::MAX)
    }

    /// `nabla_{h-1} ... nabla_0` applied to the series; localizations apply it on the `t` side.
    pub fn nabla_chain(&self, h: usize) -> Self {
        let n = self.order();
        let off = self.nablas;
        let y = self.y.map(|c| {
            let mut g = c.clone();
            for i in off..off + h {
                g = crate::ops::nabla(i as i64, &g, n, self.prec);
            }
            g
        });
        PsiOneElement { y, nablas: self.nablas + h, ..self.clone() }
    }

    /// `d^k` on a plain `psi = 1` element: the result lives over `V(-k)`.
    pub fn derive(&self, k: usize) -> Result<Self> {
        if self.nablas != 0 {
            return Err(Error::Domain("derive after nabla is not supported".into()));
        }
        let mut f = self.f.clone();
        let mut y = self.y.clone();
        for _ in 0..k {
            f = f.derive();
            y = y.derive();
        }
        let rep = self.rep.twist_rep(-(k as i64));
        Ok(PsiOneElement {
            rep: rep.clone(),
            f: f.retag(rep.twist),
            y: y.retag(rep.twist),
            nablas: 0,
            h: (self.h as i64 - k as i64).max(0) as usize,
            prec: self.prec,
        })
    }

    /// `d^{-j} y (x) t^{-j} e_j` over `V(j)`; for `j > 0` this solves `(1 - phi) u = d^{-j} f` over `V(j)`,
    /// so it agrees with `d^{-j} y` up to the kernel of `1 - phi`.
    pub fn twist(&self, j: i64) -> Result<Self> {
        if j <= 0 {
            return self.derive((-j) as usize);
        }
        let mut f = self.f.clone();
        for _ in 0..j {
            f = f.antiderive()?;
        }
        let rep = self.rep.twist_rep(j);
        let h = (self.h as i64 + j) as usize;
        let (e, _) = Self::solve(&rep, &f.retag(rep.twist), h, self.order(), self.prec)?;
        Ok(e)
    }

    /// Series part of `phi^{-n}(Y)`: the expansion of each component at `zeta_{p^n} e^{t/p^n} - 1`.
    pub fn localize(&self, level: u32, nt: usize) -> Result<Vec<TSeries>> {
        let prec = self.prec;
        let nablas = self.nablas;
        let tchain = |s: TSeries| (0..nablas).fold(s, |acc, i| acc.nabla(i as i64));
        // level 0: y(e^t - 1) read off the series, no evaluation away from 0
        let mut cur: Vec<TSeries> = self.y.comps.iter().map(|c| phi_inverse_n(0, c, nt, prec)).collect::<Result<_>>()?;
        for m in 1..=level {
            let up: Vec<TSeries> = cur.iter().map(|s| s.embed(m)).collect();
            let py = mat_apply_t(&self.rep.frobenius, &up);
            let fm: Vec<TSeries> =
                self.f.comps.iter().map(|c| phi_inverse_n(m, c, nt, prec).map(tchain)).collect::<Result<_>>()?;
            cur = fm.iter().zip(&py).map(|(a, b)| a + b).collect();
        }
        Ok(cur)
    }

    /// Coordinates of `phi^{-n}(Y)` in `F_n[[t]] (x) D`: the series part acted on by `P^{-n}`.
    pub fn phi_inverse(&self, level: u32, nt: usize) -> Result<Vec<TSeries>> {
        let s = self.localize(level, nt)?;
        let pinv = self.rep.frobenius_inverse().pow(level as u64);
        Ok(mat_apply_t(&pinv, &s))
    }

    /// `d_V(phi^{-n}(Y))`, the `t^0` coefficient.
    pub fn partial_v(&self, level: u32) -> Result<Vec<CycloElement>> {
        Ok(self.phi_inverse(level, 1)?.iter().map(|s| s.coeff(0).clone()).collect())
    }

    /// `Y(pi_n)` by the recursion alone, without `t`-expansions.
    pub fn value_at(&self, level: u32) -> Result<Vec<CycloElement>> {
        if self.nablas != 0 {
            return Err(Error::Domain("value_at needs the plain solution".into()));
        }
        let prec = self.prec;
        let p = self.p();
        let f0 = CycloField::get(p, 0, prec);
        let mut cur: Vec<CycloElement> = self
            .y
            .comps
            .iter()
            .map(|c| c.coeff(0).map(|x| f0.from_scalar(&x)).ok_or_else(|| Error::PrecisionExhausted("empty series".into())))
            .collect::<Result<_>>()?;
        for m in 1..=level {
            let field = CycloField::get(p, m, prec);
            let up: Vec<CycloElement> = cur.iter().map(|x| x.embed(m)).collect();
            let py = mat_apply_elem(&self.rep.frobenius, &up);
            cur = self.f.comps.iter().zip(&py).map(|(c, b)| &c.eval_at(&field) + b).collect();
        }
        Ok(cur)
    }

    /// `p^{-n} d_V(phi^{-n}(y))` for `n >= 1`, `(1 - p^{-1} phi^{-1}) d_V(y)` for `n = 0`.
    pub fn exp_eval(&self, level: u32) -> Result<Vec<CycloElement>> {
        let d = self.partial_v(level)?;
        if level >= 1 {
            return Ok(d.iter().map(|x| x.shift(-(level as i64))).collect());
        }
        Ok(apply_one_minus_pinv_over_p(&self.rep, &d, self.prec))
    }
}

/// `(1 - p^{-1} P^{-1}) v`.
pub fn apply_one_minus_pinv_over_p(rep: &CrysRep, v: &[CycloElement], prec: i64) -> Vec<CycloElement> {
    let pinv = rep.frobenius_inverse().shift(-1);
    let m = &Matrix::identity(rep.p, rep.dim(), prec) - &pinv;
    mat_apply_elem(&m, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::scalar::PadicScalar;
    use crate::series::rigid::RigidSeries;

    const W: i64 = 30;

    fn element(p: u32, j: i64) -> PsiOneElement {
        let v = CrysRep::cyclotomic(p, j, W).unwrap();
        let mut g = RigidSeries::zero(p);
        for (a, c) in [(1u64, 2i64), (2, -1)] {
            g = &g + &RigidSeries::one_plus_pi_pow(p, a, W).scale(&PadicScalar::from_i64(p, c, W));
        }
        let f = ModuleElement::new(0, vec![g]);
        PsiOneElement::solve(&v, &f, 1.max(j as usize), 16, W).unwrap().0
    }

    #[test]
    fn values_are_trace_compatible() {
        let p = 3;
        let e = element(p, 1);
        let pinv = e.rep.frobenius_inverse();
        for n in 1..3u32 {
            let lo = e.value_at(n).unwrap();
            let hi = e.value_at(n + 1).unwrap();
            let tr: Vec<CycloElement> = hi.iter().map(|x| x.trace(n).shift(-1)).collect();
            let got = mat_apply_elem(&pinv, &tr);
            assert!(got[0].discrepancy(&lo[0]) >= W - 8, "level {n}: {}", got[0].discrepancy(&lo[0]));
        }
    }

    #[test]
    fn localization_matches_values() {
        let p = 5;
        let e = element(p, 1);
        for n in 0..3u32 {
            let s = e.localize(n, 3).unwrap();
            let y = e.value_at(n).unwrap();
            assert!(s[0].coeff(0).discrepancy(&y[0]) >= W - 8, "level {n}");
        }
    }

    #[test]
    fn nabla_commutes_with_localization() {
        let p = 3;
        let e = element(p, 1);
        let chained = e.nabla_chain(2);
        let direct = e.localize(2, 6).unwrap()[0].nabla(0).nabla(1);
        let via = chained.localize(2, 6).unwrap();
        for k in 0..4 {
            assert!(via[0].coeff(k).discrepancy(direct.coeff(k)) >= W - 10, "t^{k}");
        }
    }
}
