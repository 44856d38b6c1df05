use crate::crys::psi_one::{apply_one_minus_pinv_over_p, mat_apply_elem};
use crate::crys::{apply_psi, CrysRep, ModuleElement};
use crate::error::{Error, Result};
use crate::ops::phi_inverse_n;
use crate::padic::cyclo::CycloElement;

/// `p^{-n} d_V(phi^{-n}(y))` for `n >= 1` and `(1 - p^{-1} phi^{-1}) d_V(y)` for `n = 0`,
/// for an exact `y`; no `psi = 1` check.
pub fn exp_eval_formula(rep: &CrysRep, level: u32, y: &ModuleElement, prec: i64) -> Result<Vec<CycloElement>> {
    y.check_rep(rep)?;
    let s = y.comps.iter().map(|c| phi_inverse_n(level, c, 1, prec).map(|t| t.coeff(0).clone())).collect::<Result<Vec<_>>>()?;
    if level == 0 {
        return Ok(apply_one_minus_pinv_over_p(rep, &s, prec));
    }
    let pinv = rep.frobenius_inverse().pow(level as u64);
    Ok(mat_apply_elem(&pinv, &s).iter().map(|x| x.shift(-(level as i64))).collect())
}

/// [`exp_eval_formula`] after checking `psi(y) = y` exactly.
pub fn exp_eval(rep: &CrysRep, level: u32, y: &ModuleElement, prec: i64) -> Result<Vec<CycloElement>> {
    if y.comps.iter().any(|c| !c.is_exact()) {
        return Err(Error::Domain("exp_eval on a truncated series; use a solver element".into()));
    }
    let py = apply_psi(rep, y)?;
    let n = y.comps.iter().chain(&py.comps).map(|c| c.coeffs().len()).max().unwrap_or(0);
    let known = y.comps.iter().map(|c| c.precision()).min().unwrap_or(prec).min(prec).min(1 << 20);
    if py.discrepancy(y, n) < known - 2 * (rep.frobenius.min_valuation().abs() + 1) {
        return Err(Error::Domain("psi(y) != y".into()));
    }
    exp_eval_formula(rep, level, y, prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::cyclo::CycloField;
    use crate::padic::scalar::PadicScalar;
    use crate::series::rigid::RigidSeries;

    const W: i64 = 30;

    #[test]
    fn constants() {
        let p = 5;
        let v = CrysRep::cyclotomic(p, 0, W).unwrap();
        let y = ModuleElement::new(0, vec![RigidSeries::constant(&PadicScalar::one(p, W))]);
        let e0 = exp_eval(&v, 0, &y, W).unwrap();
        let want = &PadicScalar::one(p, W) - &PadicScalar::one(p, W).shift(-1);
        assert!(e0[0].coeffs()[0].eq_at(&want));
        let e1 = exp_eval(&v, 1, &y, W).unwrap();
        assert!(e1[0].eq_at(&CycloField::get(p, 1, W).one().shift(-1)));
        assert!(e1[0].precision() >= W - 1);
    }

    #[test]
    fn pi_is_not_psi_fixed() {
        let p = 3;
        let v = CrysRep::cyclotomic(p, 0, W).unwrap();
        let y = ModuleElement::new(0, vec![RigidSeries::pi(p, W)]);
        assert!(matches!(exp_eval(&v, 1, &y, W), Err(Error::Domain(_))));
        let e = exp_eval_formula(&v, 1, &y, W).unwrap();
        let want = CycloField::get(p, 1, W).pi().shift(-1);
        assert!(e[0].eq_at(&want));
    }
}
