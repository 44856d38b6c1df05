use serde::{Deserialize, Serialize};

use crate::crys::PsiOneElement;
use crate::error::{Error, Result};
use crate::maps::twist::twist_pair;
use crate::padic::cyclo::CycloElement;
use crate::padic::scalar::PadicScalar;
use crate::report::{digits_elems, digits_tseries, EXACT};
use crate::series::tseries::TSeries;

/// Which operator the `nabla_0 / (gamma_n - 1)` step of the Taylor recurrence uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignConvention {
    #[default]
    GammaMinusOne,
    /// `nabla_0 / (1 - gamma_n)`, the other normalization found in the literature.
    OneMinusGamma,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecipOutcome {
    pub route: &'static str,
    pub checks: Vec<(String, i64)>,
}

impl RecipOutcome {
    pub fn digits(&self) -> i64 {
        self.checks.iter().map(|c| c.1).min().unwrap_or(EXACT)
    }
}

pub fn factorial(p: u32, k: usize, prec: i64) -> PadicScalar {
    (2..=k as i64).fold(PadicScalar::one(p, prec), |acc, i| &acc * &PadicScalar::from_i64(p, i, prec))
}

/// `chi(gamma_n) = exp(p^n)`.
pub fn chi_gamma(p: u32, level: u32, prec: i64) -> Result<PadicScalar> {
    PadicScalar::from_i64(p, (p as i64).pow(level), prec).exp()
}

fn coeffs_at(v: &[TSeries], k: usize) -> Vec<CycloElement> {
    v.iter().map(|s| s.coeff(k).clone()).collect()
}

/// Both sides of the reciprocity identities for `y` over `V`, at `d_{V(j)} o phi^{-n}`.
///
/// For `h + j >= 1` two checks are made: the twisted chain
/// `nabla_{h+j-1} ... nabla_0 (d^{-j} y)` localizes to `t^j` times the localization
/// of `nabla_{h-1} ... nabla_0 (y)`, and the Taylor recurrence
/// `nabla_{h+j-1} ... nabla_1 nabla_0 / (gamma_n - 1)` applied to `phi^{-n}(d^{-j} y)`
/// has constant term `(-1)^{h+j-1} (h+j-1)! p^{-n} d_{V(j)}` and no terms `t^1 .. t^{h+j-1}`.
/// For `h + j <= 0` the `t^{-j}` coefficient of the chain is compared with
/// `(-h-j)!^{-1} d_{V(j)}(phi^{-n}(d^{-j} y))`.
pub fn check_recip_taylor(e: &PsiOneElement, h: usize, j: i64, level: u32, conv: SignConvention) -> Result<RecipOutcome> {
    if level == 0 {
        return Err(Error::Domain("the Taylor identities are stated for n >= 1".into()));
    }
    let p = e.p();
    let prec = e.prec;
    let hp = h as i64 + j;
    if hp <= 0 {
        let big = (-j) as usize;
        let chain = e.nabla_chain(h).phi_inverse(level, big + 1)?;
        let lhs = coeffs_at(&chain, big);
        let tw = e.derive(big)?;
        let scale = factorial(p, (-hp) as usize, prec).inv()?;
        let rhs: Vec<CycloElement> = tw.partial_v(level)?.iter().map(|x| x.scale(&scale)).collect();
        return Ok(RecipOutcome { route: "negative", checks: vec![("factorial".into(), digits_elems(&lhs, &rhs))] });
    }
    let hp = hp as usize;
    let pair = twist_pair(e, j)?;
    let nt = hp + 2;
    let extra = (-j).max(0) as usize;
    let base_chain = pair.base.nabla_chain(h).phi_inverse(level, nt + extra)?;
    let moved = base_chain.iter().map(|s| s.mul_t_pow(j)).collect::<Result<Vec<_>>>()?;
    let twisted_chain = pair.twisted.nabla_chain(hp).phi_inverse(level, nt)?;
    let diagram = digits_tseries(&twisted_chain, &moved);

    let z = pair.twisted.phi_inverse(level, nt)?;
    let chi = chi_gamma(p, level, prec)?;
    let mut w = z.iter().map(|s| s.nabla0_over_gamma(&chi)).collect::<Result<Vec<_>>>()?;
    if conv == SignConvention::OneMinusGamma {
        let m1 = PadicScalar::from_i64(p, -1, prec);
        w = w.iter().map(|s| s.scale(&m1)).collect();
    }
    for i in 1..hp {
        w = w.iter().map(|s| s.nabla(i as i64)).collect();
    }
    let sign = if (hp - 1).is_multiple_of(2) { 1 } else { -1 };
    let factor = factorial(p, hp - 1, prec).shift(-(level as i64));
    let factor = if sign < 0 { -&factor } else { factor };
    let want: Vec<CycloElement> = coeffs_at(&z, 0).iter().map(|x| x.scale(&factor)).collect();
    let constant = digits_elems(&coeffs_at(&w, 0), &want);
    let mut vanish = EXACT;
    for k in 1..hp {
        let c = coeffs_at(&w, k);
        let zero: Vec<CycloElement> = c.iter().map(|x| x.field().zero()).collect();
        vanish = vanish.min(digits_elems(&c, &zero));
    }
    Ok(RecipOutcome {
        route: "positive",
        checks: vec![("diagram".into(), diagram), ("constant".into(), constant), ("vanishing".into(), vanish)],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crys::{force_delta_zero, CrysRep, ModuleElement};
    use crate::series::rigid::RigidSeries;

    const W: i64 = 40;

    fn element(rep: &CrysRep, h: usize, extra: usize) -> PsiOneElement {
        let p = rep.p;
        let mut g = RigidSeries::zero(p);
        for (a, c) in [(1u64, 3i64), (2, -1), (4, 5)] {
            g = &g + &RigidSeries::one_plus_pi_pow(p, a, W).scale(&PadicScalar::from_i64(p, c, W));
        }
        let f = force_delta_zero(rep, &ModuleElement::new(0, vec![g]), h + extra, W).unwrap();
        PsiOneElement::solve(rep, &f, h, 24, W).unwrap().0
    }

    #[test]
    fn both_routes_on_small_cases() {
        let p = 3;
        for rep in [CrysRep::cyclotomic(p, 0, W).unwrap(), CrysRep::cyclotomic(p, 1, W).unwrap()] {
            for (h, tw) in [(1usize, -1i64), (2, -1), (1, 1), (1, 0), (2, -3)] {
                let e = element(&rep, h, tw.max(0) as usize);
                let out = check_recip_taylor(&e, h, tw, 1, SignConvention::GammaMinusOne).unwrap();
                assert!(out.digits() >= 10, "{} h={h} j={tw}: {:?}", rep.name(), out);
            }
        }
    }

    #[test]
    fn other_sign_breaks_odd_factor() {
        let p = 5;
        let rep = CrysRep::cyclotomic(p, 0, W).unwrap();
        let e = element(&rep, 1, 0);
        let good = check_recip_taylor(&e, 1, 0, 1, SignConvention::GammaMinusOne).unwrap();
        let bad = check_recip_taylor(&e, 1, 0, 1, SignConvention::OneMinusGamma).unwrap();
        assert!(good.digits() >= 10);
        assert!(bad.digits() < 10);
    }
}
