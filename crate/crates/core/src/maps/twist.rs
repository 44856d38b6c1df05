use crate::crys::{ModuleElement, PsiOneElement};
use crate::error::{Error, Result};

/// `d^{-j} y (x) t^{-j} e_j`: componentwise `d^{-j}`, twist tag raised by `j`.
pub fn twist_element(y: &ModuleElement, j: i64) -> Result<ModuleElement> {
    let mut out = y.clone();
    if j > 0 {
        for _ in 0..j {
            out = out.antiderive()?;
        }
    } else {
        for _ in 0..-j {
            out = out.derive();
        }
    }
    Ok(out.retag(y.twist + j))
}

/// A `psi = 1` element over `V` together with its twist over `V(j)`, normalized
/// so that `base.y = d^j twisted.y` holds on the nose.
#[derive(Clone, Debug)]
pub struct TwistPair {
    pub base: PsiOneElement,
    pub twisted: PsiOneElement,
    pub j: i64,
}

pub fn twist_pair(e: &PsiOneElement, j: i64) -> Result<TwistPair> {
    if e.nablas != 0 {
        return Err(Error::Domain("twist the solution before applying nabla".into()));
    }
    if j <= 0 {
        return Ok(TwistPair { base: e.clone(), twisted: e.derive((-j) as usize)?, j });
    }
    let twisted = e.twist(j)?;
    let mut y = twisted.y.clone();
    for _ in 0..j {
        y = y.derive();
    }
    let base = PsiOneElement { y: y.retag(e.rep.twist), ..e.clone() };
    Ok(TwistPair { base, twisted, j })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::scalar::PadicScalar;
    use crate::series::rigid::RigidSeries;

    #[test]
    fn twist_of_a_character() {
        let p = 5;
        let w = 30;
        for a in [1u64, 2, 7] {
            let x = RigidSeries::one_plus_pi_pow(p, a, w);
            let y = ModuleElement::new(0, vec![x.clone()]);
            let got = twist_element(&y, 1).unwrap();
            assert_eq!(got.twist, 1);
            let want = x.scale(&PadicScalar::from_i64(p, a as i64, w).inv().unwrap());
            assert!(got.comps[0].coeffs().iter().zip(want.coeffs()).all(|(u, v)| u.eq_at(v)));
            let back = twist_element(&got, -1).unwrap();
            assert_eq!(back.twist, 0);
            assert!(back.discrepancy(&y, a as usize + 1) >= w - 4);
        }
        let y = ModuleElement::new(0, vec![RigidSeries::pi(p, w)]);
        assert_eq!(twist_element(&y, 0).unwrap(), y);
        assert!(twist_element(&y, 1).is_err());
    }
}
