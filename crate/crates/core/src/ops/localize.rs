//! `phi^{-n}`: the expansion of `f((1 + pi_n) e^{t/p^n} - 1)` in `F_n[[t]]`.

use crate::error::{Error, Result};
use crate::padic::cyclo::CycloField;
use crate::padic::scalar::PadicScalar;
use crate::series::laurent::RigidLaurent;
use crate::series::rigid::RigidSeries;
use crate::series::tseries::TSeries;

fn factorial(p: u32, k: usize, prec: i64) -> PadicScalar {
    let mut acc = PadicScalar::one(p, prec + 64);
    for i in 2..=k {
        acc = &acc * &PadicScalar::from_i64(p, i as i64, prec + 64);
    }
    acc
}

/// `t^k` coefficient `(d^k f)(pi_n) / (k! p^{nk})` with `d = (1 + pi) d/dpi`.
pub fn phi_inverse_n(level: u32, f: &RigidSeries, nt: usize, prec: i64) -> Result<TSeries> {
    let p = f.p();
    let field = CycloField::get(p, level, prec);
    let mut out = Vec::with_capacity(nt);
    if f.is_exact() {
        let x = f.to_xbasis()?;
        for k in 0..nt {
            let terms = x.iter().enumerate().map(|(i, b)| {
                let ik = PadicScalar::from_i64(p, i as i64, prec + 64).pow(k as i64).unwrap();
                (i as u64, b * &ik)
            });
            let v = field.from_xterms(terms);
            out.push(v.shift(-(level as i64) * k as i64).scale(&factorial(p, k, prec).inv()?));
        }
    } else {
        let mut d = f.clone();
        for k in 0..nt {
            let v = d.eval_at(&field);
            out.push(v.shift(-(level as i64) * k as i64).scale(&factorial(p, k, prec).inv()?));
            d = d.nabla();
        }
    }
    Ok(TSeries::new(field, out))
}

/// `phi^{-n}` of a Laurent series; `pi` maps to a unit of `F_n[[t]]` for `n >= 1`.
pub fn phi_inverse_n_laurent(level: u32, f: &RigidLaurent, nt: usize, prec: i64) -> Result<TSeries> {
    let p = f.p();
    let body = phi_inverse_n(level, f.series(), nt, prec)?;
    if f.pole() == 0 {
        return Ok(body);
    }
    if level == 0 {
        return Err(Error::Domain("phi^0 of a series with a pole".into()));
    }
    let u = phi_inverse_n(level, &RigidSeries::pi(p, prec), nt, prec)?;
    let uinv = u.inv()?;
    let mut acc = body;
    for _ in 0..f.pole() {
        acc = acc.mul(&uinv);
    }
    Ok(acc)
}

/// The same expansion by substituting `pi = pi_n + (1 + pi_n)(e^{t/p^n} - 1)`
/// into an exact polynomial and multiplying out in `F_n[[t]]`.
pub fn phi_inverse_by_substitution(level: u32, f: &RigidSeries, nt: usize, prec: i64) -> Result<TSeries> {
    if !f.is_exact() {
        return Err(Error::Domain("substitution route needs an exact polynomial".into()));
    }
    let p = f.p();
    let field = CycloField::get(p, level, prec);
    let zeta = field.zeta();
    let mut u = vec![field.pi()];
    for k in 1..nt {
        u.push(zeta.shift(-(level as i64) * k as i64).scale(&factorial(p, k, prec).inv()?));
    }
    let u = TSeries::new(field.clone(), u);
    let mut acc = TSeries::zero(&field, nt);
    for c in f.coeffs().iter().rev() {
        acc = acc.mul(&u);
        let mut cs = acc.coeffs().to_vec();
        cs[0] = &cs[0] + &field.from_scalar(c);
        acc = TSeries::new(field.clone(), cs);
    }
    Ok(acc)
}
