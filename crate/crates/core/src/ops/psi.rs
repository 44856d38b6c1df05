use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ops::frobenius::{frobenius, q_series};
use crate::padic::cyclo::CycloField;
use crate::padic::scalar::{ilog, PadicScalar};
use crate::series::laurent::RigidLaurent;
use crate::series::rigid::{envelope_min, RigidSeries, Tail};

/// `psi(f)`, the left inverse of `phi` with `phi(psi(f)) = p^{-1} sum_eta f(eta (1 + pi) - 1)`.
///
/// On `sum b_i (1 + pi)^i` it keeps the terms with `p | i` and sends
/// `(1 + pi)^{pi}` to `(1 + pi)^i`. For a truncated series the tail
/// `pi^N r` only moves coefficient `k` by something divisible by
/// `p^{floor(m/p) - k}`, `m >= N`, which caps the output precision.
pub fn psi(f: &RigidSeries) -> RigidSeries {
    let p = f.p();
    let known = RigidSeries::exact(p, f.coeffs().to_vec());
    let image = psi_exact(&known);
    let (Some(n), Some(tail)) = (f.order(), f.tail()) else {
        return image;
    };
    let c = n.div_ceil(p as usize);
    let z = PadicScalar::zero(p, i64::MAX / 8);
    let cap = |k: usize| tail.val.saturating_add(envelope_min(p, n, tail.growth, |m| (m as i64 / p as i64 - k as i64).max(0)));
    let coeffs: Vec<PadicScalar> = (0..c)
        .map(|k| image.coeffs().get(k).unwrap_or(&z).with_cap(cap(k)))
        .collect();
    let g = tail.growth;
    let scan = c * (p as usize).pow(2) + (p as usize).pow(2);
    let val = (c..scan).map(|k| cap(k) + g as i64 * ilog(p, k as u64) as i64).min().unwrap_or(tail.val) - g as i64;
    let val = val.min(tail.val);
    RigidSeries::truncated(p, coeffs, Tail::new(val, g))
}

thread_local! {
    static PSI_ROWS: RefCell<HashMap<(u32, usize), Rc<Vec<Vec<BigInt>>>>> = RefCell::new(HashMap::new());
}

/// Rows `psi(pi^m)` for `m < len`: `sum_i (-1)^{m - pi} C(m, pi) (1 + pi)^i`, integral.
pub(crate) fn psi_rows(p: u32, len: usize) -> Rc<Vec<Vec<BigInt>>> {
    if let Some(r) = PSI_ROWS.with(|c| c.borrow().get(&(p, len)).cloned()) {
        return r;
    }
    let pu = p as usize;
    let mut binom: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    for m in 1..len.max(1) {
        let prev = &binom[m - 1];
        let row: Vec<BigInt> = (0..=m)
            .map(|i| {
                let a = if i < m { prev[i].clone() } else { BigInt::zero() };
                let b = if i > 0 { prev[i - 1].clone() } else { BigInt::zero() };
                a + b
            })
            .collect();
        binom.push(row);
    }
    let rows: Vec<Vec<BigInt>> = (0..len)
        .map(|m| {
            let mut out = vec![BigInt::zero(); m / pu + 1];
            for i in 0..=m / pu {
                let c = &binom[m][pu * i];
                let c = if (m - pu * i).is_multiple_of(2) { c.clone() } else { -c.clone() };
                for (k, o) in out.iter_mut().enumerate().take(i + 1) {
                    *o += &c * &binom[i][k];
                }
            }
            out
        })
        .collect();
    let rows = Rc::new(rows);
    PSI_ROWS.with(|c| c.borrow_mut().insert((p, len), rows.clone()));
    rows
}

/// `psi` coefficientwise in the `pi` basis, so each input digit is only as
/// visible as its image `psi(pi^m)` allows.
fn psi_exact(f: &RigidSeries) -> RigidSeries {
    let p = f.p();
    let c = f.coeffs();
    if c.is_empty() {
        return RigidSeries::exact(p, Vec::new());
    }
    let rows = psi_rows(p, c.len());
    let hi = c.iter().map(|x| x.precision()).filter(|&x| x < i64::MAX / 16).max().unwrap_or(0) + c.len() as i64 + 8;
    let mut out = vec![PadicScalar::zero(p, i64::MAX / 8); (c.len() - 1) / p as usize + 1];
    for (m, x) in c.iter().enumerate() {
        if x.is_zero() && x.precision() >= i64::MAX / 16 {
            continue;
        }
        for (k, a) in rows[m].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            out[k] = &out[k] + &(x * &PadicScalar::from_bigint(p, a, hi));
        }
    }
    RigidSeries::exact(p, out)
}

/// `psi(pi^{-c} g) = pi^{-c} psi(q^c g)`.
pub fn psi_laurent(f: &RigidLaurent, max_pole: usize) -> Result<RigidLaurent> {
    let c = f.pole();
    if c > max_pole {
        return Err(Error::Domain(format!("pole order {c} exceeds the cap {max_pole}")));
    }
    let p = f.p();
    let prec = f.series().precision().clamp(1, 1 << 20);
    let q = q_series(p, prec);
    let mut qc = RigidSeries::constant(&PadicScalar::one(p, prec));
    for _ in 0..c {
        qc = &qc * &q;
    }
    Ok(RigidLaurent::new(c, psi(&(&qc * f.series()))))
}

/// `psi` through the defining sum over `eta^p = 1` in `F_1`, followed by
/// solving `s = g(phi(pi))` from the top degree down. Exact polynomials only.
pub fn psi_by_eta_sum(f: &RigidSeries, prec: i64) -> Result<RigidSeries> {
    if !f.is_exact() {
        return Err(Error::Domain("the eta-sum route needs an exact polynomial".into()));
    }
    let p = f.p();
    let field = CycloField::get(p, 1, prec);
    let len = f.coeffs().len();
    // coefficient j of f(eta(1 + pi) - 1) is eta^j (d^j f / j!)(eta - 1)
    let mut s = Vec::with_capacity(len);
    let mut deriv = f.coeffs().to_vec();
    for j in 0..len {
        let mut acc = field.zero();
        for e in 0..p as u64 {
            let eta = field.zeta_pow(e);
            let shift = &eta - &field.one();
            let mut val = field.zero();
            for c in deriv.iter().rev() {
                val = &(&val * &shift) + &field.from_scalar(c);
            }
            acc = &acc + &(&eta.pow(j as u64) * &val);
        }
        let rational = acc.restrict(0).map_err(|e| Error::Internal(format!("eta sum not rational: {e}")))?;
        let v = rational.coeffs()[0].checked_div(&PadicScalar::from_i64(p, p as i64, prec + 8))?;
        s.push(v);
        // next divided derivative: d^{j+1} f / (j+1)!
        let next: Vec<PadicScalar> = deriv
            .iter()
            .enumerate()
            .skip(1)
            .map(|(m, c)| c * &PadicScalar::from_i64(p, m as i64, prec + 8))
            .collect();
        deriv = next
            .into_iter()
            .map(|c| c.checked_div(&PadicScalar::from_i64(p, j as i64 + 1, prec + 8)).unwrap())
            .collect();
    }
    let mut s = RigidSeries::exact(p, s).trim();
    // s = sum g_k phi(pi)^k with phi(pi)^k monic of degree pk
    let deg = s.coeffs().len().saturating_sub(1);
    let top = deg / p as usize;
    let phi_pi = frobenius(&RigidSeries::pi(p, prec));
    let mut powers = vec![RigidSeries::constant(&PadicScalar::one(p, prec))];
    for k in 1..=top {
        powers.push(&powers[k - 1] * &phi_pi);
    }
    let mut g = vec![PadicScalar::zero(p, prec); top + 1];
    for k in (0..=top).rev() {
        let gk = s.coeff(p as usize * k).unwrap();
        s = &s - &powers[k].scale(&gk);
        g[k] = gk;
    }
    if s.coeffs().iter().any(|c| !c.is_zero()) {
        return Err(Error::Internal("eta sum is not in the image of phi".into()));
    }
    Ok(RigidSeries::exact(p, g))
}

#[cfg(test)]
mod tests {
    use super::*;

    const W: i64 = 40;

    #[test]
    fn psi_of_constants_and_one_plus_pi() {
        let p = 3;
        let one = RigidSeries::constant(&PadicScalar::one(p, W));
        assert_eq!(psi(&one), one);
        let x = RigidSeries::from_i64s(p, &[1, 1], W);
        assert!(psi(&x).coeffs().iter().all(|c| c.is_zero()));
    }

    #[test]
    fn psi_of_pi_inverse() {
        for p in [3u32, 5] {
            let r = psi_laurent(&RigidLaurent::pi_inv_pow(p, 1, W), 8).unwrap().normalize();
            assert_eq!(r.pole(), 1);
            let s = r.series();
            assert!(s.coeffs()[0].eq_at(&PadicScalar::one(p, W)));
            assert!(s.coeffs()[1..].iter().all(|c| c.is_zero()));
        }
    }

    #[test]
    fn eta_sum_route_agrees() {
        let p = 5;
        let f = RigidSeries::from_i64s(p, &[3, -1, 4, 1, -5, 9, 2, 6, 5, 3, 5, 8, 9, 7], W);
        let a = psi(&f);
        let b = psi_by_eta_sum(&f, W).unwrap();
        let d = &a - &b;
        assert!(d.coeffs().iter().all(|c| c.is_zero()));
    }

    #[test]
    fn tail_caps_precision() {
        let p = 3;
        let t = RigidSeries::log_one_plus_pi(p, 30, W);
        let s = psi(&t);
        // psi(t) = t / p
        assert_eq!(s.order(), Some(10));
        let want = t.shift(-1);
        for k in 0..10 {
            let c = &s.coeffs()[k];
            assert!(c.eq_at(&want.coeffs()[k]), "k={k}");
            assert!(c.precision() <= W);
        }
        assert!(s.coeffs()[0].precision() >= 7);
    }
}
