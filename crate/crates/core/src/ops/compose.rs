use crate::error::{Error, Result};
use crate::padic::scalar::PadicScalar;
use crate::series::rigid::{envelope_min, RigidSeries, Tail};

/// `f(g)` to order `n`, for `g` with `v(g(0)) >= 1` and integral `g - g(0)`.
pub fn compose(f: &RigidSeries, g: &RigidSeries, n: usize) -> Result<RigidSeries> {
    let p = f.p();
    let c = g.coeff(0).unwrap_or_else(|| PadicScalar::zero(p, 0));
    let vc = c.valuation().min(1 << 20);
    if vc < 1 {
        return Err(Error::Domain("composition needs g(0) of positive valuation".into()));
    }
    let h = &g.truncate(n) - &RigidSeries::constant(&c);
    if h.min_valuation() < 0 {
        return Err(Error::Domain("composition needs an integral inner series".into()));
    }
    let n = [Some(n), f.order(), g.order()].into_iter().flatten().min().unwrap();
    let gt = g.truncate(n);
    let one_prec = f.precision().min(1 << 20).max(g.precision().min(1 << 20));
    let mut power = RigidSeries::constant(&PadicScalar::one(p, one_prec));
    let mut acc = RigidSeries::truncated(p, vec![PadicScalar::zero(p, i64::MAX / 8); n], Tail::new(i64::MAX / 8, 0));
    for (k, a) in f.coeffs().iter().enumerate() {
        if k > 0 {
            power = (&power * &gt).truncate(n);
        }
        if c.is_zero() && k >= n && c.precision() >= 1 << 20 {
            break;
        }
        acc = &acc + &power.scale(a).truncate(n);
    }
    let acc = acc.truncate(n);
    let Some(tail) = f.tail() else {
        return Ok(acc);
    };
    let nf = f.coeffs().len();
    // a_m g^m, m >= N_f, touches coefficient k only through c^{m-k}
    let coeffs = acc
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, x)| {
            let cap = tail.val.saturating_add(envelope_min(p, nf, tail.growth, |m| (m as i64 - k as i64).max(0).saturating_mul(vc)));
            x.with_cap(cap)
        })
        .collect();
    let at = acc.tail().unwrap_or(tail);
    let joined = Tail::new(at.val.min(tail.val - tail.growth as i64), at.growth.max(tail.growth));
    Ok(RigidSeries::truncated(p, coeffs, joined))
}

/// `gamma_a f = f((1 + pi)^a - 1)` for a unit `a` of `Z_p`, to order `n`.
pub fn gamma_act(a: &PadicScalar, f: &RigidSeries, n: usize) -> Result<RigidSeries> {
    if a.valuation() != 0 {
        return Err(Error::Domain("gamma_a needs a unit of Z_p".into()));
    }
    let p = f.p();
    let b = RigidSeries::binomial(a, n)?;
    let g = &b - &RigidSeries::constant(&PadicScalar::one(p, a.precision()));
    compose(f, &g, n)
}

/// `gamma_a` for a positive integer `a`, exactly on polynomials: `(1 + pi)^i -> (1 + pi)^{ai}`.
pub fn gamma_act_int(a: u64, f: &RigidSeries) -> Result<RigidSeries> {
    let p = f.p();
    if a.is_multiple_of(p as u64) {
        return Err(Error::Domain("gamma_a needs a unit".into()));
    }
    if !f.is_exact() {
        return gamma_act(&PadicScalar::from_i64(p, a as i64, f.precision()), f, f.order().unwrap());
    }
    let x = f.to_xbasis()?;
    let z = PadicScalar::zero(p, i64::MAX / 8);
    let mut y = vec![z; (x.len().max(1) - 1) * a as usize + 1];
    for (i, c) in x.into_iter().enumerate() {
        y[i * a as usize] = c;
    }
    Ok(RigidSeries::from_xbasis(p, y))
}

/// `[-1] f = f((1 + pi)^{-1} - 1)` to order `n`.
pub fn minus_one(f: &RigidSeries, n: usize, prec: i64) -> Result<RigidSeries> {
    let p = f.p();
    let coeffs = (0..n)
        .map(|k| match k {
            0 => PadicScalar::zero(p, prec),
            _ => PadicScalar::from_i64(p, if k % 2 == 0 { 1 } else { -1 }, prec),
        })
        .collect();
    compose(f, &RigidSeries::truncated(p, coeffs, Tail::new(0, 0)), n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::frobenius::frobenius;

    const W: i64 = 40;

    fn assert_close(a: &RigidSeries, b: &RigidSeries, n: usize) {
        for k in 0..n {
            let x = a.coeff(k).unwrap();
            let y = b.coeff(k).unwrap();
            assert!(x.eq_at(&y), "k={k}: {x} vs {y}");
        }
    }

    #[test]
    fn gamma_identity_and_power() {
        let p = 5;
        let f = RigidSeries::from_i64s(p, &[1, 2, 3, 4, 5, 6], W);
        let one = PadicScalar::one(p, W);
        assert_close(&gamma_act(&one, &f, 20).unwrap(), &f, 20);
        // gamma_a (1 + pi)^b = (1 + pi)^{ab}
        let x3 = RigidSeries::one_plus_pi_pow(p, 3, W);
        let a = PadicScalar::from_i64(p, 7, W);
        let lhs = gamma_act(&a, &x3, 30).unwrap();
        assert_close(&lhs, &RigidSeries::one_plus_pi_pow(p, 21, W), 30);
        assert_close(&gamma_act_int(7, &x3).unwrap(), &RigidSeries::one_plus_pi_pow(p, 21, W), 30);
    }

    #[test]
    fn gamma_scales_t() {
        let p = 3;
        let t = RigidSeries::log_one_plus_pi(p, 25, W);
        let a = PadicScalar::from_ratio(p, 2, 7, W).unwrap();
        let lhs = gamma_act(&a, &t, 25).unwrap();
        let rhs = t.scale(&a);
        for k in 0..25 {
            assert!(lhs.coeffs()[k].eq_at(&rhs.coeffs()[k]), "k={k}");
        }
    }

    #[test]
    fn gamma_commutes_with_phi() {
        let p = 3;
        let f = RigidSeries::from_i64s(p, &[2, 0, 1, 7, 1, 1, 4, 8], W);
        let a = PadicScalar::from_i64(p, -2, W);
        let lhs = frobenius(&gamma_act(&a, &f, 30).unwrap());
        let rhs = gamma_act(&a, &frobenius(&f), 30).unwrap();
        assert_close(&lhs, &rhs, 30);
    }

    #[test]
    fn minus_one_on_one_plus_pi() {
        let p = 5;
        let x = RigidSeries::from_i64s(p, &[1, 1], W);
        let inv = minus_one(&x, 12, W).unwrap();
        let back = &inv * &x;
        assert!(back.coeffs()[0].eq_at(&PadicScalar::one(p, W)));
        assert!(back.coeffs()[1..].iter().all(|c| c.is_zero()));
    }
}
