use crate::error::Result;
use crate::padic::scalar::PadicScalar;
use crate::series::rigid::{RigidSeries, Tail};

/// `t = log(1 + pi)` to order `n`.
pub fn t_series(p: u32, n: usize, prec: i64) -> RigidSeries {
    RigidSeries::log_one_plus_pi(p, n, prec)
}

/// `nabla_i f = t (1 + pi) f' - i f`, truncated to the order of `f` (or `n` for polynomials).
pub fn nabla(i: i64, f: &RigidSeries, n: usize, prec: i64) -> RigidSeries {
    let p = f.p();
    let n = f.order().map_or(n, |o| o.min(n));
    let t = t_series(p, n, prec);
    let d = f.nabla();
    let lhs = (&t * &d).truncate(n);
    let rhs = f.scale(&PadicScalar::from_i64(p, i, prec)).truncate(n);
    (&lhs - &rhs).truncate(n)
}

/// `nabla_{h-1} o ... o nabla_0`.
pub fn nabla_chain(h: usize, f: &RigidSeries, n: usize, prec: i64) -> RigidSeries {
    let mut g = f.truncate(n);
    for i in 0..h {
        g = nabla(i as i64, &g, n, prec);
    }
    g
}

/// The `g` with `(gamma_n - 1) g = nabla_0 f` and `g(0) = p^{-n} f(0)`,
/// where `chi(gamma_n) = exp(p^n)`.
///
/// In the basis `pi^k` the operator `gamma_n - 1` is triangular with
/// diagonal `chi^k - 1`.
pub fn nabla0_over_gamma(level: u32, f: &RigidSeries, n: usize, prec: i64) -> Result<RigidSeries> {
    let p = f.p();
    let n = f.order().map_or(n, |o| o.min(n));
    let chi = PadicScalar::from_i64(p, (p as i64).pow(level), prec).exp()?;
    let rhs = nabla(0, f, n, prec);
    // columns gamma_n(pi^j) = ((1 + pi)^chi - 1)^j
    let b = RigidSeries::binomial(&chi, n)?;
    let u = &b - &RigidSeries::constant(&PadicScalar::one(p, prec));
    let mut powers = vec![RigidSeries::constant(&PadicScalar::one(p, prec))];
    for j in 1..n {
        powers.push((&powers[j - 1] * &u).truncate(n));
    }
    let mut g = vec![PadicScalar::zero(p, prec); n];
    let f0 = f.coeff(0).unwrap();
    g[0] = f0.shift(-(level as i64));
    let mut chik = chi.clone();
    for k in 1..n {
        let mut s = rhs.coeff(k).unwrap();
        for (j, gj) in g.iter().enumerate().take(k).skip(1) {
            let entry = powers[j].coeff(k).unwrap();
            s = &s - &(&entry * gj);
        }
        // gamma_n(pi^k) = chi^k pi^k + ...; subtract the identity part
        let diag = &chik - &PadicScalar::one(p, prec);
        g[k] = s.checked_div(&diag)?;
        chik = &chik * &chi;
    }
    let env = rhs.envelope();
    // on (1 + pi)^i the solution is i t (1 + pi)^i / ((1 + pi)^{i p^n} - 1) = p^{-n} phi^n(t / pi) (unit)
    let tail = Tail::new(env.val - level as i64 - 1, env.growth + 1);
    Ok(RigidSeries::truncated(p, g, tail))
}
