use crate::padic::scalar::PadicScalar;
use crate::series::rigid::{RigidSeries, Tail};

/// `f((1 + pi)^p - 1)`.
pub fn frobenius(f: &RigidSeries) -> RigidSeries {
    let p = f.p();
    let known = RigidSeries::exact(p, f.coeffs().to_vec());
    let x = known.to_xbasis().expect("exact");
    let z = PadicScalar::zero(p, i64::MAX / 8);
    let mut y = vec![z; (x.len().max(1) - 1) * p as usize + 1];
    for (i, c) in x.into_iter().enumerate() {
        y[i * p as usize] = c;
    }
    let image = RigidSeries::from_xbasis(p, y);
    match (f.order(), f.tail()) {
        (Some(n), Some(t)) => {
            // phi(pi)^n phi(r) keeps the envelope of the tail r since phi(pi) is integral
            let cut = image.truncate(n);
            let ct = cut.tail().unwrap_or(t);
            let joined = Tail::new(ct.val.min(t.val), ct.growth.max(t.growth));
            RigidSeries::truncated(p, cut.coeffs().to_vec(), joined)
        }
        _ => image,
    }
}

/// `q = phi(pi) / pi`, an exact polynomial of degree `p - 1`.
pub fn q_series(p: u32, prec: i64) -> RigidSeries {
    let phi_pi = frobenius(&RigidSeries::pi(p, prec));
    phi_pi.div_pi_pow(1).expect("phi(pi) is divisible by pi")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_of_pi() {
        let p = 5;
        let f = frobenius(&RigidSeries::pi(p, 20));
        let want = [0, 5, 10, 10, 5, 1];
        for (c, w) in f.coeffs().iter().zip(want) {
            assert!(c.eq_at(&PadicScalar::from_i64(p, w, 20)));
        }
    }

    #[test]
    fn phi_of_t_is_p_t() {
        let p = 3;
        let n = 30;
        let t = RigidSeries::log_one_plus_pi(p, n, 40);
        let lhs = frobenius(&t);
        let rhs = t.shift(1);
        assert_eq!(lhs.order(), Some(n));
        for k in 0..n {
            assert!(lhs.coeffs()[k].eq_at(&rhs.coeffs()[k]), "k = {k}");
        }
    }

    #[test]
    fn q_has_constant_term_p() {
        let q = q_series(3, 20);
        assert!(q.coeffs()[0].eq_at(&PadicScalar::from_i64(3, 3, 20)));
        assert_eq!(q.coeffs().len(), 3);
    }
}
