//! Dense polynomial helpers shared by the series and field code.

use crate::padic::scalar::PadicScalar;

/// Replace `f(x)` by `f(x + 1)` (or `f(x - 1)` when `negative`) in place.
pub fn taylor_shift(a: &mut [PadicScalar], negative: bool) {
    let n = a.len();
    if n < 2 {
        return;
    }
    for i in 0..n - 1 {
        for j in (i..n - 1).rev() {
            let v = if negative { &a[j] - &a[j + 1] } else { &a[j] + &a[j + 1] };
            a[j] = v;
        }
    }
}

/// Schoolbook product.
pub fn mul(a: &[PadicScalar], b: &[PadicScalar], prec: i64) -> Vec<PadicScalar> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let p = a[0].p();
    let mut out = vec![PadicScalar::zero(p, prec); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() && x.precision() >= prec {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

/// Product truncated to the first `n` coefficients.
pub fn mul_trunc(a: &[PadicScalar], b: &[PadicScalar], n: usize, prec: i64) -> Vec<PadicScalar> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let p = a[0].p();
    let len = (a.len() + b.len() - 1).min(n);
    let mut out = vec![PadicScalar::zero(p, prec); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() && x.precision() >= prec {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_roundtrip() {
        let p = 5;
        let orig: Vec<_> = [3, -1, 4, 1, -5, 9].iter().map(|&c| PadicScalar::from_i64(p, c, 20)).collect();
        let mut a = orig.clone();
        taylor_shift(&mut a, false);
        // f(1) is the new constant term
        let s: i64 = 3 - 1 + 4 + 1 - 5 + 9;
        assert!(a[0].eq_at(&PadicScalar::from_i64(p, s, 20)));
        taylor_shift(&mut a, true);
        for (x, y) in a.iter().zip(&orig) {
            assert!(x.eq_at(y));
        }
    }
}
